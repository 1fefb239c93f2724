#include "satbench/scoring.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

namespace satbench {

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no negative zero in reports
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string alpha_bin_label(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", alpha);
  return buf;
}

std::vector<std::pair<std::string, UndefinedReason>> ScoreRow::undefined() const {
  std::vector<std::pair<std::string, UndefinedReason>> out;
  const std::pair<const char*, const MetricValue*> cols[] = {
      {"accuracy", &accuracy},   {"precision_sat", &precision_sat},     {"recall_sat", &recall_sat},
      {"f1_sat", &f1_sat},       {"precision_unsat", &precision_unsat}, {"recall_unsat", &recall_unsat},
      {"f1_unsat", &f1_unsat},   {"mcc", &mcc},                         {"adr", &adr},
      {"r_sat", &r_sat},         {"r_unsat", &r_unsat},                 {"adr_lower", &adr_lower},
      {"adr_upper", &adr_upper}, {"mcc_pairs", &mcc_pairs}};
  for (const auto& [name, value] : cols)
    if (!value->defined()) out.emplace_back(name, *value->reason());
  return out;
}

std::vector<ScoreRow> score_table(const std::vector<EvaluationRecord>& records, bool by_alpha) {
  using Key = std::tuple<std::string, Representation, Variable, std::string>;
  std::map<Key, std::vector<const EvaluationRecord*>> groups;
  for (const EvaluationRecord& r : records)
    groups[{r.model, r.representation, r.n, by_alpha ? alpha_bin_label(r.alpha) : std::string("all")}].push_back(&r);

  std::vector<ScoreRow> rows;
  for (const auto& [key, members] : groups) {
    ScoreRow row;
    std::tie(row.model, row.representation, row.n, row.alpha_bin) = key;
    row.records = members.size();

    std::vector<LabeledPrediction> labeled;
    std::map<std::string, PairOutcome> pairs;
    for (const EvaluationRecord* r : members) {
      const Verdict v = to_verdict(r->prediction.decision);
      labeled.push_back({r->truth, v});
      if (r->pair_id) {
        PairOutcome& p = pairs[*r->pair_id];
        (r->truth == Label::Sat ? p.on_sat_member : p.on_unsat_member) = v;
      }
    }
    const ConfusionCounts sat = confusion(labeled, Label::Sat);
    const ConfusionCounts unsat = confusion(labeled, Label::Unsat);
    row.completion_rate = sat.completion_rate();
    row.accuracy = accuracy(sat);
    row.precision_sat = precision(sat);
    row.recall_sat = recall(sat);
    row.f1_sat = f1(sat);
    row.precision_unsat = precision(unsat);
    row.recall_unsat = recall(unsat);
    row.f1_unsat = f1(unsat);
    row.mcc = mcc(sat);

    row.pairs = pairs.size();
    if (!pairs.empty()) {
      std::vector<PairOutcome> list;
      for (const auto& [id, p] : pairs) list.push_back(p);
      const PairedOutcomeCounts pc = paired_outcomes(list);
      const double rs = to_double(pc.r_sat()), ru = to_double(pc.r_unsat());
      row.adr = MetricValue::of(adr(pc));
      row.r_sat = MetricValue::of(rs);
      row.r_unsat = MetricValue::of(ru);
      const AdrBounds b = adr_bounds(rs, ru);
      row.adr_lower = MetricValue::of(b.lower);
      row.adr_upper = MetricValue::of(b.upper);
      row.mcc_pairs = mcc_from_pairs(pc);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string score_csv_header() {
  return "model,representation,n,alpha_bin,records,completion_rate,accuracy,precision_sat,recall_sat,f1_sat,"
         "precision_unsat,recall_unsat,f1_unsat,mcc,pairs,adr,r_sat,r_unsat,adr_lower,adr_upper,mcc_pairs,"
         "undefined_reasons";
}

namespace {

std::string cell(const MetricValue& v) { return v.defined() ? format_number(v.value()) : std::string(); }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_score_csv(std::ostream& out, const std::vector<ScoreRow>& rows) {
  out << score_csv_header() << '\n';
  for (const ScoreRow& r : rows) {
    std::string reasons;
    for (const auto& [col, why] : r.undefined()) {
      if (!reasons.empty()) reasons += ';';
      reasons += col + ":" + std::string(to_string(why));
    }
    out << quoted(r.model) << ',' << to_string(r.representation) << ',' << r.n << ',' << r.alpha_bin << ','
        << r.records << ',' << format_number(r.completion_rate) << ',' << cell(r.accuracy) << ','
        << cell(r.precision_sat) << ',' << cell(r.recall_sat) << ',' << cell(r.f1_sat) << ','
        << cell(r.precision_unsat) << ',' << cell(r.recall_unsat) << ',' << cell(r.f1_unsat) << ',' << cell(r.mcc)
        << ',' << r.pairs << ',' << cell(r.adr) << ',' << cell(r.r_sat) << ',' << cell(r.r_unsat) << ','
        << cell(r.adr_lower) << ',' << cell(r.adr_upper) << ',' << cell(r.mcc_pairs) << ',' << reasons << '\n';
  }
}

}  // namespace satbench
