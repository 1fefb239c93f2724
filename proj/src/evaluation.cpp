#include "satbench/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace satbench {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

namespace {

ojson witness_to_json(const Witness& w) {
  if (const auto* a = std::get_if<AssignmentWitness>(&w)) {
    ojson j = ojson::object();
    for (const auto& [v, value] : *a) j["x" + std::to_string(v)] = value;
    return j;
  }
  if (const auto* c = std::get_if<CoverWitness>(&w)) return ojson(c->vertices);
  const auto& p = std::get<PackingWitnessText>(w);
  ojson placements = ojson::array();
  for (const TokenPlacementText& t : p.placements) placements.push_back({{"token", t.token}, {"rod", t.rod}, {"slot", t.slot}});
  return ojson{{"rods", p.rods}, {"placements", std::move(placements)}};
}

Witness witness_from_json(const json& j, Representation rep) {
  switch (rep) {
    case Representation::Cnf: {
      AssignmentWitness a;
      for (const auto& [key, value] : j.items()) a[static_cast<Variable>(std::stoul(key.substr(1)))] = value.get<bool>();
      return a;
    }
    case Representation::VertexCover: return CoverWitness{j.get<std::vector<std::string>>()};
    case Representation::Packing: {
      PackingWitnessText p;
      p.rods = j.at("rods").get<std::vector<std::string>>();
      for (const json& t : j.at("placements"))
        p.placements.push_back({t.at("token").get<std::string>(), t.at("rod").get<std::string>(), t.at("slot").get<std::int64_t>()});
      return p;
    }
  }
  return AssignmentWitness{};
}

}  // namespace

ojson record_to_json(const EvaluationRecord& r) {
  ojson j;
  j["instance_id"] = r.instance_id;
  j["representation"] = to_string(r.representation);
  j["model"] = r.model;
  j["truth"] = to_string(r.truth);
  j["decision"] = to_string(r.prediction.decision);
  j["branches"] = r.prediction.branches ? ojson(*r.prediction.branches) : ojson(nullptr);
  j["conflicts"] = r.prediction.conflicts ? ojson(*r.prediction.conflicts) : ojson(nullptr);
  j["witness"] = r.prediction.witness ? witness_to_json(*r.prediction.witness) : ojson(nullptr);
  j["witness_valid"] = r.witness_valid ? ojson(*r.witness_valid) : ojson(nullptr);
  if (!r.witness_reason.empty()) j["witness_reason"] = r.witness_reason;
  j["pair_id"] = r.pair_id ? ojson(*r.pair_id) : ojson(nullptr);
  j["k"] = r.k;
  j["n"] = r.n;
  j["alpha"] = r.alpha;
  j["latency_ms"] = r.prediction.latency.count();
  j["attempts"] = r.attempts;
  if (!r.error.empty()) j["error"] = r.error;
  j["raw_text"] = r.prediction.raw_text;
  return j;
}

EvaluationRecord record_from_json(const json& j) {
  EvaluationRecord r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.representation = representation_from_string(j.at("representation").get<std::string>());
  r.model = j.value("model", std::string{});
  r.truth = j.at("truth").get<std::string>() == "SAT" ? Label::Sat : Label::Unsat;
  r.prediction.decision = decision_from_string(j.at("decision").get<std::string>());
  if (j.contains("branches") && !j.at("branches").is_null()) r.prediction.branches = j.at("branches").get<std::int64_t>();
  if (j.contains("conflicts") && !j.at("conflicts").is_null()) r.prediction.conflicts = j.at("conflicts").get<std::int64_t>();
  if (j.contains("witness") && !j.at("witness").is_null())
    r.prediction.witness = witness_from_json(j.at("witness"), r.representation);
  if (j.contains("witness_valid") && !j.at("witness_valid").is_null()) r.witness_valid = j.at("witness_valid").get<bool>();
  r.witness_reason = j.value("witness_reason", std::string{});
  if (j.contains("pair_id") && !j.at("pair_id").is_null()) r.pair_id = j.at("pair_id").get<std::string>();
  r.k = j.value("k", 3u);
  r.n = j.value("n", Variable{0});
  r.alpha = j.value("alpha", 0.0);
  r.prediction.latency = std::chrono::milliseconds(j.value("latency_ms", std::int64_t{0}));
  r.attempts = j.value("attempts", 0u);
  r.error = j.value("error", std::string{});
  r.prediction.raw_text = j.value("raw_text", std::string{});
  return r;
}

std::vector<EvaluationRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open record file " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) lines.push_back(std::move(line));
  std::vector<EvaluationRecord> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json j = json::parse(lines[i], nullptr, false);
    if (j.is_discarded()) {
      if (i + 1 == lines.size()) break;  // interrupted mid-write
      throw DomainError(path.string() + ":" + std::to_string(i + 1) + ": malformed record");
    }
    out.push_back(record_from_json(j));
  }
  return out;
}

void write_records(const std::filesystem::path& path, const std::vector<EvaluationRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DomainError("cannot write record file " + path.string());
  for (const EvaluationRecord& r : records) out << record_to_json(r).dump() << '\n';
}

WitnessCheck check_witness(const Witness& witness, const EvalInstance& instance) {
  switch (instance.representation) {
    case Representation::Cnf: {
      const auto* a = std::get_if<AssignmentWitness>(&witness);
      if (!a) return {false, "witness is not an assignment"};
      const CnfFormula& f = instance.source;
      const std::vector<bool> occurs = occurring_variables(f);
      Assignment sigma(f.num_variables());
      for (const auto& [v, value] : *a) {
        if (v == 0 || v > f.num_variables()) return {false, "unknown variable x" + std::to_string(v)};
        sigma.set(v, value);
      }
      for (Variable v = 1; v <= f.num_variables(); ++v) {
        if (sigma.is_set(v)) continue;
        if (occurs[v]) return {false, "no value for x" + std::to_string(v)};
        sigma.set(v, false);
      }
      if (!evaluate(f, sigma)) return {false, "assignment falsifies a clause"};
      return {true, {}};
    }
    case Representation::VertexCover: {
      const auto* c = std::get_if<CoverWitness>(&witness);
      if (!c) return {false, "witness is not a vertex list"};
      const auto& g = std::get<VertexCoverInstance>(instance.reduced);
      std::vector<std::size_t> ids;
      for (const std::string& label : c->vertices) {
        std::size_t id = g.find(label);
        if (id == VertexCoverInstance::npos) return {false, "unknown vertex " + label};
        ids.push_back(id);
      }
      std::set<std::size_t> distinct(ids.begin(), ids.end());
      if (distinct.size() > g.k)
        return {false, "cover has " + std::to_string(distinct.size()) + " vertices, budget " + std::to_string(g.k)};
      if (!check_cover(g, ids)) return {false, "some edge is uncovered"};
      return {true, {}};
    }
    case Representation::Packing: {
      const auto* p = std::get_if<PackingWitnessText>(&witness);
      if (!p) return {false, "witness is not a rod selection"};
      const auto& inst = std::get<PackingInstance>(instance.reduced);
      PackingWitness w;
      for (const std::string& label : p->rods) {
        std::size_t id = inst.find_rod(label);
        if (id == PackingInstance::npos) return {false, "unknown rod " + label};
        w.selected_rods.push_back(id);
      }
      for (const TokenPlacementText& t : p->placements) {
        std::size_t tok = inst.find_token(t.token);
        if (tok == PackingInstance::npos) return {false, "unknown token " + t.token};
        std::size_t rod = inst.find_rod(t.rod);
        if (rod == PackingInstance::npos) return {false, "unknown rod " + t.rod};
        if (t.slot < 1) return {false, "slot numbers start at 1"};
        if (!w.token_placement.emplace(tok, Placement{rod, static_cast<std::size_t>(t.slot)}).second)
          return {false, "token " + t.token + " placed twice"};
      }
      if (!check_packing(inst, w)) return {false, "rod selection or token placement violates the constraints"};
      return {true, {}};
    }
  }
  return {false, "unknown representation"};
}

bool validate_witness(EvaluationRecord& record, const EvalInstance& instance) {
  if (!record.prediction.witness) throw DomainError("record " + record.instance_id + " carries no witness");
  WitnessCheck check = check_witness(*record.prediction.witness, instance);
  record.witness_valid = check.valid;
  record.witness_reason = check.valid ? std::string{} : check.reason;
  return check.valid;
}

std::vector<EvaluationRecord> run_evaluation(const std::vector<EvalInstance>& instances, Client& client,
                                             const EvaluationOptions& options) {
  if (options.concurrency == 0) throw DomainError("concurrency must be positive");
  auto key_of = [](Representation rep, const std::string& id) { return std::string(to_string(rep)) + "/" + id; };
  std::map<std::string, EvaluationRecord> done;
  if (options.records_path && std::filesystem::exists(*options.records_path)) {
    for (EvaluationRecord& r : read_records(*options.records_path)) {
      std::string key = key_of(r.representation, r.instance_id);
      done.insert_or_assign(std::move(key), std::move(r));
    }
    // rewrite without a possibly truncated tail before appending
    std::vector<EvaluationRecord> kept;
    for (const auto& [id, r] : done) kept.push_back(r);
    write_records(*options.records_path, kept);
  }

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (!done.count(key_of(instances[i].representation, instances[i].id))) todo.push_back(i);

  auto template_for = [&](Representation rep) {
    const std::optional<PromptTemplate>& custom = rep == Representation::Cnf           ? options.cnf_template
                                                  : rep == Representation::VertexCover ? options.vc_template
                                                                                       : options.packing_template;
    return custom ? *custom : default_template(rep);
  };

  std::ofstream sink;
  if (options.records_path) {
    sink.open(*options.records_path, std::ios::app);
    if (!sink) throw DomainError("cannot append to " + options.records_path->string());
  }
  std::mutex writer;
  std::vector<EvaluationRecord> fresh(todo.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t t = next++; t < todo.size(); t = next++) {
      const EvalInstance& inst = instances[todo[t]];
      EvaluationRecord rec;
      rec.instance_id = inst.id;
      rec.representation = inst.representation;
      rec.model = client.model();
      rec.truth = inst.truth;
      rec.pair_id = inst.pair_id;
      rec.k = inst.k;
      rec.n = inst.n;
      rec.alpha = inst.alpha;
      Query query{todo[t], &inst, build_prompt(inst, template_for(inst.representation))};
      Completion completion;
      const auto start = std::chrono::steady_clock::now();
      for (unsigned attempt = 0; attempt <= options.max_retries; ++attempt) {
        ++rec.attempts;
        try {
          completion = client.complete(query);
        } catch (const std::exception& e) {
          completion = {Completion::Status::TransportError, {}, e.what()};
        }
        if (!completion.retryable()) break;
      }
      if (completion.status == Completion::Status::Ok) {
        rec.prediction = parse_response(completion.text, inst.representation);
        if (rec.prediction.witness) validate_witness(rec, inst);
      } else {
        rec.prediction.decision = Decision::Abstain;
        rec.error = std::string(to_string(completion.status)) + ": " + completion.error;
      }
      rec.prediction.latency =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
      if (sink.is_open()) {
        std::lock_guard lock(writer);
        sink << record_to_json(rec).dump() << '\n';
        sink.flush();
      }
      fresh[t] = std::move(rec);
    }
  };

  const unsigned threads = std::min<unsigned>(options.concurrency, static_cast<unsigned>(std::max<std::size_t>(todo.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::vector<EvaluationRecord> out;
  out.reserve(instances.size());
  for (const EvalInstance& inst : instances) {
    auto it = done.find(key_of(inst.representation, inst.id));
    if (it != done.end()) out.push_back(it->second);
  }
  for (EvaluationRecord& r : fresh) out.push_back(std::move(r));
  std::sort(out.begin(), out.end(),
            [](const EvaluationRecord& a, const EvaluationRecord& b) {
              return std::tie(a.instance_id, a.representation) < std::tie(b.instance_id, b.representation);
            });
  return out;
}

std::map<std::pair<std::string, Variable>, double> completion_rates(const std::vector<EvaluationRecord>& records) {
  std::map<std::pair<std::string, Variable>, std::pair<std::size_t, std::size_t>> tally;
  for (const EvaluationRecord& r : records) {
    auto& [answered, total] = tally[{r.model, r.n}];
    ++total;
    if (r.prediction.decision != Decision::Abstain) ++answered;
  }
  std::map<std::pair<std::string, Variable>, double> out;
  for (const auto& [key, counts] : tally)
    out[key] = static_cast<double>(counts.first) / static_cast<double>(counts.second);
  return out;
}

PairedOutcomeCounts paired_counts(const std::vector<EvaluationRecord>& records) {
  std::map<std::pair<std::string, std::string>, PairOutcome> pairs;
  for (const EvaluationRecord& r : records) {
    if (!r.pair_id) continue;
    PairOutcome& p = pairs[{r.model, *r.pair_id}];
    (r.truth == Label::Sat ? p.on_sat_member : p.on_unsat_member) = to_verdict(r.prediction.decision);
  }
  std::vector<PairOutcome> list;
  for (const auto& [key, p] : pairs) list.push_back(p);
  if (list.empty()) return {};
  return paired_outcomes(list);
}

AgreementReport cross_representation_agreement(const std::vector<EvaluationRecord>& a,
                                               const std::vector<EvaluationRecord>& b) {
  using Key = std::pair<std::string, std::string>;
  std::map<Key, const EvaluationRecord*> left, right;
  for (const EvaluationRecord& r : a) left[{r.model, r.instance_id}] = &r;
  for (const EvaluationRecord& r : b) right[{r.model, r.instance_id}] = &r;
  std::vector<std::string> missing;
  for (const auto& [key, r] : left)
    if (!right.count(key)) missing.push_back(key.second + " (only in first set)");
  for (const auto& [key, r] : right)
    if (!left.count(key)) missing.push_back(key.second + " (only in second set)");
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "record sets cover different instances: ";
    for (std::size_t i = 0; i < missing.size(); ++i) msg << (i ? ", " : "") << missing[i];
    throw std::invalid_argument(msg.str());
  }

  AgreementReport rep;
  std::size_t agree = 0, a_right = 0, b_right = 0;
  for (const auto& [key, ra] : left) {
    const EvaluationRecord* rb = right.at(key);
    const Verdict va = to_verdict(ra->prediction.decision);
    const Verdict vb = to_verdict(rb->prediction.decision);
    const Verdict truth = ra->truth == Label::Sat ? Verdict::Sat : Verdict::Unsat;
    ++rep.compared;
    if (va == vb) {
      ++agree;
      continue;
    }
    ++rep.disagreements;
    a_right += va == truth;
    b_right += vb == truth;
  }
  if (rep.compared) rep.agreement = static_cast<double>(agree) / static_cast<double>(rep.compared);
  if (rep.disagreements) {
    rep.a_correct_share = static_cast<double>(a_right) / static_cast<double>(rep.disagreements);
    rep.b_correct_share = static_cast<double>(b_right) / static_cast<double>(rep.disagreements);
  }
  PairedOutcomeCounts pa = paired_counts(a), pb = paired_counts(b);
  if (pa.pairs()) rep.adr_a = adr(pa);
  if (pb.pairs()) rep.adr_b = adr(pb);
  return rep;
}

}  // namespace satbench
