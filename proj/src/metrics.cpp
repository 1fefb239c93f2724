#include "satbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace satbench {

std::string_view to_string(Label label) { return label == Label::Sat ? "SAT" : "UNSAT"; }

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Sat: return "SAT";
    case Verdict::Unsat: return "UNSAT";
    case Verdict::Abstain: return "ABSTAIN";
  }
  return "ABSTAIN";
}

std::string_view to_string(UndefinedReason reason) {
  switch (reason) {
    case UndefinedReason::EmptyInput: return "empty_input";
    case UndefinedReason::NoPredictedPositives: return "no_predicted_positives";
    case UndefinedReason::NoActualPositives: return "no_actual_positives";
    case UndefinedReason::NoActualNegatives: return "no_actual_negatives";
    case UndefinedReason::NoPredictedNegatives: return "no_predicted_negatives";
  }
  return "empty_input";
}

double MetricValue::value() const {
  if (!value_) throw std::logic_error("metric is undefined (" + std::string(to_string(*reason_)) + ")");
  return *value_;
}

double ConfusionCounts::completion_rate() const {
  const std::uint64_t all = total() + abstained;
  return all == 0 ? 0.0 : static_cast<double>(total()) / static_cast<double>(all);
}

ConfusionCounts confusion(std::span<const LabeledPrediction> records, Label positive) {
  if (records.empty()) throw std::invalid_argument("confusion needs at least one record");
  ConfusionCounts c;
  c.positive = positive;
  const Verdict positive_verdict = positive == Label::Sat ? Verdict::Sat : Verdict::Unsat;
  for (const LabeledPrediction& r : records) {
    if (r.predicted == Verdict::Abstain) {
      ++c.abstained;
      continue;
    }
    const bool actual = r.truth == positive;
    const bool predicted = r.predicted == positive_verdict;
    if (actual && predicted) ++c.tp;
    else if (!actual && predicted) ++c.fp;
    else if (!actual) ++c.tn;
    else ++c.fn;
  }
  return c;
}

namespace {

double d(std::uint64_t x) { return static_cast<double>(x); }

}  // namespace

MetricValue precision(const ConfusionCounts& c) {
  if (c.total() == 0) return MetricValue::undefined(UndefinedReason::EmptyInput);
  if (c.tp + c.fp == 0) return MetricValue::undefined(UndefinedReason::NoPredictedPositives);
  return MetricValue::of(d(c.tp) / d(c.tp + c.fp));
}

MetricValue recall(const ConfusionCounts& c) {
  if (c.total() == 0) return MetricValue::undefined(UndefinedReason::EmptyInput);
  if (c.tp + c.fn == 0) return MetricValue::undefined(UndefinedReason::NoActualPositives);
  return MetricValue::of(d(c.tp) / d(c.tp + c.fn));
}

MetricValue f1(const ConfusionCounts& c) {
  if (c.total() == 0) return MetricValue::undefined(UndefinedReason::EmptyInput);
  // 2TP + FP + FN = 0 means no positives were predicted or present
  if (c.tp + c.fp + c.fn == 0) return MetricValue::undefined(UndefinedReason::NoActualPositives);
  return MetricValue::of(2.0 * d(c.tp) / (2.0 * d(c.tp) + d(c.fp) + d(c.fn)));
}

MetricValue accuracy(const ConfusionCounts& c) {
  if (c.total() == 0) return MetricValue::undefined(UndefinedReason::EmptyInput);
  return MetricValue::of(d(c.tp + c.tn) / d(c.total()));
}

MetricValue mcc(const ConfusionCounts& c) {
  if (c.total() == 0) return MetricValue::undefined(UndefinedReason::EmptyInput);
  if (c.tp + c.fp == 0) return MetricValue::undefined(UndefinedReason::NoPredictedPositives);
  if (c.tp + c.fn == 0) return MetricValue::undefined(UndefinedReason::NoActualPositives);
  if (c.tn + c.fp == 0) return MetricValue::undefined(UndefinedReason::NoActualNegatives);
  if (c.tn + c.fn == 0) return MetricValue::undefined(UndefinedReason::NoPredictedNegatives);
  const double num = d(c.tp) * d(c.tn) - d(c.fp) * d(c.fn);
  const double den = std::sqrt(d(c.tp + c.fp) * d(c.tp + c.fn)) * std::sqrt(d(c.tn + c.fp) * d(c.tn + c.fn));
  return MetricValue::of(std::clamp(num / den, -1.0, 1.0));
}

namespace {

std::int64_t as_signed(std::uint64_t x) { return static_cast<std::int64_t>(x); }

void require_pairs(const PairedOutcomeCounts& c) {
  if (c.pairs() == 0) throw std::invalid_argument("paired metrics need at least one pair");
}

}  // namespace

Rational PairedOutcomeCounts::r_sat() const {
  require_pairs(*this);
  return Rational(as_signed(n11 + n10), as_signed(pairs()));
}

Rational PairedOutcomeCounts::r_unsat() const {
  require_pairs(*this);
  return Rational(as_signed(n11 + n01), as_signed(pairs()));
}

Rational PairedOutcomeCounts::adr() const {
  require_pairs(*this);
  return Rational(as_signed(n11), as_signed(pairs()));
}

Rational PairedOutcomeCounts::accuracy() const {
  require_pairs(*this);
  return Rational(as_signed(2 * n11 + n10 + n01), as_signed(2 * pairs()));
}

PairedOutcomeCounts paired_outcomes(std::span<const PairOutcome> pairs) {
  if (pairs.empty()) throw std::invalid_argument("paired_outcomes needs at least one pair");
  PairedOutcomeCounts c;
  for (const PairOutcome& p : pairs) {
    const bool sat_ok = p.on_sat_member == Verdict::Sat;
    const bool unsat_ok = p.on_unsat_member == Verdict::Unsat;
    c.abstentions += (p.on_sat_member == Verdict::Abstain) + (p.on_unsat_member == Verdict::Abstain);
    if (sat_ok && unsat_ok) ++c.n11;
    else if (sat_ok) ++c.n10;
    else if (unsat_ok) ++c.n01;
    else ++c.n00;
  }
  return c;
}

double adr(const PairedOutcomeCounts& counts) { return to_double(counts.adr()); }

AdrBounds adr_bounds(double r_sat, double r_unsat) {
  if (!(r_sat >= 0.0 && r_sat <= 1.0) || !(r_unsat >= 0.0 && r_unsat <= 1.0))
    throw DomainError("per-class recalls must lie in [0, 1]");
  return {std::max(0.0, r_sat + r_unsat - 1.0), std::min(r_sat, r_unsat)};
}

AdrDecomposition adr_decomposition(const PairedOutcomeCounts& counts) {
  const Rational independence = counts.r_sat() * counts.r_unsat();
  return {independence, counts.adr() - independence};
}

ConfusionCounts flatten(const PairedOutcomeCounts& counts, Label positive) {
  // SAT members right in n11 + n10 pairs, UNSAT members right in n11 + n01
  const std::uint64_t sat_right = counts.n11 + counts.n10;
  const std::uint64_t sat_wrong = counts.n01 + counts.n00;
  const std::uint64_t unsat_right = counts.n11 + counts.n01;
  const std::uint64_t unsat_wrong = counts.n10 + counts.n00;
  ConfusionCounts c;
  c.positive = positive;
  if (positive == Label::Sat) {
    c.tp = sat_right;
    c.fn = sat_wrong;
    c.tn = unsat_right;
    c.fp = unsat_wrong;
  } else {
    c.tp = unsat_right;
    c.fn = unsat_wrong;
    c.tn = sat_right;
    c.fp = sat_wrong;
  }
  return c;
}

MetricValue mcc_from_pairs(const PairedOutcomeCounts& counts) {
  require_pairs(counts);
  const double m = d(counts.pairs());
  const double adr_value = d(counts.n11) / m;
  const double beta = d(counts.n00) / m;
  const double delta = (d(counts.n10) - d(counts.n01)) / m;
  if (counts.n10 == counts.pairs()) return MetricValue::undefined(UndefinedReason::NoPredictedNegatives);
  if (counts.n01 == counts.pairs()) return MetricValue::undefined(UndefinedReason::NoPredictedPositives);
  // 1 − δ² factored to keep precision when |δ| is close to 1
  const double value = (adr_value - beta) / std::sqrt((1.0 - delta) * (1.0 + delta));
  return MetricValue::of(std::clamp(value, -1.0, 1.0));
}

MetricValue mcc_from_recalls(double r_sat, double r_unsat) {
  if (!(r_sat >= 0.0 && r_sat <= 1.0) || !(r_unsat >= 0.0 && r_unsat <= 1.0))
    throw DomainError("per-class recalls must lie in [0, 1]");
  const double a = r_sat + 1.0 - r_unsat;
  const double b = r_unsat + 1.0 - r_sat;
  if (b == 0.0) return MetricValue::undefined(UndefinedReason::NoPredictedNegatives);
  if (a == 0.0) return MetricValue::undefined(UndefinedReason::NoPredictedPositives);
  return MetricValue::of(std::clamp((r_sat + r_unsat - 1.0) / std::sqrt(a * b), -1.0, 1.0));
}

}  // namespace satbench
