#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "satbench/cnf.hpp"

namespace satbench {

enum class Label { Sat, Unsat };

/// A prediction reduced to the binary question; YES/NO answers on reduced
/// instances map to Sat/Unsat. Abstain covers timeouts and unparseable output.
enum class Verdict { Sat, Unsat, Abstain };

std::string_view to_string(Label label);
std::string_view to_string(Verdict verdict);

struct LabeledPrediction {
  Label truth = Label::Sat;
  Verdict predicted = Verdict::Abstain;
};

struct ConfusionCounts {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  Label positive = Label::Sat;
  std::uint64_t abstained = 0;  // excluded from the four cells

  std::uint64_t total() const { return tp + fp + tn + fn; }
  /// Answered records over all records.
  double completion_rate() const;
};

/// Why a metric has no value. The four margin reasons name the factor of the
/// MCC denominator (or the precision/recall denominator) that is zero.
enum class UndefinedReason {
  EmptyInput,            // no scored records
  NoPredictedPositives,  // TP + FP = 0
  NoActualPositives,     // TP + FN = 0
  NoActualNegatives,     // TN + FP = 0
  NoPredictedNegatives,  // TN + FN = 0
};

std::string_view to_string(UndefinedReason reason);

class MetricValue {
 public:
  static MetricValue of(double v) { return MetricValue(v, std::nullopt); }
  static MetricValue undefined(UndefinedReason why) { return MetricValue(std::nullopt, why); }

  bool defined() const { return value_.has_value(); }
  /// Throws std::logic_error when undefined.
  double value() const;
  std::optional<double> get() const { return value_; }
  std::optional<UndefinedReason> reason() const { return reason_; }

 private:
  MetricValue(std::optional<double> v, std::optional<UndefinedReason> r) : value_(v), reason_(r) {}
  std::optional<double> value_;
  std::optional<UndefinedReason> reason_;
};

/// Throws std::invalid_argument on an empty record list.
ConfusionCounts confusion(std::span<const LabeledPrediction> records, Label positive);

MetricValue precision(const ConfusionCounts& c);
MetricValue recall(const ConfusionCounts& c);
/// 2TP / (2TP + FP + FN).
MetricValue f1(const ConfusionCounts& c);
MetricValue accuracy(const ConfusionCounts& c);
MetricValue mcc(const ConfusionCounts& c);

// ------------------------------------------------------------ paired outcomes

struct PairOutcome {
  Verdict on_sat_member = Verdict::Abstain;
  Verdict on_unsat_member = Verdict::Abstain;
};

/// n11 both members right, n10 only the SAT member, n01 only the UNSAT
/// member, n00 neither. Ratios are exact.
struct PairedOutcomeCounts {
  std::uint64_t n11 = 0, n10 = 0, n01 = 0, n00 = 0;
  std::uint64_t abstentions = 0;  // abstaining members, already counted as wrong

  std::uint64_t pairs() const { return n11 + n10 + n01 + n00; }
  Rational r_sat() const;    // (n11 + n10) / M
  Rational r_unsat() const;  // (n11 + n01) / M
  Rational adr() const;      // n11 / M
  /// Accuracy over the 2M member instances.
  Rational accuracy() const;
};

/// Abstaining members count as incorrect. Throws std::invalid_argument on an
/// empty list.
PairedOutcomeCounts paired_outcomes(std::span<const PairOutcome> pairs);

/// Fraction of pairs with both members classified correctly. Always defined
/// for M ≥ 1; throws std::invalid_argument for M = 0.
double adr(const PairedOutcomeCounts& counts);

struct AdrBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// (max(0, rS + rU − 1), min(rS, rU)). Throws DomainError outside [0, 1].
AdrBounds adr_bounds(double r_sat, double r_unsat);

struct AdrDecomposition {
  Rational independence;  // rS · rU
  Rational covariance;    // ADR − rS · rU
};

AdrDecomposition adr_decomposition(const PairedOutcomeCounts& counts);

/// Flattens M pairs into 2M labelled instances.
ConfusionCounts flatten(const PairedOutcomeCounts& counts, Label positive = Label::Sat);

/// (ADR − β) / √(1 − δ²) with β = n00/M and δ = (n10 − n01)/M. Undefined
/// when |δ| = 1, i.e. every pair got the same answer on both members.
MetricValue mcc_from_pairs(const PairedOutcomeCounts& counts);

/// (rS + rU − 1) / √((rS + 1 − rU)(rU + 1 − rS)).
MetricValue mcc_from_recalls(double r_sat, double r_unsat);

}  // namespace satbench
