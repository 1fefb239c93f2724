#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "satbench/evaluation.hpp"

namespace satbench {

struct ScoreRow {
  std::string model;
  Representation representation = Representation::Cnf;
  Variable n = 0;
  std::string alpha_bin;  // "all" when rows are not split by density
  std::size_t records = 0;
  double completion_rate = 0.0;
  MetricValue accuracy = MetricValue::undefined(UndefinedReason::EmptyInput);
  MetricValue precision_sat = accuracy, recall_sat = accuracy, f1_sat = accuracy;
  MetricValue precision_unsat = accuracy, recall_unsat = accuracy, f1_unsat = accuracy;
  MetricValue mcc = accuracy;
  std::size_t pairs = 0;
  MetricValue adr = accuracy, r_sat = accuracy, r_unsat = accuracy;
  MetricValue adr_lower = accuracy, adr_upper = accuracy;
  MetricValue mcc_pairs = accuracy;

  /// Every undefined metric as (column, reason).
  std::vector<std::pair<std::string, UndefinedReason>> undefined() const;
};

/// Formats an alpha value as a bin label with two decimals.
std::string alpha_bin_label(double alpha);

/// One row per (model, representation, N, alpha bin), in that sort order.
/// Confusion metrics use answered records only; paired metrics use every
/// pair id with at least one member in the group, a missing member counting
/// as ABSTAIN.
std::vector<ScoreRow> score_table(const std::vector<EvaluationRecord>& records, bool by_alpha);

/// Header line plus one line per row. Undefined metrics are empty cells and
/// their reasons are listed in the final column as "column:reason" joined by ';'.
void write_score_csv(std::ostream& out, const std::vector<ScoreRow>& rows);
std::string score_csv_header();

/// Shortest round-trip decimal for a double, as used in every CSV cell.
std::string format_number(double v);

}  // namespace satbench
