#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "satbench/backend.hpp"
#include "satbench/metrics.hpp"
#include "satbench/prompt.hpp"
#include "satbench/response.hpp"

namespace satbench {

struct EvaluationRecord {
  std::string instance_id;
  Representation representation = Representation::Cnf;
  std::string model;
  Label truth = Label::Sat;
  Prediction prediction;
  std::optional<bool> witness_valid;  // present iff a witness was supplied
  std::string witness_reason;         // why a witness was rejected
  std::optional<std::string> pair_id;
  unsigned k = 3;
  Variable n = 0;
  double alpha = 0.0;
  std::string error;  // backend failure that led to ABSTAIN
  unsigned attempts = 0;
};

nlohmann::ordered_json record_to_json(const EvaluationRecord& r);
EvaluationRecord record_from_json(const nlohmann::json& j);

/// Reads a JSON-lines record file. A truncated final line (from an
/// interrupted run) is skipped; other malformed lines throw DomainError.
std::vector<EvaluationRecord> read_records(const std::filesystem::path& path);
void write_records(const std::filesystem::path& path, const std::vector<EvaluationRecord>& records);

struct WitnessCheck {
  bool valid = false;
  std::string reason;
};

/// Checks a witness against the instance with evaluate / check_cover /
/// check_packing. Unknown variables, vertices, rods or tokens make it invalid.
/// An assignment may omit variables that occur in no clause (they default
/// to false) but not the others.
WitnessCheck check_witness(const Witness& witness, const EvalInstance& instance);

/// Fills record.witness_valid / witness_reason when a witness is present and
/// returns the verdict. Throws DomainError if the record carries no witness.
bool validate_witness(EvaluationRecord& record, const EvalInstance& instance);

struct EvaluationOptions {
  unsigned concurrency = 4;
  unsigned max_retries = 2;
  /// JSON-lines file appended to as records complete. Records already in it
  /// are reused, so an interrupted run resumes where it stopped.
  std::optional<std::filesystem::path> records_path;
  std::optional<PromptTemplate> cnf_template, vc_template, packing_template;
};

/// Queries every instance with at most `concurrency` requests in flight.
/// Retries only retryable completions; exhausted or failed requests become
/// ABSTAIN records carrying the error. Output is sorted by instance id, then
/// representation; resume matches on both.
std::vector<EvaluationRecord> run_evaluation(const std::vector<EvalInstance>& instances, Client& client,
                                             const EvaluationOptions& options = {});

/// Answered records over all records, per (model, N).
std::map<std::pair<std::string, Variable>, double> completion_rates(const std::vector<EvaluationRecord>& records);

/// Groups records by pair id; a missing member counts as ABSTAIN.
PairedOutcomeCounts paired_counts(const std::vector<EvaluationRecord>& records);

struct AgreementReport {
  std::size_t compared = 0;
  double agreement = 0.0;  // same verdict on both representations
  std::size_t disagreements = 0;
  double a_correct_share = 0.0;  // among disagreements
  double b_correct_share = 0.0;
  std::optional<double> adr_a;  // when the records carry pair ids
  std::optional<double> adr_b;
};

/// Throws std::invalid_argument listing ids present on only one side.
AgreementReport cross_representation_agreement(const std::vector<EvaluationRecord>& a,
                                               const std::vector<EvaluationRecord>& b);

}  // namespace satbench
