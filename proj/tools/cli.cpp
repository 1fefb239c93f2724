#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "satbench/evaluation.hpp"
#include "satbench/generator.hpp"
#include "satbench/json_io.hpp"
#include "satbench/pairing.hpp"
#include "satbench/random.hpp"
#include "satbench/scoring.hpp"
#include "satbench/solver.hpp"

#ifndef SATBENCH_VERSION
#define SATBENCH_VERSION "0.0.0"
#endif

namespace satbench::cli {

namespace fs = std::filesystem;

namespace {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BackendFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

/// Everything a stage records about how it was invoked.
struct Run {
  std::string command;
  std::string config;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string started = utc_now();
};

Json manifest_json(std::string_view stage, const Run& run, Json body) {
  Json j;
  j["stage"] = stage;
  j["run"] = {{"command", run.command},
              {"config", run.config},
              {"seed", run.seed},
              {"version", SATBENCH_VERSION},
              {"inputs", run.inputs},
              {"outputs", run.outputs},
              {"started", run.started},
              {"finished", utc_now()}};
  for (auto& [key, value] : body.items()) j[key] = value;
  return j;
}

void write_manifest(const fs::path& path, std::string_view stage, const Run& run, Json body = Json::object()) {
  write_file(path, manifest_json(stage, run, std::move(body)).dump(2) + "\n");
}

Json read_manifest(const fs::path& dir, std::string_view expected_stage) {
  const fs::path path = dir / "manifest.json";
  if (!fs::exists(path))
    throw DataError("no manifest.json in " + dir.string() + "; expected the output of the '" +
                    std::string(expected_stage) + "' stage");
  Json j = Json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError(path.string() + " is not valid JSON");
  const std::string stage = j.value("stage", std::string{});
  if (stage != expected_stage)
    throw DataError(path.string() + " comes from the '" + stage + "' stage; expected the '" +
                    std::string(expected_stage) + "' stage");
  return j;
}

void prepare_out_dir(const fs::path& dir, bool force) {
  if (fs::exists(dir) && !fs::is_empty(dir) && !force)
    throw DataError("output directory " + dir.string() + " already exists; pass --force to overwrite");
  fs::create_directories(dir);
}

std::string alpha_tag(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", alpha);
  return buf;
}

std::string indexed(std::string_view prefix, std::size_t i, std::string_view suffix) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05zu", i);
  return std::string(prefix) + buf + std::string(suffix);
}

// ------------------------------------------------------------------- stages

SolveResult solve_with(const std::string& solver, const CnfFormula& f, const SolveBudget& budget) {
  if (solver == "2sat") return solve_2sat(f);
  if (solver == "brute") return brute_force(f, 40);
  if (solver == "cdcl") return solve_cdcl(f, budget);
  return f.max_width() <= 2 ? solve_2sat(f) : solve_cdcl(f, budget);
}

struct GenArgs {
  unsigned k = 3;
  Variable n = 0;
  std::vector<double> alphas;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool force = false;
  bool unsat_only = false;
};

void cmd_gen(const GenArgs& a, Run run, std::ostream& out) {
  prepare_out_dir(a.out_dir, a.force);
  Json instances = Json::array();
  std::vector<CnfFormula> formulas;
  auto emit = [&](const std::string& name, const CnfFormula& f, double alpha, std::uint64_t seed) {
    write_file(fs::path(a.out_dir) / name, emit_dimacs(f));
    formulas.push_back(f);
    instances.push_back({{"file", name}, {"alpha", alpha}, {"seed", seed}, {"clauses", f.num_clauses()}});
    run.outputs.push_back(name);
  };
  Json extra;
  if (a.unsat_only) {
    UnsatOptions opts;
    opts.k = a.k;
    const UnsatStressSet set = generate_unsat_low_alpha(a.n, a.alphas, a.count, a.seed, opts);
    for (std::size_t i = 0; i < set.instances.size(); ++i) {
      const UnsatSample& s = set.instances[i];
      emit(indexed("unsat-", i, ".cnf"), s.formula, s.alpha, s.seed);
    }
    extra["unsat_sampling"] = {{"attempts", set.attempts},
                               {"rejected_sat", set.rejected_sat},
                               {"rejected_unknown", set.rejected_unknown}};
  } else {
    for (std::size_t ai = 0; ai < a.alphas.size(); ++ai) {
      GeneratorConfig cfg{a.k, a.n, a.alphas[ai], derive_seed(a.seed, ai), a.count};
      cfg.validate();
      const auto batch = generate_batch(cfg);
      for (std::size_t i = 0; i < batch.size(); ++i)
        emit("a" + alpha_tag(a.alphas[ai]) + "-" + indexed("", i, ".cnf"), batch[i].formula, batch[i].alpha,
             batch[i].seed);
    }
  }
  std::vector<SolveResult> labels(formulas.size());
  parallel_for(formulas.size(), 0, [&](std::size_t i) { labels[i] = solve_with("auto", formulas[i], {}); });
  for (std::size_t i = 0; i < labels.size(); ++i) {
    instances[i]["label"] = to_string(labels[i].status);
    instances[i]["decisions"] = labels[i].decisions;
    instances[i]["conflicts"] = labels[i].conflicts;
  }
  extra["k"] = a.k;
  extra["n"] = a.n;
  extra["unsat_only"] = a.unsat_only;
  extra["instances"] = std::move(instances);
  write_manifest(fs::path(a.out_dir) / "manifest.json", "gen", run, std::move(extra));
  out << "wrote " << run.outputs.size() << " formulas to " << a.out_dir << "\n";
}

struct SolveArgs {
  std::string file, in_dir, out_dir, solver = "auto";
  std::optional<std::uint64_t> max_conflicts;
  std::optional<std::int64_t> timeout_ms;
  unsigned threads = 0;
  bool force = false;
};

void cmd_solve(const SolveArgs& a, Run run, std::ostream& out) {
  SolveBudget budget;
  budget.max_conflicts = a.max_conflicts;
  if (a.timeout_ms) budget.wall_time = std::chrono::milliseconds(*a.timeout_ms);
  budget.validate();

  if (!a.file.empty()) {
    std::ifstream in(a.file);
    if (!in) throw DataError("cannot read " + a.file);
    const CnfFormula f = parse_dimacs(in);
    const SolveResult r = solve_with(a.solver, f, budget);
    out << "c decisions " << r.decisions << "\nc conflicts " << r.conflicts << "\n";
    out << "s " << (r.status == SolveStatus::Sat ? "SATISFIABLE" : r.status == SolveStatus::Unsat ? "UNSATISFIABLE" : "UNKNOWN")
        << "\n";
    if (r.model) {
      out << "v";
      for (Variable v = 1; v <= f.num_variables(); ++v) out << ' ' << (r.model->value(v) ? "" : "-") << v;
      out << " 0\n";
    }
    return;
  }
  if (a.in_dir.empty() || a.out_dir.empty()) throw CLI::ValidationError("solve needs --file, or --in-dir with --out-dir");
  const Json gen = read_manifest(a.in_dir, "gen");
  prepare_out_dir(a.out_dir, a.force);
  const Json& instances = gen.at("instances");
  std::vector<CnfFormula> formulas;
  for (const Json& inst : instances) {
    const fs::path path = fs::path(a.in_dir) / inst.at("file").get<std::string>();
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    formulas.push_back(parse_dimacs(in));
  }
  std::vector<SolveResult> results(formulas.size());
  parallel_for(formulas.size(), a.threads, [&](std::size_t i) { results[i] = solve_with(a.solver, formulas[i], budget); });

  std::ostringstream csv;
  csv << "file,alpha,status,decisions,conflicts\n";
  for (std::size_t i = 0; i < results.size(); ++i)
    csv << instances[i].at("file").get<std::string>() << ',' << format_number(instances[i].at("alpha").get<double>())
        << ',' << to_string(results[i].status) << ',' << results[i].decisions << ',' << results[i].conflicts << '\n';
  write_file(fs::path(a.out_dir) / "results.csv", csv.str());
  run.inputs.push_back((fs::path(a.in_dir) / "manifest.json").string());
  run.outputs.push_back("results.csv");
  write_manifest(fs::path(a.out_dir) / "manifest.json", "solve", run, {{"solver", a.solver}, {"k", gen.at("k")}, {"n", gen.at("n")}});
  out << "solved " << results.size() << " formulas\n";
}

struct PairArgs {
  unsigned k = 3;
  Variable n = 0;
  std::size_t count = 70;
  std::uint64_t seed = 0;
  std::vector<double> alphas;
  std::string out_dir;
  bool force = false;
};

void cmd_pair(PairArgs a, Run run, std::ostream& out) {
  if (a.alphas.empty()) a.alphas = a.k == 2 ? kLowAlphaChoices2Sat : kLowAlphaChoices;
  prepare_out_dir(a.out_dir, a.force);
  const PairSet set = build_pair_set(a.n, a.count, a.alphas, a.seed, a.k);
  write_file(fs::path(a.out_dir) / "pairs.json", pair_set_to_json(set).dump(2) + "\n");
  run.outputs.push_back("pairs.json");
  write_manifest(fs::path(a.out_dir) / "manifest.json", "pair", run,
                 {{"k", a.k}, {"n", a.n}, {"count", set.pairs.size()}, {"pairing_failures", set.stats.pairing_failures}});
  out << "wrote " << set.pairs.size() << " pairs to " << a.out_dir << "\n";
}

struct ReduceArgs {
  std::vector<std::string> in_dirs;
  std::string representation = "all";
  std::string out_dir;
  bool force = false;
};

std::vector<Representation> selected_representations(const std::string& name) {
  if (name == "all") return {Representation::Cnf, Representation::VertexCover, Representation::Packing};
  return {representation_from_string(name)};
}

Json eval_instance_to_json(const EvalInstance& e) {
  Json j;
  j["id"] = e.id;
  j["representation"] = to_string(e.representation);
  j["truth"] = to_string(e.truth);
  j["pair_id"] = e.pair_id ? Json(*e.pair_id) : Json(nullptr);
  j["k"] = e.k;
  j["n"] = e.n;
  j["alpha"] = e.alpha;
  j["dimacs"] = emit_dimacs(e.source);
  if (const auto* vc = std::get_if<VertexCoverInstance>(&e.reduced)) j["reduced"] = vertex_cover_to_json(*vc);
  if (const auto* p = std::get_if<PackingInstance>(&e.reduced)) j["reduced"] = packing_to_json(*p);
  return j;
}

EvalInstance eval_instance_from_json(const Json& j) {
  EvalInstance e;
  e.id = j.at("id").get<std::string>();
  e.representation = representation_from_string(j.at("representation").get<std::string>());
  e.truth = j.at("truth").get<std::string>() == "SAT" ? Label::Sat : Label::Unsat;
  if (!j.at("pair_id").is_null()) e.pair_id = j.at("pair_id").get<std::string>();
  e.k = j.at("k").get<unsigned>();
  e.n = j.at("n").get<Variable>();
  e.alpha = j.at("alpha").get<double>();
  e.source = parse_dimacs(j.at("dimacs").get<std::string>());
  if (e.representation == Representation::VertexCover) e.reduced = vertex_cover_from_json(j.at("reduced"));
  if (e.representation == Representation::Packing) e.reduced = packing_from_json(j.at("reduced"));
  return e;
}

void cmd_reduce(const ReduceArgs& a, Run run, std::ostream& out) {
  const std::vector<Representation> reps = selected_representations(a.representation);
  std::vector<Json> pair_sets;
  for (const std::string& dir : a.in_dirs) {
    read_manifest(dir, "pair");
    Json set = Json::parse(read_file(fs::path(dir) / "pairs.json"), nullptr, false);
    if (set.is_discarded()) throw DataError(dir + "/pairs.json is not valid JSON");
    pair_sets.push_back(std::move(set));
    run.inputs.push_back((fs::path(dir) / "manifest.json").string());
  }
  prepare_out_dir(a.out_dir, a.force);
  Json instances = Json::array();
  std::map<std::string, std::size_t> per_rep;
  for (const Json& set : pair_sets) {
    for (const Json& pj : set.at("pairs")) {
      const InstancePair p = pair_from_json(pj);
      const std::string pid = pj.at("id").get<std::string>();
      for (Representation rep : reps) {
        for (Label truth : {Label::Sat, Label::Unsat}) {
          const CnfFormula& f = truth == Label::Sat ? p.sat_formula : p.unsat_formula;
          EvalInstance e = make_eval_instance(pid + (truth == Label::Sat ? "-sat" : "-unsat"), rep, f, truth, pid,
                                              p.source_alpha);
          e.k = p.k;
          instances.push_back(eval_instance_to_json(e));
          ++per_rep[std::string(to_string(rep))];
        }
      }
    }
  }
  write_file(fs::path(a.out_dir) / "instances.json", instances.dump() + "\n");
  run.outputs.push_back("instances.json");
  write_manifest(fs::path(a.out_dir) / "manifest.json", "reduce", run, {{"instances", per_rep}});
  out << "wrote " << instances.size() << " instances to " << a.out_dir << "\n";
}

struct EvalArgs {
  std::string in_dir, out_dir, backend = "scripted:oracle", representation = "all";
  std::string endpoint, model, credential_env, parameters = "{}";
  std::int64_t timeout_ms = 120000;
  unsigned max_retries = 2, concurrency = 4;
  std::string cnf_template, vc_template, packing_template;
  bool force = false, resume = false;
};

std::optional<PromptTemplate> load_template(const std::string& path, Representation rep) {
  if (path.empty()) return std::nullopt;
  PromptTemplate t{rep, read_file(path)};
  t.validate();
  return t;
}

int cmd_eval(const EvalArgs& a, Run run, std::ostream& out) {
  read_manifest(a.in_dir, "reduce");
  Json all = Json::parse(read_file(fs::path(a.in_dir) / "instances.json"), nullptr, false);
  if (all.is_discarded() || !all.is_array()) throw DataError(a.in_dir + "/instances.json is not a JSON array");
  const std::vector<Representation> reps = selected_representations(a.representation);
  std::vector<EvalInstance> instances;
  for (const Json& j : all) {
    EvalInstance e = eval_instance_from_json(j);
    if (std::find(reps.begin(), reps.end(), e.representation) != reps.end()) instances.push_back(std::move(e));
  }

  BackendConfig cfg;
  cfg.endpoint = a.endpoint;
  cfg.model = a.model;
  cfg.timeout = std::chrono::milliseconds(a.timeout_ms);
  cfg.max_retries = a.max_retries;
  cfg.concurrency = a.concurrency;
  cfg.credential_env = a.credential_env;
  cfg.parameters = Json::parse(a.parameters, nullptr, false);
  if (cfg.parameters.is_discarded() || !cfg.parameters.is_object())
    throw CLI::ValidationError("--parameters must be a JSON object");
  std::unique_ptr<Client> client;
  try {
    client = make_client(a.backend, cfg);
  } catch (const std::exception& e) {
    throw BackendFailure(e.what());
  }

  const fs::path records_path = fs::path(a.out_dir) / "records.jsonl";
  if (a.resume) {
    fs::create_directories(a.out_dir);
  } else {
    prepare_out_dir(a.out_dir, a.force);
    if (fs::exists(records_path)) fs::remove(records_path);
  }
  EvaluationOptions opts;
  opts.concurrency = a.concurrency;
  opts.max_retries = a.max_retries;
  opts.records_path = records_path;
  opts.cnf_template = load_template(a.cnf_template, Representation::Cnf);
  opts.vc_template = load_template(a.vc_template, Representation::VertexCover);
  opts.packing_template = load_template(a.packing_template, Representation::Packing);
  const std::vector<EvaluationRecord> records = run_evaluation(instances, *client, opts);
  write_records(records_path, records);

  Json completion = Json::array();
  for (const auto& [key, rate] : completion_rates(records))
    completion.push_back({{"model", key.first}, {"n", key.second}, {"completion_rate", rate}});
  std::size_t failed = 0;
  for (const EvaluationRecord& r : records) failed += !r.error.empty();
  run.inputs.push_back((fs::path(a.in_dir) / "manifest.json").string());
  run.outputs.push_back("records.jsonl");
  write_manifest(fs::path(a.out_dir) / "manifest.json", "eval", run,
                 {{"backend", a.backend},
                  {"model", client->model()},
                  {"records", records.size()},
                  {"backend_errors", failed},
                  {"completion", std::move(completion)}});
  out << "wrote " << records.size() << " records to " << records_path.string() << " (" << failed
      << " backend errors)\n";
  if (!records.empty() && failed == records.size()) {
    out << "every request failed; last error: " << records.back().error << "\n";
    return kBackendError;
  }
  return kSuccess;
}

std::vector<EvaluationRecord> load_eval_records(const std::vector<std::string>& dirs, Run& run) {
  std::vector<EvaluationRecord> all;
  for (const std::string& dir : dirs) {
    read_manifest(dir, "eval");
    auto recs = read_records(fs::path(dir) / "records.jsonl");
    all.insert(all.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    run.inputs.push_back((fs::path(dir) / "manifest.json").string());
  }
  return all;
}

struct ScoreArgs {
  std::vector<std::string> in_dirs;
  std::string out_dir;
  bool by_alpha = false, force = false;
};

void cmd_score(const ScoreArgs& a, Run run, std::ostream& out) {
  const auto records = load_eval_records(a.in_dirs, run);
  prepare_out_dir(a.out_dir, a.force);
  std::ostringstream csv;
  const auto rows = score_table(records, a.by_alpha);
  write_score_csv(csv, rows);
  write_file(fs::path(a.out_dir) / "scores.csv", csv.str());
  run.outputs.push_back("scores.csv");
  write_manifest(fs::path(a.out_dir) / "manifest.json", "score", run, {{"rows", rows.size()}, {"by_alpha", a.by_alpha}});
  out << "wrote " << rows.size() << " score rows to " << (fs::path(a.out_dir) / "scores.csv").string() << "\n";
}

struct ReportArgs {
  std::string figure;
  std::vector<std::string> in_dirs;
  std::string out_dir;
  bool force = false;
};

SolveStatus status_from_string(std::string_view s) {
  for (SolveStatus st : {SolveStatus::Sat, SolveStatus::Unsat, SolveStatus::Unknown})
    if (to_string(st) == s) return st;
  throw DataError("unknown solver status '" + std::string(s) + "'");
}

std::string phase_report(const std::vector<std::string>& dirs, Run& run) {
  PhaseReport report;
  std::map<double, std::vector<SolveResult>> by_alpha;
  for (const std::string& dir : dirs) {
    const Json m = read_manifest(dir, "solve");
    report.k = m.value("k", 3u);
    report.n = m.value("n", Variable{0});
    std::istringstream csv(read_file(fs::path(dir) / "results.csv"));
    std::string line;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::stringstream ls(line);
      for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
      if (cells.size() != 5) throw DataError(dir + "/results.csv: malformed line '" + line + "'");
      SolveResult r;
      r.status = status_from_string(cells[2]);
      r.decisions = std::stoull(cells[3]);
      r.conflicts = std::stoull(cells[4]);
      by_alpha[std::stod(cells[1])].push_back(r);
    }
    run.inputs.push_back((fs::path(dir) / "manifest.json").string());
  }
  for (const auto& [alpha, results] : by_alpha) report.rows.push_back(summarize_phase_point(alpha, results));
  return to_csv(report);
}

std::string score_report(std::vector<EvaluationRecord> records, unsigned k, bool cnf_only, bool by_alpha) {
  std::erase_if(records, [&](const EvaluationRecord& r) {
    return r.k != k || (cnf_only && r.representation != Representation::Cnf);
  });
  std::ostringstream csv;
  write_score_csv(csv, score_table(records, by_alpha));
  return csv.str();
}

std::string agreement_report(const std::vector<EvaluationRecord>& records) {
  std::map<std::string, std::map<Representation, std::vector<EvaluationRecord>>> by_model;
  for (const EvaluationRecord& r : records) by_model[r.model][r.representation].push_back(r);
  std::ostringstream csv;
  csv << "model,representation_a,representation_b,compared,agreement,disagreements,a_correct_share,b_correct_share,"
         "adr_a,adr_b,undefined_reasons\n";
  for (const auto& [model, reps] : by_model) {
    auto cnf = reps.find(Representation::Cnf);
    if (cnf == reps.end()) continue;
    for (Representation other : {Representation::VertexCover, Representation::Packing}) {
      auto it = reps.find(other);
      if (it == reps.end()) continue;
      const AgreementReport rep = cross_representation_agreement(cnf->second, it->second);
      std::string reasons;
      auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
      const bool split = rep.disagreements > 0;
      if (!split) reasons = "a_correct_share:no_disagreements;b_correct_share:no_disagreements";
      csv << model << ",cnf," << to_string(other) << ',' << rep.compared << ',' << format_number(rep.agreement) << ','
          << rep.disagreements << ',' << (split ? format_number(rep.a_correct_share) : "") << ','
          << (split ? format_number(rep.b_correct_share) : "") << ',' << opt(rep.adr_a) << ',' << opt(rep.adr_b)
          << ',' << reasons << '\n';
    }
  }
  return csv.str();
}

void cmd_report(const ReportArgs& a, Run run, std::ostream& out) {
  std::string csv;
  if (a.figure == "phase") {
    csv = phase_report(a.in_dirs, run);
  } else {
    const auto records = load_eval_records(a.in_dirs, run);
    if (a.figure == "metrics") csv = score_report(records, 3, true, true);
    else if (a.figure == "paired") csv = score_report(records, 3, false, false);
    else if (a.figure == "2sat") csv = score_report(records, 2, false, false);
    else csv = agreement_report(records);
  }
  fs::create_directories(a.out_dir);
  const fs::path csv_path = fs::path(a.out_dir) / (a.figure + ".csv");
  const fs::path manifest_path = fs::path(a.out_dir) / (a.figure + ".manifest.json");
  if (fs::exists(csv_path) && !a.force)
    throw DataError(csv_path.string() + " already exists; pass --force to overwrite");
  write_file(csv_path, csv);
  run.outputs.push_back(csv_path.filename().string());
  write_manifest(manifest_path, "report", run, {{"figure", a.figure}});
  out << "wrote " << csv_path.string() << "\n";
}

std::string joined_command(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Paired satisfiability benchmark: generation, pairing, reductions, evaluation and scoring"};
  app.set_version_flag("--version", SATBENCH_VERSION);
  app.set_config("--config", "", "TOML or INI file with defaults for any flag");
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate random k-CNF formulas as DIMACS files");
  g->add_option("--k", gen.k, "Clause width")->check(CLI::IsMember({2u, 3u}))->capture_default_str();
  g->add_option("--n", gen.n, "Number of variables")->required();
  g->add_option("--alpha", gen.alphas, "Clause density; repeat for several densities")->required()->expected(1, -1);
  g->add_option("--count", gen.count, "Formulas per density")->capture_default_str();
  g->add_option("--seed", gen.seed, "Base seed")->capture_default_str();
  g->add_option("--out-dir", gen.out_dir, "Output directory")->required();
  g->add_flag("--force", gen.force, "Write into an existing directory");
  g->add_flag("--unsat-only", gen.unsat_only, "Keep only solver-certified UNSAT draws; --alpha gives the density choices");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve one DIMACS file or every formula of a gen run");
  s->add_option("--file", solve.file, "Single DIMACS file; prints a solver-style answer");
  s->add_option("--in-dir", solve.in_dir, "Output directory of gen");
  s->add_option("--out-dir", solve.out_dir, "Where results.csv goes");
  s->add_option("--solver", solve.solver, "cdcl, 2sat, brute or auto")
      ->check(CLI::IsMember({"auto", "cdcl", "2sat", "brute"}))
      ->capture_default_str();
  s->add_option("--max-conflicts", solve.max_conflicts, "Conflict budget per formula");
  s->add_option("--timeout-ms", solve.timeout_ms, "Wall-clock budget per formula");
  s->add_option("--threads", solve.threads, "Worker threads (0: all cores)")->capture_default_str();
  s->add_flag("--force", solve.force, "Write into an existing directory");

  PairArgs pair;
  auto* p = app.add_subcommand("pair", "Build verified UNSAT/SAT pairs");
  p->add_option("--k", pair.k, "Clause width")->check(CLI::IsMember({2u, 3u}))->capture_default_str();
  p->add_option("--n", pair.n, "Number of variables")->required();
  p->add_option("--count", pair.count, "Number of pairs")->capture_default_str();
  p->add_option("--seed", pair.seed, "Base seed")->capture_default_str();
  p->add_option("--alpha", pair.alphas, "Density choices for the UNSAT draws")->expected(1, -1);
  p->add_option("--out-dir", pair.out_dir, "Output directory")->required();
  p->add_flag("--force", pair.force, "Write into an existing directory");

  ReduceArgs reduce;
  auto* r = app.add_subcommand("reduce", "Render pairs in CNF, vertex cover and packing form");
  r->add_option("--in-dir", reduce.in_dirs, "Output directory of pair (repeatable)")->required()->expected(1, -1);
  r->add_option("--representation,--target", reduce.representation, "cnf, vc, packing or all")
      ->check(CLI::IsMember({"all", "cnf", "vc", "packing"}))
      ->capture_default_str();
  r->add_option("--out-dir", reduce.out_dir, "Output directory")->required();
  r->add_flag("--force", reduce.force, "Write into an existing directory");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Query a backend on reduced instances");
  e->add_option("--in-dir", ev.in_dir, "Output directory of reduce")->required();
  e->add_option("--out-dir", ev.out_dir, "Output directory")->required();
  e->add_option("--backend", ev.backend,
                "scripted:oracle, scripted:always-sat, scripted:always-unsat, scripted:timeout<P> or http")
      ->capture_default_str();
  e->add_option("--representation", ev.representation, "cnf, vc, packing or all")
      ->check(CLI::IsMember({"all", "cnf", "vc", "packing"}))
      ->capture_default_str();
  e->add_option("--endpoint", ev.endpoint, "HTTP endpoint, http(s)://host[:port]/path");
  e->add_option("--model", ev.model, "Model identifier sent to the endpoint");
  e->add_option("--credential-env", ev.credential_env, "Environment variable holding a bearer token");
  e->add_option("--parameters", ev.parameters, "JSON object forwarded as request parameters")->capture_default_str();
  e->add_option("--timeout-ms", ev.timeout_ms, "Per-request timeout")->capture_default_str()->check(CLI::PositiveNumber);
  e->add_option("--max-retries", ev.max_retries, "Retries on transport errors")->capture_default_str();
  e->add_option("--concurrency", ev.concurrency, "Requests in flight")->capture_default_str()->check(CLI::PositiveNumber);
  e->add_option("--cnf-template", ev.cnf_template, "Prompt template file for CNF instances");
  e->add_option("--vc-template", ev.vc_template, "Prompt template file for vertex cover instances");
  e->add_option("--packing-template", ev.packing_template, "Prompt template file for packing instances");
  e->add_flag("--force", ev.force, "Write into an existing directory");
  e->add_flag("--resume", ev.resume, "Continue an interrupted run in --out-dir");

  ScoreArgs sc;
  auto* c = app.add_subcommand("score", "Score evaluation records");
  c->add_option("--in-dir", sc.in_dirs, "Output directory of eval (repeatable)")->required()->expected(1, -1);
  c->add_option("--out-dir", sc.out_dir, "Output directory")->required();
  c->add_flag("--by-alpha", sc.by_alpha, "One row per density bin");
  c->add_flag("--force", sc.force, "Write into an existing directory");

  ReportArgs rep;
  auto* o = app.add_subcommand("report", "Emit plot-ready CSV for one figure");
  o->add_option("--figure", rep.figure, "phase, metrics, paired, 2sat or agreement")
      ->required()
      ->check(CLI::IsMember({"phase", "metrics", "paired", "2sat", "agreement"}));
  o->add_option("--in-dir", rep.in_dirs, "Output directories of solve (phase) or eval (others)")
      ->required()
      ->expected(1, -1);
  o->add_option("--out-dir", rep.out_dir, "Directory for <figure>.csv")->required();
  o->add_flag("--force", rep.force, "Overwrite an existing report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    std::ostringstream o1, o2;
    const int code = app.exit(pe, o1, o2);
    out << o1.str();
    err << o2.str();
    return code == 0 ? kSuccess : kUsage;
  }

  Run run;
  run.command = joined_command(argc, argv);
  for (const CLI::App* sub : app.get_subcommands()) run.config = sub->config_to_str(true, false);
  try {
    if (g->parsed()) {
      run.seed = gen.seed;
      cmd_gen(gen, run, out);
    } else if (s->parsed()) {
      cmd_solve(solve, run, out);
    } else if (p->parsed()) {
      run.seed = pair.seed;
      cmd_pair(pair, run, out);
    } else if (r->parsed()) {
      cmd_reduce(reduce, run, out);
    } else if (e->parsed()) {
      return cmd_eval(ev, run, out);
    } else if (c->parsed()) {
      cmd_score(sc, run, out);
    } else if (o->parsed()) {
      cmd_report(rep, run, out);
    }
  } catch (const CLI::ValidationError& ve) {
    err << "error: " << ve.what() << "\n";
    return kUsage;
  } catch (const BackendFailure& bf) {
    err << "backend error: " << bf.what() << "\n";
    return kBackendError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kDataError;
  }
  return kSuccess;
}

}  // namespace satbench::cli
