#include "doctest.h"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"

#include "satbench/evaluation.hpp"
#include "satbench/pairing.hpp"
#include "satbench/scoring.hpp"

using namespace satbench;
namespace fs = std::filesystem;

namespace {

CnfFormula make(Variable n, std::initializer_list<std::initializer_list<int>> clauses) {
  std::vector<Clause> cs;
  for (auto c : clauses) {
    Clause clause;
    for (int l : c) clause.push_back(Literal::from_dimacs(l));
    cs.push_back(clause);
  }
  return CnfFormula(n, cs);
}

std::vector<EvalInstance> pair_instances(const PairSet& set, Representation rep) {
  std::vector<EvalInstance> out;
  for (std::size_t i = 0; i < set.pairs.size(); ++i) {
    const std::string pid = "p" + std::to_string(1000 + i);
    out.push_back(make_eval_instance(pid + "-sat", rep, set.pairs[i].sat_formula, Label::Sat, pid));
    out.push_back(make_eval_instance(pid + "-unsat", rep, set.pairs[i].unsat_formula, Label::Unsat, pid));
  }
  return out;
}

const PairSet& small_pairs() {
  static const PairSet set = build_pair_set(5, 70, kLowAlphaChoices, 8, 3);
  return set;
}

fs::path temp_path(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("satbench-test-" + std::to_string(::getpid()) + "-" + name);
  fs::remove_all(p);
  return p;
}

EvaluationRecord record(std::string id, Label truth, Decision d, std::string model = "m") {
  EvaluationRecord r;
  r.instance_id = std::move(id);
  r.truth = truth;
  r.prediction.decision = d;
  r.model = std::move(model);
  return r;
}

}  // namespace

TEST_CASE("CNF prompt carries the decision vocabulary and the clause text") {
  const EvalInstance e = make_eval_instance("a", Representation::Cnf, make(3, {{1, -2, 3}}), Label::Sat);
  const std::string prompt = build_prompt(e, default_template(Representation::Cnf));
  CHECK(prompt.find("SATISFIABLE or UNSATISFIABLE") != std::string::npos);
  CHECK(prompt.find("(x1 ∨ ¬x2 ∨ x3)") != std::string::npos);
  CHECK(prompt.find("p cnf 3 1\n1 -2 3 0\n") != std::string::npos);
  CHECK(prompt.find("You are a SAT logic solver") != std::string::npos);
  CHECK(prompt.find("3-CNF") != std::string::npos);
}

TEST_CASE("vertex cover and packing prompts ask the decision question") {
  const CnfFormula f = make(3, {{1, -2, 3}});
  const EvalInstance vc = make_eval_instance("a", Representation::VertexCover, f, Label::Sat);
  const std::string p = build_prompt(vc, default_template(Representation::VertexCover));
  CHECK(p.find("cover of size <= k") != std::string::npos);
  CHECK(p.find("If YES, output such a cover") != std::string::npos);
  CHECK(p.find("\"k\":5") != std::string::npos);
  const EvalInstance pk = make_eval_instance("a", Representation::Packing, f, Label::Sat);
  const std::string q = build_prompt(pk, default_template(Representation::Packing));
  CHECK(q.find("Decide whether all tokens can be placed") != std::string::npos);
  CHECK(q.find("\"r1a\"") != std::string::npos);
}

TEST_CASE("prompts are deterministic and contain the instance once") {
  const EvalInstance e = make_eval_instance("a", Representation::Cnf, make(2, {{1, 2}}), Label::Sat);
  const PromptTemplate t = default_template(Representation::Cnf);
  CHECK(build_prompt(e, t) == build_prompt(e, t));
  const std::string body = render_instance(e);
  const std::string prompt = build_prompt(e, t);
  const std::size_t at = prompt.find(body);
  REQUIRE(at != std::string::npos);
  CHECK(prompt.find(body, at + 1) == std::string::npos);
}

TEST_CASE("template errors") {
  const EvalInstance e = make_eval_instance("a", Representation::Cnf, make(2, {{1, 2}}), Label::Sat);
  CHECK_THROWS_AS(build_prompt(e, default_template(Representation::VertexCover)), DomainError);
  CHECK_THROWS_AS(build_prompt(e, {Representation::Cnf, "no placeholder"}), DomainError);
  CHECK_THROWS_AS(build_prompt(e, {Representation::Cnf, "{instance}{instance}"}), DomainError);
  CHECK(build_prompt(e, {Representation::Cnf, "[{instance}]"}) == "[" + render_instance(e) + "]");
}

TEST_CASE("strict JSON responses") {
  const Prediction p = parse_response(R"({"decision":"UNSATISFIABLE","branches":12,"conflicts":3})", Representation::Cnf);
  CHECK(p.decision == Decision::Unsat);
  CHECK(p.branches == 12);
  CHECK(p.conflicts == 3);
  CHECK_FALSE(p.witness.has_value());
}

TEST_CASE("keyword fallback with an assignment scan") {
  const Prediction p = parse_response("Working... the formula is SATISFIABLE. x1=True x2=False", Representation::Cnf);
  CHECK(p.decision == Decision::Sat);
  CHECK_FALSE(p.branches.has_value());
  CHECK_FALSE(p.conflicts.has_value());
  REQUIRE(p.witness.has_value());
  const auto& a = std::get<AssignmentWitness>(*p.witness);
  CHECK(a.at(1));
  CHECK_FALSE(a.at(2));
}

TEST_CASE("unparseable responses abstain and keep the text") {
  const Prediction p = parse_response("I cannot determine this.", Representation::Cnf);
  CHECK(p.decision == Decision::Abstain);
  CHECK(p.raw_text == "I cannot determine this.");
}

TEST_CASE("keyword scanning uses whole words and the last occurrence") {
  CHECK(parse_response("SATISFIABLE? No, it is UNSATISFIABLE", Representation::Cnf).decision == Decision::Unsat);
  CHECK(parse_response("UNSATISFIABLE at first, then SATISFIABLE", Representation::Cnf).decision == Decision::Sat);
  CHECK(parse_response("NOTHING to see", Representation::VertexCover).decision == Decision::Abstain);
  CHECK(parse_response("YES, and then NO", Representation::VertexCover).decision == Decision::No);
  CHECK(parse_response("{\"decision\": \"YES\", \"witness\": [\"x1\"]}", Representation::VertexCover).decision ==
        Decision::Yes);
}

TEST_CASE("witnesses accompany affirmative decisions only") {
  const Prediction p = parse_response(R"({"decision":"UNSATISFIABLE","witness":{"x1":true}})", Representation::Cnf);
  CHECK(p.decision == Decision::Unsat);
  CHECK_FALSE(p.witness.has_value());
}

TEST_CASE("parse_response never throws") {
  for (std::string s : {"", "{", "{\"decision\":}", "{\"decision\":\"SAT\",\"witness\":{\"x99999999999\":true}}",
                        "x0=True SATISFIABLE", "}{}{", "\"\\", "{\"decision\":\"YES\",\"witness\":{\"placements\":7}}"}) {
    for (Representation rep : {Representation::Cnf, Representation::VertexCover, Representation::Packing})
      CHECK_NOTHROW(parse_response(s, rep));
  }
}

TEST_CASE("witness validation") {
  const CnfFormula f = make(2, {{1, -2}, {2}});
  const EvalInstance e = make_eval_instance("a", Representation::Cnf, f, Label::Sat);
  EvaluationRecord good;
  good.prediction = parse_response(R"({"decision":"SATISFIABLE","witness":{"x1":true,"x2":true}})", Representation::Cnf);
  CHECK(validate_witness(good, e));
  CHECK(good.witness_valid == true);

  EvaluationRecord bad;
  bad.prediction = parse_response(R"({"decision":"SATISFIABLE","witness":{"x1":false,"x2":true}})", Representation::Cnf);
  CHECK_FALSE(validate_witness(bad, e));
  CHECK(bad.witness_valid == false);
  CHECK_FALSE(bad.witness_reason.empty());

  EvaluationRecord unknown;
  unknown.prediction = parse_response(R"({"decision":"SATISFIABLE","witness":{"x1":true,"x2":true,"x7":true}})",
                                      Representation::Cnf);
  CHECK_FALSE(validate_witness(unknown, e));
  CHECK(unknown.witness_reason.find("x7") != std::string::npos);

  EvaluationRecord none;
  CHECK_THROWS_AS(validate_witness(none, e), DomainError);
}

TEST_CASE("cover witnesses above budget are rejected") {
  const CnfFormula f = make(3, {{1, 2, 3}});
  const EvalInstance e = make_eval_instance("a", Representation::VertexCover, f, Label::Sat);
  const auto& g = std::get<VertexCoverInstance>(e.reduced);
  std::vector<std::string> labels;
  for (const VcVertex& v : g.vertices) labels.push_back(v.label());
  labels.resize(g.k + 2);
  const WitnessCheck c = check_witness(CoverWitness{labels}, e);
  CHECK_FALSE(c.valid);
  CHECK(c.reason.find("budget") != std::string::npos);
  CHECK_FALSE(check_witness(CoverWitness{{"x1", "zz"}}, e).valid);
  CHECK(check_witness(CoverWitness{{"x1", "~x2", "~x3", "c1.1", "c1.2"}}, e).valid);
}

TEST_CASE("packing witnesses from the oracle client validate") {
  const CnfFormula f = make(3, {{1, 2, 3}, {-1, 2, -3}});
  const EvalInstance e = make_eval_instance("a", Representation::Packing, f, Label::Sat);
  OracleClient oracle;
  const Completion c = oracle.complete({0, &e, build_prompt(e, default_template(Representation::Packing))});
  REQUIRE(c.status == Completion::Status::Ok);
  EvaluationRecord r;
  r.prediction = parse_response(c.text, Representation::Packing);
  CHECK(r.prediction.decision == Decision::Yes);
  CHECK(validate_witness(r, e));
  const WitnessCheck bad = check_witness(PackingWitnessText{{"r1a", "r1b", "r2a", "r3a"}, {}}, e);
  CHECK_FALSE(bad.valid);
}

TEST_CASE("oracle client end to end on all representations") {
  for (Representation rep : {Representation::Cnf, Representation::VertexCover, Representation::Packing}) {
    OracleClient oracle;
    const auto records = run_evaluation(pair_instances(small_pairs(), rep), oracle);
    REQUIRE(records.size() == 140);
    const PairedOutcomeCounts pc = paired_counts(records);
    CHECK(pc.pairs() == 70);
    CHECK(adr(pc) == 1.0);
    for (const EvaluationRecord& r : records) {
      if (r.truth == Label::Sat) CHECK(r.witness_valid == true);
      else CHECK_FALSE(r.witness_valid.has_value());
    }
  }
}

TEST_CASE("always-SAT client reproduces the degenerate profile") {
  ConstantClient always(true);
  const auto records = run_evaluation(pair_instances(small_pairs(), Representation::Cnf), always);
  const PairedOutcomeCounts pc = paired_counts(records);
  CHECK(adr(pc) == 0.0);
  CHECK(pc.accuracy() == Rational(1, 2));
  CHECK(pc.r_sat() == Rational(1));
  CHECK(pc.r_unsat() == Rational(0));
  const auto rows = score_table(records, false);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].mcc.defined());
  CHECK(rows[0].accuracy.value() == 0.5);
}

TEST_CASE("scripted timeouts give the requested completion rate") {
  TimeoutClient flaky(std::make_unique<OracleClient>(), 0.2);
  EvaluationOptions opts;
  opts.max_retries = 0;
  const auto records = run_evaluation(pair_instances(small_pairs(), Representation::Cnf), flaky, opts);
  const auto rates = completion_rates(records);
  REQUIRE(rates.size() == 1);
  CHECK(rates.begin()->second == doctest::Approx(0.8));
  std::size_t errors = 0;
  for (const EvaluationRecord& r : records) errors += !r.error.empty();
  CHECK(errors == 28);
  CHECK_THROWS_AS(TimeoutClient(std::make_unique<OracleClient>(), 1.5), DomainError);
}

TEST_CASE("records persist incrementally and resume") {
  const fs::path path = temp_path("records.jsonl");
  auto instances = pair_instances(small_pairs(), Representation::Cnf);
  instances.resize(20);
  OracleClient oracle;
  EvaluationOptions opts;
  opts.records_path = path;
  const auto first = run_evaluation(instances, oracle, opts);
  CHECK(read_records(path).size() == 20);

  // keep 7 complete records plus a truncated line, as after a crash
  std::ifstream in(path);
  std::string kept, line;
  for (int i = 0; i < 7 && std::getline(in, line); ++i) kept += line + "\n";
  in.close();
  std::ofstream(path, std::ios::trunc) << kept << "{\"instance_id\":\"p10";

  struct Counting final : Client {
    std::atomic<int> calls{0};
    OracleClient inner;
    std::string model() const override { return inner.model(); }
    Completion complete(const Query& q) override {
      ++calls;
      return inner.complete(q);
    }
  } counting;
  const auto resumed = run_evaluation(instances, counting, opts);
  CHECK(counting.calls == 13);
  REQUIRE(resumed.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(resumed[i].instance_id == first[i].instance_id);
    CHECK(resumed[i].prediction.decision == first[i].prediction.decision);
  }
  CHECK(read_records(path).size() == 20);
  fs::remove(path);
}

TEST_CASE("records are sorted by id regardless of completion order") {
  auto instances = pair_instances(small_pairs(), Representation::Cnf);
  std::reverse(instances.begin(), instances.end());
  OracleClient oracle;
  EvaluationOptions opts;
  opts.concurrency = 8;
  const auto records = run_evaluation(instances, oracle, opts);
  CHECK(std::is_sorted(records.begin(), records.end(),
                       [](const auto& a, const auto& b) { return a.instance_id < b.instance_id; }));
}

TEST_CASE("record JSON round trip") {
  const CnfFormula f = make(3, {{1, 2, 3}});
  for (Representation rep : {Representation::Cnf, Representation::VertexCover, Representation::Packing}) {
    const EvalInstance e = make_eval_instance("id-1", rep, f, Label::Sat, "pair-1", 4.0);
    OracleClient oracle;
    auto recs = run_evaluation({e}, oracle);
    const EvaluationRecord back = record_from_json(nlohmann::json::parse(record_to_json(recs[0]).dump()));
    CHECK(back.instance_id == "id-1");
    CHECK(back.pair_id == "pair-1");
    CHECK(back.representation == rep);
    CHECK(back.prediction.decision == recs[0].prediction.decision);
    CHECK(back.witness_valid == true);
    REQUIRE(back.prediction.witness.has_value());
    CHECK(check_witness(*back.prediction.witness, e).valid);
  }
}

TEST_CASE("agreement on 8 of 10 with a 3 to 1 split") {
  std::vector<EvaluationRecord> a, b;
  for (int i = 0; i < 10; ++i) {
    const std::string id = "i" + std::to_string(i);
    a.push_back(record(id, Label::Sat, Decision::Sat));
    b.push_back(record(id, Label::Sat, i < 8 ? Decision::Yes : Decision::No));
  }
  AgreementReport r = cross_representation_agreement(a, b);
  CHECK(r.compared == 10);
  CHECK(r.agreement == doctest::Approx(0.8));

  std::vector<EvaluationRecord> c, d;
  for (int i = 0; i < 4; ++i) {
    const std::string id = "j" + std::to_string(i);
    c.push_back(record(id, Label::Sat, i < 3 ? Decision::Sat : Decision::Unsat));
    d.push_back(record(id, Label::Sat, i < 3 ? Decision::No : Decision::Yes));
  }
  r = cross_representation_agreement(c, d);
  CHECK(r.disagreements == 4);
  CHECK(r.a_correct_share == doctest::Approx(0.75));
  CHECK(r.b_correct_share == doctest::Approx(0.25));
}

TEST_CASE("agreement requires matching ids") {
  std::vector<EvaluationRecord> a = {record("x", Label::Sat, Decision::Sat)};
  std::vector<EvaluationRecord> b = {record("y", Label::Sat, Decision::Yes)};
  try {
    cross_representation_agreement(a, b);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("x") != std::string::npos);
    CHECK(std::string(e.what()).find("y") != std::string::npos);
  }
}

TEST_CASE("oracle agreement across representations") {
  OracleClient oracle;
  const auto cnf = run_evaluation(pair_instances(small_pairs(), Representation::Cnf), oracle);
  const auto vc = run_evaluation(pair_instances(small_pairs(), Representation::VertexCover), oracle);
  const AgreementReport r = cross_representation_agreement(cnf, vc);
  CHECK(r.agreement == 1.0);
  CHECK(r.adr_a == 1.0);
  CHECK(r.adr_b == 1.0);
}

TEST_CASE("score CSV renders undefined metrics as blanks with reasons") {
  std::vector<EvaluationRecord> recs;
  for (int i = 0; i < 4; ++i) {
    auto r = record("s" + std::to_string(i), Label::Sat, Decision::Sat);
    r.n = 10;
    recs.push_back(r);
  }
  std::ostringstream out;
  write_score_csv(out, score_table(recs, true));
  std::string header, row;
  std::istringstream in(out.str());
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == score_csv_header());
  CHECK(row.find("m,cnf,10,0.00,4,1,1,1,1,1,,,,,0,,,,,,,") == 0);
  CHECK(row.find("recall_unsat:no_actual_positives") != std::string::npos);
  CHECK(row.find("mcc:no_actual_negatives") != std::string::npos);
  CHECK(row.find("adr:empty_input") != std::string::npos);
}

TEST_CASE("backend configuration and client factory") {
  BackendConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.timeout = std::chrono::milliseconds(0);
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  CHECK(make_client("scripted:oracle", {})->model() == "scripted:oracle");
  CHECK(make_client("scripted:timeout20", {})->model() == "scripted:oracle+timeout20");
  CHECK_THROWS_AS(make_client("scripted:timeout", {}), DomainError);
  CHECK_THROWS_AS(make_client("nope", {}), DomainError);
  BackendConfig http;
  http.endpoint = "no-scheme";
  CHECK_THROWS_AS(make_client("http", http), DomainError);
}

TEST_CASE("reply text extraction covers common provider shapes") {
  using nlohmann::json;
  CHECK(extract_reply_text(json{{"text", "a"}}) == "a");
  CHECK(extract_reply_text(json::parse(R"({"choices":[{"message":{"content":"b"}}]})")) == "b");
  CHECK(extract_reply_text(json::parse(R"({"content":[{"type":"text","text":"c"},{"text":"d"}]})")) == "cd");
  CHECK_FALSE(extract_reply_text(json{{"other", 1}}).has_value());
}

TEST_CASE("HTTP client talks to a local server") {
  httplib::Server server;
  std::atomic<int> hits{0};
  std::string seen_auth, seen_model;
  server.Post("/v1/complete", [&](const httplib::Request& req, httplib::Response& res) {
    const int n = ++hits;
    seen_auth = req.get_header_value("Authorization");
    const auto body = nlohmann::json::parse(req.body);
    seen_model = body.at("model").get<std::string>();
    if (body.at("prompt").get<std::string>().find("FLAKY") != std::string::npos && n % 2 == 1) {
      res.status = 503;
      return;
    }
    res.set_content(R"({"choices":[{"message":{"content":"{\"decision\":\"UNSATISFIABLE\"}"}}]})", "application/json");
  });
  server.Post("/denied", [](const httplib::Request&, httplib::Response& res) { res.status = 401; });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  ::setenv("SATBENCH_TEST_TOKEN", "secret", 1);
  BackendConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/complete";
  cfg.model = "local-model";
  cfg.credential_env = "SATBENCH_TEST_TOKEN";
  cfg.timeout = std::chrono::milliseconds(5000);
  HttpClient client(cfg);

  const EvalInstance e = make_eval_instance("h1", Representation::Cnf, make(1, {{1}, {-1}}), Label::Unsat);
  const Completion c = client.complete({0, &e, "hello"});
  CHECK(c.status == Completion::Status::Ok);
  CHECK(parse_response(c.text, Representation::Cnf).decision == Decision::Unsat);
  CHECK(seen_auth == "Bearer secret");
  CHECK(seen_model == "local-model");

  // a 503 is retried and the second attempt succeeds
  EvaluationOptions opts;
  opts.cnf_template = PromptTemplate{Representation::Cnf, "FLAKY {instance}"};
  hits = 0;
  const auto recs = run_evaluation({e}, client, opts);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].attempts == 2);
  CHECK(recs[0].prediction.decision == Decision::Unsat);

  BackendConfig denied = cfg;
  denied.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/denied";
  HttpClient denied_client(denied);
  const auto failed = run_evaluation({e}, denied_client);
  CHECK(failed[0].prediction.decision == Decision::Abstain);
  CHECK(failed[0].attempts == 1);
  CHECK(failed[0].error.find("auth") != std::string::npos);

  BackendConfig missing = cfg;
  missing.credential_env = "SATBENCH_TEST_TOKEN_UNSET";
  ::unsetenv("SATBENCH_TEST_TOKEN_UNSET");
  CHECK(HttpClient(missing).complete({0, &e, "x"}).status == Completion::Status::AuthError);

  server.stop();
  t.join();

  BackendConfig dead = cfg;
  dead.timeout = std::chrono::milliseconds(300);
  const auto down = run_evaluation({e}, *std::make_unique<HttpClient>(dead));
  CHECK(down[0].prediction.decision == Decision::Abstain);
  CHECK(down[0].attempts == 3);
}
