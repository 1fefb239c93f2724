#include "satbench/backend.hpp"

#include <cmath>
#include <cstdlib>

#include "httplib.h"

#include "satbench/solver.hpp"

namespace satbench {

void BackendConfig::validate() const {
  if (timeout.count() <= 0) throw DomainError("backend timeout must be positive");
  if (concurrency == 0) throw DomainError("backend concurrency must be positive");
}

std::string_view to_string(Completion::Status s) {
  switch (s) {
    case Completion::Status::Ok: return "ok";
    case Completion::Status::Timeout: return "timeout";
    case Completion::Status::TransportError: return "transport_error";
    case Completion::Status::AuthError: return "auth_error";
    case Completion::Status::HttpError: return "http_error";
  }
  return "ok";
}

Completion OracleClient::complete(const Query& query) {
  const EvalInstance& inst = *query.instance;
  const SolveResult r = solve_cdcl(inst.source);
  if (r.status == SolveStatus::Unknown) return {Completion::Status::TransportError, {}, "oracle solver gave up"};
  const bool sat = r.status == SolveStatus::Sat;
  nlohmann::ordered_json reply;
  switch (inst.representation) {
    case Representation::Cnf: {
      reply["decision"] = sat ? "SATISFIABLE" : "UNSATISFIABLE";
      reply["branches"] = r.decisions;
      reply["conflicts"] = r.conflicts;
      if (sat) {
        nlohmann::ordered_json w = nlohmann::ordered_json::object();
        for (Variable v = 1; v <= inst.source.num_variables(); ++v) w["x" + std::to_string(v)] = r.model->value(v);
        reply["witness"] = std::move(w);
      }
      break;
    }
    case Representation::VertexCover: {
      reply["decision"] = sat ? "YES" : "NO";
      if (sat) {
        const auto& g = std::get<VertexCoverInstance>(inst.reduced);
        nlohmann::ordered_json w = nlohmann::ordered_json::array();
        for (std::size_t v : cover_from_assignment(g, inst.source, *r.model)) w.push_back(g.vertices[v].label());
        reply["witness"] = std::move(w);
      }
      break;
    }
    case Representation::Packing: {
      reply["decision"] = sat ? "YES" : "NO";
      if (sat) {
        const auto& p = std::get<PackingInstance>(inst.reduced);
        PackingWitness pw = packing_from_assignment(p, *r.model);
        nlohmann::ordered_json rods = nlohmann::ordered_json::array();
        for (std::size_t rod : pw.selected_rods) rods.push_back(p.rods[rod].label());
        nlohmann::ordered_json placements = nlohmann::ordered_json::object();
        for (const auto& [tok, place] : pw.token_placement)
          placements[p.tokens[tok].label()] = {{"rod", p.rods[place.rod].label()}, {"slot", place.slot}};
        reply["witness"] = {{"rods", std::move(rods)}, {"placements", std::move(placements)}};
      }
      break;
    }
  }
  return {Completion::Status::Ok, reply.dump(), {}};
}

Completion ConstantClient::complete(const Query& query) {
  const bool cnf = query.instance->representation == Representation::Cnf;
  nlohmann::ordered_json reply;
  reply["decision"] = cnf ? (affirmative_ ? "SATISFIABLE" : "UNSATISFIABLE") : (affirmative_ ? "YES" : "NO");
  return {Completion::Status::Ok, reply.dump(), {}};
}

TimeoutClient::TimeoutClient(std::unique_ptr<Client> inner, double fraction)
    : inner_(std::move(inner)), fraction_(fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw DomainError("timeout fraction must lie in [0, 1]");
}

std::string TimeoutClient::model() const {
  return inner_->model() + "+timeout" + std::to_string(static_cast<int>(std::lround(fraction_ * 100)));
}

Completion TimeoutClient::complete(const Query& query) {
  const auto i = static_cast<double>(query.index);
  if (std::floor((i + 1) * fraction_) > std::floor(i * fraction_))
    return {Completion::Status::Timeout, {}, "scripted timeout"};
  return inner_->complete(query);
}

HttpClient::HttpClient(BackendConfig config) : config_(std::move(config)) {
  config_.validate();
  const std::string& url = config_.endpoint;
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw DomainError("endpoint must look like http(s)://host[:port]/path");
  const std::size_t path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

std::optional<std::string> extract_reply_text(const nlohmann::json& body) {
  if (!body.is_object()) return std::nullopt;
  for (const char* key : {"text", "output_text", "response", "completion"})
    if (body.contains(key) && body.at(key).is_string()) return body.at(key).get<std::string>();
  if (body.contains("choices") && body.at("choices").is_array() && !body.at("choices").empty()) {
    const auto& c = body.at("choices").at(0);
    if (c.contains("message") && c.at("message").contains("content") && c.at("message").at("content").is_string())
      return c.at("message").at("content").get<std::string>();
    if (c.contains("text") && c.at("text").is_string()) return c.at("text").get<std::string>();
  }
  if (body.contains("content") && body.at("content").is_array()) {
    std::string joined;
    for (const auto& part : body.at("content"))
      if (part.is_object() && part.contains("text") && part.at("text").is_string()) joined += part.at("text").get<std::string>();
    if (!joined.empty()) return joined;
  }
  return std::nullopt;
}

Completion HttpClient::complete(const Query& query) {
  httplib::Client cli(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!config_.credential_env.empty()) {
    const char* token = std::getenv(config_.credential_env.c_str());
    if (!token || !*token)
      return {Completion::Status::AuthError, {}, "credential variable " + config_.credential_env + " is not set"};
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  nlohmann::ordered_json body;
  body["model"] = config_.model;
  body["prompt"] = query.prompt;
  body["parameters"] = config_.parameters;

  auto res = cli.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const auto status = err == httplib::Error::Read || err == httplib::Error::Write ||
                                err == httplib::Error::ConnectionTimeout
                            ? Completion::Status::Timeout
                            : Completion::Status::TransportError;
    return {status, {}, httplib::to_string(err)};
  }
  if (res->status == 401 || res->status == 403)
    return {Completion::Status::AuthError, {}, "HTTP " + std::to_string(res->status)};
  if (res->status == 408 || res->status == 429 || res->status >= 500)
    return {Completion::Status::TransportError, {}, "HTTP " + std::to_string(res->status)};
  if (res->status != 200) return {Completion::Status::HttpError, {}, "HTTP " + std::to_string(res->status)};
  nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) return {Completion::Status::HttpError, {}, "response body is not JSON"};
  std::optional<std::string> text = extract_reply_text(reply);
  if (!text) return {Completion::Status::HttpError, {}, "response has no text field"};
  return {Completion::Status::Ok, std::move(*text), {}};
}

std::unique_ptr<Client> make_client(std::string_view name, const BackendConfig& config) {
  if (name == "scripted:oracle") return std::make_unique<OracleClient>();
  if (name == "scripted:always-sat") return std::make_unique<ConstantClient>(true);
  if (name == "scripted:always-unsat") return std::make_unique<ConstantClient>(false);
  constexpr std::string_view timeout_prefix = "scripted:timeout";
  if (name.substr(0, timeout_prefix.size()) == timeout_prefix) {
    const std::string pct(name.substr(timeout_prefix.size()));
    int p = -1;
    try {
      std::size_t used = 0;
      p = std::stoi(pct, &used);
      if (used != pct.size()) p = -1;
    } catch (...) {
    }
    if (p < 0 || p > 100) throw DomainError("scripted:timeout expects a percentage, e.g. scripted:timeout20");
    return std::make_unique<TimeoutClient>(std::make_unique<OracleClient>(), p / 100.0);
  }
  if (name == "http") return std::make_unique<HttpClient>(config);
  throw DomainError("unknown backend '" + std::string(name) + "'");
}

}  // namespace satbench
