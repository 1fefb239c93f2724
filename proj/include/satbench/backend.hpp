#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "json.hpp"

#include "satbench/prompt.hpp"

namespace satbench {

struct BackendConfig {
  std::string endpoint;  // http(s)://host[:port]/path
  std::string model;
  std::chrono::milliseconds timeout{120000};
  unsigned max_retries = 2;  // transport failures only
  unsigned concurrency = 4;
  std::string credential_env;  // name of the variable holding a bearer token
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();  // forwarded untouched

  /// Throws DomainError for non-positive timeout or concurrency.
  void validate() const;
};

struct Query {
  std::size_t index = 0;  // position in the evaluation batch
  const EvalInstance* instance = nullptr;
  std::string prompt;
};

struct Completion {
  enum class Status { Ok, Timeout, TransportError, AuthError, HttpError };
  Status status = Status::Ok;
  std::string text;
  std::string error;

  /// Timeouts and transport errors may succeed on a second try.
  bool retryable() const { return status == Status::Timeout || status == Status::TransportError; }
};

std::string_view to_string(Completion::Status s);

/// A prediction backend. Implementations must be safe to call from several
/// threads at once.
class Client {
 public:
  virtual ~Client() = default;
  virtual std::string model() const = 0;
  virtual Completion complete(const Query& query) = 0;
};

/// Answers from the solvers, with a witness, in the strict JSON format.
class OracleClient final : public Client {
 public:
  std::string model() const override { return "scripted:oracle"; }
  Completion complete(const Query& query) override;
};

/// Always gives the same answer (SATISFIABLE/YES or UNSATISFIABLE/NO).
class ConstantClient final : public Client {
 public:
  explicit ConstantClient(bool affirmative) : affirmative_(affirmative) {}
  std::string model() const override { return affirmative_ ? "scripted:always-sat" : "scripted:always-unsat"; }
  Completion complete(const Query& query) override;

 private:
  bool affirmative_;
};

/// Wraps another client and times out on an exact `fraction` of query
/// indices: index i fails iff floor((i+1)·f) > floor(i·f).
class TimeoutClient final : public Client {
 public:
  TimeoutClient(std::unique_ptr<Client> inner, double fraction);
  std::string model() const override;
  Completion complete(const Query& query) override;

 private:
  std::unique_ptr<Client> inner_;
  double fraction_;
};

/// POSTs {"model", "prompt", "parameters"} as JSON and reads the reply text
/// from "text", "output_text", OpenAI-style "choices" or Anthropic-style
/// "content" fields.
class HttpClient final : public Client {
 public:
  explicit HttpClient(BackendConfig config);
  std::string model() const override { return config_.model; }
  Completion complete(const Query& query) override;

 private:
  BackendConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

/// Extracts the reply text from a provider response body.
std::optional<std::string> extract_reply_text(const nlohmann::json& body);

/// "scripted:oracle", "scripted:always-sat", "scripted:always-unsat",
/// "scripted:timeout<P>" (oracle with P% timeouts), or "http".
/// Throws DomainError for unknown names.
std::unique_ptr<Client> make_client(std::string_view name, const BackendConfig& config);

}  // namespace satbench
