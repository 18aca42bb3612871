#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace jssp {

struct SamplingParams {
  int n = 10;
  double temperature = 1.0;
  int top_k = 50;
  double top_p = 0.95;

  /// Throws InvalidSpec unless n >= 1, temperature > 0, top_k >= 1, 0 < top_p <= 1.
  void validate() const;
};

struct ChatMessage {
  std::string role;
  std::string content;
};

struct CompletionRequest {
  /// Instance id; replay transports key on it, HTTP ignores it.
  std::string id;
  std::string model;
  std::vector<ChatMessage> messages;
  SamplingParams params;
};

/// JSON body: {"model"?, "messages": [{role, content}], "n", "temperature", "top_k", "top_p"}.
std::string request_body(const CompletionRequest& request);

struct TransportResponse {
  int status = 0;
  std::string body;
};

/// Connection-level failure (refused, reset, timed out). Always retried.
class TransportFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual TransportResponse post(const CompletionRequest& request, const std::string& body) = 0;
};

struct EndpointConfig {
  /// e.g. "http://localhost:8000/v1/chat/completions".
  std::string url;
  std::string model;
  /// Name of the environment variable holding the bearer token.
  std::string api_key_env = "JSSP_LLM_API_KEY";
  std::chrono::milliseconds connect_timeout{5000};
  std::chrono::milliseconds read_timeout{300000};

  /// Reads {"url", "model", "api_key_env", "connect_timeout_ms", "read_timeout_ms"}.
  static EndpointConfig from_file(const std::filesystem::path& path);
};

class HttpTransport : public ChatTransport {
 public:
  explicit HttpTransport(EndpointConfig config);
  TransportResponse post(const CompletionRequest& request, const std::string& body) override;

 private:
  EndpointConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

/// Serves recorded candidates: JSONL lines {"id": ..., "candidates": [...]}.
/// Unknown ids answer 404.
class ReplayTransport : public ChatTransport {
 public:
  explicit ReplayTransport(std::map<std::string, std::vector<std::string>> candidates);
  static ReplayTransport from_file(const std::filesystem::path& path);
  TransportResponse post(const CompletionRequest& request, const std::string& body) override;

 private:
  std::map<std::string, std::vector<std::string>> candidates_;
};

class FunctionTransport : public ChatTransport {
 public:
  using Handler = std::function<TransportResponse(const CompletionRequest&, const std::string&)>;
  explicit FunctionTransport(Handler handler) : handler_(std::move(handler)) {}
  TransportResponse post(const CompletionRequest& request, const std::string& body) override {
    return handler_(request, body);
  }

 private:
  Handler handler_;
};

/// A 200 response body with one choice per candidate.
std::string completion_response_body(const std::vector<std::string>& candidates);

struct RetryPolicy {
  /// Total attempts, first one included.
  int max_attempts = 4;
  std::chrono::milliseconds initial_backoff{250};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{8000};
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// Sends the request, retrying connection failures and 408/429/5xx answers
/// with exponential backoff. Other statuses fail at once with ApiError.
/// Returns exactly params.n texts or throws ApiError; exhausted connection
/// retries throw EndpointUnavailable.
std::vector<std::string> llm_complete(ChatTransport& transport, const CompletionRequest& request,
                                      const RetryPolicy& retry = {});

}  // namespace jssp
