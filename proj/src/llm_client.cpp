#include "jssp/llm_client.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "jssp/core.hpp"
#include "jssp/json_io.hpp"

namespace jssp {

void SamplingParams::validate() const {
  if (n < 1) throw Error(ErrorCode::InvalidSpec, "n must be >= 1");
  if (!(temperature > 0)) throw Error(ErrorCode::InvalidSpec, "temperature must be > 0");
  if (top_k < 1) throw Error(ErrorCode::InvalidSpec, "top_k must be >= 1");
  if (!(top_p > 0 && top_p <= 1)) throw Error(ErrorCode::InvalidSpec, "top_p must be in (0, 1]");
}

std::string request_body(const CompletionRequest& request) {
  Json body;
  if (!request.model.empty()) body["model"] = request.model;
  Json messages = Json::array();
  for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  body["messages"] = std::move(messages);
  body["n"] = request.params.n;
  body["temperature"] = request.params.temperature;
  body["top_k"] = request.params.top_k;
  body["top_p"] = request.params.top_p;
  return body.dump();
}

EndpointConfig EndpointConfig::from_file(const std::filesystem::path& path) {
  try {
    const auto j = Json::parse(read_file(path));
    EndpointConfig c;
    c.url = j.at("url").get<std::string>();
    c.model = j.value("model", std::string{});
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.connect_timeout = std::chrono::milliseconds(j.value("connect_timeout_ms", c.connect_timeout.count()));
    c.read_timeout = std::chrono::milliseconds(j.value("read_timeout_ms", c.read_timeout.count()));
    return c;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, "endpoint config " + path.string() + ": " + e.what());
  }
}

HttpTransport::HttpTransport(EndpointConfig config) : config_(std::move(config)) {
  const auto scheme_end = config_.url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::InvalidSpec, "endpoint url needs a scheme");
  const auto path_start = config_.url.find('/', scheme_end + 3);
  scheme_host_port_ = config_.url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : config_.url.substr(path_start);
}

TransportResponse HttpTransport::post(const CompletionRequest&, const std::string& body) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(config_.connect_timeout).count(),
                                static_cast<time_t>((config_.connect_timeout.count() % 1000) * 1000));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(config_.read_timeout).count(), 0);
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  auto res = client.Post(path_, headers, body, "application/json");
  if (!res) throw TransportFailure(httplib::to_string(res.error()));
  return TransportResponse{res->status, res->body};
}

ReplayTransport::ReplayTransport(std::map<std::string, std::vector<std::string>> candidates)
    : candidates_(std::move(candidates)) {}

ReplayTransport ReplayTransport::from_file(const std::filesystem::path& path) {
  std::map<std::string, std::vector<std::string>> data;
  for (const auto& j : read_jsonl(path)) {
    try {
      data[j.at("id").get<std::string>()] = j.at("candidates").get<std::vector<std::string>>();
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::BadRecord, "replay file " + path.string() + ": " + e.what());
    }
  }
  return ReplayTransport(std::move(data));
}

TransportResponse ReplayTransport::post(const CompletionRequest& request, const std::string&) {
  const auto it = candidates_.find(request.id);
  if (it == candidates_.end()) {
    return TransportResponse{404, R"({"error":"no recorded candidates for )" + request.id + "\"}"};
  }
  return TransportResponse{200, completion_response_body(it->second)};
}

std::string completion_response_body(const std::vector<std::string>& candidates) {
  Json choices = Json::array();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    choices.push_back({{"index", i}, {"message", {{"role", "assistant"}, {"content", candidates[i]}}}});
  }
  return Json{{"choices", std::move(choices)}}.dump();
}

namespace {

bool transient_status(int status) { return status == 408 || status == 429 || status >= 500; }

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 300;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

std::vector<std::string> parse_choices(const std::string& body, int expected) {
  std::vector<std::string> out;
  try {
    const auto j = Json::parse(body);
    for (const auto& c : j.at("choices")) {
      if (c.contains("message")) {
        out.push_back(c.at("message").at("content").get<std::string>());
      } else {
        out.push_back(c.at("text").get<std::string>());
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ApiError, std::string("malformed completion response: ") + e.what() + ": " + excerpt(body));
  }
  if (static_cast<int>(out.size()) != expected) {
    throw Error(ErrorCode::ApiError, "expected " + std::to_string(expected) + " candidates, got " +
                                         std::to_string(out.size()));
  }
  return out;
}

}  // namespace

std::vector<std::string> llm_complete(ChatTransport& transport, const CompletionRequest& request,
                                      const RetryPolicy& retry) {
  request.params.validate();
  const std::string body = request_body(request);
  auto backoff = retry.initial_backoff;
  const int attempts = std::max(1, retry.max_attempts);
  std::string last_failure;
  TransportResponse last{};
  bool had_response = false;

  for (int attempt = 1; attempt <= attempts; ++attempt) {
    try {
      last = transport.post(request, body);
      had_response = true;
      if (last.status >= 200 && last.status < 300) return parse_choices(last.body, request.params.n);
      if (!transient_status(last.status)) {
        throw Error(ErrorCode::ApiError, "status " + std::to_string(last.status) + ": " + excerpt(last.body));
      }
      last_failure = "status " + std::to_string(last.status);
    } catch (const TransportFailure& e) {
      had_response = false;
      last_failure = e.what();
    }
    if (attempt < attempts) {
      if (retry.sleep) {
        retry.sleep(backoff);
      } else {
        std::this_thread::sleep_for(backoff);
      }
      backoff = std::min(retry.max_backoff,
                         std::chrono::milliseconds(static_cast<long long>(backoff.count() * retry.multiplier)));
    }
  }
  if (had_response) {
    throw Error(ErrorCode::ApiError, "status " + std::to_string(last.status) + " after " + std::to_string(attempts) +
                                         " attempts: " + excerpt(last.body));
  }
  throw Error(ErrorCode::EndpointUnavailable, "no response after " + std::to_string(attempts) +
                                                  " attempts: " + last_failure);
}

}  // namespace jssp
