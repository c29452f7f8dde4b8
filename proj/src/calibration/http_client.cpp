#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "logicforge/calibration/calibration.h"

namespace logicforge::calibration {
namespace {

constexpr double kBaseDelay = 0.5;
constexpr double kMaxDelay = 30.0;

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // without trailing slash
};

Url split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ParamError("endpoint base_url needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  Url out{url.substr(0, path_start), path_start == std::string::npos ? "" : url.substr(path_start)};
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

double jittered(double delay) {
  thread_local std::mt19937_64 engine{std::random_device{}()};
  return std::uniform_real_distribution<double>(0.0, delay)(engine);
}

}  // namespace

HttpChatClient::HttpChatClient(EndpointConfig config) : config_(std::move(config)) {
  split_url(config_.base_url);
}

double HttpChatClient::backoff_seconds(int retry) {
  return std::min(kMaxDelay, kBaseDelay * std::pow(2.0, retry));
}

ChatResult HttpChatClient::complete(const ChatRequest& request) {
  Url url = split_url(config_.base_url);
  httplib::Client client(url.origin);
  client.set_connection_timeout(std::min(config_.request_timeout_s, 30), 0);
  client.set_read_timeout(config_.request_timeout_s, 0);
  client.set_write_timeout(config_.request_timeout_s, 0);

  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }
  Json body = {{"model", config_.model_name},
               {"messages", Json::array({Json{{"role", "user"}, {"content", request.prompt}}})},
               {"temperature", config_.temperature.to_double()},
               {"max_tokens", config_.max_tokens}};
  std::string payload = body.dump();
  std::string path = url.path + "/chat/completions";

  for (int attempt = 0;; ++attempt) {
    bool timed_out = false;
    std::string failure;
    auto res = client.Post(path, headers, payload, "application/json");
    if (res) {
      if (res->status == 200) {
        Json reply = Json::parse(res->body, nullptr, false);
        if (reply.is_discarded()) return ChatResult{"", false};
        try {
          const Json& content = reply.at("choices").at(0).at("message").at("content");
          return ChatResult{content.is_string() ? content.get<std::string>() : "", false};
        } catch (const Json::exception&) {
          return ChatResult{"", false};
        }
      }
      failure = "HTTP " + std::to_string(res->status);
      if (res->status != 429 && res->status < 500) {
        throw TransportError(config_.model_name + ": request rejected with " + failure);
      }
    } else {
      auto err = res.error();
      timed_out = err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout;
      failure = httplib::to_string(err);
    }
    if (attempt >= config_.max_retries) {
      if (timed_out) return ChatResult{"", true};
      throw TransportError(config_.model_name + ": giving up after " + std::to_string(attempt + 1) +
                           " tries (" + failure + ")");
    }
    std::this_thread::sleep_for(std::chrono::duration<double>(jittered(backoff_seconds(attempt))));
  }
}

}  // namespace logicforge::calibration
