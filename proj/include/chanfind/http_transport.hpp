#pragma once

// cpp-httplib transport for RemoteLlmBackend. Kept out of the umbrella header
// so only binaries that talk to a live endpoint pay for httplib.

#include <string>

#include <httplib.h>

#include "chanfind/llm.hpp"

namespace chanfind {

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(int timeout_seconds = 60) : timeout_seconds_(timeout_seconds) {}

  HttpResponse post(const std::string& url, const HttpHeaders& headers, const std::string& body) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw TransportError("endpoint URL needs a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    httplib::Headers h;
    std::string content_type = "application/json";
    for (const auto& [k, v] : headers) {
      if (k == "Content-Type") {
        content_type = v;
      } else {
        h.emplace(k, v);
      }
    }
    auto res = client.Post(path, h, body, content_type);
    if (!res) throw TransportError("request to " + origin + " failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }

 private:
  int timeout_seconds_;
};

}  // namespace chanfind
