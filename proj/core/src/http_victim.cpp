// Copyright 2026 The PPBA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppba/http_victim.hpp"

#include <httplib.h>

#include "ppba/errors.hpp"

namespace ppba {
namespace {

httplib::Client make_client(const HttpEndpoint& endpoint) {
  httplib::Client client(endpoint.url);
  if (!client.is_valid()) {
    throw ValidationError("invalid endpoint URL '" + endpoint.url + "'");
  }
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      endpoint.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  client.set_keep_alive(false);
  return client;
}

[[noreturn]] void transport_failure(const HttpEndpoint& endpoint,
                                    httplib::Error err,
                                    std::chrono::steady_clock::duration elapsed) {
  // httplib reports an expired read deadline as a plain read error.
  const bool timed_out =
      err == httplib::Error::ConnectionTimeout ||
      (err == httplib::Error::Read && elapsed >= endpoint.timeout);
  throw VictimError(timed_out ? VictimError::Kind::kTimeout
                              : VictimError::Kind::kTransport,
                    endpoint.url + ": " + httplib::to_string(err));
}

void check_status(const HttpEndpoint& endpoint, const httplib::Response& res) {
  if (res.status >= 200 && res.status < 300) return;
  const auto code = wire::decode_error(res.body).value_or("");
  throw VictimError(VictimError::Kind::kHttpStatus,
                    endpoint.url + ": HTTP " + std::to_string(res.status) +
                        (code.empty() ? "" : " (" + code + ")"),
                    res.status, code);
}

}  // namespace

ScoreVector http_predict(const HttpEndpoint& endpoint, const ImageTensor& x) {
  auto client = make_client(endpoint);
  const auto start = std::chrono::steady_clock::now();
  auto res = client.Post("/predict", wire::encode_predict_request(x),
                         "application/json");
  if (!res) {
    transport_failure(endpoint, res.error(),
                      std::chrono::steady_clock::now() - start);
  }
  check_status(endpoint, *res);
  ScoreVector scores = wire::decode_predict_response(res->body);
  validate_scores(scores);
  return scores;
}

wire::ServiceInfo http_info(const HttpEndpoint& endpoint) {
  auto client = make_client(endpoint);
  const auto start = std::chrono::steady_clock::now();
  auto res = client.Get("/info");
  if (!res) {
    transport_failure(endpoint, res.error(),
                      std::chrono::steady_clock::now() - start);
  }
  check_status(endpoint, *res);
  return wire::decode_info(res->body);
}

HttpVictim::HttpVictim(HttpEndpoint endpoint, unsigned retries)
    : endpoint_(std::move(endpoint)), retries_(retries),
      info_(http_info(endpoint_)) {}

std::vector<double> HttpVictim::predict(const ImageTensor& x) {
  if (x.shape() != info_.input_shape) {
    throw ValidationError("image shape " + x.shape().to_string() +
                          " does not match service input " +
                          info_.input_shape.to_string());
  }
  for (unsigned attempt = 0;; ++attempt) {
    attempts_.fetch_add(1);
    try {
      auto scores = http_predict(endpoint_, x).scores;
      if (scores.size() != info_.num_classes) {
        throw VictimError(VictimError::Kind::kMalformedResponse,
                          "service returned " + std::to_string(scores.size()) +
                              " scores, /info advertised " +
                              std::to_string(info_.num_classes));
      }
      return scores;
    } catch (const VictimError& e) {
      const bool transient = e.kind() == VictimError::Kind::kTimeout ||
                             e.kind() == VictimError::Kind::kTransport;
      if (!transient || attempt >= retries_) throw;
    }
  }
}

}  // namespace ppba
