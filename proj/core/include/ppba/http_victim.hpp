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

#ifndef PPBA_HTTP_VICTIM_HPP_
#define PPBA_HTTP_VICTIM_HPP_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <string>

#include "ppba/victim.hpp"
#include "ppba/wire.hpp"

namespace ppba {

struct HttpEndpoint {
  // scheme://host:port, e.g. "http://127.0.0.1:8080".
  std::string url;
  std::chrono::milliseconds timeout{10000};
};

// One POST /predict round trip. Scores are returned exactly as the service
// sent them. Failures throw VictimError with kind kTimeout, kTransport,
// kHttpStatus (status() and code() set) or kMalformedResponse.
ScoreVector http_predict(const HttpEndpoint& endpoint, const ImageTensor& x);

// GET /info.
wire::ServiceInfo http_info(const HttpEndpoint& endpoint);

// Remote victim. A failed request is never retried unless `retries` > 0, and
// every attempt (including retries) is counted in attempts().
class HttpVictim final : public Victim {
 public:
  // Fetches /info once to learn K and the input shape.
  explicit HttpVictim(HttpEndpoint endpoint, unsigned retries = 0);

  std::vector<double> predict(const ImageTensor& x) override;
  std::size_t num_classes() const override { return info_.num_classes; }
  TensorShape input_shape() const override { return info_.input_shape; }

  const wire::ServiceInfo& info() const noexcept { return info_; }
  std::uint64_t attempts() const noexcept { return attempts_.load(); }

 private:
  HttpEndpoint endpoint_;
  unsigned retries_;
  wire::ServiceInfo info_;
  std::atomic<std::uint64_t> attempts_{0};
};

}  // namespace ppba

#endif  // PPBA_HTTP_VICTIM_HPP_
