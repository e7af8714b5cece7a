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

#ifndef PPBA_WIRE_HPP_
#define PPBA_WIRE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ppba/tensor.hpp"
#include "ppba/victim.hpp"

// JSON-over-HTTP victim protocol.
//
//   POST /predict  {"shape": [C,H,W], "dtype": "f32le",
//                   "data_b64": "<base64 of row-major CHW f32 little-endian>"}
//     200 -> {"scores": [K numbers], "output": "probs"|"logits"}
//     400 -> {"error": "bad_shape"|"bad_payload"}
//   GET /info -> {"num_classes": K, "input_shape": [C,H,W],
//                 "output": "probs"|"logits"}
namespace ppba::wire {

std::string base64_encode(std::span<const std::uint8_t> bytes);
// nullopt on any character outside the standard alphabet or bad padding.
std::optional<std::vector<std::uint8_t>> base64_decode(std::string_view text);

// Values narrowed to IEEE-754 binary32, little-endian.
std::vector<std::uint8_t> pack_f32le(std::span<const double> values);
std::vector<double> unpack_f32le(std::span<const std::uint8_t> bytes);

std::string encode_predict_request(const ImageTensor& x);

inline constexpr std::string_view kBadShape = "bad_shape";
inline constexpr std::string_view kBadPayload = "bad_payload";

// Server-side decode. Returns the image or one of kBadShape / kBadPayload.
// A shape is bad when it is not three positive extents or differs from
// `expected`; anything else wrong with the body is a bad payload.
std::variant<ImageTensor, std::string> decode_predict_request(
    std::string_view body, const TensorShape& expected);

std::string encode_predict_response(const ScoreVector& scores);
// Throws VictimError(kMalformedResponse).
ScoreVector decode_predict_response(std::string_view body);

std::string encode_error(std::string_view code);
// The "error" field of a 4xx body, if it parses.
std::optional<std::string> decode_error(std::string_view body);

struct ServiceInfo {
  std::size_t num_classes = 0;
  TensorShape input_shape;
  OutputKind output = OutputKind::kProbs;
};

std::string encode_info(const ServiceInfo& info);
// Throws VictimError(kMalformedResponse).
ServiceInfo decode_info(std::string_view body);

}  // namespace ppba::wire

#endif  // PPBA_WIRE_HPP_
