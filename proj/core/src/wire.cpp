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

#include "ppba/wire.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>

#include <json.hpp>

#include "ppba/errors.hpp"

namespace ppba::wire {

using nlohmann::json;

namespace {

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

constexpr std::array<std::int8_t, 256> make_reverse() {
  std::array<std::int8_t, 256> table{};
  for (auto& v : table) v = -1;
  for (std::size_t i = 0; i < kAlphabet.size(); ++i) {
    table[static_cast<unsigned char>(kAlphabet[i])] =
        static_cast<std::int8_t>(i);
  }
  return table;
}

constexpr auto kReverse = make_reverse();

[[noreturn]] void malformed(const std::string& what) {
  throw VictimError(VictimError::Kind::kMalformedResponse, what);
}

std::optional<TensorShape> parse_shape(const json& j) {
  if (!j.is_array() || j.size() != 3) return std::nullopt;
  std::array<std::size_t, 3> dims{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_number_integer() || j[i].get<std::int64_t>() <= 0) {
      return std::nullopt;
    }
    dims[i] = j[i].get<std::size_t>();
  }
  return TensorShape{dims[0], dims[1], dims[2]};
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(n >> 18) & 63];
    out += kAlphabet[(n >> 12) & 63];
    out += kAlphabet[(n >> 6) & 63];
    out += kAlphabet[n & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest > 0) {
    std::uint32_t n = bytes[i] << 16;
    if (rest == 2) n |= bytes[i + 1] << 8;
    out += kAlphabet[(n >> 18) & 63];
    out += kAlphabet[(n >> 12) & 63];
    out += rest == 2 ? kAlphabet[(n >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::optional<std::vector<std::uint8_t>> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) return std::nullopt;
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    std::uint32_t n = 0;
    int pad = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      const char ch = text[i + k];
      if (ch == '=') {
        // Padding is only legal in the final two positions of the last group.
        if (!last || k < 2) return std::nullopt;
        ++pad;
        n <<= 6;
        continue;
      }
      if (pad > 0) return std::nullopt;
      const std::int8_t v = kReverse[static_cast<unsigned char>(ch)];
      if (v < 0) return std::nullopt;
      n = (n << 6) | static_cast<std::uint32_t>(v);
    }
    out.push_back(static_cast<std::uint8_t>(n >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(n >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(n));
  }
  return out;
}

std::vector<std::uint8_t> pack_f32le(std::span<const double> values) {
  std::vector<std::uint8_t> out(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(values[i]));
    out[4 * i + 0] = static_cast<std::uint8_t>(bits);
    out[4 * i + 1] = static_cast<std::uint8_t>(bits >> 8);
    out[4 * i + 2] = static_cast<std::uint8_t>(bits >> 16);
    out[4 * i + 3] = static_cast<std::uint8_t>(bits >> 24);
  }
  return out;
}

std::vector<double> unpack_f32le(std::span<const std::uint8_t> bytes) {
  std::vector<double> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t bits = static_cast<std::uint32_t>(bytes[4 * i]) |
                               static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8 |
                               static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16 |
                               static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24;
    out[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  return out;
}

std::string encode_predict_request(const ImageTensor& x) {
  const auto& s = x.shape();
  json doc;
  doc["shape"] = {s.channels, s.height, s.width};
  doc["dtype"] = "f32le";
  doc["data_b64"] = base64_encode(pack_f32le(x.values()));
  return doc.dump();
}

std::variant<ImageTensor, std::string> decode_predict_request(
    std::string_view body, const TensorShape& expected) {
  const json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) return std::string(kBadPayload);
  if (!doc.contains("shape")) return std::string(kBadShape);
  const auto shape = parse_shape(doc["shape"]);
  if (!shape || *shape != expected) return std::string(kBadShape);
  if (!doc.contains("dtype") || doc["dtype"] != "f32le" ||
      !doc.contains("data_b64") || !doc["data_b64"].is_string()) {
    return std::string(kBadPayload);
  }
  const auto bytes = base64_decode(doc["data_b64"].get<std::string>());
  if (!bytes || bytes->size() != shape->size() * 4) {
    return std::string(kBadPayload);
  }
  auto values = unpack_f32le(*bytes);
  if (!all_finite(values)) return std::string(kBadPayload);
  return ImageTensor(*shape, std::move(values));
}

std::string encode_predict_response(const ScoreVector& scores) {
  json doc;
  doc["scores"] = scores.scores;
  doc["output"] = output_kind_name(scores.output);
  return doc.dump();
}

ScoreVector decode_predict_response(std::string_view body) {
  const json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    malformed("predict response is not a JSON object");
  }
  if (!doc.contains("scores") || !doc["scores"].is_array()) {
    malformed("predict response lacks a scores array");
  }
  ScoreVector out;
  for (const json& v : doc["scores"]) {
    if (!v.is_number()) malformed("non-numeric score");
    out.scores.push_back(v.get<double>());
  }
  if (!doc.contains("output") || !doc["output"].is_string()) {
    malformed("predict response lacks output kind");
  }
  const auto kind = doc["output"].get<std::string>();
  if (kind == "probs") {
    out.output = OutputKind::kProbs;
  } else if (kind == "logits") {
    out.output = OutputKind::kLogits;
  } else {
    malformed("unknown output kind '" + kind + "'");
  }
  return out;
}

std::string encode_error(std::string_view code) {
  return json{{"error", code}}.dump();
}

std::optional<std::string> decode_error(std::string_view body) {
  const json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("error") ||
      !doc["error"].is_string()) {
    return std::nullopt;
  }
  return doc["error"].get<std::string>();
}

std::string encode_info(const ServiceInfo& info) {
  json doc;
  doc["num_classes"] = info.num_classes;
  doc["input_shape"] = {info.input_shape.channels, info.input_shape.height,
                        info.input_shape.width};
  doc["output"] = output_kind_name(info.output);
  return doc.dump();
}

ServiceInfo decode_info(std::string_view body) {
  const json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) malformed("info is not JSON");
  ServiceInfo info;
  if (!doc.contains("num_classes") || !doc["num_classes"].is_number_integer() ||
      doc["num_classes"].get<std::int64_t>() < 2) {
    malformed("info lacks a valid num_classes");
  }
  info.num_classes = doc["num_classes"].get<std::size_t>();
  const auto shape =
      doc.contains("input_shape") ? parse_shape(doc["input_shape"]) : std::nullopt;
  if (!shape) malformed("info lacks a valid input_shape");
  info.input_shape = *shape;
  if (!doc.contains("output") || !doc["output"].is_string()) {
    malformed("info lacks output kind");
  }
  const auto kind = doc["output"].get<std::string>();
  if (kind != "probs" && kind != "logits") malformed("unknown output kind");
  info.output = kind == "probs" ? OutputKind::kProbs : OutputKind::kLogits;
  return info;
}

}  // namespace ppba::wire
