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

#include <chrono>
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include "ppba/errors.hpp"
#include "ppba/http_victim.hpp"
#include "ppba/wire.hpp"
#include "support/mock_service.hpp"
#include "support/toy_suite.hpp"

namespace ppba {
namespace {

using testing::MockVictimService;

const TensorShape kShape{3, 4, 4};

VictimError::Kind predict_error_kind(const HttpEndpoint& ep, const ImageTensor& x,
                                     std::string* code = nullptr) {
  try {
    http_predict(ep, x);
  } catch (const VictimError& e) {
    if (code != nullptr) *code = e.code();
    return e.kind();
  }
  ADD_FAILURE() << "http_predict did not fail";
  return VictimError::Kind::kTransport;
}

TEST(Base64, KnownVectors) {
  const std::vector<double> one{1.0};
  EXPECT_EQ(wire::base64_encode(wire::pack_f32le(one)), "AACAPw==");
  const std::string text = "hello!?";
  const std::vector<std::uint8_t> bytes(text.begin(), text.end());
  EXPECT_EQ(wire::base64_encode(bytes), "aGVsbG8hPw==");
  const auto back = wire::base64_decode("aGVsbG8hPw==");
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, bytes);
  EXPECT_EQ(wire::base64_encode({}), "");
}

TEST(Base64, RejectsMalformed) {
  EXPECT_FALSE(wire::base64_decode("abc").has_value());
  EXPECT_FALSE(wire::base64_decode("ab$=").has_value());
  EXPECT_FALSE(wire::base64_decode("a===").has_value());
}

TEST(Wire, F32RoundTripIsSinglePrecision) {
  const std::vector<double> v{0.1, -2.5, 1e-3};
  const auto back = wire::unpack_f32le(wire::pack_f32le(v));
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(back[i], static_cast<double>(static_cast<float>(v[i])));
  }
}

TEST(Wire, RequestLayout) {
  Tensor x(kShape, 0.25);
  const auto doc = nlohmann::json::parse(wire::encode_predict_request(x));
  EXPECT_EQ(doc["shape"], nlohmann::json::array({3, 4, 4}));
  EXPECT_EQ(doc["dtype"], "f32le");
  const auto bytes = wire::base64_decode(doc["data_b64"].get<std::string>());
  ASSERT_TRUE(bytes.has_value());
  EXPECT_EQ(bytes->size(), kShape.size() * 4);
  const auto decoded = wire::decode_predict_request(wire::encode_predict_request(x), kShape);
  ASSERT_TRUE(std::holds_alternative<ImageTensor>(decoded));
  EXPECT_EQ(std::get<ImageTensor>(decoded).values()[5], 0.25);
}

TEST(Wire, RequestErrors) {
  const Tensor x(kShape, 0.5);
  const auto wrong = wire::decode_predict_request(wire::encode_predict_request(x),
                                                  {3, 4, 5});
  EXPECT_EQ(std::get<std::string>(wrong), wire::kBadShape);
  const auto garbage = wire::decode_predict_request(
      R"({"shape":[3,4,4],"dtype":"f32le","data_b64":"***"})", kShape);
  EXPECT_EQ(std::get<std::string>(garbage), wire::kBadPayload);
  const auto short_payload = wire::decode_predict_request(
      R"({"shape":[3,4,4],"dtype":"f32le","data_b64":"AACAPw=="})", kShape);
  EXPECT_EQ(std::get<std::string>(short_payload), wire::kBadPayload);
}

TEST(Wire, ResponseAndInfo) {
  const auto s = wire::decode_predict_response(R"({"scores":[0.5,0.5],"output":"logits"})");
  EXPECT_EQ(s.output, OutputKind::kLogits);
  EXPECT_EQ(s.scores, (std::vector<double>{0.5, 0.5}));
  EXPECT_THROW(wire::decode_predict_response("[1,2]"), VictimError);
  EXPECT_THROW(wire::decode_predict_response(R"({"scores":["a"],"output":"probs"})"),
               VictimError);
  const wire::ServiceInfo info{7, {3, 8, 8}, OutputKind::kProbs};
  const auto back = wire::decode_info(wire::encode_info(info));
  EXPECT_EQ(back.num_classes, 7u);
  EXPECT_EQ(back.input_shape, info.input_shape);
  EXPECT_EQ(wire::decode_error(wire::encode_error("bad_shape")), "bad_shape");
}

TEST(HttpPredict, EchoesScoresBitExactly) {
  MockVictimService service(kShape, {0.7f, 0.2f, 0.1f});
  const HttpEndpoint ep{service.url(), std::chrono::milliseconds(2000)};
  const auto s = http_predict(ep, Tensor(kShape, 0.5));
  ASSERT_EQ(s.scores.size(), 3u);
  EXPECT_EQ(s.scores[0], static_cast<double>(0.7f));
  EXPECT_EQ(s.scores[1], static_cast<double>(0.2f));
  EXPECT_EQ(s.scores[2], static_cast<double>(0.1f));
  EXPECT_EQ(s.output, OutputKind::kProbs);
}

TEST(HttpPredict, BadShapeIsA400WithCode) {
  MockVictimService service(kShape, {0.7f, 0.3f});
  const HttpEndpoint ep{service.url(), std::chrono::milliseconds(2000)};
  std::string code;
  EXPECT_EQ(predict_error_kind(ep, Tensor({3, 4, 5}, 0.5), &code),
            VictimError::Kind::kHttpStatus);
  EXPECT_EQ(code, "bad_shape");
}

TEST(HttpPredict, BadPayloadIsA400WithCode) {
  MockVictimService service(kShape, {0.7f, 0.3f});
  httplib::Client raw(service.url());
  const auto res = raw.Post("/predict",
                            R"({"shape":[3,4,4],"dtype":"f32le","data_b64":"@@@@"})",
                            "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(wire::decode_error(res->body), "bad_payload");

  // The client side of the same rejection.
  service.set_status(400, "bad_payload");
  const HttpEndpoint ep{service.url(), std::chrono::milliseconds(2000)};
  std::string code;
  EXPECT_EQ(predict_error_kind(ep, Tensor(kShape, 0.5), &code),
            VictimError::Kind::kHttpStatus);
  EXPECT_EQ(code, "bad_payload");
}

TEST(HttpPredict, TimeoutIsDistinct) {
  MockVictimService service(kShape, {0.7f, 0.3f});
  service.set_delay_ms(600);
  const HttpEndpoint ep{service.url(), std::chrono::milliseconds(150)};
  EXPECT_EQ(predict_error_kind(ep, Tensor(kShape, 0.5)), VictimError::Kind::kTimeout);
}

TEST(HttpPredict, ServerErrorAndMalformedAndUnreachable) {
  MockVictimService service(kShape, {0.7f, 0.3f});
  const HttpEndpoint ep{service.url(), std::chrono::milliseconds(2000)};
  service.set_status(500);
  EXPECT_EQ(predict_error_kind(ep, Tensor(kShape, 0.5)), VictimError::Kind::kHttpStatus);
  service.set_status(0);
  service.set_raw_reply("not json");
  EXPECT_EQ(predict_error_kind(ep, Tensor(kShape, 0.5)),
            VictimError::Kind::kMalformedResponse);
  service.set_raw_reply(R"({"scores":[0.5,"nan"],"output":"probs"})");
  EXPECT_EQ(predict_error_kind(ep, Tensor(kShape, 0.5)),
            VictimError::Kind::kMalformedResponse);
  service.set_raw_reply(R"({"scores":[-0.5,1.5],"output":"probs"})");
  EXPECT_EQ(predict_error_kind(ep, Tensor(kShape, 0.5)), VictimError::Kind::kInvalidScores);

  const HttpEndpoint closed{"http://127.0.0.1:1", std::chrono::milliseconds(500)};
  EXPECT_EQ(predict_error_kind(closed, Tensor(kShape, 0.5)), VictimError::Kind::kTransport);
}

TEST(HttpVictim, InfoDrivesShapeAndClassCount) {
  MockVictimService service(kShape, {0.1f, 0.2f, 0.3f, 0.4f}, OutputKind::kLogits);
  HttpVictim victim({service.url(), std::chrono::milliseconds(2000)});
  EXPECT_EQ(victim.num_classes(), 4u);
  EXPECT_EQ(victim.input_shape(), kShape);
  EXPECT_EQ(victim.info().output, OutputKind::kLogits);
  EXPECT_EQ(victim.predict(Tensor(kShape, 0.5)).size(), 4u);
  EXPECT_THROW(victim.predict(Tensor({3, 4, 5}, 0.5)), ValidationError);
}

TEST(HttpVictim, ScoreCountMustMatchInfo) {
  MockVictimService service(kShape, {0.5f, 0.5f, 0.0f});
  HttpVictim victim({service.url(), std::chrono::milliseconds(2000)});
  service.set_raw_reply(R"({"scores":[0.5,0.5],"output":"probs"})");
  try {
    victim.predict(Tensor(kShape, 0.5));
    FAIL();
  } catch (const VictimError& e) {
    EXPECT_EQ(e.kind(), VictimError::Kind::kMalformedResponse);
  }
}

TEST(HttpVictim, NoSilentRetries) {
  MockVictimService service(kShape, {0.6f, 0.4f});
  HttpVictim plain({service.url(), std::chrono::milliseconds(150)});
  service.set_delay_ms(400);
  EXPECT_THROW(plain.predict(Tensor(kShape, 0.5)), VictimError);
  EXPECT_EQ(plain.attempts(), 1u);

  service.set_delay_ms(0);
  HttpVictim retrying({service.url(), std::chrono::milliseconds(150)}, 2);
  service.set_delay_ms(400);
  EXPECT_THROW(retrying.predict(Tensor(kShape, 0.5)), VictimError);
  EXPECT_EQ(retrying.attempts(), 3u);

  // Status errors are not transient and are never retried.
  service.set_delay_ms(0);
  service.set_status(500);
  const auto before = retrying.attempts();
  EXPECT_THROW(retrying.predict(Tensor(kShape, 0.5)), VictimError);
  EXPECT_EQ(retrying.attempts(), before + 1);
}

TEST(HttpVictim, EveryEvaluationReachesTheService) {
  MockVictimService service(kShape, {0.6f, 0.4f});
  HttpVictim victim({service.url(), std::chrono::milliseconds(2000)});
  CountingVictim counter(victim);
  for (int i = 0; i < 7; ++i) counter.predict(Tensor(kShape, 0.5));
  EXPECT_EQ(counter.count(), 7u);
  EXPECT_EQ(service.predict_calls(), 7u);
}

}  // namespace
}  // namespace ppba
