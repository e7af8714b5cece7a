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

#include "ppba/toy_victim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ppba/errors.hpp"
#include "ppba/losses.hpp"
#include "ppba/rng.hpp"

namespace ppba {

using nlohmann::json;

ToyKind parse_toy_kind(std::string_view name) {
  if (name == "linear_softmax") return ToyKind::kLinearSoftmax;
  if (name == "mlp1") return ToyKind::kMlp1;
  throw ValidationError("unknown toy victim kind '" + std::string(name) + "'");
}

std::string_view toy_kind_name(ToyKind kind) {
  return kind == ToyKind::kLinearSoftmax ? "linear_softmax" : "mlp1";
}

void ToyVictimSpec::validate() const {
  input_shape.validate();
  if (num_classes < 2) throw ValidationError("toy victim needs K >= 2");
  const std::size_t d = input_shape.size();
  const std::size_t layers = kind == ToyKind::kLinearSoftmax ? 1 : 2;
  if (weights.size() != layers || bias.size() != layers) {
    throw ValidationError("toy victim " + std::string(toy_kind_name(kind)) +
                          " needs " + std::to_string(layers) + " layers");
  }
  std::size_t fan_in = d;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t out =
        l + 1 == layers ? num_classes : hidden_units;
    const Matrix& w = weights[l];
    if (w.rows != out || w.cols != fan_in || w.values.size() != out * fan_in ||
        bias[l].size() != out) {
      throw ValidationError("toy victim layer " + std::to_string(l) +
                            " has inconsistent shape");
    }
    fan_in = out;
  }
  if (kind == ToyKind::kMlp1 && hidden_units == 0) {
    throw ValidationError("mlp1 needs hidden_units > 0");
  }
}

namespace {

std::vector<double> affine(const Matrix& w, const std::vector<double>& b,
                           std::span<const double> x) {
  std::vector<double> out(w.rows);
  for (std::size_t r = 0; r < w.rows; ++r) {
    const double* row = w.values.data() + r * w.cols;
    double acc = b[r];
    for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
  return out;
}

// out += W^T g
void accumulate_transpose(const Matrix& w, std::span<const double> g,
                          std::span<double> out) {
  for (std::size_t r = 0; r < w.rows; ++r) {
    if (g[r] == 0.0) continue;
    const double* row = w.values.data() + r * w.cols;
    for (std::size_t c = 0; c < w.cols; ++c) out[c] += g[r] * row[c];
  }
}

std::vector<double> softmax(std::vector<double> z) {
  const double peak = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return z;
}

void check_input(const ToyVictimSpec& spec, const ImageTensor& x) {
  if (x.shape() != spec.input_shape) {
    throw ValidationError("toy victim expects input " +
                          spec.input_shape.to_string() + ", got " +
                          x.shape().to_string());
  }
}

}  // namespace

std::vector<double> toy_logits(const ToyVictimSpec& spec, const ImageTensor& x) {
  check_input(spec, x);
  if (spec.kind == ToyKind::kLinearSoftmax) {
    return affine(spec.weights[0], spec.bias[0], x.values());
  }
  auto hidden = affine(spec.weights[0], spec.bias[0], x.values());
  for (double& h : hidden) h = std::tanh(h);
  return affine(spec.weights[1], spec.bias[1], hidden);
}

std::vector<double> toy_predict(const ToyVictimSpec& spec, const ImageTensor& x) {
  return softmax(toy_logits(spec, x));
}

Tensor toy_gradient(const ToyVictimSpec& spec, const ImageTensor& x,
                    std::size_t t) {
  check_input(spec, x);
  std::vector<double> hidden;
  std::vector<double> logits;
  if (spec.kind == ToyKind::kLinearSoftmax) {
    logits = affine(spec.weights[0], spec.bias[0], x.values());
  } else {
    hidden = affine(spec.weights[0], spec.bias[0], x.values());
    for (double& h : hidden) h = std::tanh(h);
    logits = affine(spec.weights[1], spec.bias[1], hidden);
  }
  const auto p = softmax(logits);

  Tensor grad(x.shape());
  if (cw_loss(p, t) <= 0.0) return grad;

  std::size_t rival = t == 0 ? 1 : 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k != t && p[k] > p[rival]) rival = k;
  }
  // d(p_t - p_rival)/d logit_l via the softmax Jacobian p_k (delta_kl - p_l).
  std::vector<double> g(p.size());
  for (std::size_t l = 0; l < p.size(); ++l) {
    g[l] = p[t] * ((l == t ? 1.0 : 0.0) - p[l]) -
           p[rival] * ((l == rival ? 1.0 : 0.0) - p[l]);
  }

  if (spec.kind == ToyKind::kLinearSoftmax) {
    accumulate_transpose(spec.weights[0], g, grad.values());
    return grad;
  }
  std::vector<double> g_hidden(hidden.size(), 0.0);
  accumulate_transpose(spec.weights[1], g, g_hidden);
  for (std::size_t h = 0; h < hidden.size(); ++h) {
    g_hidden[h] *= 1.0 - hidden[h] * hidden[h];
  }
  accumulate_transpose(spec.weights[0], g_hidden, grad.values());
  return grad;
}

namespace {

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix w{rows, cols, std::vector<double>(rows * cols)};
  const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
  for (double& v : w.values) v = scale * rng.normal();
  return w;
}

}  // namespace

ToyVictimSpec generate_toy_victim(std::uint64_t seed, ToyKind kind,
                                  const TensorShape& input_shape,
                                  std::size_t num_classes,
                                  std::size_t hidden_units) {
  input_shape.validate();
  if (num_classes < 2) throw ValidationError("toy victim needs K >= 2");
  Rng rng(seed);
  ToyVictimSpec spec;
  spec.kind = kind;
  spec.input_shape = input_shape;
  spec.num_classes = num_classes;
  const std::size_t d = input_shape.size();
  if (kind == ToyKind::kLinearSoftmax) {
    spec.weights.push_back(gaussian_matrix(num_classes, d, rng));
    spec.bias.emplace_back(num_classes, 0.0);
  } else {
    if (hidden_units == 0) {
      throw ValidationError("mlp1 needs hidden_units > 0");
    }
    spec.hidden_units = hidden_units;
    spec.weights.push_back(gaussian_matrix(hidden_units, d, rng));
    spec.weights.push_back(
        gaussian_matrix(num_classes, hidden_units, rng));
    spec.bias.emplace_back(hidden_units, 0.0);
    spec.bias.emplace_back(num_classes, 0.0);
  }
  return spec;
}

std::string toy_victim_to_json(const ToyVictimSpec& spec) {
  spec.validate();
  json doc;
  doc["kind"] = toy_kind_name(spec.kind);
  doc["input_shape"] = {spec.input_shape.channels, spec.input_shape.height,
                        spec.input_shape.width};
  doc["num_classes"] = spec.num_classes;
  if (spec.kind == ToyKind::kMlp1) doc["hidden_units"] = spec.hidden_units;
  json weights = json::array();
  for (const Matrix& w : spec.weights) {
    json rows = json::array();
    for (std::size_t r = 0; r < w.rows; ++r) {
      rows.push_back(std::vector<double>(
          w.values.begin() + static_cast<std::ptrdiff_t>(r * w.cols),
          w.values.begin() + static_cast<std::ptrdiff_t>((r + 1) * w.cols)));
    }
    weights.push_back(std::move(rows));
  }
  doc["weights"] = std::move(weights);
  doc["bias"] = spec.bias;
  return doc.dump() + "\n";
}

ToyVictimSpec toy_victim_from_json(std::string_view text) {
  ToyVictimSpec spec;
  try {
    const json doc = json::parse(text);
    spec.kind = parse_toy_kind(doc.at("kind").get<std::string>());
    const auto shape = doc.at("input_shape").get<std::vector<std::size_t>>();
    if (shape.size() != 3) throw ValidationError("input_shape must be [C,H,W]");
    spec.input_shape = {shape[0], shape[1], shape[2]};
    spec.num_classes = doc.at("num_classes").get<std::size_t>();
    if (doc.contains("hidden_units")) {
      spec.hidden_units = doc.at("hidden_units").get<std::size_t>();
    }
    for (const json& layer : doc.at("weights")) {
      Matrix w;
      w.rows = layer.size();
      for (const json& row : layer) {
        const auto values = row.get<std::vector<double>>();
        if (w.cols == 0) w.cols = values.size();
        if (values.size() != w.cols) {
          throw ValidationError("ragged weight matrix");
        }
        w.values.insert(w.values.end(), values.begin(), values.end());
      }
      spec.weights.push_back(std::move(w));
    }
    spec.bias = doc.at("bias").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed victim weights: ") + e.what());
  }
  spec.validate();
  for (const Matrix& w : spec.weights) {
    if (!all_finite(w.values)) throw ValidationError("non-finite weights");
  }
  return spec;
}

void save_toy_victim(const ToyVictimSpec& spec,
                     const std::filesystem::path& path) {
  const std::string text = toy_victim_to_json(spec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string(), "write failed");
}

ToyVictimSpec load_toy_victim(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open victim weights");
  std::stringstream buf;
  buf << in.rdbuf();
  return toy_victim_from_json(buf.str());
}

ToyVictim::ToyVictim(ToyVictimSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
}

}  // namespace ppba
