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

#ifndef PPBA_CAMPAIGN_HPP_
#define PPBA_CAMPAIGN_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppba/attack.hpp"
#include "ppba/baselines.hpp"
#include "ppba/http_victim.hpp"
#include "ppba/metrics.hpp"

namespace ppba {

enum class AttackMethod { kPpba, kPrba, kNes, kSimba, kBim };

AttackMethod parse_attack_method(std::string_view name);
std::string_view attack_method_name(AttackMethod method);

// Exactly one of the two is set.
struct VictimSource {
  std::optional<std::filesystem::path> weights;  // toy victim JSON
  std::optional<HttpEndpoint> endpoint;
};

struct RandomImages {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  TensorShape shape;
};

// Exactly one of the two is set.
struct ImageSource {
  std::optional<std::filesystem::path> directory;  // *.png / *.tnsr
  std::optional<RandomImages> random;
};

struct CampaignConfig {
  AttackMethod attack = AttackMethod::kPpba;
  VictimSource victim;
  ImageSource images;
  AttackConfig config;
  LossSpec loss;
  NesConfig nes;
  BimConfig bim;
  // Reports and the resumable records.jsonl go here; empty disables
  // persistence.
  std::filesystem::path out;
  std::size_t workers = 1;

  // Checks source exclusivity, file existence and attack/victim
  // compatibility (bim needs a toy victim).
  void validate() const;
};

// JSON document mirroring CampaignConfig:
//   {"attack": "ppba",
//    "victim": {"weights": "v.json"} | {"endpoint": "http://h:p", "timeout_ms": 10000},
//    "images": {"dir": "imgs/"} | {"random": {"count": 10, "seed": 1, "shape": [3,32,32]}},
//    "config": {"epsilon": 5, "norm": "l2", "rho": 0.01, "m": 0,
//               "max_queries": 2000, "seed": 0},
//    "loss": {"kind": "cw"|"topk", "top_k": 3},
//    "nes": {"samples_per_iter": 20, "sigma": 0, "lr": 0},
//    "bim": {"step_size": 0.1, "iterations": 200, "use_projection": false},
//    "out": "results/", "workers": 1}
// Only "attack", "victim" and "images" are required. Relative paths resolve
// against `base_dir`.
CampaignConfig parse_campaign_config(std::string_view text,
                                     const std::filesystem::path& base_dir = {});
CampaignConfig load_campaign_config(const std::filesystem::path& path);
std::string campaign_config_to_json(const CampaignConfig& config);

// Uniform [0,1] pixels; image i is drawn from Rng(Rng::derive(seed, i)).
std::vector<ImageTensor> random_images(const RandomImages& spec);

struct LoadedImage {
  std::string id;
  ImageTensor image;
};
std::vector<LoadedImage> load_images(const ImageSource& source);

std::unique_ptr<Victim> open_victim(const VictimSource& source);

// Seed of the attack on image `index`.
std::uint64_t image_seed(std::uint64_t campaign_seed, std::size_t index);

// Runs the configured method on one image. `op` may be null only for
// unprojected BIM.
AttackRecord run_attack(const CampaignConfig& config, Victim& victim,
                        const ImageTensor& x, const SensingOperator* op,
                        std::uint64_t seed);

// One record per image, ordered by image index, each attack seeded with
// image_seed(config.config.seed, index). With a non-empty `out`, finished
// records are appended to out/records.jsonl as they complete and a rerun
// skips the images already there. A victim failure stops the campaign:
// finished records stay on disk and the VictimError is rethrown.
std::vector<AttackRecord> run_campaign(const CampaignConfig& config);
std::vector<AttackRecord> run_campaign(const CampaignConfig& config,
                                       Victim& victim,
                                       std::span<const LoadedImage> images);

struct SweepRow {
  std::size_t m = 0;
  MetricsSummary summary;
};

// One campaign per m on the same images and seeds. With a non-empty
// base.out, each run reports into out/m_<m>/ and sweep.csv is written.
std::vector<SweepRow> dimension_sweep(const CampaignConfig& base,
                                      std::span<const std::size_t> m_values);

inline constexpr std::string_view kAucConvention =
    "auc = sum over q=1..max_queries of SR(q), SR(q) = fraction of samples "
    "successful within q queries; every victim evaluation counts as a query, "
    "including the clean-image query; failures count max_queries in "
    "avg_queries_all";

// Writes records.csv, summary.json, curve.csv and eff_curve.csv:
//   records.csv   image_id,success,queries_used,final_l2,final_linf,
//                 adversarial_label,original_label
//   summary.json  MetricsSummary fields plus max_queries and auc_convention
//   curve.csv     q,success_rate          (q = 1..max_queries)
//   eff_curve.csv q,step_effective_rate   (trailing window `eff_window`)
void emit_reports(std::span<const AttackRecord> records,
                  const MetricsSummary& summary, std::size_t max_queries,
                  const std::filesystem::path& outdir,
                  std::size_t eff_window = 50);

std::string summary_to_json(const MetricsSummary& summary,
                            std::size_t max_queries);
MetricsSummary summary_from_json(std::string_view text);

// Rows of a records.csv; only success and queries_used feed the metrics.
struct RecordRow {
  std::string image_id;
  bool success = false;
  std::size_t queries_used = 0;
  double final_l2 = 0.0;
  double final_linf = 0.0;
  std::optional<std::size_t> adversarial_label;
  std::size_t original_label = 0;
};
std::vector<RecordRow> read_records_csv(const std::filesystem::path& path);

std::string record_to_json(const AttackRecord& record);
AttackRecord record_from_json(std::string_view text);

}  // namespace ppba

#endif  // PPBA_CAMPAIGN_HPP_
