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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppba/campaign.hpp"
#include "ppba/errors.hpp"
#include "ppba/sensing.hpp"
#include "ppba/tensor_io.hpp"
#include "ppba/toy_victim.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kVictim = 2, kIo = 3 };

// Flags shared by the subcommands that run attacks. Anything left unset keeps
// the value from the config file (or the library default).
struct CommonFlags {
  std::string config;
  std::string attack;
  std::string victim;
  std::string endpoint;
  long timeout_ms = 10000;
  std::string images;
  std::string out;
  std::size_t workers = 1;

  double epsilon = 0.0;
  std::string norm;
  double rho = 0.0;
  std::size_t m = 0;
  std::size_t max_queries = 0;
  std::uint64_t seed = 0;

  std::string loss;
  std::size_t top_k = 3;

  std::size_t nes_samples = 0;
  double nes_sigma = 0.0;
  double nes_lr = 0.0;

  double bim_step = 0.0;
  std::size_t bim_iterations = 0;
  bool bim_projection = false;

  std::size_t random_count = 0;
  std::uint64_t random_seed = 0;
  std::vector<std::size_t> random_shape;

  CLI::App* app = nullptr;
  bool set(const char* name) const { return app->count(name) > 0; }
};

void add_common(CLI::App* app, CommonFlags& f, bool with_config) {
  f.app = app;
  if (with_config) {
    app->add_option("--config", f.config, "campaign config (JSON)")
        ->check(CLI::ExistingFile);
  }
  app->add_option("--attack", f.attack, "ppba | prba | nes | simba | bim");
  app->add_option("--victim", f.victim, "toy victim weights file");
  app->add_option("--endpoint", f.endpoint, "victim service base URL");
  app->add_option("--timeout-ms", f.timeout_ms, "per-request timeout for --endpoint");
  app->add_option("--out", f.out, "output directory");

  app->add_option("--epsilon", f.epsilon, "perturbation budget");
  app->add_option("--norm", f.norm, "l2 | linf");
  app->add_option("--rho", f.rho, "step size of the walk");
  app->add_option("--m", f.m, "measurement dimension (0 = default)");
  app->add_option("--max-queries", f.max_queries, "query budget");
  app->add_option("--seed", f.seed, "attack seed");

  app->add_option("--loss", f.loss, "cw | topk");
  app->add_option("--top-k", f.top_k, "labels suppressed by the topk loss");

  app->add_option("--nes-samples", f.nes_samples, "NES samples per iteration (even)");
  app->add_option("--nes-sigma", f.nes_sigma, "NES smoothing radius (0 = auto)");
  app->add_option("--nes-lr", f.nes_lr, "NES learning rate (0 = normalized step)");

  app->add_option("--bim-step", f.bim_step, "BIM step size");
  app->add_option("--bim-iterations", f.bim_iterations, "BIM iterations");
  app->add_flag("--bim-projection", f.bim_projection, "step BIM through the sensing operator");
}

void add_image_source(CLI::App* app, CommonFlags& f) {
  app->add_option("--images", f.images, "directory of PNG / TNSR images");
  app->add_option("--random-count", f.random_count, "generate this many random images");
  app->add_option("--random-seed", f.random_seed, "seed of the random images");
  app->add_option("--random-shape", f.random_shape, "C,H,W of the random images")
      ->delimiter(',')
      ->expected(3);
  app->add_option("--workers", f.workers, "parallel attacks");
}

ppba::TensorShape shape_of(const std::vector<std::size_t>& dims) {
  if (dims.size() != 3) throw ppba::ValidationError("shape needs three values C,H,W");
  return {dims[0], dims[1], dims[2]};
}

ppba::CampaignConfig build_config(const CommonFlags& f) {
  ppba::CampaignConfig c;
  if (!f.config.empty()) c = ppba::load_campaign_config(f.config);

  if (f.set("--attack")) c.attack = ppba::parse_attack_method(f.attack);
  if (f.set("--victim") && f.set("--endpoint")) {
    throw ppba::ValidationError("--victim and --endpoint are exclusive");
  }
  if (f.set("--victim")) c.victim = {fs::path(f.victim), std::nullopt};
  if (f.set("--endpoint")) {
    c.victim = {std::nullopt,
                ppba::HttpEndpoint{f.endpoint, std::chrono::milliseconds(f.timeout_ms)}};
  } else if (f.set("--timeout-ms") && c.victim.endpoint) {
    c.victim.endpoint->timeout = std::chrono::milliseconds(f.timeout_ms);
  }
  if (f.set("--out")) c.out = f.out;

  if (f.set("--norm")) {
    // Switching the norm also switches the default budget unless one is given.
    const auto defaults = ppba::default_attack_config(ppba::parse_norm(f.norm));
    c.config.norm = defaults.norm;
    c.config.epsilon = defaults.epsilon;
  }
  if (f.set("--epsilon")) c.config.epsilon = f.epsilon;
  if (f.set("--rho")) c.config.rho = f.rho;
  if (f.set("--m")) c.config.m = f.m;
  if (f.set("--max-queries")) c.config.max_queries = f.max_queries;
  if (f.set("--seed")) c.config.seed = f.seed;

  if (f.set("--loss")) {
    if (f.loss == "cw") {
      c.loss.kind = ppba::LossKind::kCw;
    } else if (f.loss == "topk") {
      c.loss.kind = ppba::LossKind::kTopKSuppression;
    } else {
      throw ppba::ValidationError("unknown loss '" + f.loss + "' (expected cw or topk)");
    }
  }
  if (f.set("--top-k")) c.loss.top_k = f.top_k;

  if (f.set("--nes-samples")) c.nes.samples_per_iter = f.nes_samples;
  if (f.set("--nes-sigma")) c.nes.sigma = f.nes_sigma;
  if (f.set("--nes-lr")) c.nes.lr = f.nes_lr;

  if (f.set("--bim-step")) c.bim.step_size = f.bim_step;
  if (f.set("--bim-iterations")) c.bim.iterations = f.bim_iterations;
  if (f.set("--bim-projection")) c.bim.use_projection = f.bim_projection;

  if (f.app->get_option_no_throw("--images") != nullptr) {
    if (f.set("--images") && f.set("--random-count")) {
      throw ppba::ValidationError("--images and --random-count are exclusive");
    }
    if (f.set("--images")) c.images = {fs::path(f.images), std::nullopt};
    if (f.set("--random-count")) {
      ppba::RandomImages r;
      r.count = f.random_count;
      r.seed = f.random_seed;
      r.shape = f.set("--random-shape") ? shape_of(f.random_shape)
                                        : ppba::TensorShape{3, 32, 32};
      c.images = {std::nullopt, r};
    }
    if (f.set("--workers")) c.workers = f.workers;
  }
  return c;
}

void print_summary(const ppba::MetricsSummary& s, std::size_t max_queries) {
  std::cout << ppba::summary_to_json(s, max_queries);
}

int cmd_attack(const CommonFlags& f, const std::string& image_path) {
  ppba::CampaignConfig c = build_config(f);
  if (!c.victim.weights && !c.victim.endpoint) {
    throw ppba::ValidationError("attack needs --victim or --endpoint");
  }
  if (c.attack == ppba::AttackMethod::kBim && c.victim.endpoint) {
    throw ppba::ValidationError("bim needs a toy victim (got an HTTP endpoint)");
  }
  c.config.validate();
  const ppba::ImageTensor x = ppba::load_image(image_path);
  auto victim = ppba::open_victim(c.victim);
  if (victim->input_shape() != x.shape()) {
    throw ppba::ValidationError("image shape " + x.shape().to_string() +
                                " does not match the victim input " +
                                victim->input_shape().to_string());
  }
  const ppba::SensingOperator op(x.shape(), c.config.resolved_m(x.shape()));
  ppba::AttackRecord record = ppba::run_attack(c, *victim, x, &op, c.config.seed);
  record.image_id = fs::path(image_path).stem().string();
  std::cout << ppba::record_to_json(record) << '\n';
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    ppba::write_tnsr_image(c.out / (record.image_id + "_adv.tnsr"),
                           ppba::clip_to_image(x, record.perturbation));
  }
  return record.failure ? kVictim : kOk;
}

int cmd_bench(const CommonFlags& f) {
  const ppba::CampaignConfig c = build_config(f);
  const auto records = ppba::run_campaign(c);
  const auto summary = ppba::compute_metrics(records, c.config.max_queries);
  if (!c.out.empty()) ppba::emit_reports(records, summary, c.config.max_queries, c.out);
  print_summary(summary, c.config.max_queries);
  return kOk;
}

int cmd_sweep(const CommonFlags& f, const std::vector<std::size_t>& m_values) {
  const ppba::CampaignConfig c = build_config(f);
  const auto rows = ppba::dimension_sweep(c, m_values);
  std::printf("m,asr,avg_queries_success,avg_queries_all,auc,n_samples\n");
  for (const auto& row : rows) {
    const auto& s = row.summary;
    std::string success;
    if (s.avg_queries_success) success = std::to_string(*s.avg_queries_success);
    std::printf("%zu,%.6f,%s,%.6f,%.6f,%zu\n", row.m, s.asr, success.c_str(),
                s.avg_queries_all, s.auc, s.n_samples);
  }
  return kOk;
}

std::size_t max_queries_beside(const fs::path& records_csv) {
  const fs::path summary = records_csv.parent_path() / "summary.json";
  std::ifstream in(summary);
  if (!in) {
    throw ppba::ValidationError("--max-queries not given and no summary.json next to " +
                                records_csv.string());
  }
  try {
    return nlohmann::json::parse(in).at("max_queries").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ppba::IoError(summary, e.what());
  }
}

int cmd_report(const std::string& records_path, std::size_t max_queries,
               const std::string& out) {
  const auto rows = ppba::read_records_csv(records_path);
  std::vector<ppba::AttackOutcome> outcomes;
  outcomes.reserve(rows.size());
  for (const auto& r : rows) outcomes.push_back({r.success, r.queries_used});
  if (max_queries == 0) max_queries = max_queries_beside(records_path);
  const auto summary = ppba::compute_metrics(outcomes, max_queries);
  const std::string text = ppba::summary_to_json(summary, max_queries);
  if (!out.empty()) {
    fs::create_directories(out);
    const fs::path path = fs::path(out) / "summary.json";
    std::ofstream file(path, std::ios::binary);
    if (!(file << text)) throw ppba::IoError(path, "write failed");
  }
  std::cout << text;
  return kOk;
}

int cmd_gen_victim(std::uint64_t seed, const std::string& kind,
                   const std::vector<std::size_t>& shape, std::size_t classes,
                   std::size_t hidden, const std::string& out) {
  const auto spec = ppba::generate_toy_victim(seed, ppba::parse_toy_kind(kind),
                                              shape_of(shape), classes, hidden);
  ppba::save_toy_victim(spec, out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probability-driven black-box attacks in a low-frequency subspace"};
  app.require_subcommand(1);

  CommonFlags attack_flags;
  std::string image_path;
  auto* attack = app.add_subcommand("attack", "attack one image and print the record as JSON");
  add_common(attack, attack_flags, true);
  attack->add_option("--image", image_path, "PNG or TNSR image")
      ->required()
      ->check(CLI::ExistingFile);

  CommonFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "run a campaign and write reports");
  add_common(bench, bench_flags, true);
  add_image_source(bench, bench_flags);

  CommonFlags sweep_flags;
  std::vector<std::size_t> m_values{1, 16, 64, 256};
  auto* sweep = app.add_subcommand("sweep-m", "one campaign per measurement dimension");
  add_common(sweep, sweep_flags, true);
  add_image_source(sweep, sweep_flags);
  sweep->add_option("--m-values", m_values, "comma-separated list of m")
      ->delimiter(',');

  std::uint64_t gen_seed = 0;
  std::string gen_kind = "linear_softmax";
  std::vector<std::size_t> gen_shape{3, 32, 32};
  std::size_t gen_classes = 10;
  std::size_t gen_hidden = 32;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-victim", "write a random toy victim");
  gen->add_option("--seed", gen_seed, "weight seed");
  gen->add_option("--kind", gen_kind, "linear_softmax | mlp1");
  gen->add_option("--shape", gen_shape, "C,H,W")->delimiter(',')->expected(3);
  gen->add_option("--classes", gen_classes, "number of classes");
  gen->add_option("--hidden", gen_hidden, "hidden units (mlp1)");
  gen->add_option("--out", gen_out, "weights file")->required();

  std::string report_records;
  std::size_t report_max_queries = 0;
  std::string report_out;
  auto* report = app.add_subcommand("report", "recompute metrics from records.csv");
  report->add_option("--records", report_records, "records.csv")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--max-queries", report_max_queries,
                     "query budget (default: read from summary.json next to the records)");
  report->add_option("--out", report_out, "write summary.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*attack) return cmd_attack(attack_flags, image_path);
    if (*bench) return cmd_bench(bench_flags);
    if (*sweep) return cmd_sweep(sweep_flags, m_values);
    if (*gen) {
      return cmd_gen_victim(gen_seed, gen_kind, gen_shape, gen_classes, gen_hidden,
                            gen_out);
    }
    if (*report) return cmd_report(report_records, report_max_queries, report_out);
  } catch (const ppba::VictimError& e) {
    std::cerr << "victim failure: " << e.what() << '\n';
    return kVictim;
  } catch (const ppba::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const ppba::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
