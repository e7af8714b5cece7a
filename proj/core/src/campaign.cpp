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

#include "ppba/campaign.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ppba/errors.hpp"
#include "ppba/rng.hpp"
#include "ppba/tensor_io.hpp"
#include "ppba/toy_victim.hpp"

namespace ppba {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

AttackMethod parse_attack_method(std::string_view name) {
  if (name == "ppba") return AttackMethod::kPpba;
  if (name == "prba") return AttackMethod::kPrba;
  if (name == "nes") return AttackMethod::kNes;
  if (name == "simba") return AttackMethod::kSimba;
  if (name == "bim") return AttackMethod::kBim;
  throw ValidationError("unknown attack '" + std::string(name) +
                        "' (expected ppba, prba, nes, simba or bim)");
}

std::string_view attack_method_name(AttackMethod method) {
  switch (method) {
    case AttackMethod::kPpba: return "ppba";
    case AttackMethod::kPrba: return "prba";
    case AttackMethod::kNes: return "nes";
    case AttackMethod::kSimba: return "simba";
    case AttackMethod::kBim: return "bim";
  }
  return "?";
}

void CampaignConfig::validate() const {
  config.validate();
  nes.validate();
  bim.validate();
  if (victim.weights.has_value() == victim.endpoint.has_value()) {
    throw ValidationError("victim needs exactly one of weights or endpoint");
  }
  if (victim.weights && !fs::exists(*victim.weights)) {
    throw ValidationError("victim weights file not found: " +
                          victim.weights->string());
  }
  if (images.directory.has_value() == images.random.has_value()) {
    throw ValidationError("images needs exactly one of dir or random");
  }
  if (images.directory && !fs::is_directory(*images.directory)) {
    throw ValidationError("image directory not found: " +
                          images.directory->string());
  }
  if (images.random) images.random->shape.validate();
  if (attack == AttackMethod::kBim && !victim.weights) {
    throw ValidationError("bim is white-box and needs a toy victim (weights)");
  }
  if (workers == 0) throw ValidationError("workers must be >= 1");
}

namespace {

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  return obj.contains(key) ? obj.at(key).get<T>() : fallback;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

TensorShape shape_from(const json& j) {
  const auto dims = j.get<std::vector<std::size_t>>();
  if (dims.size() != 3) throw ValidationError("shape must be [C,H,W]");
  TensorShape s{dims[0], dims[1], dims[2]};
  s.validate();
  return s;
}

}  // namespace

CampaignConfig parse_campaign_config(std::string_view text,
                                     const fs::path& base_dir) {
  CampaignConfig c;
  try {
    const json doc = json::parse(text);
    c.attack = parse_attack_method(doc.at("attack").get<std::string>());

    const json& v = doc.at("victim");
    if (v.contains("weights")) {
      c.victim.weights = resolve(base_dir, v.at("weights").get<std::string>());
    }
    if (v.contains("endpoint")) {
      c.victim.endpoint = HttpEndpoint{
          v.at("endpoint").get<std::string>(),
          std::chrono::milliseconds(get_or<std::int64_t>(v, "timeout_ms", 10000))};
    }

    const json& im = doc.at("images");
    if (im.contains("dir")) {
      c.images.directory = resolve(base_dir, im.at("dir").get<std::string>());
    }
    if (im.contains("random")) {
      const json& r = im.at("random");
      c.images.random = RandomImages{r.at("count").get<std::size_t>(),
                                     get_or<std::uint64_t>(r, "seed", 0),
                                     shape_from(r.at("shape"))};
    }

    if (doc.contains("config")) {
      const json& a = doc.at("config");
      const Norm norm = parse_norm(get_or<std::string>(a, "norm", "l2"));
      c.config = default_attack_config(norm);
      c.config.epsilon = get_or(a, "epsilon", c.config.epsilon);
      c.config.rho = get_or(a, "rho", c.config.rho);
      c.config.m = get_or<std::size_t>(a, "m", 0);
      c.config.max_queries = get_or(a, "max_queries", c.config.max_queries);
      c.config.seed = get_or<std::uint64_t>(a, "seed", 0);
    }
    if (doc.contains("loss")) {
      const json& l = doc.at("loss");
      const auto kind = get_or<std::string>(l, "kind", "cw");
      if (kind == "cw") {
        c.loss.kind = LossKind::kCw;
      } else if (kind == "topk") {
        c.loss.kind = LossKind::kTopKSuppression;
      } else {
        throw ValidationError("unknown loss '" + kind + "' (expected cw or topk)");
      }
      c.loss.top_k = get_or(l, "top_k", c.loss.top_k);
    }
    if (doc.contains("nes")) {
      const json& n = doc.at("nes");
      c.nes.samples_per_iter = get_or(n, "samples_per_iter", c.nes.samples_per_iter);
      c.nes.sigma = get_or(n, "sigma", c.nes.sigma);
      c.nes.lr = get_or(n, "lr", c.nes.lr);
      c.nes.step_norm = get_or(n, "step_norm", c.nes.step_norm);
    }
    if (doc.contains("bim")) {
      const json& b = doc.at("bim");
      c.bim.step_size = get_or(b, "step_size", c.bim.step_size);
      c.bim.iterations = get_or(b, "iterations", c.bim.iterations);
      c.bim.use_projection = get_or(b, "use_projection", c.bim.use_projection);
    }
    c.bim.epsilon = c.config.epsilon;
    c.bim.norm = c.config.norm;
    if (doc.contains("out")) c.out = resolve(base_dir, doc.at("out").get<std::string>());
    c.workers = get_or<std::size_t>(doc, "workers", 1);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed campaign config: ") + e.what());
  }
  return c;
}

CampaignConfig load_campaign_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open campaign config");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_campaign_config(buf.str(), path.parent_path());
}

std::string campaign_config_to_json(const CampaignConfig& c) {
  ordered_json doc;
  doc["attack"] = attack_method_name(c.attack);
  ordered_json victim = ordered_json::object();
  if (c.victim.weights) victim["weights"] = c.victim.weights->string();
  if (c.victim.endpoint) {
    victim["endpoint"] = c.victim.endpoint->url;
    victim["timeout_ms"] = c.victim.endpoint->timeout.count();
  }
  doc["victim"] = victim;
  ordered_json images = ordered_json::object();
  if (c.images.directory) images["dir"] = c.images.directory->string();
  if (c.images.random) {
    const auto& r = *c.images.random;
    images["random"] = {{"count", r.count},
                        {"seed", r.seed},
                        {"shape", {r.shape.channels, r.shape.height, r.shape.width}}};
  }
  doc["images"] = images;
  doc["config"] = {{"epsilon", c.config.epsilon},
                   {"norm", norm_name(c.config.norm)},
                   {"rho", c.config.rho},
                   {"m", c.config.m},
                   {"max_queries", c.config.max_queries},
                   {"seed", c.config.seed}};
  doc["loss"] = {{"kind", c.loss.kind == LossKind::kCw ? "cw" : "topk"},
                 {"top_k", c.loss.top_k}};
  doc["nes"] = {{"samples_per_iter", c.nes.samples_per_iter},
                {"sigma", c.nes.sigma},
                {"lr", c.nes.lr},
                {"step_norm", c.nes.step_norm}};
  doc["bim"] = {{"step_size", c.bim.step_size},
                {"iterations", c.bim.iterations},
                {"use_projection", c.bim.use_projection}};
  if (!c.out.empty()) doc["out"] = c.out.string();
  doc["workers"] = c.workers;
  return doc.dump(2) + "\n";
}

std::vector<ImageTensor> random_images(const RandomImages& spec) {
  spec.shape.validate();
  std::vector<ImageTensor> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    Rng rng(Rng::derive(spec.seed, i));
    ImageTensor x(spec.shape);
    for (double& v : x.values()) v = rng.uniform();
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<LoadedImage> load_images(const ImageSource& source) {
  std::vector<LoadedImage> out;
  if (source.directory) {
    for (const auto& path : list_images(*source.directory)) {
      out.push_back({path.stem().string(), load_image(path)});
    }
  } else if (source.random) {
    auto images = random_images(*source.random);
    for (std::size_t i = 0; i < images.size(); ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "rand_%05zu", i);
      out.push_back({id, std::move(images[i])});
    }
  }
  return out;
}

std::unique_ptr<Victim> open_victim(const VictimSource& source) {
  if (source.weights) {
    return std::make_unique<ToyVictim>(load_toy_victim(*source.weights));
  }
  if (source.endpoint) return std::make_unique<HttpVictim>(*source.endpoint);
  throw ValidationError("no victim configured");
}

std::uint64_t image_seed(std::uint64_t campaign_seed, std::size_t index) {
  return Rng::derive(campaign_seed, index);
}

AttackRecord run_attack(const CampaignConfig& config, Victim& victim,
                        const ImageTensor& x, const SensingOperator* op,
                        std::uint64_t seed) {
  AttackConfig ac = config.config;
  ac.seed = seed;
  const bool needs_op =
      config.attack != AttackMethod::kBim || config.bim.use_projection;
  if (needs_op && op == nullptr) {
    throw ValidationError("attack needs a sensing operator");
  }
  switch (config.attack) {
    case AttackMethod::kPpba:
      return ppba_attack(victim, x, *op, ac, config.loss);
    case AttackMethod::kPrba:
      return prba_attack(victim, x, *op, ac, config.loss);
    case AttackMethod::kNes:
      return nes_projected_attack(victim, x, *op, ac, config.nes, config.loss);
    case AttackMethod::kSimba:
      return simba_attack(victim, x, *op, ac, config.loss);
    case AttackMethod::kBim: {
      BimConfig bim = config.bim;
      bim.epsilon = ac.epsilon;
      bim.norm = ac.norm;
      return bim_whitebox(victim, x, bim, op);
    }
  }
  throw ValidationError("unhandled attack method");
}

// ---- record (de)serialization ---------------------------------------------

std::string record_to_json(const AttackRecord& r) {
  ordered_json doc;
  doc["image_id"] = r.image_id;
  doc["success"] = r.success;
  doc["queries_used"] = r.queries_used;
  doc["final_l2"] = r.final_l2;
  doc["final_linf"] = r.final_linf;
  doc["adversarial_label"] =
      r.adversarial_label ? json(*r.adversarial_label) : json(nullptr);
  doc["original_label"] = r.original_label;
  doc["per_query_loss"] = r.per_query_loss;
  doc["per_query_accepted"] = r.per_query_accepted;
  doc["measurement"] = r.measurement;
  if (r.failure) doc["failure"] = *r.failure;
  return doc.dump();
}

AttackRecord record_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    AttackRecord r;
    r.image_id = doc.at("image_id").get<std::string>();
    r.success = doc.at("success").get<bool>();
    r.queries_used = doc.at("queries_used").get<std::size_t>();
    r.final_l2 = doc.at("final_l2").get<double>();
    r.final_linf = doc.at("final_linf").get<double>();
    if (!doc.at("adversarial_label").is_null()) {
      r.adversarial_label = doc.at("adversarial_label").get<std::size_t>();
    }
    r.original_label = doc.at("original_label").get<std::size_t>();
    r.per_query_loss = doc.at("per_query_loss").get<std::vector<double>>();
    r.per_query_accepted = doc.at("per_query_accepted").get<std::vector<bool>>();
    r.measurement = doc.at("measurement").get<std::vector<double>>();
    if (doc.contains("failure")) r.failure = doc.at("failure").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed attack record: ") + e.what());
  }
}

// ---- campaigns ---------------------------------------------------------------

namespace {

class OperatorCache {
 public:
  OperatorCache(const AttackConfig& config) : config_(config) {}

  const SensingOperator& get(const TensorShape& shape) {
    std::lock_guard lock(mu_);
    const auto key = std::tuple(shape.channels, shape.height, shape.width);
    auto it = ops_.find(key);
    if (it == ops_.end()) {
      it = ops_.emplace(key, std::make_unique<SensingOperator>(
                                 shape, config_.resolved_m(shape)))
               .first;
    }
    return *it->second;
  }

 private:
  AttackConfig config_;
  std::mutex mu_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>,
           std::unique_ptr<SensingOperator>>
      ops_;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string(), "write failed");
}

// Fingerprint of everything that determines the records.
std::string campaign_fingerprint(const CampaignConfig& config) {
  CampaignConfig c = config;
  c.out.clear();
  c.workers = 1;
  return campaign_config_to_json(c);
}

}  // namespace

std::vector<AttackRecord> run_campaign(const CampaignConfig& config) {
  config.validate();
  const auto images = load_images(config.images);
  auto victim = open_victim(config.victim);
  return run_campaign(config, *victim, images);
}

std::vector<AttackRecord> run_campaign(const CampaignConfig& config,
                                       Victim& victim,
                                       std::span<const LoadedImage> images) {
  config.config.validate();
  if (config.workers == 0) throw ValidationError("workers must be >= 1");

  std::vector<std::optional<AttackRecord>> results(images.size());
  fs::path journal;
  if (!config.out.empty()) {
    std::error_code ec;
    fs::create_directories(config.out, ec);
    if (ec) throw IoError(config.out.string(), ec.message());
    const fs::path stamp = config.out / "campaign.json";
    const std::string fingerprint = campaign_fingerprint(config);
    if (fs::exists(stamp) && read_file(stamp) != fingerprint) {
      throw ValidationError(config.out.string() +
                            " holds results of a different campaign");
    }
    write_file(stamp, fingerprint);

    journal = config.out / "records.jsonl";
    if (fs::exists(journal)) {
      std::map<std::string, std::size_t> index;
      for (std::size_t i = 0; i < images.size(); ++i) index[images[i].id] = i;
      std::ifstream in(journal);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        // A torn final line from an interrupted run is dropped.
        AttackRecord r;
        try {
          r = record_from_json(line);
        } catch (const ValidationError&) {
          continue;
        }
        const auto it = index.find(r.image_id);
        if (it != index.end()) results[it->second] = std::move(r);
      }
    }
  }

  OperatorCache ops(config.config);
  const bool needs_op =
      config.attack != AttackMethod::kBim || config.bim.use_projection;

  std::mutex journal_mu;
  std::ofstream journal_out;
  if (!journal.empty()) {
    // Rewrite the journal so it holds exactly the resumed records.
    std::ofstream rewrite(journal, std::ios::trunc);
    for (const auto& r : results) {
      if (r) rewrite << record_to_json(*r) << '\n';
    }
    rewrite.close();
    journal_out.open(journal, std::ios::app);
    if (!journal_out) throw IoError(journal.string(), "cannot open for append");
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= images.size()) return;
      if (results[i]) continue;
      try {
        const auto& img = images[i];
        const SensingOperator* op = needs_op ? &ops.get(img.image.shape()) : nullptr;
        AttackRecord r = run_attack(config, victim, img.image, op,
                                    image_seed(config.config.seed, i));
        r.image_id = img.id;
        if (r.failure) {
          throw VictimError(VictimError::Kind::kTransport,
                            "image " + img.id + ": " + *r.failure);
        }
        if (journal_out.is_open()) {
          std::lock_guard lock(journal_mu);
          journal_out << record_to_json(r) << '\n';
          journal_out.flush();
        }
        results[i] = std::move(r);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        stop.store(true);
      }
    }
  };

  const std::size_t n_workers = std::min(config.workers, std::max<std::size_t>(images.size(), 1));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<AttackRecord> records;
  records.reserve(results.size());
  for (auto& r : results) records.push_back(std::move(*r));
  return records;
}

std::vector<SweepRow> dimension_sweep(const CampaignConfig& base,
                                      std::span<const std::size_t> m_values) {
  base.validate();
  if (m_values.empty()) throw ValidationError("sweep needs at least one m");
  const auto images = load_images(base.images);
  auto victim = open_victim(base.victim);
  for (std::size_t m : m_values) {
    for (const auto& img : images) {
      if (m == 0 || m > img.image.size()) {
        throw ValidationError("m=" + std::to_string(m) + " outside [1, d] for " +
                              img.id);
      }
    }
  }

  std::vector<SweepRow> rows;
  for (std::size_t m : m_values) {
    CampaignConfig c = base;
    c.config.m = m;
    if (!base.out.empty()) c.out = base.out / ("m_" + std::to_string(m));
    const auto records = run_campaign(c, *victim, images);
    const auto summary = compute_metrics(records, c.config.max_queries);
    if (!c.out.empty()) emit_reports(records, summary, c.config.max_queries, c.out);
    rows.push_back({m, summary});
  }

  if (!base.out.empty()) {
    std::string csv = "m,asr,avg_queries_success,avg_queries_all,auc,n_samples\n";
    char line[256];
    for (const auto& row : rows) {
      const auto& s = row.summary;
      char success[64] = "";
      if (s.avg_queries_success) {
        std::snprintf(success, sizeof success, "%.17g", *s.avg_queries_success);
      }
      std::snprintf(line, sizeof line, "%zu,%.17g,%s,%.17g,%.17g,%zu\n", row.m,
                    s.asr, success, s.avg_queries_all, s.auc, s.n_samples);
      csv += line;
    }
    write_file(base.out / "sweep.csv", csv);
  }
  return rows;
}

// ---- reports -----------------------------------------------------------------

std::string summary_to_json(const MetricsSummary& s, std::size_t max_queries) {
  ordered_json doc;
  doc["asr"] = s.asr;
  doc["avg_queries_success"] =
      s.avg_queries_success ? ordered_json(*s.avg_queries_success)
                            : ordered_json(nullptr);
  doc["avg_queries_all"] = s.avg_queries_all;
  doc["auc"] = s.auc;
  doc["n_samples"] = s.n_samples;
  doc["max_queries"] = max_queries;
  doc["auc_convention"] = kAucConvention;
  return doc.dump(2) + "\n";
}

MetricsSummary summary_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    MetricsSummary s;
    s.asr = doc.at("asr").get<double>();
    if (!doc.at("avg_queries_success").is_null()) {
      s.avg_queries_success = doc.at("avg_queries_success").get<double>();
    }
    s.avg_queries_all = doc.at("avg_queries_all").get<double>();
    s.auc = doc.at("auc").get<double>();
    s.n_samples = doc.at("n_samples").get<std::size_t>();
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed summary: ") + e.what());
  }
}

namespace {

std::string csv_id(std::string id) {
  for (char& c : id) {
    if (c == ',' || c == '\n' || c == '\r') c = '_';
  }
  return id;
}

}  // namespace

void emit_reports(std::span<const AttackRecord> records,
                  const MetricsSummary& summary, std::size_t max_queries,
                  const fs::path& outdir, std::size_t eff_window) {
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw IoError(outdir.string(), ec.message());

  char line[512];
  std::string csv =
      "image_id,success,queries_used,final_l2,final_linf,adversarial_label,"
      "original_label\n";
  for (const auto& r : records) {
    char label[32] = "";
    if (r.adversarial_label) {
      std::snprintf(label, sizeof label, "%zu", *r.adversarial_label);
    }
    std::snprintf(line, sizeof line, ",%d,%zu,%.17g,%.17g,%s,%zu\n",
                  r.success ? 1 : 0, r.queries_used, r.final_l2, r.final_linf,
                  label, r.original_label);
    csv += csv_id(r.image_id);
    csv += line;
  }
  write_file(outdir / "records.csv", csv);

  write_file(outdir / "summary.json", summary_to_json(summary, max_queries));

  const auto outcomes = outcomes_of(records);
  std::string curve = "q,success_rate\n";
  if (!outcomes.empty()) {
    const auto sr = success_curve(outcomes, max_queries);
    for (std::size_t q = 1; q <= max_queries; ++q) {
      std::snprintf(line, sizeof line, "%zu,%.17g\n", q, sr[q - 1]);
      curve += line;
    }
  }
  write_file(outdir / "curve.csv", curve);

  std::string eff = "q,step_effective_rate\n";
  for (const auto& p : step_effective_rate(records, eff_window)) {
    std::snprintf(line, sizeof line, "%zu,%.17g\n", p.query, p.rate);
    eff += line;
  }
  write_file(outdir / "eff_curve.csv", eff);
}

std::vector<RecordRow> read_records_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open records");
  std::string line;
  if (!std::getline(in, line) || line.rfind("image_id,", 0) != 0) {
    throw ValidationError(path.string() + ": missing records.csv header");
  }
  std::vector<RecordRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 7) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected 7 columns");
    }
    try {
      RecordRow r;
      r.image_id = cells[0];
      r.success = cells[1] == "1";
      r.queries_used = std::stoull(cells[2]);
      r.final_l2 = std::stod(cells[3]);
      r.final_linf = std::stod(cells[4]);
      if (!cells[5].empty()) r.adversarial_label = std::stoull(cells[5]);
      r.original_label = std::stoull(cells[6]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": malformed number");
    }
  }
  return rows;
}

}  // namespace ppba
