// Copyright 2026 The xmodal Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "report.hpp"
#include "xmodal/cmrloss.hpp"
#include "xmodal/diffrank.hpp"
#include "xmodal/imgproc.hpp"
#include "xmodal/io.hpp"
#include "xmodal/metrics.hpp"
#include "xmodal/toytrain.hpp"

namespace fs = std::filesystem;

namespace xmodal::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

// Loss went non-finite or a gradient check failed.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::map<std::string, Format> kFormats = {{"table", Format::kTable},
                                                 {"records", Format::kRecords}};

void add_format_option(CLI::App* cmd, Format& format) {
  cmd->add_option("--format", format, "Report layout")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
}

Channel parse_channel(const std::string& s) {
  if (s == "r" || s == "red") return Channel::kRed;
  if (s == "g" || s == "green") return Channel::kGreen;
  if (s == "b" || s == "blue") return Channel::kBlue;
  throw std::invalid_argument("unknown channel '" + s + "' (expected r, g or b)");
}

// ---------------------------------------------------------------- augment

struct AugmentArgs {
  std::string input;
  std::string out;
  std::string strategy = "maa";
  std::uint64_t seed = 0;
  double apply_probability = 1.0;
  std::optional<std::vector<double>> weights;
  std::optional<std::string> background;
  std::optional<std::string> foreground;
  std::optional<std::string> channel;
  std::optional<double> beta1;
  Format format = Format::kRecords;
};

MaaConfig strategy_config(const AugmentArgs& a) {
  MaaConfig cfg;
  if (a.strategy == "maa") {
    cfg.apply_probability = a.apply_probability;
  } else if (a.strategy == "wg") {
    cfg.strategy_weights = {1.0, 0.0, 0.0};
  } else if (a.strategy == "cc") {
    cfg.strategy_weights = {0.0, 1.0, 0.0};
  } else {
    cfg.strategy_weights = {0.0, 0.0, 1.0};
  }
  return cfg;
}

// Samples with the augmentation law, then replaces any parameter fixed on
// the command line and recomputes the output from the final parameters.
Image augment_one(const Image& img, Rng& rng, const AugmentArgs& a, MaaRecord& rec) {
  Image out = apply_maa(img, rng, strategy_config(a), &rec);
  if (!rec.applied || a.strategy == "maa") return out;
  switch (rec.strategy) {
    case MaaStrategy::kWeightedGrayscale:
      if (!a.weights) return out;
      rec.weights = {(*a.weights)[0], (*a.weights)[1], (*a.weights)[2]};
      rec.weights.validate();
      return weighted_grayscale(img, rec.weights);
    case MaaStrategy::kCrossChannelCutmix:
      if (!a.background && !a.foreground) return out;
      if (a.background) rec.background = parse_channel(*a.background);
      if (a.foreground) rec.foreground = parse_channel(*a.foreground);
      return cross_channel_cutmix(img, rec.background, rec.foreground, rec.rect);
    case MaaStrategy::kSpectrumJitter:
      if (!a.channel && !a.beta1) return out;
      if (a.channel) rec.jitter_channel = parse_channel(*a.channel);
      if (a.beta1) rec.beta1 = *a.beta1;
      return spectrum_jitter(img, rec.jitter_channel, rec.beta1);
  }
  return out;
}

void describe(Report& report, const MaaRecord& rec) {
  report.add("applied", rec.applied);
  if (!rec.applied) return;
  report.add("strategy", std::string(to_string(rec.strategy)));
  switch (rec.strategy) {
    case MaaStrategy::kWeightedGrayscale: {
      const double w[] = {rec.weights.a1, rec.weights.a2, rec.weights.a3};
      report.add("weights", format_list(w));
      break;
    }
    case MaaStrategy::kCrossChannelCutmix:
      report.add("bg", std::string(to_string(rec.background)));
      report.add("fg", std::string(to_string(rec.foreground)));
      report.add("rect", std::to_string(rec.rect.top) + "," + std::to_string(rec.rect.left) + "," +
                             std::to_string(rec.rect.height) + "," +
                             std::to_string(rec.rect.width));
      break;
    case MaaStrategy::kSpectrumJitter:
      report.add("channel", std::string(to_string(rec.jitter_channel)));
      report.add("beta1", rec.beta1);
      break;
  }
}

int run_augment(const AugmentArgs& a) {
  if (a.weights && a.weights->size() != 3) {
    throw std::invalid_argument("--weights takes exactly three values");
  }
  const fs::path input(a.input);
  std::vector<std::pair<fs::path, fs::path>> jobs;  // (source, destination)
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::directory_iterator(input)) {
      if (entry.is_regular_file() && entry.path().extension() == ".png") {
        jobs.emplace_back(entry.path(), fs::path(a.out) / entry.path().filename());
      }
    }
    std::sort(jobs.begin(), jobs.end());
    fs::create_directories(a.out);
  } else {
    jobs.emplace_back(input, fs::path(a.out));
  }

  Report report;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    // Independent stream per image, keyed by its position in sorted order.
    std::seed_seq seq{static_cast<std::uint32_t>(a.seed), static_cast<std::uint32_t>(a.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    Rng rng(seq);
    const Image img = read_png(jobs[i].first);
    MaaRecord rec;
    const Image out = augment_one(img, rng, a, rec);
    write_png(jobs[i].second, out);
    report.row().add("file", jobs[i].first.filename().string());
    describe(report, rec);
  }
  report.print(std::cout, a.format);
  return kExitOk;
}

// --------------------------------------------------------------- softrank

struct SoftRankArgs {
  std::string input = "-";
  double epsilon = 1.0;
  std::optional<double> input_scale;
  bool jacobian = false;
  Format format = Format::kRecords;
};

std::vector<double> parse_values(std::istream& in) {
  std::vector<double> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(v)) {
      throw FormatError("value " + std::to_string(values.size()) + ": cannot parse '" + token +
                        "' as a finite number");
    }
    values.push_back(v);
  }
  if (values.empty()) throw FormatError("no values to rank");
  return values;
}

int run_softrank(const SoftRankArgs& a) {
  std::vector<double> values;
  if (a.input == "-") {
    values = parse_values(std::cin);
  } else {
    std::ifstream in(a.input);
    if (!in) throw std::runtime_error("cannot open " + a.input);
    values = parse_values(in);
  }
  SoftRankParams params;
  params.epsilon = a.epsilon;
  params.input_scale = a.input_scale;
  params.validate();

  const SoftRank op(values, params);
  const auto hard = hard_rank(values);
  std::vector<double> jac;
  if (a.jacobian) jac = soft_rank_jacobian(values, params);

  const std::size_t n = values.size();
  Report report;
  for (std::size_t i = 0; i < n; ++i) {
    report.row()
        .add("i", static_cast<std::uint64_t>(i))
        .add("value", values[i])
        .add("soft_rank", op.ranks()[i])
        .add("hard_rank", static_cast<std::int64_t>(hard[i]));
    if (a.jacobian) {
      report.add("jacobian_row", format_list(std::span<const double>(jac).subspan(i * n, n)));
    }
  }
  report.print(std::cout, a.format);
  return kExitOk;
}

// ------------------------------------------------------------------- loss

struct LossArgs {
  std::string embeddings;
  std::string manifest;
  std::optional<std::string> classifier;
  double epsilon = 1.0;
  std::optional<double> input_scale;
  std::optional<std::string> grad_out;
  Format format = Format::kRecords;
};

double frobenius(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

int run_loss(const LossArgs& a) {
  const Matrix emb = read_embeddings(fs::path(a.embeddings));
  const RetrievalManifest manifest = read_manifest(a.manifest);
  if (manifest.size() != emb.rows()) {
    throw FormatError("manifest has " + std::to_string(manifest.size()) +
                      " records but the embedding file has " + std::to_string(emb.rows()) +
                      " rows");
  }
  EmbeddingBatch batch{emb, {}, {}};
  for (const auto& r : manifest.records) {
    batch.ids.push_back(r.person_id);
    batch.modalities.push_back(r.modality);
  }
  SoftRankParams params;
  params.epsilon = a.epsilon;
  params.input_scale = a.input_scale;
  params.validate();

  LossReport loss;
  if (a.classifier) {
    const Matrix w = read_embeddings(fs::path(*a.classifier));
    loss = total_loss(batch, w, params);
  } else {
    loss = cmr_loss(batch, params);
  }
  if (!std::isfinite(loss.total)) throw NumericalFailure("loss is not finite");
  if (a.grad_out) write_embeddings(fs::path(*a.grad_out), loss.grad);

  Report report;
  report.add("batch", static_cast<std::uint64_t>(emb.rows()))
      .add("dim", static_cast<std::uint64_t>(emb.cols()))
      .add("total", loss.total)
      .add("id", loss.id_component)
      .add("cmr", loss.cmr_component)
      .add("grad_norm", frobenius(loss.grad));
  if (a.classifier) report.add("classifier_grad_norm", frobenius(loss.classifier_grad));
  report.print(std::cout, a.format);
  return kExitOk;
}

// -------------------------------------------------------------- gradcheck

struct GradcheckArgs {
  std::uint64_t seed = 0;
  std::size_t instances = 100;
  Format format = Format::kRecords;
};

int run_gradcheck(const GradcheckArgs& a) {
  const auto results = gradcheck_suite(a.seed, a.instances);
  Report report;
  bool ok = true;
  for (const auto& r : results) {
    report.row()
        .add("suite", r.name)
        .add("instances", static_cast<std::uint64_t>(r.instances))
        .add("redrawn", static_cast<std::uint64_t>(r.redrawn))
        .add("max_error", r.max_error)
        .add("tolerance", r.tolerance)
        .add("kind", r.relative ? "relative" : "absolute")
        .add("status", r.passed ? "PASS" : "FAIL");
    ok = ok && r.passed;
  }
  report.print(std::cout, a.format);
  return ok ? kExitOk : kExitNumerical;
}

// ------------------------------------------------------------------- eval

struct EvalArgs {
  std::string query;
  std::string query_manifest;
  std::string gallery;
  std::string gallery_manifest;
  std::optional<std::size_t> shot;
  std::size_t repeats = 10;
  bool no_cam_filter = false;
  std::uint64_t seed = 0;
  std::optional<std::string> dump;
  std::size_t dump_top = 20;
  Format format = Format::kRecords;
};

EvalSet load_set(const std::string& emb_path, const std::string& manifest_path) {
  EvalSet set{read_embeddings(fs::path(emb_path)), read_manifest(manifest_path)};
  if (set.manifest.size() != set.embeddings.rows()) {
    throw FormatError(manifest_path + ": " + std::to_string(set.manifest.size()) +
                      " records for " + std::to_string(set.embeddings.rows()) +
                      " embedding rows in " + emb_path);
  }
  return set;
}

void write_dump(const std::string& path, const EvalSet& query, const EvalSet& gallery,
                const std::vector<QueryRanking>& rankings, std::size_t top) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const auto& q : rankings) {
    const auto& qr = query.manifest.records[q.query_index];
    out << "query=" << qr.key << " id=" << qr.person_id << " ranked=";
    const std::size_t n = std::min(top, q.gallery_order.size());
    for (std::size_t j = 0; j < n; ++j) {
      const auto& g = gallery.manifest.records[q.gallery_order[j]];
      out << (j ? "," : "") << g.key << ':' << (g.person_id == qr.person_id ? '+' : '-') << ':'
          << format_double(q.distances[j]);
    }
    out << '\n';
  }
}

int run_eval(const EvalArgs& a) {
  const EvalSet query = load_set(a.query, a.query_manifest);
  const EvalSet gallery = load_set(a.gallery, a.gallery_manifest);
  EvalConfig cfg;
  cfg.camera_filter = !a.no_cam_filter;

  MetricsReport m;
  if (a.shot) {
    Rng rng(a.seed);
    m = evaluate_repeated(query, gallery, cfg, *a.shot, a.repeats, rng);
  } else {
    m = evaluate(query, gallery, cfg);
  }
  if (a.dump) {
    std::vector<QueryRanking> rankings;
    evaluate(query, gallery, cfg, &rankings);
    write_dump(*a.dump, query, gallery, rankings, a.dump_top);
  }

  Report report;
  for (const auto& [k, v] : m.cmc) report.add("cmc" + std::to_string(k), v);
  report.add("map", m.map_score)
      .add("minp", m.minp)
      .add("n_queries", static_cast<std::uint64_t>(m.n_queries))
      .add("n_skipped", static_cast<std::uint64_t>(m.n_skipped));
  report.print(std::cout, a.format);
  return kExitOk;
}

// -------------------------------------------------------------- train-toy

struct TrainToyArgs {
  ToyRunConfig run;
  std::optional<std::uint64_t> data_seed;
  std::optional<double> input_scale;
  bool no_id = false;
  bool no_cmr = false;
  bool no_maa = false;
  double maa_probability = 1.0;
  std::optional<std::string> log;
  std::optional<std::string> embeddings_out;
  std::optional<std::string> manifest_out;
  Format format = Format::kRecords;
};

void add_metrics(Report& report, const std::string& prefix, const MetricsReport& m) {
  for (const auto& [k, v] : m.cmc) report.add(prefix + "cmc" + std::to_string(k), v);
  report.add(prefix + "map", m.map_score).add(prefix + "minp", m.minp);
}

int run_train_toy(TrainToyArgs a) {
  ToyRunConfig& cfg = a.run;
  const std::uint64_t data_seed = a.data_seed.value_or(cfg.train.seed);
  cfg.data.seed = data_seed;
  cfg.image_data.seed = data_seed;
  cfg.image_data.n_identities = cfg.data.n_identities;
  cfg.image_data.samples_per_identity_per_modality = cfg.data.samples_per_identity_per_modality;
  cfg.train.softrank.input_scale = a.input_scale;
  cfg.train.use_id_loss = !a.no_id;
  cfg.train.use_cmr_loss = !a.no_cmr;
  if (cfg.image_mode && !a.no_maa) {
    MaaConfig maa;
    maa.apply_probability = a.maa_probability;
    cfg.train.maa = maa;
  }

  std::ofstream log;
  if (a.log) {
    log.open(*a.log);
    if (!log) throw std::runtime_error("cannot open " + *a.log);
  }
  double last_total = 0.0;
  std::size_t steps = 0;
  ToyRunResult result;
  try {
    result = run_toy(cfg, [&](const StepLog& s) {
      last_total = s.total;
      ++steps;
      if (!log.is_open()) return;
      nlohmann::ordered_json rec;
      rec["epoch"] = s.epoch;
      rec["step"] = s.step;
      rec["total"] = s.total;
      rec["id"] = s.id_component;
      rec["cmr"] = s.cmr_component;
      log << rec.dump() << '\n';
    });
  } catch (const DivergenceError& e) {
    throw NumericalFailure(e.what());
  }
  if (a.embeddings_out) write_embeddings(fs::path(*a.embeddings_out), result.heldout_embeddings);
  if (a.manifest_out) write_manifest(*a.manifest_out, result.heldout.manifest);

  Report report;
  report.add("train_samples", static_cast<std::uint64_t>(result.train_set.size()))
      .add("heldout_samples", static_cast<std::uint64_t>(result.heldout.size()))
      .add("steps", static_cast<std::uint64_t>(steps))
      .add("final_loss", last_total)
      .add("raw_cmc1", result.raw_metrics.cmc.at(1))
      .add("untrained_cmc1", result.untrained_metrics.cmc.at(1));
  add_metrics(report, "", result.trained_metrics);
  report.add("untrained_footrule", result.untrained_footrule)
      .add("footrule", result.trained_footrule);
  report.print(std::cout, a.format);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-modality retrieval toolkit: augmentation, soft ranks, ranking loss, "
               "retrieval metrics and a toy trainer."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "xmodal 0.1.0");

  AugmentArgs aug;
  auto* c_aug = app.add_subcommand("augment", "Augment a PNG image or a directory of PNGs");
  c_aug->add_option("input", aug.input, "Image file or directory")->required()->check(CLI::ExistingPath);
  c_aug->add_option("--out,-o", aug.out, "Output file, or directory for directory input")
      ->required();
  c_aug->add_option("--strategy", aug.strategy, "wg, cc, sj or maa")
      ->check(CLI::IsMember({"wg", "cc", "sj", "maa"}));
  c_aug->add_option("--seed", aug.seed, "RNG seed");
  c_aug->add_option("--apply-prob", aug.apply_probability, "maa: probability of augmenting")
      ->check(CLI::Range(0.0, 1.0));
  c_aug->add_option("--weights", aug.weights, "wg: fixed channel weights a1,a2,a3")
      ->delimiter(',');
  c_aug->add_option("--bg", aug.background, "cc: background channel r|g|b");
  c_aug->add_option("--fg", aug.foreground, "cc: foreground channel r|g|b");
  c_aug->add_option("--channel", aug.channel, "sj: replicated channel r|g|b");
  c_aug->add_option("--beta1", aug.beta1, "sj: blend weight of the original image")
      ->check(CLI::Range(0.0, 1.0));
  add_format_option(c_aug, aug.format);

  SoftRankArgs sr;
  auto* c_sr = app.add_subcommand("softrank", "Soft and hard ranks of a value vector");
  c_sr->add_option("input", sr.input, "Whitespace-separated values; '-' reads stdin");
  c_sr->add_option("--epsilon", sr.epsilon, "Regularisation strength (> 0)");
  c_sr->add_option("--input-scale", sr.input_scale, "Input multiplier (default 2n)");
  c_sr->add_flag("--jacobian", sr.jacobian, "Also print the dense Jacobian, one row per value");
  add_format_option(c_sr, sr.format);

  LossArgs loss;
  auto* c_loss = app.add_subcommand("loss", "Evaluate the ranking loss on an embedding batch");
  c_loss->add_option("--embeddings", loss.embeddings, "Embedding file")
      ->required()->check(CLI::ExistingFile);
  c_loss->add_option("--manifest", loss.manifest, "Manifest giving id and modality per row")
      ->required()->check(CLI::ExistingFile);
  c_loss->add_option("--classifier", loss.classifier,
                     "Classifier weights (classes x dim embedding file); adds the ID term")
      ->check(CLI::ExistingFile);
  c_loss->add_option("--epsilon", loss.epsilon, "Soft-rank regularisation");
  c_loss->add_option("--input-scale", loss.input_scale, "Soft-rank input multiplier");
  c_loss->add_option("--grad-out", loss.grad_out, "Write d(loss)/d(embeddings) here");
  add_format_option(c_loss, loss.format);

  GradcheckArgs gc;
  auto* c_gc = app.add_subcommand("gradcheck", "Finite-difference checks of every gradient");
  c_gc->add_option("--seed", gc.seed, "RNG seed");
  c_gc->add_option("--instances", gc.instances, "Random instances per suite")
      ->check(CLI::PositiveNumber);
  add_format_option(c_gc, gc.format);

  EvalArgs ev;
  auto* c_ev = app.add_subcommand("eval", "Cross-modality retrieval metrics");
  c_ev->add_option("--query", ev.query, "Query embedding file")->required()->check(CLI::ExistingFile);
  c_ev->add_option("--query-manifest", ev.query_manifest, "Query manifest")
      ->required()->check(CLI::ExistingFile);
  c_ev->add_option("--gallery", ev.gallery, "Gallery embedding file")
      ->required()->check(CLI::ExistingFile);
  c_ev->add_option("--gallery-manifest", ev.gallery_manifest, "Gallery manifest")
      ->required()->check(CLI::ExistingFile);
  c_ev->add_option("--shot", ev.shot, "Sample 1 or 10 gallery images per identity and camera")
      ->check(CLI::IsMember({1, 10}));
  c_ev->add_option("--repeats", ev.repeats, "Gallery draws averaged with --shot")
      ->check(CLI::PositiveNumber);
  c_ev->add_flag("--no-cam-filter", ev.no_cam_filter,
                 "Keep gallery entries sharing person and camera with the query");
  c_ev->add_option("--seed", ev.seed, "RNG seed for gallery sampling");
  c_ev->add_option("--dump", ev.dump, "Write each query's ranked list (full gallery) here");
  c_ev->add_option("--dump-top", ev.dump_top, "Entries per ranked list in the dump");
  add_format_option(c_ev, ev.format);

  TrainToyArgs tt;
  auto* c_tt = app.add_subcommand("train-toy", "Train and evaluate the toy model on synthetic data");
  c_tt->add_option("--ids", tt.run.data.n_identities, "Identities")->check(CLI::Range(4, 100000));
  c_tt->add_option("--per-modality", tt.run.data.samples_per_identity_per_modality,
                   "Samples per identity per modality");
  c_tt->add_option("--dim", tt.run.data.input_dim, "Input dimension (vector mode)");
  c_tt->add_option("--spread", tt.run.data.cluster_spread, "Within-identity noise");
  c_tt->add_option("--offset", tt.run.data.modality_offset_scale, "Modality offset scale");
  c_tt->add_option("--data-seed", tt.data_seed, "Data seed (defaults to --seed)");
  c_tt->add_flag("--image-mode", tt.run.image_mode, "3-channel image patterns with augmentation");
  c_tt->add_option("--image-size", tt.run.image_data.size, "Image side (image mode)");
  c_tt->add_option("--noise", tt.run.image_data.noise, "Pixel noise (image mode)");
  c_tt->add_flag("--no-maa", tt.no_maa, "Image mode: skip augmentation");
  c_tt->add_option("--maa-prob", tt.maa_probability, "Image mode: augmentation probability")
      ->check(CLI::Range(0.0, 1.0));
  c_tt->add_option("--p", tt.run.train.p, "Identities per batch");
  c_tt->add_option("--k", tt.run.train.k, "Samples per identity per batch (even)");
  c_tt->add_option("--epochs", tt.run.train.epochs, "Epochs");
  c_tt->add_option("--lr", tt.run.train.learning_rate, "Learning rate");
  c_tt->add_option("--weight-decay", tt.run.train.adam.weight_decay, "L2 weight decay");
  c_tt->add_option("--epsilon", tt.run.train.softrank.epsilon, "Soft-rank regularisation");
  c_tt->add_option("--input-scale", tt.input_scale, "Soft-rank input multiplier (default 2n)");
  c_tt->add_flag("--no-id", tt.no_id, "Drop the identity loss");
  c_tt->add_flag("--no-cmr", tt.no_cmr, "Drop the ranking loss");
  c_tt->add_option("--embed-dim", tt.run.embed_dim, "Embedding dimension");
  c_tt->add_option("--holdout", tt.run.holdout_fraction, "Held-out identity fraction")
      ->check(CLI::Range(0.0, 1.0));
  c_tt->add_option("--seed", tt.run.train.seed, "Seed for initialisation and batches");
  c_tt->add_option("--log", tt.log, "Write one JSON record per step here");
  c_tt->add_option("--embeddings", tt.embeddings_out, "Write held-out embeddings here");
  c_tt->add_option("--manifest", tt.manifest_out, "Write the held-out manifest here");
  add_format_option(c_tt, tt.format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_aug->parsed()) return run_augment(aug);
    if (c_sr->parsed()) return run_softrank(sr);
    if (c_loss->parsed()) return run_loss(loss);
    if (c_gc->parsed()) return run_gradcheck(gc);
    if (c_ev->parsed()) return run_eval(ev);
    if (c_tt->parsed()) return run_train_toy(tt);
  } catch (const NumericalFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace xmodal::cli

int main(int argc, char** argv) { return xmodal::cli::main(argc, argv); }
