// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include "sonosynth/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "sonosynth/config.hpp"
#include "sonosynth/dataset.hpp"
#include "sonosynth/errors.hpp"
#include "sonosynth/external.hpp"
#include "sonosynth/metrics.hpp"
#include "sonosynth/parallel.hpp"
#include "sonosynth/raw_io.hpp"

namespace sonosynth::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kPanelGap = 8;

struct SimulateArgs {
  std::optional<long long> n;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string config_file;
  std::vector<std::string> overrides;
  std::optional<unsigned> threads;
  bool keep_rf = false;
  bool force = false;
  bool print_config = false;
};

struct EvaluateArgs {
  std::string truth;
  std::vector<std::string> preds;
  std::string split = "test";
  std::string report_dir;
  std::optional<unsigned> threads;
  bool per_image = false;
};

struct RenderArgs {
  std::string dataset;
  std::vector<std::string> ids;
  std::string out;
  std::string stage = "all";
  std::string pred_envelope;
  std::string pred_bmode;
};

struct ValidateArgs {
  std::string dataset;
};

struct IngestArgs {
  std::string list;
  std::string out;
  bool derive_bmode = false;
  double dynamic_range_db = 50.0;
  std::size_t mask_size = kMaskSize;
};

unsigned resolve_threads(const std::optional<unsigned>& flag) {
  return flag && *flag > 0 ? *flag : default_thread_count();
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  ConfigMap values = to_config_map(DatasetConfig{});
  if (!a.config_file.empty()) {
    for (const auto& [k, v] : parse_config_text(read_text_file(a.config_file))) values[k] = v;
  }
  for (const auto& o : a.overrides) apply_override(values, o);
  if (a.n) {
    if (*a.n < 1) throw ConfigError("--n must be at least 1");
    values["dataset.n_images"] = std::to_string(*a.n);
  }
  if (a.seed) values["dataset.seed"] = std::to_string(*a.seed);
  if (a.threads) values["run.threads"] = std::to_string(*a.threads);
  if (a.keep_rf) values["dataset.keep_rf"] = "true";

  DatasetConfig config = dataset_config_from_map(values);
  config.validate();
  if (a.print_config) {
    out << config_to_text(to_config_map(config));
    return kOk;
  }

  const fs::path root = a.out;
  if (fs::exists(root / kManifestFileName) && !a.force) {
    throw IoError(root.string() + " already holds a dataset (use --force to overwrite)");
  }
  const DatasetManifest manifest = build_dataset(root, config);
  const SplitCounts c = manifest.counts();
  out << "manifest: " << (root / kManifestFileName).string() << "\n"
      << "dataset_id: " << manifest.dataset_id << "\n"
      << "train: " << c.train << "\nval: " << c.val << "\ntest: " << c.test << "\n";
  return kOk;
}

Grid<std::uint8_t> load_prediction(const fs::path& dir, const std::string& id) {
  const fs::path raw = dir / (id + ".mask.u8");
  if (fs::exists(raw)) return load_mask(raw).labels;
  const fs::path png = dir / (id + ".mask.png");
  Gray8 g = read_png(png);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.values()[i] >= kNumClasses) {
      throw ValidationError(png.string() + ": label " + std::to_string(g.values()[i]) + " outside {0,1,2}");
    }
  }
  return g;
}

bool has_prediction(const fs::path& dir, const std::string& id) {
  return fs::exists(dir / (id + ".mask.u8")) || fs::exists(dir / (id + ".mask.png"));
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const fs::path truth_root = a.truth;
  const DatasetManifest manifest = read_manifest(truth_root);

  std::vector<const ManifestEntry*> entries;
  if (a.split == "all") {
    for (const auto& e : manifest.entries) entries.push_back(&e);
  } else {
    Split split;
    try {
      split = split_from_string(a.split);
    } catch (const ValidationError&) {
      throw ConfigError("unknown split '" + a.split + "' (expected train, val, test or all)");
    }
    entries = manifest.entries_in(split);
  }
  if (entries.empty()) throw ValidationError("no images in split '" + a.split + "' of " + truth_root.string());

  std::vector<std::pair<Modality, fs::path>> preds;
  for (const auto& spec : a.preds) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw ConfigError("--pred expects MODALITY=DIR, got '" + spec + "'");
    const Modality m = modality_from_string(spec.substr(0, eq));
    for (const auto& p : preds) {
      if (p.first == m) throw ConfigError(std::string("--pred given twice for ") + to_string(m));
    }
    preds.emplace_back(m, fs::path(spec.substr(eq + 1)));
  }

  bool missing_any = false;
  for (const auto& [m, dir] : preds) {
    if (!fs::is_directory(dir)) throw IoError("prediction directory not found: " + dir.string());
    for (const auto* e : entries) {
      if (!has_prediction(dir, e->id)) {
        err << "missing " << to_string(m) << " prediction for " << e->id << "\n";
        missing_any = true;
      }
    }
  }
  if (missing_any) return kValidation;

  EvalReport report;
  report.dataset_id = manifest.dataset_id;
  report.split = a.split;
  const unsigned threads = resolve_threads(a.threads);
  for (const auto& [m, dir] : preds) {
    std::vector<ImageScores> scores(entries.size());
    parallel_for(entries.size(), threads, [&](std::size_t i) {
      const ManifestEntry& e = *entries[i];
      const ClassMask truth = load_mask(truth_root / e.files.at("mask"));
      scores[i] = score_image(e.id, load_prediction(dir, e.id), truth.labels);
    });
    report.modalities.push_back(summarize(to_string(m), std::move(scores)));
  }

  out << report_table(report);
  if (a.per_image) out << "\n" << report_per_image(report);
  if (!a.report_dir.empty()) {
    const fs::path dir = a.report_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    write_text_file(dir / "report.json", report_to_json(report));
    write_text_file(dir / "report.txt", report_table(report));
    write_text_file(dir / "per_image.txt", report_per_image(report));
    out << "report: " << (dir / "report.json").string() << "\n";
  }
  return kOk;
}

// Drops the mirror border so panels show the 512 x 512 image.
Gray8 input_panel(const NetworkInput& in) {
  Image core(kResizedSize, kResizedSize);
  for (std::size_t r = 0; r < kResizedSize; ++r)
    for (std::size_t c = 0; c < kResizedSize; ++c) core(r, c) = in.samples(r + kMirrorPad, c + kMirrorPad);
  return to_gray8(core);
}

Gray8 mask_panel(const Grid<std::uint8_t>& labels) {
  return mask_to_gray8(resize_nearest(labels, kResizedSize, kResizedSize));
}

Gray8 side_by_side(const std::vector<Gray8>& panels) {
  const std::size_t rows = panels.front().rows();
  std::size_t cols = 0;
  for (const auto& p : panels) cols += p.cols();
  cols += kPanelGap * (panels.size() - 1);
  Gray8 out(rows, cols, 255);
  std::size_t x = 0;
  for (const auto& p : panels) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < p.cols(); ++c) out(r, x + c) = p(r, c);
    x += p.cols() + kPanelGap;
  }
  return out;
}

int cmd_render(const RenderArgs& a, std::ostream& out) {
  static const std::vector<std::string> stages{"all", "envelope", "bmode", "mask"};
  if (std::find(stages.begin(), stages.end(), a.stage) == stages.end()) {
    throw ConfigError("unknown stage '" + a.stage + "' (expected all, envelope, bmode or mask)");
  }
  const fs::path root = a.dataset;
  const DatasetManifest manifest = read_manifest(root);
  std::vector<const ManifestEntry*> entries;
  if (a.ids.empty()) {
    for (const auto& e : manifest.entries) entries.push_back(&e);
  } else {
    for (const auto& id : a.ids) {
      const ManifestEntry* e = manifest.find(id);
      if (!e) throw ValidationError("no image '" + id + "' in " + root.string());
      entries.push_back(e);
    }
  }
  if ((!a.pred_envelope.empty() || !a.pred_bmode.empty()) && entries.size() != 1) {
    throw ConfigError("prediction panels need exactly one --id");
  }

  const fs::path out_dir = a.out;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  for (const ManifestEntry* e : entries) {
    auto stage_file = [&](const std::string& stage) -> std::optional<fs::path> {
      auto it = e->files.find(stage);
      if (it == e->files.end()) return std::nullopt;
      return root / it->second;
    };
    std::vector<Gray8> panels;
    auto add_input = [&](const std::string& stage) {
      if (auto p = stage_file(stage)) panels.push_back(input_panel(load_network_input(*p)));
    };
    if (a.stage == "all" || a.stage == "envelope") add_input("envelope");
    if (a.stage == "all" || a.stage == "bmode") add_input("bmode");
    if (a.stage == "all" || a.stage == "mask") {
      if (auto p = stage_file("mask")) panels.push_back(mask_panel(load_mask(*p).labels));
    }
    if (!a.pred_envelope.empty()) panels.push_back(mask_panel(load_mask(a.pred_envelope).labels));
    if (!a.pred_bmode.empty()) panels.push_back(mask_panel(load_mask(a.pred_bmode).labels));
    if (panels.empty()) throw ValidationError("nothing to render for " + e->id);

    const fs::path file = out_dir / (e->id + ".png");
    write_png(file, side_by_side(panels));
    out << file.string() << " (" << panels.size() << " panels)\n";
  }
  return kOk;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  const ValidationReport report = validate_dataset(a.dataset);
  for (const auto& p : report.problems) out << p << "\n";
  if (!report.ok()) {
    out << report.problems.size() << " problem(s)\n";
    return kValidation;
  }
  out << "ok\n";
  return kOk;
}

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
  const fs::path root = a.out;
  if (fs::exists(root / kManifestFileName)) throw IoError(root.string() + " already holds a dataset");
  IngestOptions opt;
  opt.derive_bmode = a.derive_bmode;
  opt.dynamic_range_db = a.dynamic_range_db;
  opt.mask_size = a.mask_size;
  const auto images = ingest_external(load_external_records(a.list), opt);
  const DatasetManifest m = write_external_set(root, images);
  out << "manifest: " << (root / kManifestFileName).string() << "\n"
      << "dataset_id: " << m.dataset_id << "\n"
      << "images: " << m.entries.size() << "\n";
  return kOk;
}

std::string describe_config_keys() {
  std::string s = "Config keys (file lines `key = value`, or --set key=value):\n";
  for (const auto& k : config_keys()) s += "  " + k.name + "  " + k.description + "\n";
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthetic ultrasound segmentation datasets: simulate, evaluate, render."};
  app.name(args.empty() ? "sonosynth" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  app.set_version_flag("--version", "sonosynth 0.3.0");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a dataset: phantoms, RF, envelope, B-mode, masks");
  simulate->add_option("--n", sim.n, "Number of images (>= 1)");
  simulate->add_option("--seed", sim.seed, "Dataset seed");
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--config", sim.config_file, "Config file with `key = value` lines")->check(CLI::ExistingFile);
  simulate->add_option("--set", sim.overrides, "Override one config key, KEY=VALUE (repeatable)");
  simulate->add_option("--threads", sim.threads, "Worker threads (default: SONOSYNTH_THREADS or all cores)");
  simulate->add_flag("--keep-rf", sim.keep_rf, "Also store raw RF frames");
  simulate->add_flag("--force", sim.force, "Overwrite an existing dataset in --out");
  simulate->add_flag("--print-config", sim.print_config, "Print the resolved config and exit");
  simulate->footer(describe_config_keys());

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score predicted masks against ground truth (DSC, F2)");
  evaluate->add_option("--truth", ev.truth, "Dataset directory with manifest.json (simulated or external)")->required();
  evaluate->add_option("--pred", ev.preds, "MODALITY=DIR with <id>.mask.u8 files; MODALITY is envelope or bmode (repeatable)")
      ->required();
  evaluate->add_option("--split", ev.split, "train, val, test or all")->capture_default_str();
  evaluate->add_option("--report-dir", ev.report_dir, "Write report.json, report.txt and per_image.txt here");
  evaluate->add_option("--threads", ev.threads, "Worker threads (default: SONOSYNTH_THREADS or all cores)");
  evaluate->add_flag("--per-image", ev.per_image, "Also print per-image scores");

  RenderArgs rd;
  auto* render = app.add_subcommand("render", "Write side-by-side PNG panels for dataset images");
  render->add_option("--dataset", rd.dataset, "Dataset directory")->required();
  render->add_option("--id", rd.ids, "Image id (repeatable; default: every image)");
  render->add_option("--out", rd.out, "Output directory for <id>.png")->required();
  render->add_option("--stage", rd.stage, "all, envelope, bmode or mask")->capture_default_str();
  render->add_option("--pred-envelope", rd.pred_envelope, "Predicted mask from the envelope model (.mask.u8)");
  render->add_option("--pred-bmode", rd.pred_bmode, "Predicted mask from the B-mode model (.mask.u8)");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate-dataset", "Check a dataset directory against its manifest");
  validate->add_option("--dataset", va.dataset, "Dataset directory")->required();

  IngestArgs in;
  auto* ingest = app.add_subcommand("ingest-external", "Convert externally acquired images and masks into a test set");
  ingest->add_option("--list", in.list, "JSON array of {id, modality, image, mask, note}")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", in.out, "Output directory")->required();
  ingest->add_flag("--derive-bmode", in.derive_bmode, "Log-compress envelope records into a B-mode input too");
  ingest->add_option("--dynamic-range", in.dynamic_range_db, "Dynamic range (dB) for --derive-bmode")->capture_default_str();
  ingest->add_option("--mask-size", in.mask_size, "Output mask width and height")->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (evaluate->parsed()) return cmd_evaluate(ev, out, err);
    if (render->parsed()) return cmd_render(rd, out);
    if (validate->parsed()) return cmd_validate(va, out);
    if (ingest->parsed()) return cmd_ingest(in, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}

}  // namespace sonosynth::cli
