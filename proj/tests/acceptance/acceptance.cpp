// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "../support/overlap_oracle.hpp"
#include "../support/temp_dir.hpp"
#include "sonosynth/cli.hpp"
#include "sonosynth/dataset.hpp"
#include "sonosynth/metrics.hpp"
#include "sonosynth/parallel.hpp"
#include "sonosynth/phantom.hpp"
#include "sonosynth/pipeline.hpp"
#include "sonosynth/raw_io.hpp"
#include "sonosynth/rf.hpp"
#include "sonosynth/speckle.hpp"

using namespace sonosynth;
using testing_support::TempDir;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// Lines whose full beam support lies inside the phantom, and samples clear of
// the pulse half-length at both window edges.
RegionSelection interior(const TransducerConfig& t, std::size_t pulse_half, std::size_t window) {
  RegionSelection r;
  const double margin = t.beam_cutoff_sigmas * t.lateral_beam_sigma_mm;
  while (t.line_lateral_mm(r.first_line) < t.lateral_min_mm + margin) ++r.first_line;
  r.end_line = static_cast<std::size_t>(t.num_lines);
  while (t.line_lateral_mm(r.end_line - 1) > t.lateral_max_mm - margin) --r.end_line;
  r.first_sample = pulse_half;
  r.end_sample = window - pulse_half;
  return r;
}

Outcome speckle() {
  const auto t0 = Clock::now();
  const TransducerConfig t;
  const Pulse pulse = pulse_waveform(t);
  const unsigned threads = default_thread_count();
  std::vector<double> all, decimated;
  for (std::uint64_t seed : {101u, 102u}) {
    PhantomSpec spec;
    spec.seed = seed;
    const EnvelopeImage env = detect_envelope(synthesize_rf(place_scatterers(spec), t, threads));
    RegionSelection r = interior(t, pulse.half_length(), env.window_samples);
    auto v = collect_region(env, r);
    all.insert(all.end(), v.begin(), v.end());
    // Roughly independent samples for the goodness-of-fit test: two speckle
    // FWHMs apart along each axis.
    const double axial_fwhm = 2.0 * std::sqrt(2.0 * std::log(2.0)) * pulse.envelope_sigma_s * t.sampling_frequency_hz;
    const double lateral_fwhm = 2.0 * std::sqrt(2.0 * std::log(2.0)) * t.lateral_beam_sigma_mm;
    r.sample_stride = static_cast<std::size_t>(std::ceil(2.0 * axial_fwhm));
    r.line_stride = static_cast<std::size_t>(std::ceil(2.0 * lateral_fwhm / (t.line_lateral_mm(1) - t.line_lateral_mm(0))));
    v = collect_region(env, r);
    decimated.insert(decimated.end(), v.begin(), v.end());
  }
  const EnvelopeMoments m = envelope_moments(all);
  const RayleighFit fit = rayleigh_ks_test(decimated);
  const double secs = seconds_since(t0);
  const bool pass = std::abs(m.snr - rayleigh_snr()) <= 0.05 && m.count >= 100000 && fit.p_value > 0.01 && secs < 60.0;
  return {pass, fmt("SNR %.4f (target %.3f +- 0.05, n=%zu), Rayleigh KS D=%.4f p=%.3f (n=%zu, need p > 0.01), %.1f s",
                    m.snr, rayleigh_snr(), m.count, fit.ks_statistic, fit.p_value, fit.count, secs)};
}

Outcome contrast() {
  const auto t0 = Clock::now();
  const TransducerConfig t;
  const Pulse pulse = pulse_waveform(t);
  const unsigned threads = default_thread_count();
  const double radius = 3.0, cx = 0.0, cz = 60.0;
  // Inner core stays 1.5 mm clear of the edge; background starts 3 mm out.
  const double core = radius - 1.5, clear = radius + 3.0;
  double in_sum = 0.0, out_sum = 0.0;
  std::size_t in_n = 0, out_n = 0;
  const int frames = 24;
  for (int f = 0; f < frames; ++f) {
    PhantomSpec spec;
    spec.seed = 500 + static_cast<std::uint64_t>(f);
    Lesion l;
    l.shape = LesionShape::circle;
    l.center_lateral_mm = cx;
    l.center_axial_mm = cz;
    l.radius_mm = radius;
    l.echogenicity = Echogenicity::hyperechoic;
    l.k = 10;
    spec.lesions.push_back(l);
    const EnvelopeImage env = detect_envelope(synthesize_rf(place_scatterers(spec), t, threads));
    const RegionSelection r = interior(t, pulse.half_length(), env.window_samples);
    for (std::size_t line = r.first_line; line < r.end_line; ++line) {
      const double x = env.lateral.at(static_cast<double>(line));
      for (std::size_t i = r.first_sample; i < r.end_sample; ++i) {
        const double d = std::hypot(x - cx, env.axial.at(static_cast<double>(i)) - cz);
        if (d <= core) {
          in_sum += env.at(i, line);
          ++in_n;
        } else if (d >= clear) {
          out_sum += env.at(i, line);
          ++out_n;
        }
      }
    }
  }
  const double ratio = (in_sum / in_n) / (out_sum / out_n);
  const double secs = seconds_since(t0);
  const bool pass = std::abs(ratio - 10.0) <= 1.0 && secs < 60.0;
  return {pass, fmt("inside/background envelope mean %.3f (target 10 +- 10%%; %d frames, %zu core samples), %.1f s",
                    ratio, frames, in_n, secs)};
}

Outcome metric_oracle() {
  std::mt19937_64 rng(2026);
  std::size_t mismatches = 0, compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // Vary class frequencies so sparse and empty classes are covered.
    std::discrete_distribution<int> labels({1.0 + trial % 7, 1.0 * (trial % 3), 1.0 * (trial % 5)});
    LabelGrid p(32, 32), g(32, 32);
    for (auto& v : p.values()) v = static_cast<std::uint8_t>(labels(rng));
    for (auto& v : g.values()) v = static_cast<std::uint8_t>(labels(rng));
    for (std::uint8_t k = 0; k < kNumClasses; ++k) {
      const ConfusionCounts c = confusion(p, g, k);
      const oracle::Overlap o = oracle::overlap(p, g, k);
      if (dsc(c) != o.dsc || f2(c) != o.f2) ++mismatches;
      ++compared;
    }
  }
  const ConfusionCounts worked{3, 1, 2, 0};
  const double d = *dsc(worked), f = *f2(worked);
  const bool pass = mismatches == 0 && std::abs(d - 0.6667) < 5e-5 && f == 0.625;
  return {pass, fmt("%zu/%zu class comparisons exact on 1000 random 32x32 pairs; tp=3 fp=1 fn=2 -> DSC %.4f F2 %.4f",
                    compared - mismatches, compared, d, f)};
}

Outcome geometry() {
  std::vector<Lesion> lesions;
  for (double r : {2.0, 2.5, 3.0}) {
    Lesion l;
    l.radius_mm = r;
    lesions.push_back(l);
  }
  for (auto [a, b, th] : {std::tuple{5.0, 2.0, 0.3}, {7.0, 3.0, 1.2}, {9.0, 5.0, 2.5}, {6.0, 2.0, 0.0}}) {
    Lesion l;
    l.shape = LesionShape::ellipse;
    l.semi_major_mm = a;
    l.semi_minor_mm = b;
    l.orientation_rad = th;
    lesions.push_back(l);
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> x(-8.0, 8.0), z(45.0, 75.0);
  double worst = 0.0;
  std::size_t checked = 0;
  for (auto l : lesions) {
    for (int rep = 0; rep < 20; ++rep) {
      l.center_lateral_mm = x(rng);
      l.center_axial_mm = z(rng);
      PhantomSpec spec;
      spec.lesions = {l};
      const ClassMask mask = rasterize_mask(spec, kMaskSize, kMaskSize);
      std::size_t n = 0;
      for (auto v : mask.labels.values()) n += v != 0;
      const double area = n * mask.lateral.step_mm * mask.axial.step_mm;
      worst = std::max(worst, std::abs(area - l.area_mm2()) / l.area_mm2());
      ++checked;
    }
  }
  return {worst <= 0.02, fmt("worst relative area error %.4f over %zu lesions (radii >= 2 mm, 388x388, limit 0.02)", worst, checked)};
}

// Returns an empty string when every file matches, else the first difference.
std::string compare_trees(const fs::path& a, const fs::path& b, std::size_t& files) {
  std::set<fs::path> ra, rb;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) ra.insert(fs::relative(e.path(), a));
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) rb.insert(fs::relative(e.path(), b));
  if (ra != rb) return "file sets differ";
  files = ra.size();
  for (const auto& rel : ra)
    if (read_text_file(a / rel) != read_text_file(b / rel)) return rel.string() + " differs";
  return {};
}

struct Trees {
  TempDir dir{"accept"};
  fs::path first = dir / "run1";
  fs::path second = dir / "run2";
  int code1 = -1, code2 = -1;
  double secs = 0.0;
};

Outcome determinism(Trees& trees) {
  const auto t0 = Clock::now();
  std::ostringstream out, err;
  trees.code1 = cli::run({"sonosynth", "simulate", "--n", "20", "--seed", "7", "--out", trees.first.string()}, out, err);
  trees.code2 = cli::run({"sonosynth", "simulate", "--n", "20", "--seed", "7", "--out", trees.second.string()}, out, err);
  trees.secs = seconds_since(t0);
  if (trees.code1 != 0 || trees.code2 != 0) return {false, fmt("simulate exited %d / %d: %s", trees.code1, trees.code2, err.str().c_str())};
  std::size_t files = 0;
  const std::string diff = compare_trees(trees.first, trees.second, files);
  return {diff.empty(), diff.empty() ? fmt("`simulate --n 20 --seed 7` twice: %zu files byte-identical, %.1f s", files, trees.secs)
                                     : "trees differ: " + diff};
}

Outcome shapes(const Trees& trees) {
  if (trees.code1 != 0) return {false, "no dataset to inspect"};
  const fs::path root = trees.first;
  const DatasetManifest m = read_manifest(root);
  const long n = kNetworkInputSize, pad = kMirrorPad, last = kMirrorPad + kResizedSize - 1;
  auto mirror = [&](long i) { return i < pad ? 2 * pad - i : (i > last ? 2 * last - i : i); };
  std::size_t inputs = 0, masks = 0, failures = 0;
  std::string first_failure;
  auto fail = [&](const std::string& what) {
    if (failures++ == 0) first_failure = what;
  };
  for (const auto& e : m.entries) {
    for (const char* stage : {"envelope", "bmode"}) {
      const NetworkInput in = load_network_input(root / e.files.at(stage));
      ++inputs;
      if (in.samples.rows() != kNetworkInputSize || in.samples.cols() != kNetworkInputSize) {
        fail(e.id + " " + stage + " shape");
        continue;
      }
      for (float v : in.samples.values())
        if (!(v >= 0.0f && v <= 1.0f)) {
          fail(e.id + " " + stage + " range");
          break;
        }
      for (long r = 0; r < n; ++r)
        for (long c = 0; c < n; ++c)
          if (in.samples(r, c) != in.samples(mirror(r), mirror(c))) {
            fail(e.id + " " + stage + fmt(" reflection at (%ld, %ld)", r, c));
            r = n;
            break;
          }
    }
    const ClassMask mask = load_mask(root / e.files.at("mask"));
    ++masks;
    if (mask.width() != kMaskSize || mask.height() != kMaskSize) fail(e.id + " mask shape");
    for (auto v : mask.labels.values())
      if (v > 2) {
        fail(e.id + " mask label");
        break;
      }
  }
  return {failures == 0 && inputs > 0,
          failures == 0 ? fmt("%zu inputs 572x572 in [0,1] with exact reflection padding, %zu masks 388x388 in {0,1,2}", inputs, masks)
                        : "first failure: " + first_failure};
}

Outcome split_counts_700() {
  const SplitCounts c = split_counts(700, SplitFractions{});
  const auto s = assign_splits(700, SplitFractions{}, 42);
  const auto count = [&](Split x) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), x)); };
  const bool pass = c == SplitCounts{420, 105, 175} && count(Split::train) == 420 && count(Split::val) == 105 &&
                    count(Split::test) == 175;
  return {pass, fmt("n=700 -> %zu/%zu/%zu (assigned %zu/%zu/%zu), expected 420/105/175", c.train, c.val, c.test,
                    count(Split::train), count(Split::val), count(Split::test))};
}

}  // namespace

int main() {
  int failed = 0;
  auto report = [&](const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %-22s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  };

  Trees trees;
  report("speckle-statistics", speckle);
  report("contrast-fidelity", contrast);
  report("metric-oracle", metric_oracle);
  report("mask-geometry", geometry);
  report("determinism", [&] { return determinism(trees); });
  report("preprocessing-shapes", [&] { return shapes(trees); });
  report("split-counts", split_counts_700);

  std::printf("%d of 7 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
