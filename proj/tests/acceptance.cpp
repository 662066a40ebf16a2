// Acceptance suite: one line per criterion, nonzero exit if a gating
// criterion fails. Criteria 8 and 9 are informational.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "l3/adapters.hpp"
#include "l3/bench.hpp"
#include "l3/container.hpp"
#include "l3/parallel_decoder.hpp"
#include "oracle.hpp"

namespace {

using Clock = std::chrono::steady_clock;

enum class Verdict { kPass, kFail, kInfo };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

l3::RawImage any_random_image(std::uint32_t w, std::uint32_t h, std::mt19937_64& rng, int i) {
  return i % 2 ? oracle::random_image(w, h, rng) : oracle::textured_image(w, h, rng);
}

constexpr l3::DecodeMode kAllModes[] = {{false, false}, {false, true}, {true, false}, {true, true}};

// 1. Lossless roundtrip over >= 1000 images, all sizes x N in {32,64,128}, < 2 min.
Outcome lossless_roundtrip() {
  struct Size {
    std::uint32_t w, h;
    int per_n;
  };
  const Size sizes[] = {{1, 1, 60},     {3, 2, 60},     {31, 17, 60},     {64, 64, 60},
                        {129, 65, 60},  {640, 480, 30}, {1920, 1080, 4}};
  std::mt19937_64 rng(1001);
  std::size_t images = 0, mismatches = 0;
  const auto t0 = Clock::now();
  for (const auto& s : sizes)
    for (std::uint8_t n : {32, 64, 128})
      for (int i = 0; i < s.per_n; ++i) {
        const auto img = any_random_image(s.w, s.h, rng, i);
        if (l3::decode_image(l3::encode_image(img, n)) != img) ++mismatches;
        ++images;
      }
  const double secs = seconds_since(t0);
  const bool ok = images >= 1000 && mismatches == 0 && secs < 120.0;
  return {ok ? Verdict::kPass : Verdict::kFail,
          std::to_string(images) + " images, " + std::to_string(mismatches) + " mismatches, " +
              fmt(secs, 1) + " s (limit 120 s)"};
}

// 2. Black FHD ratio 0.137 +/- 0.005.
Outcome black_ratio() {
  const auto img = l3::bench::synth_image({l3::bench::SynthKind::kBlack, 1920, 1080, 0});
  const auto size = l3::encode_image(img).size();
  const double ratio = static_cast<double>(size) / static_cast<double>(img.raw_bytes());
  const bool ok = std::abs(ratio - 0.137) <= 0.005;
  return {ok ? Verdict::kPass : Verdict::kFail,
          "ratio " + fmt(ratio) + " (" + std::to_string(size) + " / " +
              std::to_string(img.raw_bytes()) + "), target 0.137 +/- 0.005"};
}

// 3. Random FHD ratio within [1.005, 1.03].
Outcome random_ratio() {
  const auto img = l3::bench::synth_image({l3::bench::SynthKind::kRandom, 1920, 1080, 2024});
  const auto size = l3::encode_image(img).size();
  const double ratio = static_cast<double>(size) / static_cast<double>(img.raw_bytes());
  const bool ok = ratio >= 1.005 && ratio <= 1.03;
  return {ok ? Verdict::kPass : Verdict::kFail,
          "ratio " + fmt(ratio) + " (" + std::to_string(size) + " bytes), bounds [1.005, 1.03]"};
}

// 4. Parallel decoder byte-identical to the sequential reference.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(1004);
  std::vector<std::unique_ptr<l3::ParallelDecoder>> decoders;
  for (std::size_t workers : {1u, 2u, 4u, 8u})
    for (const auto mode : kAllModes)
      decoders.push_back(std::make_unique<l3::ParallelDecoder>(l3::DecodeOptions{workers, mode}));
  std::size_t compared = 0, mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const auto w = 1 + static_cast<std::uint32_t>(rng() % 400);
    const auto h = 1 + static_cast<std::uint32_t>(rng() % 300);
    const auto img = any_random_image(w, h, rng, i);
    const std::uint8_t n = i % 3 == 0 ? std::uint8_t{32} : static_cast<std::uint8_t>(8 + rng() % 64);
    const auto file = l3::encode_image(img, n);
    const auto reference = l3::decode_image(file);
    for (auto& dec : decoders) {
      if (dec->decode(file) != reference) ++mismatches;
      ++compared;
    }
  }
  return {mismatches == 0 ? Verdict::kPass : Verdict::kFail,
          "100 images x workers {1,2,4,8} x 4 modes = " + std::to_string(compared) +
              " decodes, " + std::to_string(mismatches) + " mismatches"};
}

// 5. File size equals header + per-row formula, zero tolerance.
Outcome size_audit() {
  std::mt19937_64 rng(1005);
  std::size_t wrong = 0;
  for (int i = 0; i < 50; ++i) {
    const auto w = 1 + static_cast<std::uint32_t>(rng() % 300);
    const auto h = 1 + static_cast<std::uint32_t>(rng() % 300);
    const auto img = any_random_image(w, h, rng, i);
    const auto n = l3::choose_patch_size(w, h);
    if (l3::encode_image(img).size() != oracle::file_bytes(img, n)) ++wrong;
  }
  return {wrong == 0 ? Verdict::kPass : Verdict::kFail,
          "50 images, " + std::to_string(wrong) + " size mismatches"};
}

// 6. compute = 100 ms, negligible load/decode -> 10 it/s +/- 10%, bottleneck Compute.
Outcome pipeline_ideal() {
  l3::bench::PipelineConfig cfg;
  cfg.synth = {{l3::bench::SynthKind::kRandom, 64, 64, 6}};
  cfg.compute_ms = 100;
  cfg.iterations = 20;
  cfg.decode_workers = 1;
  const auto rep = l3::bench::pipeline_run(cfg);
  const bool ok = std::abs(rep.iterations_per_sec - 10.0) <= 1.0 &&
                  rep.bottleneck == l3::bench::Stage::kCompute;
  return {ok ? Verdict::kPass : Verdict::kFail,
          fmt(rep.iterations_per_sec, 3) + " it/s (target 10 +/- 1), bottleneck " +
              std::string(l3::bench::to_string(rep.bottleneck))};
}

// 7. compute = 1 ms, single-worker UHD L3 decode -> bottleneck Decode.
Outcome pipeline_stall() {
  l3::bench::PipelineConfig cfg;
  cfg.synth = {{l3::bench::SynthKind::kRandom, 3840, 2160, 7}};
  cfg.compute_ms = 1;
  cfg.iterations = 5;
  cfg.decode_workers = 1;
  const auto rep = l3::bench::pipeline_run(cfg);
  const bool ok = rep.bottleneck == l3::bench::Stage::kDecode;
  return {ok ? Verdict::kPass : Verdict::kFail,
          "load " + fmt(rep.stage(l3::bench::Stage::kLoad).mean_ms, 2) + " ms, decode " +
              fmt(rep.stage(l3::bench::Stage::kDecode).mean_ms, 2) + " ms, compute " +
              fmt(rep.stage(l3::bench::Stage::kCompute).mean_ms, 2) + " ms, bottleneck " +
              std::string(l3::bench::to_string(rep.bottleneck))};
}

// 8. Out of desk scope; optional real-dataset ratio when frames are supplied.
Outcome not_reproducible() {
  std::string note =
      "A100 data-preparation speedup, end-to-end training speedups and real-dataset ratios "
      "need hardware/datasets not available here";
  const char* dir = std::getenv("L3_CITYSCAPES_DIR");
  if (!dir) return {Verdict::kInfo, note + "; set L3_CITYSCAPES_DIR (>= 50 frames) for the optional ratio check"};
  const auto sources = l3::bench::collect_sources(dir);
  if (sources.size() < 50)
    return {Verdict::kInfo, note + "; L3_CITYSCAPES_DIR has only " +
                                std::to_string(sources.size()) + " frames (need 50)"};
  const auto rows = l3::bench::ratio_report(sources, {});
  double sum = 0;
  for (const auto& r : rows) sum += r.entries.at(0).ratio;
  const double mean = rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
  const bool ok = std::abs(mean - 0.44) <= 0.05;
  return {ok ? Verdict::kPass : Verdict::kFail,
          "optional Cityscapes check: mean L3 ratio " + fmt(mean) + " over " +
              std::to_string(rows.size()) + " frames (target 0.44 +/- 0.05)"};
}

// 9. Soft: 4 workers >= 2x single-worker throughput on >= 4 cores.
Outcome soft_speedup() {
  const unsigned cores = std::thread::hardware_concurrency();
  const auto img = l3::bench::synth_image({l3::bench::SynthKind::kRandom, 3840, 2160, 9});
  const auto file = l3::encode_image(img);
  auto rate = [&](std::size_t workers) {
    l3::ParallelDecoder dec({workers, {true, true}});
    dec.decode(file);
    const auto t0 = Clock::now();
    const int reps = 3;
    for (int i = 0; i < reps; ++i) dec.decode(file);
    return reps / seconds_since(t0);
  };
  const double one = rate(1), four = rate(4);
  const double speedup = four / one;
  std::string detail = "UHD decode " + fmt(one, 2) + " img/s (1 worker), " + fmt(four, 2) +
                       " img/s (4 workers), speedup " + fmt(speedup, 2) + "x on " +
                       std::to_string(cores) + " cores";
  if (cores < 4) return {Verdict::kInfo, detail + "; needs >= 4 cores, not gating"};
  return {speedup >= 2.0 ? Verdict::kPass : Verdict::kInfo,
          detail + (speedup >= 2.0 ? "" : "; below 2x, not gating")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"AC1", "lossless roundtrip", lossless_roundtrip},
      {"AC2", "black synthetic ratio", black_ratio},
      {"AC3", "random synthetic ratio", random_ratio},
      {"AC4", "parallel/sequential oracle equivalence", oracle_equivalence},
      {"AC5", "size formula audit", size_audit},
      {"AC6", "pipeline ideal regime", pipeline_ideal},
      {"AC7", "pipeline stall regime", pipeline_stall},
      {"AC8", "not reproducible at desk scale", not_reproducible},
      {"AC9", "soft parallel speedup", soft_speedup},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {Verdict::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = out.verdict == Verdict::kPass ? "PASS" : out.verdict == Verdict::kFail ? "FAIL" : "INFO";
    if (out.verdict == Verdict::kFail) ++failures;
    std::cout << c.id << " " << tag << "  " << c.name << ": " << out.detail << std::endl;
  }
  std::cout << (failures ? "acceptance FAILED (" + std::to_string(failures) + ")" : std::string("acceptance passed"))
            << std::endl;
  return failures ? 1 : 0;
}
