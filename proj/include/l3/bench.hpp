#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "l3/codec.hpp"
#include "l3/container.hpp"

namespace l3::bench {

enum class SynthKind { kRandom, kBlack };

struct SynthSpec {
  SynthKind kind = SynthKind::kBlack;
  std::uint32_t width = 1;
  std::uint32_t height = 1;
  std::uint64_t seed = 0;  // random kind only
};

/// Black is all zeros; random draws every byte uniformly from a generator
/// seeded with `seed`.
RawImage synth_image(const SynthSpec& spec);

/// "black:1920x1080" or "random:1920x1080[:seed]".
SynthSpec parse_synth_spec(std::string_view text);
std::string to_string(const SynthSpec& spec);

enum class Format { kL3, kPngBaseline };

std::string_view to_string(Format f);
Format parse_format(std::string_view text);
/// Comma-separated list, e.g. "l3,png".
std::vector<Format> parse_formats(std::string_view text);

// ---------------------------------------------------------------------------
// Compression ratio tables

struct RatioSource {
  std::string name;
  std::variant<std::filesystem::path, SynthSpec> origin;
};

/// One source per .ppm/.png file (a directory is scanned, sorted by name).
std::vector<RatioSource> collect_sources(const std::filesystem::path& path);

struct RatioEntry {
  Format format = Format::kL3;
  std::size_t encoded_bytes = 0;
  double ratio = 0.0;  // encoded / raw
};

struct RatioRow {
  std::string name;
  std::size_t raw_bytes = 0;
  std::vector<RatioEntry> entries;
};

struct RatioOptions {
  std::vector<Format> formats{Format::kL3};
  /// Encoded files are written here when set, and sizes are read back
  /// from the written files.
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint8_t> patch_size;
};

/// Unreadable sources are skipped and described in `warnings`. Formats the
/// build cannot produce are dropped with a warning.
std::vector<RatioRow> ratio_report(const std::vector<RatioSource>& sources,
                                   const RatioOptions& options,
                                   std::vector<std::string>* warnings = nullptr);

std::string format_ratio_table(const std::vector<RatioRow>& rows);

/// Columns name,raw_bytes,encoded_bytes,ratio; one row per (input, format)
/// with name "<input>:<format>".
std::string ratio_csv(const std::vector<RatioRow>& rows);

struct CsvRecord {
  std::string name;
  std::size_t raw_bytes = 0;
  std::size_t encoded_bytes = 0;
  double ratio = 0.0;
};
std::vector<CsvRecord> parse_ratio_csv(std::string_view text);

// ---------------------------------------------------------------------------
// Load / Decode / Compute pipeline

enum class Stage { kLoad = 0, kDecode = 1, kCompute = 2 };
std::string_view to_string(Stage s);

struct PipelineConfig {
  std::optional<std::filesystem::path> input_dir;
  std::vector<SynthSpec> synth;
  std::size_t batch_size = 1;
  Format format = Format::kL3;
  std::size_t decode_workers = 1;
  DecodeMode mode{true, true};
  double compute_ms = 10.0;
  std::size_t prefetch = 2;
  std::size_t iterations = 10;
  std::optional<std::uint8_t> patch_size;
};

/// Plain "key = value" lines; '#' starts a comment. Keys: input, synth
/// (repeatable), batch, format, workers, compute_ms, prefetch, iterations,
/// paeth_rowwise, bd_pixelwise, patch_size.
PipelineConfig parse_pipeline_config(std::string_view text);

struct StageStats {
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double max_ms = 0.0;
  double normalized = 0.0;  // mean / compute mean
};

struct PipelineReport {
  std::array<StageStats, 3> stages{};
  double iterations_per_sec = 0.0;
  Stage bottleneck = Stage::kCompute;
  std::size_t batches_measured = 0;
  std::size_t images_per_batch = 0;

  const StageStats& stage(Stage s) const { return stages[static_cast<int>(s)]; }
};

/// Runs the three stages on their own threads linked by bounded queues of
/// depth `prefetch`. The first batch is a warm-up and is not measured.
PipelineReport pipeline_run(const PipelineConfig& config);

std::string format_pipeline_report(const PipelineReport& report);

/// Spins on the CPU until `ms` milliseconds of wall time have passed.
void busy_compute(double ms);

}  // namespace l3::bench
