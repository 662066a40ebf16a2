#pragma once

// Patch-parallel L3 decoding. Each patch of each channel is one job; jobs
// write disjoint rectangles of a pre-allocated image, so the result does not
// depend on scheduling.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "l3/codec.hpp"
#include "l3/container.hpp"
#include "l3/error.hpp"
#include "l3/worker_pool.hpp"

namespace l3 {

struct DecodeOptions {
  std::size_t workers = 1;
  DecodeMode mode{};
  /// Count writes per output pixel (test instrumentation).
  bool audit_writes = false;
};

struct DecodeJob {
  std::size_t file = 0;
  int channel = 0;
  std::size_t patch = 0;
  PatchRect rect;
  std::span<const std::uint8_t> input;
  PlaneRegion output;
};

/// One job per (channel, patch) of `file`, targeting regions of `image`,
/// which must already have the header's dimensions.
std::vector<DecodeJob> plan_decode_jobs(const L3Header& header,
                                        std::span<const std::uint8_t> file, RawImage& image,
                                        std::size_t file_index = 0);

struct DecodeStats {
  std::size_t patches_decoded = 0;
  /// Per channel, per pixel write count; filled only when audit_writes is set.
  std::array<std::vector<std::uint16_t>, kChannels> writes;
};

struct BatchResult {
  std::optional<RawImage> image;
  std::optional<Error> error;

  bool ok() const noexcept { return image.has_value(); }
};

class ParallelDecoder {
 public:
  explicit ParallelDecoder(DecodeOptions options);

  const DecodeOptions& options() const noexcept { return options_; }

  /// Output is identical to decode_image for any worker count and mode.
  /// The first failing patch cancels the remaining jobs and is rethrown
  /// with its (channel, patch) location.
  RawImage decode(std::span<const std::uint8_t> file, DecodeStats* stats = nullptr);

  /// Decodes all files on one shared job queue. Results keep input order;
  /// a failing file does not stop the others.
  std::vector<BatchResult> decode_batch(std::span<const std::span<const std::uint8_t>> files);

 private:
  DecodeOptions options_;
  std::unique_ptr<WorkerPool> pool_;
};

RawImage decode_image_parallel(std::span<const std::uint8_t> file,
                               const DecodeOptions& options);

std::vector<BatchResult> decode_batch(const std::vector<std::vector<std::uint8_t>>& files,
                                      const DecodeOptions& options);

}  // namespace l3
