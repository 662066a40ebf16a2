#include "l3/parallel_decoder.hpp"

#include <atomic>
#include <mutex>

namespace l3 {

namespace {

struct FileState {
  std::atomic<bool> failed{false};
  std::mutex mutex;
  std::optional<Error> error;

  void fail(const Error& e) {
    std::lock_guard lk(mutex);
    if (!error) error = e;
    failed.store(true, std::memory_order_relaxed);
  }
};

struct WriteAudit {
  std::uint32_t width = 0;
  std::array<std::unique_ptr<std::atomic<std::uint16_t>[]>, kChannels> counts;
  std::size_t pixels = 0;

  WriteAudit(std::uint32_t w, std::uint32_t h) : width(w), pixels(std::size_t{w} * h) {
    for (auto& c : counts) {
      c = std::make_unique<std::atomic<std::uint16_t>[]>(pixels);
      for (std::size_t i = 0; i < pixels; ++i) c[i].store(0, std::memory_order_relaxed);
    }
  }

  void record(const DecodeJob& job) {
    for (std::uint32_t y = 0; y < job.rect.height; ++y)
      for (std::uint32_t x = 0; x < job.rect.width; ++x)
        counts[job.channel][std::size_t{job.rect.y0 + y} * width + job.rect.x0 + x].fetch_add(
            1, std::memory_order_relaxed);
  }

  void export_to(DecodeStats& stats) const {
    for (int c = 0; c < kChannels; ++c) {
      stats.writes[c].resize(pixels);
      for (std::size_t i = 0; i < pixels; ++i) stats.writes[c][i] = counts[c][i].load();
    }
  }
};

}  // namespace

std::vector<DecodeJob> plan_decode_jobs(const L3Header& header,
                                        std::span<const std::uint8_t> file, RawImage& image,
                                        std::size_t file_index) {
  const auto data = file.subspan(header.byte_size());
  const auto rects = partition(header.width, header.height, header.patch_size);
  std::vector<DecodeJob> jobs;
  jobs.reserve(rects.size() * kChannels);
  for (int c = 0; c < kChannels; ++c) {
    for (std::size_t i = 0; i < rects.size(); ++i) {
      const PatchRect& r = rects[i];
      const PatchSpan s = patch_span(header, c, i, data.size());
      jobs.push_back({file_index, c, i, r, data.subspan(s.begin, s.end - s.begin),
                      region_of(image.planes[c], r.x0, r.y0, r.width, r.height)});
    }
  }
  return jobs;
}

ParallelDecoder::ParallelDecoder(DecodeOptions options)
    : options_(options),
      pool_(std::make_unique<WorkerPool>(std::max<std::size_t>(1, options.workers))) {
  options_.workers = pool_->size();
}

RawImage ParallelDecoder::decode(std::span<const std::uint8_t> file, DecodeStats* stats) {
  const L3Header header = parse_header(file);
  RawImage image(header.width, header.height);
  const auto jobs = plan_decode_jobs(header, file, image);

  std::optional<WriteAudit> audit;
  if (options_.audit_writes) audit.emplace(header.width, header.height);
  FileState state;
  std::atomic<std::size_t> decoded{0};
  const DecodeMode mode = options_.mode;

  pool_->parallel_for(jobs.size(), [&](std::size_t j) {
    if (state.failed.load(std::memory_order_relaxed)) return;
    const DecodeJob& job = jobs[j];
    try {
      decode_patch_into(job.input, job.output, mode);
      if (audit) audit->record(job);
      decoded.fetch_add(1, std::memory_order_relaxed);
    } catch (const Error& e) {
      state.fail(e.at({job.channel, job.patch}));
    }
  });

  if (state.error) throw *state.error;
  if (stats) {
    stats->patches_decoded = decoded.load();
    if (audit) audit->export_to(*stats);
  }
  return image;
}

std::vector<BatchResult> ParallelDecoder::decode_batch(
    std::span<const std::span<const std::uint8_t>> files) {
  std::vector<BatchResult> results(files.size());
  std::vector<FileState> states(files.size());
  std::vector<RawImage> images(files.size());
  std::vector<DecodeJob> jobs;

  for (std::size_t f = 0; f < files.size(); ++f) {
    try {
      const L3Header header = parse_header(files[f]);
      images[f] = RawImage(header.width, header.height);
      auto file_jobs = plan_decode_jobs(header, files[f], images[f], f);
      jobs.insert(jobs.end(), file_jobs.begin(), file_jobs.end());
    } catch (const Error& e) {
      states[f].fail(e);
    }
  }

  const DecodeMode mode = options_.mode;
  pool_->parallel_for(jobs.size(), [&](std::size_t j) {
    const DecodeJob& job = jobs[j];
    FileState& state = states[job.file];
    if (state.failed.load(std::memory_order_relaxed)) return;
    try {
      decode_patch_into(job.input, job.output, mode);
    } catch (const Error& e) {
      state.fail(e.at({job.channel, job.patch}));
    }
  });

  for (std::size_t f = 0; f < files.size(); ++f) {
    if (states[f].error)
      results[f].error = *states[f].error;
    else
      results[f].image = std::move(images[f]);
  }
  return results;
}

RawImage decode_image_parallel(std::span<const std::uint8_t> file,
                               const DecodeOptions& options) {
  ParallelDecoder decoder(options);
  return decoder.decode(file);
}

std::vector<BatchResult> decode_batch(const std::vector<std::vector<std::uint8_t>>& files,
                                      const DecodeOptions& options) {
  std::vector<std::span<const std::uint8_t>> views(files.begin(), files.end());
  ParallelDecoder decoder(options);
  return decoder.decode_batch(views);
}

}  // namespace l3
