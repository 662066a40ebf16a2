#include "l3/bench.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "l3/adapters.hpp"
#include "l3/bounded_queue.hpp"
#include "l3/error.hpp"
#include "l3/parallel_decoder.hpp"

namespace l3::bench {

namespace {

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || s[0] == '-')
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": expected a non-negative integer, got '" + s + "'");
  return v;
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size())
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": expected a number, got '" + s + "'");
  return v;
}

bool parse_bool(std::string_view text, std::string_view what) {
  const auto s = trim(text);
  if (s == "1" || s == "true" || s == "on" || s == "yes") return true;
  if (s == "0" || s == "false" || s == "off" || s == "no") return false;
  throw Error(ErrorCode::kInvalidArgument,
              std::string(what) + ": expected on/off, got '" + std::string(s) + "'");
}

std::string sanitize(std::string name) {
  for (char& ch : name)
    if (ch == ',' || ch == '\n' || ch == '"') ch = '_';
  return name;
}

std::string_view extension_for(Format f) { return f == Format::kL3 ? ".l3" : ".png"; }

std::vector<std::uint8_t> encode_as(Format f, const RawImage& image,
                                    std::optional<std::uint8_t> patch_size) {
  if (f == Format::kL3) return encode_image(image, patch_size);
  return encode_png(interleave(image));
}

RawImage load_source(const RatioSource& src) {
  if (const auto* spec = std::get_if<SynthSpec>(&src.origin)) return synth_image(*spec);
  return load_image(std::get<std::filesystem::path>(src.origin));
}

StageStats summarize(std::vector<double> samples) {
  StageStats s;
  if (samples.empty()) return s;
  s.mean_ms = std::accumulate(samples.begin(), samples.end(), 0.0) /
              static_cast<double>(samples.size());
  s.max_ms = *std::max_element(samples.begin(), samples.end());
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  s.median_ms = n % 2 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
  return s;
}

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    const auto tag = std::to_string(rd()) + std::to_string(rd());
    path_ = std::filesystem::temp_directory_path() / ("l3-pipeline-" + tag);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

bool has_extension(const std::filesystem::path& p, std::string_view ext) {
  auto e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return e == ext;
}

std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir,
                                              std::string_view ext) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && has_extension(entry.path(), ext)) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

/// Files in the decode format. Raw images (PPM, or PNG for an L3 run) and
/// synthetic specs are encoded into `scratch` first.
std::vector<std::filesystem::path> prepare_inputs(const PipelineConfig& cfg,
                                                  const TempDir& scratch) {
  const auto ext = extension_for(cfg.format);
  std::vector<std::filesystem::path> files;
  std::size_t counter = 0;
  auto stage_image = [&](const RawImage& image) {
    const auto out = scratch.path() / ("in" + std::to_string(counter++) + std::string(ext));
    write_file(out, encode_as(cfg.format, image, cfg.patch_size));
    files.push_back(out);
  };

  if (cfg.input_dir) {
    if (!std::filesystem::is_directory(*cfg.input_dir))
      throw Error(ErrorCode::kIo, "input directory not found: " + cfg.input_dir->string());
    files = list_files(*cfg.input_dir, ext);
    if (files.empty()) {
      for (const auto& p : list_files(*cfg.input_dir, ".ppm")) stage_image(load_image(p));
      if (cfg.format == Format::kL3)
        for (const auto& p : list_files(*cfg.input_dir, ".png")) stage_image(load_image(p));
    }
  }
  for (const auto& spec : cfg.synth) stage_image(synth_image(spec));
  if (files.empty()) throw Error(ErrorCode::kInvalidArgument, "pipeline has no input images");
  return files;
}

using Batch = std::vector<std::vector<std::uint8_t>>;
using DecodedBatch = std::vector<RawImage>;

}  // namespace

RawImage synth_image(const SynthSpec& spec) {
  RawImage image(spec.width, spec.height);
  if (spec.kind == SynthKind::kRandom) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> byte(0, 255);
    for (auto& plane : image.planes)
      for (auto& v : plane.data()) v = static_cast<std::uint8_t>(byte(rng));
  }
  return image;
}

SynthSpec parse_synth_spec(std::string_view text) {
  const auto parts = split(trim(text), ':');
  if (parts.size() < 2 || parts.size() > 3)
    throw Error(ErrorCode::kInvalidArgument,
                "synth spec must be kind:WxH[:seed], got '" + std::string(text) + "'");
  SynthSpec spec;
  if (parts[0] == "black")
    spec.kind = SynthKind::kBlack;
  else if (parts[0] == "random")
    spec.kind = SynthKind::kRandom;
  else
    throw Error(ErrorCode::kInvalidArgument, "unknown synth kind '" + std::string(parts[0]) + "'");
  const auto dims = split(parts[1], 'x');
  if (dims.size() != 2)
    throw Error(ErrorCode::kInvalidArgument, "size must be WxH, got '" + std::string(parts[1]) + "'");
  const auto w = parse_uint(dims[0], "width");
  const auto h = parse_uint(dims[1], "height");
  if (w == 0 || h == 0 || w > UINT32_MAX || h > UINT32_MAX)
    throw Error(ErrorCode::kInvalidArgument, "synth dimensions out of range");
  spec.width = static_cast<std::uint32_t>(w);
  spec.height = static_cast<std::uint32_t>(h);
  if (parts.size() == 3) spec.seed = parse_uint(parts[2], "seed");
  return spec;
}

std::string to_string(const SynthSpec& spec) {
  std::string s = spec.kind == SynthKind::kBlack ? "black" : "random";
  s += "-" + std::to_string(spec.width) + "x" + std::to_string(spec.height);
  if (spec.kind == SynthKind::kRandom) s += "-s" + std::to_string(spec.seed);
  return s;
}

std::string_view to_string(Format f) { return f == Format::kL3 ? "l3" : "png"; }

Format parse_format(std::string_view text) {
  const auto s = trim(text);
  if (s == "l3") return Format::kL3;
  if (s == "png" || s == "png-baseline") return Format::kPngBaseline;
  throw Error(ErrorCode::kInvalidArgument, "unknown format '" + std::string(s) + "'");
}

std::vector<Format> parse_formats(std::string_view text) {
  std::vector<Format> out;
  for (auto part : split(text, ','))
    if (!trim(part).empty()) out.push_back(parse_format(part));
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "no formats given");
  return out;
}

std::vector<RatioSource> collect_sources(const std::filesystem::path& path) {
  std::vector<RatioSource> out;
  auto add = [&](const std::filesystem::path& p) {
    out.push_back({p.stem().string(), p});
  };
  if (std::filesystem::is_directory(path)) {
    auto files = list_files(path, ".ppm");
    auto pngs = list_files(path, ".png");
    files.insert(files.end(), pngs.begin(), pngs.end());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) add(f);
  } else {
    add(path);
  }
  return out;
}

std::vector<RatioRow> ratio_report(const std::vector<RatioSource>& sources,
                                   const RatioOptions& options,
                                   std::vector<std::string>* warnings) {
  auto warn = [&](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };
  std::vector<Format> formats;
  for (Format f : options.formats) {
    if (f == Format::kPngBaseline && !png_available()) {
      warn("png: feature-disabled, column omitted");
      continue;
    }
    if (std::find(formats.begin(), formats.end(), f) == formats.end()) formats.push_back(f);
  }
  if (options.output_dir) std::filesystem::create_directories(*options.output_dir);

  std::vector<RatioRow> rows;
  for (const auto& src : sources) {
    RawImage image;
    try {
      image = load_source(src);
    } catch (const Error& e) {
      warn("skipping " + src.name + ": " + e.what());
      continue;
    }
    RatioRow row{src.name, image.raw_bytes(), {}};
    for (Format f : formats) {
      const auto bytes = encode_as(f, image, options.patch_size);
      std::size_t size = bytes.size();
      if (options.output_dir) {
        const auto out = *options.output_dir / (sanitize(src.name) + std::string(extension_for(f)));
        write_file(out, bytes);
        size = static_cast<std::size_t>(std::filesystem::file_size(out));
      }
      row.entries.push_back(
          {f, size, static_cast<double>(size) / static_cast<double>(row.raw_bytes)});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_ratio_table(const std::vector<RatioRow>& rows) {
  std::ostringstream os;
  std::size_t name_w = 4;
  for (const auto& r : rows) name_w = std::max(name_w, r.name.size());
  os << std::left << std::setw(static_cast<int>(name_w)) << "name" << "  " << std::right
     << std::setw(12) << "raw_bytes";
  if (!rows.empty())
    for (const auto& e : rows.front().entries)
      os << "  " << std::setw(12) << to_string(e.format) << "  " << std::setw(8) << "ratio";
  os << '\n';
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(name_w)) << r.name << "  " << std::right
       << std::setw(12) << r.raw_bytes;
    for (const auto& e : r.entries)
      os << "  " << std::setw(12) << e.encoded_bytes << "  " << std::setw(7) << std::fixed
         << std::setprecision(4) << e.ratio << 'x' << std::defaultfloat;
    os << '\n';
  }
  return os.str();
}

std::string ratio_csv(const std::vector<RatioRow>& rows) {
  std::ostringstream os;
  os << "name,raw_bytes,encoded_bytes,ratio\n";
  os << std::setprecision(17);
  for (const auto& r : rows)
    for (const auto& e : r.entries)
      os << sanitize(r.name) << ':' << to_string(e.format) << ',' << r.raw_bytes << ','
         << e.encoded_bytes << ',' << e.ratio << '\n';
  return os.str();
}

std::vector<CsvRecord> parse_ratio_csv(std::string_view text) {
  std::vector<CsvRecord> out;
  bool header = true;
  for (auto line : split(text, '\n')) {
    line = trim(line);
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line != "name,raw_bytes,encoded_bytes,ratio")
        throw Error(ErrorCode::kUnsupportedInput, "unexpected CSV header");
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 4) throw Error(ErrorCode::kUnsupportedInput, "CSV row needs 4 columns");
    out.push_back({std::string(cols[0]), parse_uint(cols[1], "raw_bytes"),
                   parse_uint(cols[2], "encoded_bytes"), parse_double(cols[3], "ratio")});
  }
  return out;
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::kLoad: return "Load";
    case Stage::kDecode: return "Decode";
    case Stage::kCompute: return "Compute";
  }
  return "?";
}

PipelineConfig parse_pipeline_config(std::string_view text) {
  PipelineConfig cfg;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::kInvalidArgument,
                  "config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "input")
      cfg.input_dir = std::filesystem::path(std::string(value));
    else if (key == "synth")
      cfg.synth.push_back(parse_synth_spec(value));
    else if (key == "batch")
      cfg.batch_size = parse_uint(value, key);
    else if (key == "format")
      cfg.format = parse_format(value);
    else if (key == "workers")
      cfg.decode_workers = parse_uint(value, key);
    else if (key == "compute_ms")
      cfg.compute_ms = parse_double(value, key);
    else if (key == "prefetch")
      cfg.prefetch = parse_uint(value, key);
    else if (key == "iterations")
      cfg.iterations = parse_uint(value, key);
    else if (key == "paeth_rowwise")
      cfg.mode.paeth_rowwise = parse_bool(value, key);
    else if (key == "bd_pixelwise")
      cfg.mode.bd_pixelwise = parse_bool(value, key);
    else if (key == "patch_size") {
      const auto n = parse_uint(value, key);
      if (n < 1 || n > 255) throw Error(ErrorCode::kInvalidArgument, "patch_size must be 1..255");
      cfg.patch_size = static_cast<std::uint8_t>(n);
    } else
      throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + std::string(key) + "'");
  }
  return cfg;
}

void busy_compute(double ms) {
  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double, std::milli>(ms));
  volatile std::uint64_t sink = 0x9E3779B97F4A7C15ull;
  while (Clock::now() < deadline)
    for (int i = 0; i < 256; ++i) sink = sink * 6364136223846793005ull + 1442695040888963407ull;
}

PipelineReport pipeline_run(const PipelineConfig& cfg) {
  if (cfg.batch_size == 0 || cfg.decode_workers == 0 || cfg.prefetch == 0 ||
      cfg.iterations == 0)
    throw Error(ErrorCode::kInvalidArgument, "pipeline counts must be >= 1");
  if (cfg.compute_ms < 0) throw Error(ErrorCode::kInvalidArgument, "compute_ms must be >= 0");

  TempDir scratch;
  const auto files = prepare_inputs(cfg, scratch);
  const std::size_t total = cfg.iterations + 1;  // first batch warms up

  BoundedQueue<Batch> loaded(cfg.prefetch);
  BoundedQueue<DecodedBatch> decoded(cfg.prefetch);
  std::array<std::vector<double>, 3> times;
  std::vector<Clock::time_point> finished;
  finished.reserve(total);

  std::mutex error_mutex;
  std::exception_ptr error;
  auto fail = [&](std::exception_ptr e) {
    {
      std::lock_guard lk(error_mutex);
      if (!error) error = e;
    }
    loaded.close();
    decoded.close();
  };

  ParallelDecoder decoder({cfg.decode_workers, cfg.mode, false});

  std::jthread load_thread([&] {
    try {
      for (std::size_t b = 0; b < total; ++b) {
        const auto t0 = Clock::now();
        Batch batch;
        batch.reserve(cfg.batch_size);
        for (std::size_t i = 0; i < cfg.batch_size; ++i)
          batch.push_back(read_file(files[(b * cfg.batch_size + i) % files.size()]));
        times[0].push_back(ms_between(t0, Clock::now()));
        if (!loaded.push(std::move(batch))) return;
      }
      loaded.close();
    } catch (...) {
      fail(std::current_exception());
    }
  });

  std::jthread decode_thread([&] {
    try {
      std::size_t b = 0;
      while (auto batch = loaded.pop()) {
        const auto t0 = Clock::now();
        DecodedBatch out;
        out.reserve(batch->size());
        if (cfg.format == Format::kL3) {
          std::vector<std::span<const std::uint8_t>> views(batch->begin(), batch->end());
          auto results = decoder.decode_batch(views);
          for (std::size_t i = 0; i < results.size(); ++i) {
            if (!results[i].ok())
              throw Error(results[i].error->code(),
                          "batch " + std::to_string(b) + " image " + std::to_string(i) + ": " +
                              results[i].error->what());
            out.push_back(std::move(*results[i].image));
          }
        } else {
          for (const auto& bytes : *batch) out.push_back(planarize(decode_png(bytes)));
        }
        times[1].push_back(ms_between(t0, Clock::now()));
        if (!decoded.push(std::move(out))) return;
        ++b;
      }
      decoded.close();
    } catch (...) {
      fail(std::current_exception());
    }
  });

  std::jthread compute_thread([&] {
    try {
      while (auto batch = decoded.pop()) {
        const auto t0 = Clock::now();
        busy_compute(cfg.compute_ms);
        const auto t1 = Clock::now();
        times[2].push_back(ms_between(t0, t1));
        finished.push_back(t1);
      }
    } catch (...) {
      fail(std::current_exception());
    }
  });

  load_thread.join();
  decode_thread.join();
  compute_thread.join();
  if (error) std::rethrow_exception(error);

  PipelineReport rep;
  rep.images_per_batch = cfg.batch_size;
  rep.batches_measured = cfg.iterations;
  for (int s = 0; s < 3; ++s) {
    auto& t = times[s];
    if (!t.empty()) t.erase(t.begin());
    rep.stages[s] = summarize(t);
  }
  const double compute_mean = rep.stages[2].mean_ms;
  for (auto& s : rep.stages) s.normalized = compute_mean > 0 ? s.mean_ms / compute_mean : 0.0;
  const double window = ms_between(finished.front(), finished.back()) / 1000.0;
  rep.iterations_per_sec = window > 0 ? static_cast<double>(cfg.iterations) / window : 0.0;
  int worst = 0;
  for (int s = 1; s < 3; ++s)
    if (rep.stages[s].mean_ms > rep.stages[worst].mean_ms) worst = s;
  rep.bottleneck = static_cast<Stage>(worst);
  return rep;
}

std::string format_pipeline_report(const PipelineReport& rep) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3);
  os << "stage      mean_ms   median_ms  max_ms     vs_compute\n";
  for (int s = 0; s < 3; ++s) {
    const auto& st = rep.stages[s];
    os << std::left << std::setw(9) << to_string(static_cast<Stage>(s)) << std::right << "  "
       << std::setw(9) << st.mean_ms << "  " << std::setw(9) << st.median_ms << "  "
       << std::setw(9) << st.max_ms << "  " << std::setw(9) << st.normalized << '\n';
  }
  os << "batches measured: " << rep.batches_measured << " (" << rep.images_per_batch
     << " images each)\n";
  os << "throughput: " << rep.iterations_per_sec << " it/s\n";
  os << "bottleneck: " << to_string(rep.bottleneck) << '\n';
  return os.str();
}

}  // namespace l3::bench
