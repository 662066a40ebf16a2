// l3: encode, decode, inspect and benchmark L3 image files.
//
// Exit codes: 0 success, 2 usage error, 3 input-format error,
// 4 corrupt or truncated stream, 5 I/O error, 6 feature disabled.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "l3/adapters.hpp"
#include "l3/bench.hpp"
#include "l3/container.hpp"
#include "l3/error.hpp"
#include "l3/parallel_decoder.hpp"
#include "l3/worker_pool.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitCorrupt = 4;
constexpr int kExitIo = 5;
constexpr int kExitFeature = 6;

int exit_code_for(l3::ErrorCode code) {
  switch (code) {
    case l3::ErrorCode::kInvalidArgument: return kExitUsage;
    case l3::ErrorCode::kUnrecognizedFormat:
    case l3::ErrorCode::kCorruptHeader:
    case l3::ErrorCode::kUnsupportedInput: return kExitFormat;
    case l3::ErrorCode::kCorruptStream:
    case l3::ErrorCode::kTruncatedStream: return kExitCorrupt;
    case l3::ErrorCode::kIo: return kExitIo;
    case l3::ErrorCode::kFeatureDisabled: return kExitFeature;
  }
  return 1;
}

bool parse_switch(const std::string& value) {
  if (value == "on") return true;
  if (value == "off") return false;
  throw l3::Error(l3::ErrorCode::kInvalidArgument, "expected on/off, got '" + value + "'");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw l3::Error(l3::ErrorCode::kIo, "cannot write " + path);
  out << text;
}

struct EncodeArgs {
  std::string input, output;
  int patch_size = 0;
};

int run_encode(const EncodeArgs& a) {
  const l3::RawImage image = l3::load_image(a.input);
  std::optional<std::uint8_t> n;
  if (a.patch_size) n = static_cast<std::uint8_t>(a.patch_size);
  const auto bytes = l3::encode_image(image, n);
  l3::write_file(a.output, bytes);
  const auto header = l3::parse_header(bytes);
  std::cout << a.output << ": " << bytes.size() << " bytes, " << image.width << "x"
            << image.height << ", N=" << int{header.patch_size} << ", ratio " << std::fixed
            << std::setprecision(4)
            << static_cast<double>(bytes.size()) / static_cast<double>(image.raw_bytes())
            << "\n";
  return 0;
}

struct DecodeArgs {
  std::string input, output;
  std::size_t workers = 0;
  std::string paeth_rowwise = "on";
  std::string bd_pixelwise = "on";
};

int run_decode(const DecodeArgs& a) {
  l3::DecodeOptions opts;
  opts.workers = a.workers ? a.workers : l3::default_worker_count();
  opts.mode.paeth_rowwise = parse_switch(a.paeth_rowwise);
  opts.mode.bd_pixelwise = parse_switch(a.bd_pixelwise);
  const auto bytes = l3::read_file(a.input);
  const auto image = l3::decode_image_parallel(bytes, opts);
  l3::write_file(a.output, l3::write_ppm(l3::interleave(image)));
  std::cout << a.output << ": " << image.width << "x" << image.height << " (" << opts.workers
            << " workers)\n";
  return 0;
}

int run_inspect(const std::string& input) {
  const auto bytes = l3::read_file(input);
  const auto report = l3::inspect(bytes);
  std::cout << l3::format_report(report);
  return report.ok() ? 0 : kExitFormat;
}

struct RatioArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> synth;
  std::string formats = "l3";
  std::string csv;
  std::string out_dir;
  int patch_size = 0;
};

int run_bench_ratio(const RatioArgs& a) {
  std::vector<l3::bench::RatioSource> sources;
  for (const auto& in : a.inputs) {
    auto found = l3::bench::collect_sources(in);
    sources.insert(sources.end(), found.begin(), found.end());
  }
  for (const auto& s : a.synth) {
    const auto spec = l3::bench::parse_synth_spec(s);
    sources.push_back({l3::bench::to_string(spec), spec});
  }
  if (sources.empty())
    throw l3::Error(l3::ErrorCode::kInvalidArgument, "no inputs: pass files, directories or --synth");

  l3::bench::RatioOptions opts;
  opts.formats = l3::bench::parse_formats(a.formats);
  if (!a.out_dir.empty()) opts.output_dir = a.out_dir;
  if (a.patch_size) opts.patch_size = static_cast<std::uint8_t>(a.patch_size);
  std::vector<std::string> warnings;
  const auto rows = l3::bench::ratio_report(sources, opts, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  std::cout << l3::bench::format_ratio_table(rows);
  if (!a.csv.empty()) write_text(a.csv, l3::bench::ratio_csv(rows));
  return 0;
}

struct PipelineArgs {
  std::string config;
  std::string input;
  std::vector<std::string> synth;
  std::size_t batch = 1;
  std::string format = "l3";
  std::size_t workers = 0;
  double compute_ms = 10.0;
  std::size_t prefetch = 2;
  std::size_t iterations = 10;
  std::string paeth_rowwise = "on";
  std::string bd_pixelwise = "on";
  int patch_size = 0;
};

int run_bench_pipeline(const PipelineArgs& a, const CLI::App& cmd) {
  l3::bench::PipelineConfig cfg;
  cfg.decode_workers = l3::default_worker_count();
  if (!a.config.empty()) {
    const auto text = l3::read_file(a.config);
    cfg = l3::bench::parse_pipeline_config(std::string(text.begin(), text.end()));
  }
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--input")) cfg.input_dir = a.input;
  for (const auto& s : a.synth) cfg.synth.push_back(l3::bench::parse_synth_spec(s));
  if (given("--batch")) cfg.batch_size = a.batch;
  if (given("--format")) cfg.format = l3::bench::parse_format(a.format);
  if (given("--workers")) cfg.decode_workers = a.workers;
  if (given("--compute-ms")) cfg.compute_ms = a.compute_ms;
  if (given("--prefetch")) cfg.prefetch = a.prefetch;
  if (given("--iterations")) cfg.iterations = a.iterations;
  if (given("--paeth-rowwise")) cfg.mode.paeth_rowwise = parse_switch(a.paeth_rowwise);
  if (given("--bd-pixelwise")) cfg.mode.bd_pixelwise = parse_switch(a.bd_pixelwise);
  if (given("--patch-size")) cfg.patch_size = static_cast<std::uint8_t>(a.patch_size);

  const auto report = l3::bench::pipeline_run(cfg);
  std::cout << l3::bench::format_pipeline_report(report);
  return 0;
}

struct SynthArgs {
  std::string kind = "black";
  std::string size;
  std::uint64_t seed = 0;
  std::string output;
};

int run_synth(const SynthArgs& a) {
  auto spec = l3::bench::parse_synth_spec(a.kind + ":" + a.size);
  spec.seed = a.seed;
  const auto image = l3::bench::synth_image(spec);
  l3::write_file(a.output, l3::write_ppm(l3::interleave(image)));
  std::cout << a.output << ": " << l3::bench::to_string(spec) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L3 lossless image format tool"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Encode a PPM (or PNG) image to L3");
  encode->add_option("input", enc.input, "Input image")->required();
  encode->add_option("-o,--out", enc.output, "Output .l3 file")->required();
  encode->add_option("--patch-size", enc.patch_size, "Patch size N (1-255), overrides policy")
      ->check(CLI::Range(1, 255));

  DecodeArgs dec;
  auto* decode = app.add_subcommand("decode", "Decode an L3 file to PPM");
  decode->add_option("input", dec.input, "Input .l3 file")->required();
  decode->add_option("-o,--out", dec.output, "Output .ppm file")->required();
  decode->add_option("-w,--workers", dec.workers, "Decode workers (default: $L3_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);
  decode->add_option("--paeth-rowwise", dec.paeth_rowwise, "Row-wise Paeth kernel (on/off)")
      ->check(CLI::IsMember({"on", "off"}));
  decode->add_option("--bd-pixelwise", dec.bd_pixelwise, "Pixel-wise base-delta kernel (on/off)")
      ->check(CLI::IsMember({"on", "off"}));

  std::string inspect_input;
  auto* inspect = app.add_subcommand("inspect", "Print the structure of an L3 file");
  inspect->add_option("input", inspect_input, "Input .l3 file")->required();

  RatioArgs ratio;
  auto* bench_ratio = app.add_subcommand("bench-ratio", "Compression ratio table");
  bench_ratio->add_option("inputs", ratio.inputs, "Images or directories of .ppm/.png");
  bench_ratio->add_option("--synth", ratio.synth, "Synthetic input kind:WxH[:seed]");
  bench_ratio->add_option("--formats", ratio.formats, "Comma list of l3,png");
  bench_ratio->add_option("--csv", ratio.csv, "Write CSV here");
  bench_ratio->add_option("--out-dir", ratio.out_dir, "Keep encoded files here");
  bench_ratio->add_option("--patch-size", ratio.patch_size, "Force L3 patch size")
      ->check(CLI::Range(1, 255));

  PipelineArgs pipe;
  auto* bench_pipeline =
      app.add_subcommand("bench-pipeline", "Load/Decode/Compute pipeline benchmark");
  bench_pipeline->add_option("--config", pipe.config, "key = value config file");
  bench_pipeline->add_option("--input", pipe.input, "Directory of inputs");
  bench_pipeline->add_option("--synth", pipe.synth, "Synthetic input kind:WxH[:seed]");
  bench_pipeline->add_option("--batch", pipe.batch, "Images per batch")->check(CLI::PositiveNumber);
  bench_pipeline->add_option("--format", pipe.format, "l3 or png");
  bench_pipeline->add_option("--workers", pipe.workers, "Decode workers")->check(CLI::PositiveNumber);
  bench_pipeline->add_option("--compute-ms", pipe.compute_ms, "Busy time per batch (ms)")
      ->check(CLI::NonNegativeNumber);
  bench_pipeline->add_option("--prefetch", pipe.prefetch, "Queue depth in batches")
      ->check(CLI::PositiveNumber);
  bench_pipeline->add_option("--iterations", pipe.iterations, "Measured batches")
      ->check(CLI::PositiveNumber);
  bench_pipeline->add_option("--paeth-rowwise", pipe.paeth_rowwise, "on/off")
      ->check(CLI::IsMember({"on", "off"}));
  bench_pipeline->add_option("--bd-pixelwise", pipe.bd_pixelwise, "on/off")
      ->check(CLI::IsMember({"on", "off"}));
  bench_pipeline->add_option("--patch-size", pipe.patch_size, "Force L3 patch size")
      ->check(CLI::Range(1, 255));

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "Write a synthetic PPM image");
  synth->add_option("--kind", syn.kind, "black or random")->check(CLI::IsMember({"black", "random"}));
  synth->add_option("--size", syn.size, "WxH")->required();
  synth->add_option("--seed", syn.seed, "Seed for random images");
  synth->add_option("-o,--out", syn.output, "Output .ppm file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*encode) return run_encode(enc);
    if (*decode) return run_decode(dec);
    if (*inspect) return run_inspect(inspect_input);
    if (*bench_ratio) return run_bench_ratio(ratio);
    if (*bench_pipeline) return run_bench_pipeline(pipe, *bench_pipeline);
    if (*synth) return run_synth(syn);
  } catch (const l3::Error& e) {
    std::cerr << "l3: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "l3: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
