#include <doctest.h>

#include <chrono>
#include <random>
#include <thread>

#include "l3/error.hpp"
#include "l3/parallel_decoder.hpp"
#include "oracle.hpp"

using namespace l3;

namespace {

constexpr DecodeMode kAllModes[] = {{false, false}, {false, true}, {true, false}, {true, true}};

}  // namespace

TEST_CASE("worker pool visits every index exactly once") {
  for (std::size_t workers : {1u, 3u, 8u}) {
    WorkerPool pool(workers);
    CHECK(pool.size() == workers);
    for (std::size_t count : {0u, 1u, 7u, 1000u}) {
      std::vector<std::atomic<int>> hits(count);
      pool.parallel_for(count, [&](std::size_t i) { hits[i].fetch_add(1); });
      for (auto& h : hits) CHECK(h.load() == 1);
    }
  }
}

TEST_CASE("worker pool serializes concurrent submitters") {
  WorkerPool pool(4);
  std::atomic<int> total{0};
  std::vector<std::jthread> callers;
  for (int c = 0; c < 4; ++c)
    callers.emplace_back([&] {
      for (int r = 0; r < 20; ++r) pool.parallel_for(50, [&](std::size_t) { total.fetch_add(1); });
    });
  callers.clear();
  CHECK(total.load() == 4 * 20 * 50);
}

TEST_CASE("default worker count honors L3_WORKERS") {
  setenv("L3_WORKERS", "5", 1);
  CHECK(default_worker_count() == 5);
  setenv("L3_WORKERS", "junk", 1);
  CHECK(default_worker_count() >= 1);
  unsetenv("L3_WORKERS");
  CHECK(default_worker_count() >= 1);
}

TEST_CASE("parallel decode equals the sequential reference") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 30; ++i) {
    const auto w = 1 + static_cast<std::uint32_t>(rng() % 200);
    const auto h = 1 + static_cast<std::uint32_t>(rng() % 200);
    const auto img = i % 2 ? oracle::random_image(w, h, rng) : oracle::textured_image(w, h, rng);
    const auto file = encode_image(img, static_cast<std::uint8_t>(8 + rng() % 40));
    const auto reference = decode_image(file);
    REQUIRE(reference == img);
    for (std::size_t workers : {1u, 2u, 8u})
      for (const auto mode : kAllModes) REQUIRE(decode_image_parallel(file, {workers, mode}) == img);
  }
}

TEST_CASE("single-patch image is one job") {
  std::mt19937_64 rng(102);
  const auto img = oracle::random_image(20, 20, rng);
  const auto file = encode_image(img);
  ParallelDecoder dec({4, {true, true}, true});
  DecodeStats stats;
  CHECK(dec.decode(file, &stats) == img);
  CHECK(stats.patches_decoded == 3);
}

TEST_CASE("every output pixel is written exactly once") {
  std::mt19937_64 rng(103);
  const auto img = oracle::textured_image(333, 170, rng);
  const auto file = encode_image(img, 32);
  const auto header = parse_header(file);
  for (std::size_t workers : {1u, 4u, 8u}) {
    ParallelDecoder dec({workers, {true, false}, true});
    DecodeStats stats;
    CHECK(dec.decode(file, &stats) == img);
    CHECK(stats.patches_decoded == 3 * header.patches_per_channel());
    for (const auto& plane : stats.writes) {
      REQUIRE(plane.size() == std::size_t{333} * 170);
      CHECK(std::all_of(plane.begin(), plane.end(), [](std::uint16_t v) { return v == 1; }));
    }
  }
}

TEST_CASE("planned jobs have disjoint output regions covering the image") {
  std::mt19937_64 rng(104);
  const auto img = oracle::random_image(70, 45, rng);
  const auto file = encode_image(img, 16);
  const auto header = parse_header(file);
  RawImage out(70, 45);
  const auto jobs = plan_decode_jobs(header, file, out);
  CHECK(jobs.size() == 3 * header.patches_per_channel());
  std::array<std::vector<int>, 3> cover;
  for (auto& c : cover) c.assign(70 * 45, 0);
  for (const auto& j : jobs) {
    // region span must start at the rect origin of the job's own plane
    CHECK(j.output.data.data() == out.planes[j.channel].data().data() + j.rect.y0 * 70 + j.rect.x0);
    for (std::uint32_t y = 0; y < j.rect.height; ++y)
      for (std::uint32_t x = 0; x < j.rect.width; ++x)
        ++cover[j.channel][(j.rect.y0 + y) * 70 + j.rect.x0 + x];
  }
  for (const auto& c : cover)
    CHECK(std::all_of(c.begin(), c.end(), [](int v) { return v == 1; }));
}

TEST_CASE("corrupt patch is reported with its location under any worker count") {
  std::mt19937_64 rng(105);
  const auto img = oracle::random_image(64, 64, rng);
  const auto file = encode_image(img, 16);
  const auto header = parse_header(file);
  auto bad = file;
  bad[header.byte_size() + header.offsets[1][7]] = 0xF0;  // k = 15

  for (std::size_t workers : {1u, 2u, 4u, 8u})
    for (const auto mode : kAllModes) {
      try {
        decode_image_parallel(bad, {workers, mode});
        FAIL("expected corrupt-stream");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kCorruptStream);
        REQUIRE(e.where());
        CHECK(e.where()->channel == 1);
        CHECK(e.where()->patch == 7);
      }
    }
}

TEST_CASE("header errors propagate unchanged") {
  std::vector<std::uint8_t> junk{'N', 'O', 'P', 'E', 0, 0, 0, 0, 0, 0, 0, 0, 0};
  try {
    decode_image_parallel(junk, {2, {}});
    FAIL("expected unrecognized-format");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnrecognizedFormat);
  }
}

TEST_CASE("decode_batch keeps order and isolates failures") {
  std::mt19937_64 rng(106);
  std::vector<RawImage> images;
  std::vector<std::vector<std::uint8_t>> files;
  for (int i = 0; i < 6; ++i) {
    images.push_back(oracle::textured_image(40 + 13 * i, 30 + 7 * i, rng));
    files.push_back(encode_image(images.back(), 16));
  }
  // file 2: corrupt G patch 1; file 4: not an L3 file
  const auto h2 = parse_header(files[2]);
  files[2][h2.byte_size() + h2.offsets[1][1]] = 0x00;
  files[4][0] = 'Z';

  for (std::size_t workers : {1u, 3u, 8u}) {
    const auto results = decode_batch(files, {workers, {true, true}});
    REQUIRE(results.size() == files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
      if (i == 2) {
        REQUIRE_FALSE(results[i].ok());
        CHECK(results[i].error->code() == ErrorCode::kCorruptStream);
        CHECK(results[i].error->where()->channel == 1);
        CHECK(results[i].error->where()->patch == 1);
      } else if (i == 4) {
        REQUIRE_FALSE(results[i].ok());
        CHECK(results[i].error->code() == ErrorCode::kUnrecognizedFormat);
      } else {
        REQUIRE(results[i].ok());
        CHECK(*results[i].image == images[i]);
      }
    }
  }
}

TEST_CASE("decode_batch of copies yields identical outputs") {
  std::mt19937_64 rng(107);
  const auto img = oracle::random_image(150, 90, rng);
  const std::vector<std::vector<std::uint8_t>> files(5, encode_image(img, 32));
  const auto results = decode_batch(files, {4, {}});
  for (const auto& r : results) {
    REQUIRE(r.ok());
    CHECK(*r.image == img);
  }
  // element-wise equivalence with single-image decode
  for (std::size_t i = 0; i < files.size(); ++i)
    CHECK(*results[i].image == decode_image_parallel(files[i], {2, {true, false}}));
}

TEST_CASE("throughput with 4 workers is not below 1 worker (soft)") {
  const unsigned cores = std::thread::hardware_concurrency();
  RawImage img(3840, 2160);
  std::mt19937_64 rng(108);
  for (auto& p : img.planes)
    for (auto& v : p.data()) v = static_cast<std::uint8_t>(rng() % 16);
  const auto file = encode_image(img);
  auto time_of = [&](std::size_t workers) {
    ParallelDecoder dec({workers, {true, true}});
    dec.decode(file);
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 3; ++i) dec.decode(file);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  const double one = time_of(1), four = time_of(4);
  MESSAGE("UHD decode: 1 worker " << one / 3 * 1e3 << " ms, 4 workers " << four / 3 * 1e3
                                  << " ms, " << cores << " cores");
  if (cores >= 4) WARN(four <= one);
}
