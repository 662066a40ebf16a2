#pragma once

// Test-only reference computations. These restate the format rules
// directly (brute-force candidate scan, min/max bit counting) and share no
// code with the library's encoder.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <vector>

#include "l3/container.hpp"

namespace oracle {

/// Index 0/1/2 for top-left/top/top-right after border substitution.
inline int choose(int tl, int t, int tr) {
  const std::array<int, 3> cand{tl, t, tr};
  const int ref = tl + tr - t;
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(cand[i] - ref) < std::abs(cand[best] - ref)) best = i;
  return best;
}

inline int predict(int tl, int t, int tr) {
  const std::array<int, 3> cand{tl, t, tr};
  return cand[choose(tl, t, tr)];
}

/// Bits needed for a row of residuals, including the 12-bit row header.
inline std::size_t row_bits(const std::vector<int>& row) {
  const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
  unsigned k = 1;
  while ((1u << k) <= static_cast<unsigned>(*hi - *lo)) ++k;
  return 12 + k * row.size();
}

/// Encoded byte size of a w x h patch read from `px(x, y)`.
template <typename Pixel>
std::size_t patch_bytes(std::uint32_t w, std::uint32_t h, Pixel px) {
  std::size_t bits = 0;
  for (std::uint32_t y = 0; y < h; ++y) {
    std::vector<int> row(w);
    for (std::uint32_t x = 0; x < w; ++x) {
      if (y == 0) {
        row[x] = px(x, 0);
        continue;
      }
      const int t = px(x, y - 1);
      const int tl = x > 0 ? px(x - 1, y - 1) : t;
      const int tr = x + 1 < w ? px(x + 1, y - 1) : t;
      row[x] = ((px(x, y) - predict(tl, t, tr)) % 256 + 256) % 256;
    }
    bits += row_bits(row);
  }
  return (bits + 7) / 8;
}

/// Expected L3 file size: header plus every patch of every channel.
inline std::size_t file_bytes(const l3::RawImage& img, std::uint32_t n) {
  const std::uint32_t cols = (img.width + n - 1) / n;
  const std::uint32_t rows = (img.height + n - 1) / n;
  std::size_t total = 13 + 12 * std::size_t{cols} * rows;
  for (int c = 0; c < 3; ++c)
    for (std::uint32_t py = 0; py < rows; ++py)
      for (std::uint32_t px = 0; px < cols; ++px) {
        const std::uint32_t x0 = px * n, y0 = py * n;
        const std::uint32_t w = std::min(n, img.width - x0), h = std::min(n, img.height - y0);
        total += patch_bytes(w, h, [&](std::uint32_t x, std::uint32_t y) {
          return int{img.planes[c](x0 + x, y0 + y)};
        });
      }
  return total;
}

inline l3::RawImage random_image(std::uint32_t w, std::uint32_t h, std::mt19937_64& rng) {
  l3::RawImage img(w, h);
  for (auto& p : img.planes)
    for (auto& v : p.data()) v = static_cast<std::uint8_t>(rng());
  return img;
}

/// Smooth image with noise so rows get a spread of bit widths.
inline l3::RawImage textured_image(std::uint32_t w, std::uint32_t h, std::mt19937_64& rng) {
  l3::RawImage img(w, h);
  const int amp = static_cast<int>(rng() % 40);
  const int fx = 1 + static_cast<int>(rng() % 7), fy = 1 + static_cast<int>(rng() % 5);
  for (int c = 0; c < 3; ++c)
    for (std::uint32_t y = 0; y < h; ++y)
      for (std::uint32_t x = 0; x < w; ++x) {
        const int noise = amp ? static_cast<int>(rng() % (amp + 1)) : 0;
        img.planes[c](x, y) =
            static_cast<std::uint8_t>((static_cast<int>(x) * fx + static_cast<int>(y) * fy +
                                       c * 40 + noise) & 0xFF);
      }
  return img;
}

}  // namespace oracle
