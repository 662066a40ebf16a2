#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace l3 {

/// Appends bit fields MSB-first into a growing byte buffer.
class BitWriter {
 public:
  /// Writes the low `bits` bits of `value` (bits in [0, 32]).
  void write(std::uint32_t value, unsigned bits);

  std::size_t bit_position() const noexcept { return bit_pos_; }
  const std::vector<std::uint8_t>& bytes() const noexcept { return buffer_; }

  /// Hands over the buffer; unused low bits of the last byte are zero.
  std::vector<std::uint8_t> take() && { return std::move(buffer_); }

 private:
  std::vector<std::uint8_t> buffer_;
  std::size_t bit_pos_ = 0;
};

/// Reads bit fields MSB-first from a borrowed byte buffer.
class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> buffer, std::size_t bit_pos = 0)
      : buffer_(buffer), bit_pos_(bit_pos) {}

  /// Reads `bits` bits (at most 32). Throws kTruncatedStream past the end.
  std::uint32_t read(unsigned bits);

  std::size_t bit_position() const noexcept { return bit_pos_; }
  std::size_t bits_remaining() const noexcept {
    return buffer_.size() * 8 - bit_pos_;
  }
  std::span<const std::uint8_t> buffer() const noexcept { return buffer_; }

  /// Moves the cursor forward without reading. Throws past the end.
  void skip(std::size_t bits);

 private:
  std::span<const std::uint8_t> buffer_;
  std::size_t bit_pos_;
};

/// Reads `bits` (1..8) bits starting at absolute bit offset `bit_pos`.
/// Caller guarantees the field lies inside `buffer`.
inline std::uint8_t peek_bits(std::span<const std::uint8_t> buffer,
                              std::size_t bit_pos, unsigned bits) {
  const std::size_t byte = bit_pos >> 3;
  const unsigned shift = static_cast<unsigned>(bit_pos & 7);
  std::uint32_t window = static_cast<std::uint32_t>(buffer[byte]) << 8;
  if (shift + bits > 8) window |= buffer[byte + 1];
  return static_cast<std::uint8_t>((window >> (16 - shift - bits)) &
                                   ((1u << bits) - 1u));
}

}  // namespace l3
