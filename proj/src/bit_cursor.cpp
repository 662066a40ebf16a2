#include "l3/bit_cursor.hpp"

#include "l3/error.hpp"

namespace l3 {

void BitWriter::write(std::uint32_t value, unsigned bits) {
  if (bits > 32) throw Error(ErrorCode::kInvalidArgument, "bit field wider than 32");
  for (unsigned i = bits; i-- > 0;) {
    if ((bit_pos_ & 7) == 0) buffer_.push_back(0);
    const unsigned bit = (value >> i) & 1u;
    buffer_.back() |= static_cast<std::uint8_t>(bit << (7 - (bit_pos_ & 7)));
    ++bit_pos_;
  }
}

std::uint32_t BitReader::read(unsigned bits) {
  if (bits > 32) throw Error(ErrorCode::kInvalidArgument, "bit field wider than 32");
  if (bits > bits_remaining())
    throw Error(ErrorCode::kTruncatedStream,
                "need " + std::to_string(bits) + " bits, " +
                    std::to_string(bits_remaining()) + " left");
  std::uint32_t value = 0;
  for (unsigned i = 0; i < bits; ++i) {
    const std::uint8_t byte = buffer_[bit_pos_ >> 3];
    value = (value << 1) | ((byte >> (7 - (bit_pos_ & 7))) & 1u);
    ++bit_pos_;
  }
  return value;
}

void BitReader::skip(std::size_t bits) {
  if (bits > bits_remaining())
    throw Error(ErrorCode::kTruncatedStream, "skip past end of stream");
  bit_pos_ += bits;
}

}  // namespace l3
