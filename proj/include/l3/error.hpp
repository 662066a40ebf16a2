#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace l3 {

enum class ErrorCode {
  kInvalidArgument,
  kCorruptStream,
  kTruncatedStream,
  kUnrecognizedFormat,
  kCorruptHeader,
  kUnsupportedInput,
  kFeatureDisabled,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Location of a failing patch inside an L3 file.
struct PatchLocation {
  int channel = 0;  // 0=R, 1=G, 2=B
  std::size_t patch = 0;
};

char channel_name(int channel);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<PatchLocation> where = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<PatchLocation>& where() const noexcept { return where_; }

  /// Same error, annotated with the patch it occurred in.
  Error at(PatchLocation where) const;

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<PatchLocation> where_;
};

}  // namespace l3
