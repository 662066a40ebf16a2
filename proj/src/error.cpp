#include "l3/error.hpp"

namespace l3 {

namespace {

std::string compose(ErrorCode code, const std::string& detail,
                    const std::optional<PatchLocation>& where) {
  std::string out(to_string(code));
  if (where) {
    out += " (channel ";
    out += channel_name(where->channel);
    out += ", patch " + std::to_string(where->patch) + ")";
  }
  out += ": " + detail;
  return out;
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kCorruptStream: return "corrupt-stream";
    case ErrorCode::kTruncatedStream: return "truncated-stream";
    case ErrorCode::kUnrecognizedFormat: return "unrecognized-format";
    case ErrorCode::kCorruptHeader: return "corrupt-header";
    case ErrorCode::kUnsupportedInput: return "unsupported-input";
    case ErrorCode::kFeatureDisabled: return "feature-disabled";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown";
}

char channel_name(int channel) {
  switch (channel) {
    case 0: return 'R';
    case 1: return 'G';
    case 2: return 'B';
    default: return '?';
  }
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<PatchLocation> where)
    : std::runtime_error(compose(code, message, where)),
      code_(code),
      detail_(message),
      where_(where) {}

Error Error::at(PatchLocation where) const { return Error(code_, detail_, where); }

}  // namespace l3
