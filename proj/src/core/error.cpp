#include "mitodet/core/error.hpp"

namespace mitodet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNotFound: return "not found";
    case ErrorKind::kIo: return "i/o error";
    case ErrorKind::kUnsupportedFormat: return "unsupported format";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kData: return "data error";
    case ErrorKind::kInsufficientTissue: return "insufficient tissue";
    case ErrorKind::kDegenerateStain: return "degenerate stain";
    case ErrorKind::kScorer: return "scorer error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace mitodet
