#include "hou/errors.hpp"

namespace hou {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::domain: return "domain";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::assumption: return "assumption";
    case ErrorKind::nonconvergence: return "nonconvergence";
  }
  return "unknown";
}

}  // namespace hou
