#include "mrgnn/error.hpp"

namespace mrgnn {

const char* kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Capacity: return "capacity error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Numeric: return "numeric error";
  }
  return "error";
}

}  // namespace mrgnn
