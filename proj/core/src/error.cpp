#include "tagtrace/error.hpp"

namespace tagtrace {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io:
      return "io";
    case ErrorKind::empty_input:
      return "empty_input";
    case ErrorKind::configuration:
      return "configuration";
    case ErrorKind::cold_start:
      return "cold_start";
    case ErrorKind::capacity:
      return "capacity";
  }
  return "unknown";
}

}  // namespace tagtrace
