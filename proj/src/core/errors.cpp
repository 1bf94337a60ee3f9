#include "lsiib/errors.hpp"

namespace lsiib {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::zero_detuning: return "zero-detuning";
    case ErrorKind::basis_mismatch: return "basis-mismatch";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::protocol_violation: return "protocol-violation";
    case ErrorKind::invalid_geometry: return "invalid-geometry";
    case ErrorKind::fit_failure: return "fit-failure";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
      return 2;
    case ErrorKind::invalid_parameter:
    case ErrorKind::zero_detuning:
    case ErrorKind::basis_mismatch:
    case ErrorKind::precondition:
    case ErrorKind::protocol_violation:
    case ErrorKind::invalid_geometry:
      return 3;
    case ErrorKind::fit_failure:
    case ErrorKind::numerical:
      return 4;
  }
  return 4;
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

namespace {
std::string join_issues(const std::vector<std::string>& issues) {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += issue;
  }
  return out;
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : Error(ErrorKind::config, join_issues(issues)), issues_(std::move(issues)) {}

}  // namespace lsiib
