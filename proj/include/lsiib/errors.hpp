#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lsiib {

// Every failure the library reports carries one of these kinds. The CLI maps
// them onto process exit codes (see exit_code()).
enum class ErrorKind {
  config,              // malformed or incomplete experiment description
  invalid_parameter,   // physical inputs violate a precondition
  zero_detuning,       // closed-form light shifts need delta != 0
  basis_mismatch,      // state and Hamiltonian live on different bases
  precondition,        // protocol input outside the allowed subspace
  protocol_violation,  // pulse would drive the register out of its Hilbert space
  invalid_geometry,    // cavity dimensions or mirror transmittivity out of range
  fit_failure,         // no oscillation found in a trajectory
  numerical,           // decomposition failed or an invariant drifted
};

const char* to_string(ErrorKind kind);

// 2 config, 3 physics precondition, 4 internal numerical.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return lsiib::exit_code(kind_); }

 private:
  ErrorKind kind_;
};

// Config validation collects every problem before failing; each issue is
// prefixed with its key path ("ladder.omega3: unknown key").
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues);

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

}  // namespace lsiib
