#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crosscap {

/// Stable error classes surfaced by the command-line reports.
enum class ErrorCode {
  contract,      ///< caller broke a documented precondition
  input,         ///< E_INPUT: malformed request or command line
  parse,         ///< E_PARSE: malformed expression or unbound parameter
  domain,        ///< E_DOMAIN: elementary function evaluated outside its domain
  not_crosscap,  ///< E_NOT_CROSSCAP: point is regular, rank zero, or frame is degenerate
  whitney,       ///< E_WHITNEY: Whitney's criterion fails
  solve,         ///< E_SOLVE: normal-form solve or jet inversion broke down
  seed,          ///< E_SEED: double-point tracing could not start or collapsed
  symmetry,      ///< requested symmetry does not hold
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ContractViolation : public Error {
 public:
  explicit ContractViolation(const std::string& what) : Error(ErrorCode::contract, what) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorCode::input, what) {}
};

/// Raised by elementary functions, division, and inner jets with a nonzero constant term.
/// `component` is the map component being evaluated, or -1 when not applicable.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what, int component = -1)
      : Error(ErrorCode::domain, what), component_(component) {}
  int component() const noexcept { return component_; }

 private:
  int component_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(ErrorCode::parse, what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnboundParameter : public Error {
 public:
  explicit UnboundParameter(const std::string& name)
      : Error(ErrorCode::parse, "unbound parameter '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class NotInvertible : public Error {
 public:
  explicit NotInvertible(const std::string& what) : Error(ErrorCode::solve, what) {}
};

class NotSingular : public Error {
 public:
  explicit NotSingular(const std::string& what) : Error(ErrorCode::not_crosscap, what) {}
};

class RankZero : public Error {
 public:
  explicit RankZero(const std::string& what) : Error(ErrorCode::not_crosscap, what) {}
};

class WhitneyFail : public Error {
 public:
  explicit WhitneyFail(const std::string& what) : Error(ErrorCode::whitney, what) {}
};

class DegenerateFrame : public Error {
 public:
  explicit DegenerateFrame(const std::string& what) : Error(ErrorCode::not_crosscap, what) {}
};

class SolveInconsistent : public Error {
 public:
  explicit SolveInconsistent(const std::string& what) : Error(ErrorCode::solve, what) {}
};

class SymmetryAbsent : public Error {
 public:
  explicit SymmetryAbsent(const std::string& what) : Error(ErrorCode::symmetry, what) {}
};

class SingularPoint : public Error {
 public:
  explicit SingularPoint(const std::string& what) : Error(ErrorCode::not_crosscap, what) {}
};

class SeedFailure : public Error {
 public:
  SeedFailure(const std::string& what, double best_residual)
      : Error(ErrorCode::seed, what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

class StepCollapse : public Error {
 public:
  explicit StepCollapse(const std::string& what) : Error(ErrorCode::seed, what) {}
};

}  // namespace crosscap
