#include "crosscap/error.hpp"

namespace crosscap {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::contract: return "E_CONTRACT";
    case ErrorCode::input: return "E_INPUT";
    case ErrorCode::parse: return "E_PARSE";
    case ErrorCode::domain: return "E_DOMAIN";
    case ErrorCode::not_crosscap: return "E_NOT_CROSSCAP";
    case ErrorCode::whitney: return "E_WHITNEY";
    case ErrorCode::solve: return "E_SOLVE";
    case ErrorCode::seed: return "E_SEED";
    case ErrorCode::symmetry: return "E_SYMMETRY";
  }
  return "E_UNKNOWN";
}

}  // namespace crosscap
