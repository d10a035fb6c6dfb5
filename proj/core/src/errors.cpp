#include "qli/errors.hpp"

namespace qli {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidChannel: return "invalid-channel";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::OutOfRange: return "out-of-range";
    case ErrorCode::ModelBreakdown: return "model-breakdown";
    case ErrorCode::InvalidPlan: return "invalid-plan";
    case ErrorCode::UndefinedBound: return "undefined-bound";
    case ErrorCode::CalibrationFailure: return "calibration-failure";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::EmptyFeasibleSet: return "empty-feasible-set";
  }
  return "unknown";
}

}  // namespace qli
