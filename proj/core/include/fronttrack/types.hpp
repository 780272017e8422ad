#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace fronttrack {

// Systems are small (N <= 3), so states and matrices use fixed-capacity storage
// and never touch the heap.
constexpr int kMaxEqs = 3;
using State = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxEqs, 1>;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxEqs, kMaxEqs>;

enum class ErrorCode {
    NonHyperbolic,
    OutOfDomain,
    LeftDomain,
    NoConvergence,
    TVTooLarge,
    BudgetExceeded,
    FrontCountExplosion,
    InconsistentJumpSet,
    BoundaryNotCharacteristic,
    JumpSetMissing,
    NotScalar,
    InvalidArgument,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonHyperbolic: return "NonHyperbolic";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::LeftDomain: return "LeftDomain";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::TVTooLarge: return "TVTooLarge";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::FrontCountExplosion: return "FrontCountExplosion";
    case ErrorCode::InconsistentJumpSet: return "InconsistentJumpSet";
    case ErrorCode::BoundaryNotCharacteristic: return "BoundaryNotCharacteristic";
    case ErrorCode::JumpSetMissing: return "JumpSetMissing";
    case ErrorCode::NotScalar: return "NotScalar";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace fronttrack
