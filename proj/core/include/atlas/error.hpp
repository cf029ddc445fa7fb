#pragma once

#include <stdexcept>
#include <string>

namespace atlas {

enum class ErrorKind {
    InvalidInput,
    RootConditioning,
    LabelAmbiguity,
    PathThroughTurningPoint,
    SeedExhaustion,
    ZeroX1,
    CorrectorDivergence,
    DegenerateTangent,
    PathTooCloseToCrossing,
    LabelMismatch,
    SimultaneousEvents,
    Unroutable,
    SaddleCollision,
    ProbeAmbiguity,
    QuadratureFailure,
    LoopTooWide,
    NonConvergence,
    AnchorDegenerate,
    IndexError,
    FormatVersion,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace atlas
