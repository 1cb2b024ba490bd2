#pragma once

#include <stdexcept>
#include <string>

namespace surfframe {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// geometry
struct DegenerateFacet : Error { using Error::Error; };
struct HypothesisViolation : Error { using Error::Error; };
struct EmptyCap : Error { using Error::Error; };
struct InvalidBody : Error { using Error::Error; };

// measure
struct ResolutionTooLow : Error { using Error::Error; };
struct UnsupportedDimension : Error { using Error::Error; };
struct UnsupportedBody : Error { using Error::Error; };
struct TooCloseToOrigin : Error { using Error::Error; };

// frame estimation
struct IllConditionedTestGram : Error { using Error::Error; };
struct DeltaOutOfRange : Error { using Error::Error; };

// spectrum construction
struct DirectionSearchFailed : Error { using Error::Error; };
struct SeparationStall : Error { using Error::Error; };
struct PhaseDegenerate : Error { using Error::Error; };
struct SpectrumInvariantViolation : Error { using Error::Error; };

// obstruction
struct QuadratureUnstable : Error { using Error::Error; };

// eigenbasis
struct GroupAxiomViolation : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct NotIdempotent : Error { using Error::Error; };

// harness
struct ConfigInvalid : Error { using Error::Error; };

}  // namespace surfframe
