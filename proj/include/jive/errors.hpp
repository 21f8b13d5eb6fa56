#pragma once

#include <stdexcept>
#include <string>

namespace jive {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct DimensionOverflow : Error { using Error::Error; };
struct NonFiniteEntry : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct InvalidRank : Error { using Error::Error; };
struct NotSquare : Error { using Error::Error; };
struct NotSymmetric : Error { using Error::Error; };
struct OddK : Error { using Error::Error; };
struct SchemeConstraint : Error { using Error::Error; };
struct InvalidConfig : Error { using Error::Error; };
struct EmptyList : Error { using Error::Error; };
struct UnknownPreset : Error { using Error::Error; };
struct UnknownIdentity : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct NonpositiveError : Error { using Error::Error; };
struct NumericalFailure : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace jive
