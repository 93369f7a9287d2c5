#pragma once

#include <stdexcept>
#include <string>

namespace rsreg {

// Base class for every failure surfaced by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define RSREG_DEFINE_ERROR(Name)            \
    struct Name : Error {                   \
        using Error::Error;                 \
    };

RSREG_DEFINE_ERROR(DimensionMismatch)
RSREG_DEFINE_ERROR(OverflowGuard)
RSREG_DEFINE_ERROR(PreconditionViolated)
RSREG_DEFINE_ERROR(SingularA)
RSREG_DEFINE_ERROR(NonSymmetric)
RSREG_DEFINE_ERROR(IndefinitePencil)
RSREG_DEFINE_ERROR(RankDeficient)
RSREG_DEFINE_ERROR(InvalidEps)
RSREG_DEFINE_ERROR(InvalidDelta)
RSREG_DEFINE_ERROR(NonPositiveDiagonal)
RSREG_DEFINE_ERROR(IndefiniteBase)
RSREG_DEFINE_ERROR(NotPositiveDefinite)
RSREG_DEFINE_ERROR(NonPositiveSurrogate)
RSREG_DEFINE_ERROR(AlphaZero)
RSREG_DEFINE_ERROR(ParseError)
RSREG_DEFINE_ERROR(Diverged)

#undef RSREG_DEFINE_ERROR

}  // namespace rsreg
