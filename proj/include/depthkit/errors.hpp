#pragma once

#include <stdexcept>
#include <string>

namespace depthkit {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define DEPTHKIT_ERROR(Name)                                                  \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

// residue
DEPTHKIT_ERROR(NotInvertible);
DEPTHKIT_ERROR(UndefinedValuation);
DEPTHKIT_ERROR(NotAUnit);
DEPTHKIT_ERROR(NotARoot);
DEPTHKIT_ERROR(TooLarge);
DEPTHKIT_ERROR(DomainError);

// characters
DEPTHKIT_ERROR(NotAdditive);
DEPTHKIT_ERROR(NoConstant);

// charsum
DEPTHKIT_ERROR(EmptyStratum);
DEPTHKIT_ERROR(UnsupportedParity);
DEPTHKIT_ERROR(Unsupported);
DEPTHKIT_ERROR(NoCrossing);

// analytic
DEPTHKIT_ERROR(OutOfRange);
DEPTHKIT_ERROR(AsymptoticRegimeRequired);
DEPTHKIT_ERROR(NoStationaryPoint);
DEPTHKIT_ERROR(MultipleStationaryPoints);
DEPTHKIT_ERROR(QuadratureFailure);

// voronoi
DEPTHKIT_ERROR(NotCoprime);
DEPTHKIT_ERROR(ContourTruncationFailure);
DEPTHKIT_ERROR(RankDeficientBasket);

// harness
DEPTHKIT_ERROR(UnknownVerifier);
DEPTHKIT_ERROR(InvalidGrid);
DEPTHKIT_ERROR(ConfigError);
DEPTHKIT_ERROR(IoError);

#undef DEPTHKIT_ERROR

} // namespace depthkit
