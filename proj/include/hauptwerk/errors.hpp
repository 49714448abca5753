#pragma once
#include <stdexcept>
#include <string>

namespace hauptwerk {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define HAUPTWERK_ERROR(Name)                                                  \
    struct Name : Error {                                                      \
        explicit Name(const std::string& w = "") : Error(#Name, w) {}          \
    };

HAUPTWERK_ERROR(DivisionByZero)
HAUPTWERK_ERROR(NotAUnit)
HAUPTWERK_ERROR(InvalidFactor)
HAUPTWERK_ERROR(NotCoprime)
HAUPTWERK_ERROR(NotPrimitive)
HAUPTWERK_ERROR(WeightNotZero)
HAUPTWERK_ERROR(MultiplierMismatch)
HAUPTWERK_ERROR(UnsupportedLevel)
HAUPTWERK_ERROR(IdentityViolation)
HAUPTWERK_ERROR(NonIntegralExponent)
HAUPTWERK_ERROR(DegreeMismatch)
HAUPTWERK_ERROR(PrecisionExhausted)
HAUPTWERK_ERROR(PrecisionUnreachable)
HAUPTWERK_ERROR(EnumerationIncomplete)
HAUPTWERK_ERROR(CaseMismatch)
HAUPTWERK_ERROR(UnsupportedSubcase)
HAUPTWERK_ERROR(OutOfPrecision)
HAUPTWERK_ERROR(InvalidArgument)

#undef HAUPTWERK_ERROR

}  // namespace hauptwerk
