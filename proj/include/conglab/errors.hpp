#pragma once

#include <stdexcept>
#include <string>

namespace conglab {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ring construction
struct NotPrimeError : Error { using Error::Error; };
struct EvenPrimeError : Error { using Error::Error; };
struct BadExponentError : Error { using Error::Error; };

// residue arithmetic
struct NonUnitError : Error { using Error::Error; };
struct NonUnitDenominatorError : Error { using Error::Error; };

// p-adic scalars
struct PrecisionExhaustedError : Error { using Error::Error; };

// Bernoulli numbers
struct IndexTooLargeError : Error { using Error::Error; };
struct PoleOrUnsupportedError : Error { using Error::Error; };
struct PAdicPoleError : Error { using Error::Error; };

// sum engines
struct BudgetExceededError : Error { using Error::Error; };
struct TargetTooLargeError : Error { using Error::Error; };
struct RangeEmptyError : Error { using Error::Error; };
struct UnsupportedArityError : Error { using Error::Error; };

// claim evaluation
struct InapplicableError : Error { using Error::Error; };

// coefficient mining
struct BernoulliVanishesError : Error { using Error::Error; };
struct NonIntegralSampleError : Error { using Error::Error; };

}  // namespace conglab
