#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sclab {

/// Raised when a caller violates an operation's precondition
/// (mismatched weights, misaligned shifts, too few grid samples, ...).
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an argument lies outside the mathematical domain of a map,
/// e.g. evaluating a weight function at index 0.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition)
        throw ContractError(message);
}

/// True when x is an integer up to a few ulps of its magnitude.
inline bool near_integer(double x, long long& out)
{
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x)))
        return false;
    out = static_cast<long long>(r);
    return true;
}

} // namespace detail
} // namespace sclab
