#pragma once

/*
 * The shift map Psi(tau, v) = tau_* v, (tau_* v)(t) = v(t + tau), and its
 * scale differentials. At a point of level k the k-th differential is
 *
 *   D^k Psi(tau, v)((T_1, V_1), ..., (T_k, V_k))
 *       = tau_* v^{(k)} T_1 ... T_k
 *       + sum_j tau_* V_j^{(k-1)} T_1 ... (T_j omitted) ... T_k.
 *
 * V_j enter linearly because Psi is linear in v; each tau direction costs one
 * derivative of regularity. Two representations are supported: FourierLoop
 * (spectral, exact shifts and derivatives) and GridPath (finite differences,
 * grid-aligned shifts only).
 */

#include <algorithm>
#include <cfloat>
#include <climits>
#include <cmath>
#include <concepts>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sclab/error.hpp"
#include "sclab/loops.hpp"
#include "sclab/paths.hpp"

namespace sclab {

// Representation hooks. A type models ShiftRepresentation when these exist.

inline FourierLoop shift_by(const FourierLoop& v, double tau) { return shift_fourier(v, tau); }
inline GridPath shift_by(const GridPath& v, double tau) { return shift_path(v, tau); }

inline FourierLoop derive(const FourierLoop& v, int order) { return derivative(v, order); }
inline GridPath derive(const GridPath& v, int order) { return discrete_derivative(v, order); }

/// Level-j norm: W^{j,2}(S^1) for loops, L^2(R, H_j) for paths.
inline double level_norm(const FourierLoop& v, int level) { return sobolev_norm(v, level); }
inline double level_norm(const GridPath& v, int level) { return lp_norm(v, 2.0, level); }

/// Spectral loops resolve derivatives of every order.
inline int regularity(const FourierLoop&) { return INT_MAX; }
inline int regularity(const GridPath& v) { return v.regularity(); }

template <typename T>
concept ShiftRepresentation = std::copyable<T> && requires(const T& v, T& w, double s, int k) {
    { shift_by(v, s) } -> std::same_as<T>;
    { derive(v, k) } -> std::same_as<T>;
    { level_norm(v, k) } -> std::convertible_to<double>;
    { regularity(v) } -> std::convertible_to<int>;
    w.axpy(s, v);
    w *= s;
};

/// (tau, v) in R + E. The R factor carries the constant scale structure.
template <ShiftRepresentation T>
struct ShiftPoint {
    double tau = 0.0;
    T v;
};

/// (T, V) in R + E.
template <ShiftRepresentation T>
struct TangentVector {
    double time = 0.0;
    T direction;

    TangentVector& operator+=(const TangentVector& other)
    {
        time += other.time;
        direction.axpy(1.0, other.direction);
        return *this;
    }
    TangentVector& operator*=(double s)
    {
        time *= s;
        direction *= s;
        return *this;
    }
    friend TangentVector operator+(TangentVector a, const TangentVector& b) { return a += b; }
    friend TangentVector operator*(double s, TangentVector a) { return a *= s; }
};

template <ShiftRepresentation T>
T shift_map(const ShiftPoint<T>& point)
{
    return shift_by(point.v, point.tau);
}

namespace detail {

template <typename T>
void require_regularity(const T& x, int needed, const char* what)
{
    if (regularity(x) < needed)
        throw ContractError(std::string(what) + " needs " + std::to_string(needed) +
                            " derivatives but the representation only supports " + std::to_string(regularity(x)));
}

template <typename T>
T zero_like(const T& x)
{
    T z = x;
    z *= 0.0;
    return z;
}

} // namespace detail

/// D Psi(tau, v)(T, V) = tau_* v' T + tau_* V.
template <ShiftRepresentation T>
T shift_d1(const ShiftPoint<T>& point, const TangentVector<T>& tv)
{
    detail::require_regularity(point.v, 1, "shift_d1: base point");
    T out = shift_by(derive(point.v, 1), point.tau);
    out *= tv.time;
    out.axpy(1.0, shift_by(tv.direction, point.tau));
    return out;
}

/// D^2 Psi(tau, v)((T1, V1), (T2, V2)) = tau_* v'' T1 T2 + tau_* V1' T2 + tau_* V2' T1.
template <ShiftRepresentation T>
T shift_d2(const ShiftPoint<T>& point, const TangentVector<T>& a, const TangentVector<T>& b)
{
    detail::require_regularity(point.v, 2, "shift_d2: base point");
    detail::require_regularity(a.direction, 1, "shift_d2: first tangent");
    detail::require_regularity(b.direction, 1, "shift_d2: second tangent");
    T out = shift_by(derive(point.v, 2), point.tau);
    out *= a.time * b.time;
    out.axpy(b.time, shift_by(derive(a.direction, 1), point.tau));
    out.axpy(a.time, shift_by(derive(b.direction, 1), point.tau));
    return out;
}

/// k-th differential for k = tvs.size() >= 1.
template <ShiftRepresentation T>
T shift_dk(const ShiftPoint<T>& point, std::span<const TangentVector<T>> tvs)
{
    const int k = static_cast<int>(tvs.size());
    detail::require(k >= 1, "shift_dk: need at least one tangent vector");
    detail::require_regularity(point.v, k, "shift_dk: base point");
    for (const auto& tv : tvs)
        detail::require_regularity(tv.direction, k - 1, "shift_dk: tangent");

    double all_times = 1.0;
    for (const auto& tv : tvs)
        all_times *= tv.time;
    T out = shift_by(derive(point.v, k), point.tau);
    out *= all_times;
    for (int j = 0; j < k; ++j) {
        double others = 1.0;
        for (int i = 0; i < k; ++i)
            if (i != j)
                others *= tvs[static_cast<std::size_t>(i)].time;
        if (others == 0.0)
            continue;
        out.axpy(others, shift_by(derive(tvs[static_cast<std::size_t>(j)].direction, k - 1), point.tau));
    }
    return out;
}

template <ShiftRepresentation T>
T shift_dk(const ShiftPoint<T>& point, const std::vector<TangentVector<T>>& tvs)
{
    return shift_dk(point, std::span<const TangentVector<T>>(tvs));
}

/// T Psi(x, h) = (Psi(x), D Psi(x) h). A tangent at level (k+1, k) goes to level (k+1, k).
template <ShiftRepresentation T>
struct TangentPair {
    T base;
    T tangent;
};

template <ShiftRepresentation T>
TangentPair<T> tangent_map(const ShiftPoint<T>& point, const TangentVector<T>& tv)
{
    return {shift_map(point), shift_d1(point, tv)};
}

/// Compares T(Psi_sigma o Psi) with T Psi_sigma o T Psi at (point, tv) and
/// returns the larger level-0 distance of the two components. Psi_sigma is the
/// fixed (linear) shift by sigma, so its tangent map is itself on both slots.
template <ShiftRepresentation T>
double chain_rule_check(double sigma, const ShiftPoint<T>& point, const TangentVector<T>& tv)
{
    // Left side: Psi_sigma o Psi is the shift map evaluated at tau + sigma.
    const auto lhs = tangent_map(ShiftPoint<T>{point.tau + sigma, point.v}, tv);
    // Right side: push the tangent pair of Psi through the linear map Psi_sigma.
    const auto inner = tangent_map(point, tv);
    const TangentPair<T> rhs{shift_by(inner.base, sigma), shift_by(inner.tangent, sigma)};

    T base_diff = lhs.base;
    base_diff.axpy(-1.0, rhs.base);
    T tangent_diff = lhs.tangent;
    tangent_diff.axpy(-1.0, rhs.tangent);
    return std::max(level_norm(base_diff, 0), level_norm(tangent_diff, 0));
}

struct FDLevel {
    int level = 0;
    std::vector<double> errors;
    /// Median of the pairwise log-ratio orders over step pairs whose errors sit
    /// above the roundoff floor; empty when no such pair exists.
    std::optional<double> order;
    /// Every error is below the roundoff floor: the difference quotient is exact.
    bool at_roundoff = false;
};

struct FDReport {
    int m = 0;
    std::vector<double> eps;
    std::vector<FDLevel> levels;
    bool inconclusive = false;
};

struct FDOptions {
    /// Highest level available to the measurement; levels 0..(max_level - m) are reported.
    int max_level = -1;
    /// Roundoff floor multiplier on DBL_EPSILON * scale / eps^m.
    double roundoff_factor = 1e3;
};

namespace detail {

inline std::optional<double> median_order(std::span<const double> eps, std::span<const double> errors,
                                          std::span<const double> floors)
{
    std::vector<double> orders;
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        if (errors[i] <= floors[i] || errors[i + 1] <= floors[i + 1])
            continue;
        orders.push_back(std::log(errors[i] / errors[i + 1]) / std::log(eps[i] / eps[i + 1]));
    }
    if (orders.empty())
        return std::nullopt;
    std::sort(orders.begin(), orders.end());
    const std::size_t n = orders.size();
    return (n % 2 == 1) ? orders[n / 2] : 0.5 * (orders[n / 2 - 1] + orders[n / 2]);
}

} // namespace detail

/// Checks D^m Psi against the symmetric 2^m-point difference quotient
///   (2 eps)^{-m} sum_{s in {+-1}^m} s_1...s_m Psi(x + eps sum_i s_i h_i),
/// whose error is O(eps^2) for smooth data. Errors are measured in every level
/// norm the data supports.
template <ShiftRepresentation T>
FDReport fd_verify(const ShiftPoint<T>& point, int m, const std::vector<TangentVector<T>>& tvs,
                   std::span<const double> eps_list, FDOptions options = {})
{
    detail::require(m >= 1 && tvs.size() == static_cast<std::size_t>(m), "fd_verify: need exactly m tangent vectors");
    detail::require(!eps_list.empty(), "fd_verify: empty step list");
    for (double e : eps_list)
        detail::require(e > 0.0, "fd_verify: steps must be positive");

    int max_level = options.max_level;
    if (max_level < 0)
        max_level = m + 2;
    if constexpr (std::is_same_v<T, GridPath>) {
        if (!point.v.weight())
            max_level = m;
    }
    const int top = std::max(0, max_level - m);

    FDReport report;
    report.m = m;
    report.eps.assign(eps_list.begin(), eps_list.end());

    const T exact = shift_dk(point, tvs);
    std::vector<T> quotients;
    quotients.reserve(eps_list.size());
    for (double eps : eps_list) {
        T sum = detail::zero_like(point.v);
        const unsigned corners = 1u << m;
        for (unsigned mask = 0; mask < corners; ++mask) {
            double sign = 1.0;
            double tau = point.tau;
            T v = point.v;
            for (int i = 0; i < m; ++i) {
                const double s = (mask >> i) & 1u ? -1.0 : 1.0;
                sign *= s;
                tau += s * eps * tvs[static_cast<std::size_t>(i)].time;
                v.axpy(s * eps, tvs[static_cast<std::size_t>(i)].direction);
            }
            sum.axpy(sign, shift_by(v, tau));
        }
        sum *= 1.0 / std::pow(2.0 * eps, m);
        sum.axpy(-1.0, exact);
        quotients.push_back(std::move(sum));
    }

    bool any_order = false;
    for (int j = 0; j <= top; ++j) {
        FDLevel lvl;
        lvl.level = j;
        double scale = level_norm(point.v, j);
        for (const auto& tv : tvs)
            scale += level_norm(tv.direction, j);
        std::vector<double> floors;
        for (std::size_t i = 0; i < eps_list.size(); ++i) {
            lvl.errors.push_back(level_norm(quotients[i], j));
            floors.push_back(options.roundoff_factor * DBL_EPSILON * std::max(scale, 1.0) /
                             std::pow(eps_list[i], m));
        }
        lvl.order = detail::median_order(eps_list, lvl.errors, floors);
        lvl.at_roundoff = true;
        for (std::size_t i = 0; i < eps_list.size(); ++i)
            lvl.at_roundoff = lvl.at_roundoff && lvl.errors[i] <= floors[i];
        any_order = any_order || lvl.order.has_value();
        report.levels.push_back(std::move(lvl));
    }
    report.inconclusive = !any_order && !std::all_of(report.levels.begin(), report.levels.end(),
                                                     [](const FDLevel& l) { return l.at_roundoff; });
    return report;
}

} // namespace sclab
