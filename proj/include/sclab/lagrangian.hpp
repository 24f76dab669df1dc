#pragma once

/*
 * Paths gamma : [0, 1] -> C with Lagrangian boundary conditions
 * gamma^{(l)}(0), gamma^{(l)}(1) in i^l R for l = 0..k, and the doubling
 * construction that turns them into loops symmetric about the real line:
 *
 *   Gamma(t) = gamma(2t)              on [0, 1/2],
 *   Gamma(t) = conj(gamma(2 - 2t))    on [1/2, 1].
 *
 * Symmetric loops Gamma(t) = conj(Gamma(1 - t)) are exactly those with real
 * Fourier coefficients; halving Gamma(t/2) inverts the doubling.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "sclab/error.hpp"
#include "sclab/loops.hpp"
#include "sclab/weights.hpp"

namespace sclab {

class LagPath {
public:
    /// Samples at t_i = i / (P - 1), i = 0..P-1 (both endpoints included).
    LagPath(std::vector<cplx> samples, int level = 0) : samples_(std::move(samples)), level_(level)
    {
        detail::require(samples_.size() >= 2, "LagPath: need at least two samples");
        detail::require(level >= 0, "LagPath: level must be >= 0");
    }

    template <typename F>
    static LagPath sample(std::size_t points, F&& gamma, int level = 0)
    {
        detail::require(points >= 2, "LagPath: need at least two samples");
        std::vector<cplx> s(points);
        for (std::size_t i = 0; i < points; ++i)
            s[i] = gamma(static_cast<double>(i) / static_cast<double>(points - 1));
        return LagPath(std::move(s), level);
    }

    std::size_t points() const noexcept { return samples_.size(); }
    double step() const noexcept { return 1.0 / static_cast<double>(samples_.size() - 1); }
    int level() const noexcept { return level_; }
    const std::vector<cplx>& samples() const noexcept { return samples_; }
    cplx operator[](std::size_t i) const { return samples_[i]; }

private:
    std::vector<cplx> samples_;
    int level_;
};

/// A loop claimed to satisfy Gamma(t) = conj(Gamma(1 - t)).
struct SymLoop {
    FourierLoop loop;
};

/// Default tolerance for residuals and symmetry defects.
inline constexpr double lagrangian_tolerance = 1e-8;

/// max_l |Im v_l|. Zero exactly when the loop is symmetric about the real line.
inline double symmetry_defect(const FourierLoop& g)
{
    double worst = 0.0;
    for (auto c : g.modes())
        worst = std::max(worst, std::abs(c.imag()));
    return worst;
}

/// Time-domain counterpart: max_j |Gamma(t_j) - conj(Gamma(1 - t_j))| over t_j = j/P.
inline double symmetry_defect_sampled(const FourierLoop& g, std::size_t resolution)
{
    double worst = 0.0;
    for (std::size_t j = 0; j < resolution; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(resolution);
        worst = std::max(worst, std::abs(g(t) - std::conj(g(1.0 - t))));
    }
    return worst;
}

/// Samples of the doubled loop at s_j = j / (2(P-1)), j = 0..2(P-1)-1. The
/// resolution is always even so t = 1/2 is a sample.
inline GridLoop double_to_grid(const LagPath& gamma, double tol = lagrangian_tolerance)
{
    const std::size_t n = gamma.points();
    const double start = std::abs(gamma[0].imag());
    const double end = std::abs(gamma[n - 1].imag());
    if (start > tol || end > tol)
        throw ContractError("double: boundary condition gamma(0), gamma(1) in R violated (|Im| = " +
                            std::to_string(std::max(start, end)) + ")");
    const std::size_t q = 2 * (n - 1);
    std::vector<cplx> s(q);
    for (std::size_t j = 0; j < q; ++j)
        s[j] = (j < n) ? gamma[j] : std::conj(gamma[q - j]);
    // Both halves meet at t = 1/2; use the real part of gamma(1) there.
    s[n - 1] = gamma[n - 1].real();
    s[0] = gamma[0].real();
    return GridLoop(q, std::move(s));
}

/// Doubles gamma and returns the Fourier coefficients up to `bandwidth`
/// (clamped below the Nyquist limit of the doubled grid).
inline SymLoop double_path(const LagPath& gamma, int bandwidth = 32, double tol = lagrangian_tolerance)
{
    const GridLoop grid = double_to_grid(gamma, tol);
    const int nyquist = static_cast<int>(grid.resolution() / 2) - 1;
    return SymLoop{grid_to_fourier(grid, std::min(bandwidth, std::max(nyquist, 0)))};
}

/// First half gamma(t) = Gamma(t/2) sampled on `points` nodes of [0, 1].
inline LagPath halve(const SymLoop& g, std::size_t points, int level = 0, double tol = lagrangian_tolerance)
{
    const double defect = symmetry_defect(g.loop);
    if (defect > tol)
        throw ContractError("halve: loop is not symmetric about the real line (max |Im v_l| = " +
                            std::to_string(defect) + ")");
    return LagPath::sample(
        points, [&](double t) { return g.loop(0.5 * t); }, level);
}

namespace detail {

/// Fornberg's recursion: weights w_i with f^{(order)}(x0) ~ sum_i w_i f(x_i).
inline std::vector<double> fd_weights(double x0, const std::vector<double>& x, int order)
{
    const std::size_t n = x.size();
    const auto mo = static_cast<std::size_t>(order);
    std::vector<std::vector<double>> c(n, std::vector<double>(mo + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, mo);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = c[i][mo];
    return w;
}

} // namespace detail

struct BoundaryResidual {
    int level = 0;     ///< declared level of the path
    int endpoint = 0;  ///< 0 or 1
    int l = 0;         ///< derivative order
    double residual = 0.0;
    int stencil_order = 0;
};

/// |Im(gamma^{(l)}(e) / i^l)| at e = 0, 1 for l = 0..k, with one-sided
/// difference stencils of accuracy 4 when the grid allows it, else 2.
inline std::vector<BoundaryResidual> boundary_residuals(const LagPath& gamma, int k)
{
    detail::require(k >= 0, "boundary_residuals: level must be >= 0");
    const std::size_t n = gamma.points();
    detail::require(n >= static_cast<std::size_t>(2 * k + 2),
                    "boundary_residuals: need P >= 2k+2 samples for one-sided stencils");
    const double h = gamma.step();
    std::vector<BoundaryResidual> out;
    for (int endpoint = 0; endpoint <= 1; ++endpoint) {
        for (int l = 0; l <= k; ++l) {
            const int accuracy = (n >= static_cast<std::size_t>(l + 4)) ? 4 : 2;
            cplx d;
            if (l == 0) {
                d = endpoint == 0 ? gamma[0] : gamma[n - 1];
            } else {
                const std::size_t width = static_cast<std::size_t>(l + accuracy);
                std::vector<double> nodes(width);
                for (std::size_t i = 0; i < width; ++i)
                    nodes[i] = static_cast<double>(i);
                const auto w = detail::fd_weights(0.0, nodes, l);
                const double sign = (endpoint == 0 || l % 2 == 0) ? 1.0 : -1.0;
                for (std::size_t i = 0; i < width; ++i)
                    d += w[i] * (endpoint == 0 ? gamma[i] : gamma[n - 1 - i]);
                d *= sign / std::pow(h, l);
            }
            // Divide by i^l: rotate by (-i)^l.
            cplx rot = 1.0;
            for (int r = 0; r < l; ++r)
                rot *= cplx(0.0, -1.0);
            out.push_back({gamma.level(), endpoint, l, std::abs((d * rot).imag()),
                           l == 0 ? 0 : accuracy});
        }
    }
    return out;
}

/// The weights (1 + l^2) of the symmetric-loop model sorted increasingly, as a
/// table weight over the 2M+1 modes |l| <= M.
inline WeightFunction symmetric_loop_weight(int bandwidth)
{
    detail::require(bandwidth >= 1, "symmetric_loop_weight: bandwidth must be >= 1");
    std::vector<double> w;
    for (int l = -bandwidth; l <= bandwidth; ++l)
        w.push_back(1.0 + static_cast<double>(l) * l);
    std::sort(w.begin(), w.end());
    return WeightFunction::table(std::move(w), 2.0, "sorted(1+l^2)");
}

} // namespace sclab
