#pragma once

/*
 * Loops S^1 -> C^n in two representations:
 *
 *   FourierLoop  complex coefficients v_l, l = -M..M, so v(t) = sum v_l e^{2 pi i l t}.
 *                Shifts and derivatives are exact; the level-k norm is
 *                (sum (1 + l^2)^k |v_l|^2)^{1/2}.
 *   GridLoop     samples at t_j = j/P. Used for step functions that are not
 *                band-limited; norms are uniform Riemann sums with weight 1/P.
 */

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "sclab/error.hpp"

namespace sclab {

using cplx = std::complex<double>;

namespace detail {

/// e^{2 pi i x}, with x reduced mod 1 first so integer and half-integer
/// arguments come out exact.
inline cplx unit_phase(double x)
{
    double r = x - std::floor(x);
    if (r == 0.0)
        return {1.0, 0.0};
    if (r == 0.5)
        return {-1.0, 0.0};
    if (r == 0.25)
        return {0.0, 1.0};
    if (r == 0.75)
        return {0.0, -1.0};
    const double a = 2.0 * std::numbers::pi * r;
    return {std::cos(a), std::sin(a)};
}

} // namespace detail

class FourierLoop {
public:
    FourierLoop() : FourierLoop(0) {}

    explicit FourierLoop(int bandwidth, int components = 1)
        : bandwidth_(bandwidth), components_(components)
    {
        detail::require(bandwidth >= 0, "FourierLoop bandwidth must be >= 0");
        detail::require(components >= 1, "FourierLoop needs at least one component");
        modes_.assign(static_cast<std::size_t>((2 * bandwidth + 1) * components), cplx{});
    }

    /// Coefficients ordered l = -M..M, each l holding `components` consecutive entries.
    FourierLoop(int bandwidth, std::vector<cplx> modes, int components = 1)
        : bandwidth_(bandwidth), components_(components), modes_(std::move(modes))
    {
        detail::require(bandwidth >= 0, "FourierLoop bandwidth must be >= 0");
        detail::require(components >= 1, "FourierLoop needs at least one component");
        detail::require(modes_.size() == static_cast<std::size_t>((2 * bandwidth + 1) * components),
                        "FourierLoop: expected (2M+1)*n coefficients");
    }

    static FourierLoop single_mode(int bandwidth, int mode, cplx amplitude = 1.0)
    {
        FourierLoop v(bandwidth);
        v.at(mode) = amplitude;
        return v;
    }

    int bandwidth() const noexcept { return bandwidth_; }
    int components() const noexcept { return components_; }
    std::span<const cplx> modes() const noexcept { return modes_; }
    std::span<cplx> modes() noexcept { return modes_; }

    cplx& at(int mode, int component = 0) { return modes_[index(mode, component)]; }
    cplx at(int mode, int component = 0) const
    {
        if (mode < -bandwidth_ || mode > bandwidth_)
            return {};
        return modes_[index(mode, component)];
    }

    cplx operator()(double t, int component = 0) const
    {
        cplx sum{};
        for (int l = -bandwidth_; l <= bandwidth_; ++l)
            sum += at(l, component) * detail::unit_phase(l * t);
        return sum;
    }

    /// Same loop with coefficients zero-padded (or truncated) to a new bandwidth.
    FourierLoop with_bandwidth(int bandwidth) const
    {
        FourierLoop out(bandwidth, components_);
        const int m = std::min(bandwidth, bandwidth_);
        for (int l = -m; l <= m; ++l)
            for (int c = 0; c < components_; ++c)
                out.at(l, c) = at(l, c);
        out.aliasing_warning = aliasing_warning;
        return out;
    }

    FourierLoop& operator+=(const FourierLoop& other) { return axpy(1.0, other); }
    FourierLoop& operator-=(const FourierLoop& other) { return axpy(-1.0, other); }
    FourierLoop& operator*=(cplx s)
    {
        for (auto& m : modes_)
            m *= s;
        return *this;
    }

    /// this += a * other, widening the bandwidth if needed.
    FourierLoop& axpy(cplx a, const FourierLoop& other)
    {
        detail::require(other.components_ == components_, "FourierLoop: component count mismatch");
        if (other.bandwidth_ > bandwidth_)
            *this = with_bandwidth(other.bandwidth_);
        for (int l = -other.bandwidth_; l <= other.bandwidth_; ++l)
            for (int c = 0; c < components_; ++c)
                at(l, c) += a * other.at(l, c);
        return *this;
    }

    friend FourierLoop operator+(FourierLoop a, const FourierLoop& b) { return a += b; }
    friend FourierLoop operator-(FourierLoop a, const FourierLoop& b) { return a -= b; }
    friend FourierLoop operator*(cplx s, FourierLoop a) { return a *= s; }

    /// Set when this loop came out of a DFT with too few samples for its bandwidth.
    bool aliasing_warning = false;

private:
    std::size_t index(int mode, int component) const
    {
        if (mode < -bandwidth_ || mode > bandwidth_)
            throw ContractError("FourierLoop: mode " + std::to_string(mode) + " outside bandwidth " +
                                std::to_string(bandwidth_));
        if (component < 0 || component >= components_)
            throw ContractError("FourierLoop: component out of range");
        return static_cast<std::size_t>((mode + bandwidth_) * components_ + component);
    }

    int bandwidth_ = 0;
    int components_ = 1;
    std::vector<cplx> modes_;
};

class GridLoop {
public:
    GridLoop() = default;

    GridLoop(std::size_t resolution, std::vector<cplx> samples, int components = 1)
        : resolution_(resolution), components_(components), samples_(std::move(samples))
    {
        detail::require(resolution >= 1, "GridLoop resolution must be >= 1");
        detail::require(components >= 1, "GridLoop needs at least one component");
        detail::require(samples_.size() == resolution * static_cast<std::size_t>(components),
                        "GridLoop: expected P*n samples");
    }

    std::size_t resolution() const noexcept { return resolution_; }
    int components() const noexcept { return components_; }
    std::span<const cplx> samples() const noexcept { return samples_; }
    std::span<cplx> samples() noexcept { return samples_; }

    cplx at(std::size_t j, int component = 0) const
    {
        return samples_[j * static_cast<std::size_t>(components_) + static_cast<std::size_t>(component)];
    }

    GridLoop& operator-=(const GridLoop& other)
    {
        detail::require(other.resolution_ == resolution_ && other.components_ == components_,
                        "GridLoop: resolution mismatch");
        for (std::size_t i = 0; i < samples_.size(); ++i)
            samples_[i] -= other.samples_[i];
        return *this;
    }
    friend GridLoop operator-(GridLoop a, const GridLoop& b) { return a -= b; }

    bool aliasing_warning = false;

private:
    std::size_t resolution_ = 0;
    int components_ = 1;
    std::vector<cplx> samples_;
};

/// Coefficient-space L^2 norm (Parseval).
inline double l2_norm(const FourierLoop& v)
{
    double sum = 0.0;
    for (auto c : v.modes())
        sum += std::norm(c);
    return std::sqrt(sum);
}

/// (sum (1 + l^2)^k |v_l|^2)^{1/2}; k may be fractional but not negative.
inline double sobolev_norm(const FourierLoop& v, double k)
{
    detail::require(k >= 0.0, "sobolev_norm: level must be >= 0");
    double sum = 0.0;
    for (int l = -v.bandwidth(); l <= v.bandwidth(); ++l) {
        const double w = std::pow(1.0 + static_cast<double>(l) * l, k);
        for (int c = 0; c < v.components(); ++c)
            sum += w * std::norm(v.at(l, c));
    }
    return std::sqrt(sum);
}

/// Quadrature L^2 norm (1/P sum |v_j|^2)^{1/2}.
inline double l2_norm(const GridLoop& v)
{
    double sum = 0.0;
    for (auto c : v.samples())
        sum += std::norm(c);
    return std::sqrt(sum / static_cast<double>(v.resolution()));
}

/// r-th derivative, computed spectrally: v_l -> (2 pi i l)^r v_l.
inline FourierLoop derivative(const FourierLoop& v, int order = 1)
{
    detail::require(order >= 0, "derivative order must be >= 0");
    FourierLoop out = v;
    for (int l = -v.bandwidth(); l <= v.bandwidth(); ++l) {
        const cplx factor = std::pow(cplx(0.0, 2.0 * std::numbers::pi * l), order);
        for (int c = 0; c < v.components(); ++c)
            out.at(l, c) = (order == 0) ? v.at(l, c) : factor * v.at(l, c);
    }
    return out;
}

/// (tau_* v)(t) = v(t + tau): v_l -> e^{2 pi i l tau} v_l. An isometry at every level.
inline FourierLoop shift_fourier(const FourierLoop& v, double tau)
{
    FourierLoop out = v;
    for (int l = -v.bandwidth(); l <= v.bandwidth(); ++l) {
        const cplx phase = detail::unit_phase(static_cast<double>(l) * tau);
        for (int c = 0; c < v.components(); ++c)
            out.at(l, c) = phase * v.at(l, c);
    }
    return out;
}

/// Cyclic rotation of samples. Only grid-aligned shifts (tau * P integer) are
/// representable.
inline GridLoop shift_grid(const GridLoop& v, double tau)
{
    long long steps = 0;
    const auto p = static_cast<long long>(v.resolution());
    if (!detail::near_integer(tau * static_cast<double>(p), steps))
        throw ContractError("shift_grid: tau must be a multiple of 1/P = 1/" + std::to_string(p));
    steps = ((steps % p) + p) % p;
    std::vector<cplx> out(v.samples().size());
    const auto n = static_cast<std::size_t>(v.components());
    for (std::size_t j = 0; j < v.resolution(); ++j) {
        const std::size_t src = (j + static_cast<std::size_t>(steps)) % v.resolution();
        for (std::size_t c = 0; c < n; ++c)
            out[j * n + c] = v.at(src, static_cast<int>(c));
    }
    return GridLoop(v.resolution(), std::move(out), v.components());
}

inline GridLoop fourier_to_grid(const FourierLoop& v, std::size_t resolution)
{
    detail::require(resolution >= 1, "fourier_to_grid: resolution must be >= 1");
    const auto n = static_cast<std::size_t>(v.components());
    std::vector<cplx> samples(resolution * n);
    for (std::size_t j = 0; j < resolution; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(resolution);
        for (std::size_t c = 0; c < n; ++c)
            samples[j * n + c] = v(t, static_cast<int>(c));
    }
    GridLoop out(resolution, std::move(samples), v.components());
    out.aliasing_warning = resolution < static_cast<std::size_t>(2 * v.bandwidth() + 1);
    return out;
}

/// Discrete Fourier analysis v_l = 1/P sum_j g_j e^{-2 pi i l j / P} for |l| <= M.
inline FourierLoop grid_to_fourier(const GridLoop& g, int bandwidth)
{
    detail::require(bandwidth >= 0, "grid_to_fourier: bandwidth must be >= 0");
    FourierLoop out(bandwidth, g.components());
    const auto p = g.resolution();
    for (int l = -bandwidth; l <= bandwidth; ++l) {
        for (int c = 0; c < g.components(); ++c) {
            cplx sum{};
            for (std::size_t j = 0; j < p; ++j) {
                const auto lj = static_cast<long long>(l) * static_cast<long long>(j);
                const auto r = static_cast<double>(((lj % static_cast<long long>(p)) + static_cast<long long>(p)) %
                                                   static_cast<long long>(p));
                sum += g.at(j, c) * std::conj(detail::unit_phase(r / static_cast<double>(p)));
            }
            out.at(l, c) = sum / static_cast<double>(p);
        }
    }
    out.aliasing_warning = p < static_cast<std::size_t>(2 * bandwidth + 1);
    return out;
}

/// The step function sqrt(2/tau) on [1 - tau/2, 1) and 0 elsewhere, together
/// with its norm and the norm of its shift defect. The defect is sqrt(2) for
/// every admissible tau: the shift is not norm-continuous at tau = 0.
struct DiscontinuityWitness {
    GridLoop step;
    double norm = 0.0;
    double defect = 0.0;
};

inline DiscontinuityWitness discontinuity_witness(double tau, std::size_t resolution)
{
    detail::require(tau > 0.0 && tau <= 0.5, "discontinuity_witness: tau must lie in (0, 1/2]");
    long long shift_steps = 0;
    long long half_steps = 0;
    const auto p = static_cast<double>(resolution);
    if (!detail::near_integer(tau * p, shift_steps) || !detail::near_integer(0.5 * tau * p, half_steps) ||
        half_steps < 1)
        throw ContractError("discontinuity_witness: tau*P and tau*P/2 must be positive integers (P=" +
                            std::to_string(resolution) + ")");

    const double height = std::sqrt(2.0 / tau);
    std::vector<cplx> samples(resolution, cplx{});
    const std::size_t start = resolution - static_cast<std::size_t>(half_steps);
    for (std::size_t j = start; j < resolution; ++j)
        samples[j] = height;

    DiscontinuityWitness w;
    w.step = GridLoop(resolution, std::move(samples));
    w.norm = l2_norm(w.step);
    w.defect = l2_norm(shift_grid(w.step, tau) - w.step);
    return w;
}

struct ShiftDecayRow {
    double tau = 0.0;
    double defect = 0.0;          ///< ||tau_* v - v||_{L^2}
    double lipschitz_bound = 0.0; ///< 2 pi tau ||v'||_{L^2}
};

/// Closed-form L^2 distance between v and its shifts, one row per tau.
inline std::vector<ShiftDecayRow> compact_open_decay(const FourierLoop& v, std::span<const double> taus)
{
    const double derivative_norm = l2_norm(derivative(v));
    std::vector<ShiftDecayRow> rows;
    rows.reserve(taus.size());
    for (double tau : taus) {
        double sum = 0.0;
        for (int l = -v.bandwidth(); l <= v.bandwidth(); ++l) {
            // |e^{2 pi i l tau} - 1| = 2 |sin(pi l tau)|
            const double factor = 2.0 * std::sin(std::numbers::pi * l * tau);
            for (int c = 0; c < v.components(); ++c)
                sum += factor * factor * std::norm(v.at(l, c));
        }
        rows.push_back({tau, std::sqrt(sum), 2.0 * std::numbers::pi * std::abs(tau) * derivative_norm});
    }
    return rows;
}

} // namespace sclab
