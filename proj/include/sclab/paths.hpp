#pragma once

/*
 * Discretized exponentially weighted Sobolev spaces of Hilbert-valued paths.
 *
 * A GridPath samples v : [-L, L] -> H on P uniformly spaced points. Values are
 * truncated scale vectors over a shared weight (H = l^{2,f}), or plain real
 * vectors when no weight is attached (H = R^n, every level is Euclidean).
 *
 * Conventions:
 *   - discrete derivative: central differences inside, second-order one-sided
 *     three-point stencils at both ends;
 *   - integrals: trapezoid rule (endpoint weights h/2);
 *   - the weight gamma_delta(s) = exp(delta * beta(s) * s) uses a fixed odd
 *     monotone cutoff beta with beta = -1 on (-inf, -1] and +1 on [1, inf).
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sclab/error.hpp"
#include "sclab/weights.hpp"

namespace sclab {

class CutoffProfile {
public:
    enum class Kind { smoothstep, piecewise_linear };

    /// Odd smoothstep polynomial. order 1 is the cubic (C^1), order 2 the quintic (C^2).
    static CutoffProfile smoothstep(int order = 2)
    {
        detail::require(order == 1 || order == 2, "CutoffProfile: smoothstep order must be 1 or 2");
        return CutoffProfile(Kind::smoothstep, order);
    }
    static CutoffProfile piecewise_linear() { return CutoffProfile(Kind::piecewise_linear, 0); }

    Kind kind() const noexcept { return kind_; }
    int order() const noexcept { return order_; }

    double operator()(double s) const
    {
        if (s <= -1.0)
            return -1.0;
        if (s >= 1.0)
            return 1.0;
        switch (kind_) {
        case Kind::piecewise_linear:
            return s;
        case Kind::smoothstep:
            break;
        }
        const double s2 = s * s;
        if (order_ == 1)
            return 0.5 * s * (3.0 - s2);
        return s * (15.0 - 10.0 * s2 + 3.0 * s2 * s2) / 8.0;
    }

    bool operator==(const CutoffProfile&) const = default;

private:
    CutoffProfile(Kind kind, int order) : kind_(kind), order_(order) {}

    Kind kind_;
    int order_;
};

/// gamma_delta(s) = exp(delta * beta(s) * s). Equals exp(delta |s|) for |s| >= 1
/// and is >= 1 everywhere since beta(s) s >= 0.
inline double exp_weight(double s, double delta, const CutoffProfile& beta = CutoffProfile::smoothstep())
{
    return std::exp(delta * beta(s) * s);
}

class GridPath {
public:
    /// Zero path on [-L, L] with `points` samples of dimension `dim`.
    GridPath(double half_width, std::size_t points, std::size_t dim, WeightPtr weight = nullptr)
        : half_width_(half_width), points_(points), dim_(dim), weight_(std::move(weight)),
          data_(points * dim, 0.0)
    {
        detail::require(half_width > 0.0 && std::isfinite(half_width), "GridPath: L must be positive");
        detail::require(points >= 2, "GridPath: need at least two samples");
        detail::require(dim >= 1, "GridPath: value dimension must be >= 1");
        step_ = 2.0 * half_width_ / static_cast<double>(points_ - 1);
    }

    /// Samples `fill(t, out)` at every grid time.
    static GridPath sample(double half_width, std::size_t points, std::size_t dim, WeightPtr weight,
                           const std::function<void(double, std::span<double>)>& fill)
    {
        GridPath v(half_width, points, dim, std::move(weight));
        for (std::size_t i = 0; i < points; ++i)
            fill(v.time(i), v.row(i));
        return v;
    }

    double half_width() const noexcept { return half_width_; }
    double step() const noexcept { return step_; }
    std::size_t points() const noexcept { return points_; }
    std::size_t dim() const noexcept { return dim_; }
    const WeightPtr& weight() const noexcept { return weight_; }

    /// Number of derivatives this representation is trusted to resolve.
    int regularity() const noexcept { return regularity_; }
    GridPath& set_regularity(int r)
    {
        detail::require(r >= 0, "GridPath: regularity must be >= 0");
        regularity_ = r;
        return *this;
    }

    double time(std::size_t i) const noexcept
    {
        return -half_width_ + step_ * static_cast<double>(i);
    }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * dim_, dim_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * dim_, dim_}; }
    std::span<const double> data() const noexcept { return data_; }

    /// Sample i as a scale vector (requires an attached weight).
    ScaleVector value(std::size_t i) const
    {
        detail::require(weight_ != nullptr, "GridPath::value: path has no weight function attached");
        auto r = row(i);
        return ScaleVector(weight_, std::vector<double>(r.begin(), r.end()));
    }

    /// Trapezoid quadrature weight of sample i.
    double quadrature_weight(std::size_t i) const noexcept
    {
        return (i == 0 || i + 1 == points_) ? 0.5 * step_ : step_;
    }

    bool same_layout(const GridPath& other) const
    {
        return points_ == other.points_ && dim_ == other.dim_ && half_width_ == other.half_width_ &&
               same_weight(weight_, other.weight_);
    }

    GridPath& operator+=(const GridPath& other) { return axpy(1.0, other); }
    GridPath& operator-=(const GridPath& other) { return axpy(-1.0, other); }
    GridPath& operator*=(double s)
    {
        for (auto& x : data_)
            x *= s;
        return *this;
    }
    GridPath& axpy(double a, const GridPath& other)
    {
        detail::require(same_layout(other), "GridPath: grids or weights differ");
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] += a * other.data_[i];
        regularity_ = std::min(regularity_, other.regularity_);
        return *this;
    }
    friend GridPath operator+(GridPath a, const GridPath& b) { return a += b; }
    friend GridPath operator-(GridPath a, const GridPath& b) { return a -= b; }
    friend GridPath operator*(double s, GridPath a) { return a *= s; }

private:
    double half_width_;
    std::size_t points_;
    std::size_t dim_;
    WeightPtr weight_;
    std::vector<double> data_;
    double step_ = 0.0;
    int regularity_ = 4;
};

/// Weight sequence 0 = delta_0 < delta_1 < ..., Sobolev exponent p > 1 and the
/// weight of the Hilbert scale H; describes the levels E_0 .. E_K.
struct LevelSpec {
    std::vector<double> deltas;
    WeightPtr weight;
    double p = 2.0;
    int max_level = 0;

    void validate() const
    {
        detail::require(!deltas.empty() && deltas.front() == 0.0, "LevelSpec: delta_0 must be 0");
        for (std::size_t i = 1; i < deltas.size(); ++i)
            detail::require(deltas[i] > deltas[i - 1], "LevelSpec: deltas must be strictly increasing");
        detail::require(p > 1.0 && std::isfinite(p), "LevelSpec: p must lie in (1, inf)");
        detail::require(max_level >= 0, "LevelSpec: max level must be >= 0");
        detail::require(deltas.size() >= static_cast<std::size_t>(max_level) + 1,
                        "LevelSpec: need a delta for every level up to K");
        detail::require(weight != nullptr, "LevelSpec: weight function missing");
    }

    /// delta_k = k / 10 for k = 0..K.
    static LevelSpec with_default_deltas(WeightPtr weight, double p, int max_level)
    {
        LevelSpec s;
        s.weight = std::move(weight);
        s.p = p;
        s.max_level = max_level;
        for (int k = 0; k <= max_level; ++k)
            s.deltas.push_back(0.1 * k);
        return s;
    }
};

namespace detail {

/// Per-coordinate factors of the squared level-j norm: f(nu)^j, or all ones for
/// a weightless (Euclidean) path.
inline std::vector<double> coordinate_factors(const GridPath& v, int level)
{
    if (!v.weight())
        return std::vector<double>(v.dim(), 1.0);
    return level_factors(*v.weight(), v.dim(), static_cast<double>(level));
}

inline double row_norm(std::span<const double> row, const std::vector<double>& factors)
{
    double sum = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c)
        sum += factors[c] * row[c] * row[c];
    return std::sqrt(sum);
}

} // namespace detail

/// Discrete weak derivative: central differences inside, second-order one-sided
/// stencils at the ends. Exact on affine data.
inline GridPath discrete_derivative(const GridPath& v)
{
    detail::require(v.points() >= 3, "discrete_derivative: need at least 3 samples");
    GridPath out(v.half_width(), v.points(), v.dim(), v.weight());
    const double h = v.step();
    const std::size_t n = v.points();
    for (std::size_t c = 0; c < v.dim(); ++c) {
        out.row(0)[c] = (-3.0 * v.row(0)[c] + 4.0 * v.row(1)[c] - v.row(2)[c]) / (2.0 * h);
        for (std::size_t i = 1; i + 1 < n; ++i)
            out.row(i)[c] = (v.row(i + 1)[c] - v.row(i - 1)[c]) / (2.0 * h);
        out.row(n - 1)[c] = (3.0 * v.row(n - 1)[c] - 4.0 * v.row(n - 2)[c] + v.row(n - 3)[c]) / (2.0 * h);
    }
    out.set_regularity(std::max(0, v.regularity() - 1));
    return out;
}

inline GridPath discrete_derivative(const GridPath& v, int order)
{
    detail::require(order >= 0, "discrete_derivative: order must be >= 0");
    GridPath out = v;
    for (int i = 0; i < order; ++i)
        out = discrete_derivative(out);
    return out;
}

/// gamma_delta * v.
inline GridPath exp_weighted(const GridPath& v, double delta, const CutoffProfile& beta = CutoffProfile::smoothstep())
{
    GridPath out = v;
    if (delta == 0.0)
        return out;
    for (std::size_t i = 0; i < v.points(); ++i) {
        const double g = exp_weight(v.time(i), delta, beta);
        for (auto& x : out.row(i))
            x *= g;
    }
    return out;
}

/// Discrete L^p(R, H_j) norm with trapezoid weights.
inline double lp_norm(const GridPath& v, double p, int level = 0)
{
    detail::require(p >= 1.0, "lp_norm: p must be >= 1");
    const auto factors = detail::coordinate_factors(v, level);
    double sum = 0.0;
    for (std::size_t i = 0; i < v.points(); ++i)
        sum += std::pow(detail::row_norm(v.row(i), factors), p) * v.quadrature_weight(i);
    return std::pow(sum, 1.0 / p);
}

/// ||gamma_delta v||_{W^{k,p}(R, H_j)}: the p-th root of
/// sum_{i=0..k} sum_grid ||D^i (gamma_delta v)(t)||_{H_j}^p w(t).
inline double wkp_delta_norm(const GridPath& v, int k, double p, double delta, int level,
                             const CutoffProfile& beta = CutoffProfile::smoothstep())
{
    detail::require(k >= 0 && level >= 0, "wkp_delta_norm: derivative order and level must be >= 0");
    detail::require(p >= 1.0, "wkp_delta_norm: p must be >= 1");
    detail::require(v.points() >= static_cast<std::size_t>(k) + 1 && (k == 0 || v.points() >= 3),
                    "wkp_delta_norm: too few samples for derivative order " + std::to_string(k));
    const auto factors = detail::coordinate_factors(v, level);
    GridPath w = exp_weighted(v, delta, beta);
    double sum = 0.0;
    for (int i = 0; i <= k; ++i) {
        if (i > 0)
            w = discrete_derivative(w);
        for (std::size_t s = 0; s < w.points(); ++s)
            sum += std::pow(detail::row_norm(w.row(s), factors), p) * w.quadrature_weight(s);
    }
    return std::pow(sum, 1.0 / p);
}

/// Norm of the Floer level E_k = intersection over i = 0..k of
/// W^{i,p}_{delta_k}(R, H_{k-i}): the maximum of the k+1 constituent norms.
inline double ek_norm(const GridPath& v, int k, const LevelSpec& spec,
                      const CutoffProfile& beta = CutoffProfile::smoothstep())
{
    spec.validate();
    detail::require(k >= 0 && k <= spec.max_level,
                    "ek_norm: level " + std::to_string(k) + " exceeds the max level " +
                        std::to_string(spec.max_level));
    if (v.weight())
        detail::require(same_weight(v.weight(), spec.weight), "ek_norm: path and level spec use different weights");
    const double delta = spec.deltas[static_cast<std::size_t>(k)];
    double best = 0.0;
    for (int i = 0; i <= k; ++i)
        best = std::max(best, wkp_delta_norm(v, i, spec.p, delta, k - i, beta));
    return best;
}

/// Discrete L^p(R, H_0) norm of v restricted to |t| >= T. Grid points exactly
/// at |t| = T get half weight so the tail integral is a trapezoid rule too.
inline double tail_mass(const GridPath& v, double cutoff, double p)
{
    detail::require(cutoff > 0.0, "tail_mass: T must be positive");
    detail::require(cutoff < v.half_width(), "tail_mass: T must be smaller than the domain half-width L");
    const auto factors = detail::coordinate_factors(v, 0);
    const double snap = 1e-9 * v.step();
    double sum = 0.0;
    for (std::size_t i = 0; i < v.points(); ++i) {
        const double at = std::abs(v.time(i));
        if (at < cutoff - snap)
            continue;
        double w = v.quadrature_weight(i);
        if (std::abs(at - cutoff) <= snap)
            w = std::min(w, 0.5 * v.step());
        sum += std::pow(detail::row_norm(v.row(i), factors), p) * w;
    }
    return std::pow(sum, 1.0 / p);
}

/// (tau_* v)(t) = v(t + tau) for grid-aligned tau. Values pulled in from
/// outside [-L, L] are zero.
inline GridPath shift_path(const GridPath& v, double tau)
{
    long long steps = 0;
    if (!detail::near_integer(tau / v.step(), steps))
        throw ContractError("shift_path: tau must be a multiple of the grid step h = " + std::to_string(v.step()));
    GridPath out(v.half_width(), v.points(), v.dim(), v.weight());
    out.set_regularity(v.regularity());
    const auto n = static_cast<long long>(v.points());
    for (long long i = 0; i < n; ++i) {
        const long long src = i + steps;
        if (src < 0 || src >= n)
            continue;
        auto from = v.row(static_cast<std::size_t>(src));
        std::copy(from.begin(), from.end(), out.row(static_cast<std::size_t>(i)).begin());
    }
    return out;
}

/// Coordinate-wise orthogonal projection onto the complement of span{e_1..e_N}.
inline GridPath project_out_head(const GridPath& v, std::size_t rank)
{
    detail::require(v.dim() > rank, "project_out_head: truncation must exceed the projection rank");
    GridPath out = v;
    for (std::size_t i = 0; i < v.points(); ++i)
        for (std::size_t c = 0; c < rank; ++c)
            out.row(i)[c] = 0.0;
    return out;
}

} // namespace sclab
