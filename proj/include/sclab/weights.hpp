#pragma once

/*
 * Weight functions and the fractal Hilbert scale they generate.
 *
 * A weight f : N -> (0, inf) is monotone and unbounded. Level k of the scale
 * is the weighted sequence space with inner product
 *
 *     <x, y>_k = sum_nu f(nu)^k x_nu conj(y_nu),
 *
 * so level 0 is plain l^2 and every level is isometric to level 0 by
 * rescaling the canonical basis. All vectors here are finite truncations.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sclab/error.hpp"

namespace sclab {

class WeightFunction;
using WeightPtr = std::shared_ptr<const WeightFunction>;

/// f(nu) = nu^exponent.
struct PowerRule {
    double exponent = 1.0;
    bool operator==(const PowerRule&) const = default;
};

/// Explicit values f(1..n); beyond n the table continues as
/// f(n) * (nu / n)^extension_exponent, which must be unbounded.
struct TableRule {
    std::vector<double> values;
    double extension_exponent = 1.0;
    bool operator==(const TableRule&) const = default;
};

/// f(nu) = factor * base(nu).
struct CompositeRule {
    double factor = 1.0;
    WeightPtr base;
    bool operator==(const CompositeRule& other) const;
};

using WeightRule = std::variant<PowerRule, TableRule, CompositeRule>;

class WeightFunction {
public:
    static WeightFunction power(double exponent, std::string name = {})
    {
        if (!(exponent > 0.0) || !std::isfinite(exponent))
            throw ContractError("power weight needs a positive finite exponent (unbounded growth)");
        if (name.empty()) {
            std::ostringstream os;
            os << "power(" << exponent << ")";
            name = os.str();
        }
        return WeightFunction(std::move(name), PowerRule{exponent});
    }

    static WeightFunction table(std::vector<double> values, double extension_exponent = 1.0,
                                std::string name = {})
    {
        if (values.empty())
            throw ContractError("table weight needs at least one value");
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] > 0.0) || !std::isfinite(values[i]))
                throw ContractError("table weight values must be positive and finite");
            if (i > 0 && values[i] < values[i - 1])
                throw ContractError("table weight values must be nondecreasing");
        }
        if (!(extension_exponent > 0.0) || !std::isfinite(extension_exponent))
            throw ContractError("table weight extension must be unbounded (positive exponent)");
        if (name.empty())
            name = "table";
        return WeightFunction(std::move(name), TableRule{std::move(values), extension_exponent});
    }

    static WeightFunction scaled(double factor, WeightFunction base, std::string name = {})
    {
        if (!(factor > 0.0) || !std::isfinite(factor))
            throw ContractError("weight scale factor must be positive and finite");
        if (name.empty()) {
            std::ostringstream os;
            os << factor << "*" << base.name();
            name = os.str();
        }
        return WeightFunction(std::move(name),
                              CompositeRule{factor, std::make_shared<const WeightFunction>(std::move(base))});
    }

    /// f(nu), including the normalization factor. Throws DomainError for nu < 1.
    double operator()(std::int64_t nu) const
    {
        if (nu < 1)
            throw DomainError("weight functions are defined on nu >= 1, got " + std::to_string(nu));
        return normalization_ * raw(nu);
    }

    const std::string& name() const noexcept { return name_; }
    const WeightRule& rule() const noexcept { return rule_; }

    /// Factor multiplied into the raw rule so that f(1) >= 1. Equal to 1 unless
    /// the rule as given started below 1.
    double normalization() const noexcept { return normalization_; }

    bool operator==(const WeightFunction& other) const
    {
        return name_ == other.name_ && rule_ == other.rule_ && normalization_ == other.normalization_;
    }

private:
    WeightFunction(std::string name, WeightRule rule) : name_(std::move(name)), rule_(std::move(rule))
    {
        double first = raw(1);
        if (first < 1.0)
            normalization_ = 1.0 / first;
    }

    double raw(std::int64_t nu) const
    {
        const auto n = static_cast<double>(nu);
        return std::visit(
            [n, nu](const auto& r) -> double {
                using R = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<R, PowerRule>) {
                    return std::pow(n, r.exponent);
                } else if constexpr (std::is_same_v<R, TableRule>) {
                    const auto size = static_cast<std::int64_t>(r.values.size());
                    if (nu <= size)
                        return r.values[static_cast<std::size_t>(nu - 1)];
                    return r.values.back() * std::pow(n / static_cast<double>(size), r.extension_exponent);
                } else {
                    return r.factor * (*r.base)(nu);
                }
            },
            rule_);
    }

    std::string name_;
    WeightRule rule_;
    double normalization_ = 1.0;
};

inline bool CompositeRule::operator==(const CompositeRule& other) const
{
    if (factor != other.factor)
        return false;
    if (base == other.base)
        return true;
    return base && other.base && *base == *other.base;
}

inline WeightPtr make_weight(WeightFunction f)
{
    return std::make_shared<const WeightFunction>(std::move(f));
}

inline bool same_weight(const WeightPtr& a, const WeightPtr& b)
{
    if (a == b)
        return true;
    return a && b && *a == *b;
}

/// f(1)^k, ..., f(m)^k. Levels may be negative (used by the inverse isomorphism).
inline std::vector<double> level_factors(const WeightFunction& f, std::size_t m, double k)
{
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i)
        out[i] = std::pow(f(static_cast<std::int64_t>(i + 1)), k);
    return out;
}

/// A finitely supported element of the fractal scale. Coefficient nu (1-based)
/// is stored at index nu-1; entries past the truncation are zero.
class ScaleVector {
public:
    using value_type = std::complex<double>;

    ScaleVector(WeightPtr weight, std::vector<double> coefficients)
        : weight_(std::move(weight)), coefficients_(coefficients.begin(), coefficients.end())
    {
        check();
    }

    ScaleVector(WeightPtr weight, std::initializer_list<double> coefficients)
        : ScaleVector(std::move(weight), std::vector<double>(coefficients))
    {
    }

    ScaleVector(WeightPtr weight, std::vector<value_type> coefficients, bool is_complex = true)
        : weight_(std::move(weight)), coefficients_(std::move(coefficients)), complex_(is_complex)
    {
        check();
        if (!complex_)
            for (auto& c : coefficients_)
                c = c.real();
    }

    static ScaleVector zero(WeightPtr weight, std::size_t truncation)
    {
        return ScaleVector(std::move(weight), std::vector<double>(truncation, 0.0));
    }

    std::size_t truncation() const noexcept { return coefficients_.size(); }
    bool is_complex() const noexcept { return complex_; }
    const WeightPtr& weight() const noexcept { return weight_; }
    const std::vector<value_type>& coefficients() const noexcept { return coefficients_; }

    /// Coefficient x_nu; zero past the truncation.
    value_type operator[](std::size_t nu) const
    {
        if (nu < 1)
            throw DomainError("scale vector coefficients are indexed from 1");
        return nu <= coefficients_.size() ? coefficients_[nu - 1] : value_type{};
    }

    ScaleVector padded(std::size_t truncation) const
    {
        ScaleVector out = *this;
        if (truncation > out.coefficients_.size())
            out.coefficients_.resize(truncation);
        return out;
    }

private:
    void check() const
    {
        if (!weight_)
            throw ContractError("scale vector needs a weight function");
        if (coefficients_.empty())
            throw ContractError("scale vector truncation must be positive");
    }

    WeightPtr weight_;
    std::vector<value_type> coefficients_;
    bool complex_ = false;
};

/// <x, y>_k = Re sum f(nu)^k x_nu conj(y_nu). Shorter vectors are zero-padded.
inline double level_inner(const ScaleVector& x, const ScaleVector& y, int k)
{
    if (!same_weight(x.weight(), y.weight()))
        throw ContractError("level_inner: vectors carry different weight functions ('" + x.weight()->name() +
                            "' vs '" + y.weight()->name() + "')");
    const std::size_t m = std::min(x.truncation(), y.truncation());
    const auto& f = *x.weight();
    double sum = 0.0;
    for (std::size_t nu = 1; nu <= m; ++nu) {
        const auto prod = x[nu] * std::conj(y[nu]);
        sum += std::pow(f(static_cast<std::int64_t>(nu)), k) * prod.real();
    }
    return sum;
}

inline double level_norm(const ScaleVector& x, int k)
{
    const auto& f = *x.weight();
    double sum = 0.0;
    for (std::size_t nu = 1; nu <= x.truncation(); ++nu)
        sum += std::pow(f(static_cast<std::int64_t>(nu)), k) * std::norm(x[nu]);
    return std::sqrt(sum);
}

/// e_{i, f^k} = f(i)^{-k/2} e_i, the level-k unit vector along e_i.
inline ScaleVector basis_vector(std::size_t i, int k, const WeightPtr& weight)
{
    if (i < 1)
        throw DomainError("basis index must be >= 1");
    std::vector<double> c(i, 0.0);
    c[i - 1] = std::pow((*weight)(static_cast<std::int64_t>(i)), -0.5 * k);
    return ScaleVector(weight, std::move(c));
}

/// Componentwise x_i -> f(i)^{-k/2} x_i. Maps level j isometrically onto level
/// j + k; negative k gives the inverse.
inline ScaleVector level_isomorphism(const ScaleVector& x, int k)
{
    auto coeffs = x.coefficients();
    const auto factors = level_factors(*x.weight(), coeffs.size(), -0.5 * k);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        coeffs[i] *= factors[i];
    return ScaleVector(x.weight(), std::move(coeffs), x.is_complex());
}

/// (f*g)(nu) = nu-th smallest entry of the multiset {f(1..n)} u {g(1..n)},
/// returned as a table of length 2n.
inline WeightFunction merge_weights(const WeightFunction& f, const WeightFunction& g, std::size_t n)
{
    if (n < 1)
        throw ContractError("merge_weights needs n >= 1");
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = f(static_cast<std::int64_t>(i + 1));
        b[i] = g(static_cast<std::int64_t>(i + 1));
    }
    std::vector<double> merged(2 * n);
    std::merge(a.begin(), a.end(), b.begin(), b.end(), merged.begin());
    return WeightFunction::table(std::move(merged), 1.0, f.name() + "*" + g.name());
}

/// Result of a finite-range equivalence sample. `constant` is the smallest c
/// with f/c <= g <= c f on 1..n; `growth_slope` is the log-log slope of that
/// constant between n/2 and n. A bounded slope near zero suggests equivalence;
/// this is a necessary-condition heuristic, never a proof.
struct EquivalenceCheck {
    bool finite = true;
    double constant = 1.0;
    double growth_slope = 0.0;
    bool likely_equivalent = true;
};

inline EquivalenceCheck weights_equivalent(const WeightFunction& f, const WeightFunction& g, std::size_t n)
{
    if (n < 1)
        throw ContractError("weights_equivalent needs n >= 1");
    EquivalenceCheck out;
    double c = 1.0;
    double c_half = 1.0;
    const std::size_t half = std::max<std::size_t>(1, n / 2);
    for (std::size_t nu = 1; nu <= n; ++nu) {
        const double fv = f(static_cast<std::int64_t>(nu));
        const double gv = g(static_cast<std::int64_t>(nu));
        c = std::max({c, gv / fv, fv / gv});
        if (nu == half)
            c_half = c;
    }
    out.constant = c;
    out.finite = std::isfinite(c);
    out.growth_slope = (n > half) ? std::log(c / c_half) / std::log(static_cast<double>(n) / half) : 0.0;
    out.likely_equivalent = out.finite && out.growth_slope < 0.1;
    return out;
}

} // namespace sclab
