#pragma once

// Seeded generators for the random inputs used by experiments and tests.

#include <cmath>
#include <random>
#include <vector>

#include "sclab/lagrangian.hpp"
#include "sclab/loops.hpp"
#include "sclab/paths.hpp"
#include "sclab/weights.hpp"

namespace sclab::sampling {

using Rng = std::mt19937_64;

/// Band-limited loop with complex Gaussian coefficients damped by 1/(1 + l^2).
inline FourierLoop random_loop(Rng& rng, int bandwidth, int components = 1)
{
    std::normal_distribution<double> g;
    FourierLoop v(bandwidth, components);
    for (int l = -bandwidth; l <= bandwidth; ++l)
        for (int c = 0; c < components; ++c)
            v.at(l, c) = cplx(g(rng), g(rng)) / (1.0 + static_cast<double>(l) * l);
    return v;
}

/// Loop with real coefficients, hence symmetric about the real line.
inline FourierLoop random_real_loop(Rng& rng, int bandwidth)
{
    std::normal_distribution<double> g;
    FourierLoop v(bandwidth);
    for (int l = -bandwidth; l <= bandwidth; ++l)
        v.at(l) = g(rng) / (1.0 + static_cast<double>(l) * l);
    return v;
}

/// Real coefficient vector of the given truncation, Gaussian entries damped by 1/nu.
inline std::vector<double> random_coefficients(Rng& rng, std::size_t truncation)
{
    std::normal_distribution<double> g;
    std::vector<double> c(truncation);
    for (std::size_t i = 0; i < truncation; ++i)
        c[i] = g(rng) / static_cast<double>(i + 1);
    return c;
}

/// Sum of three Gaussian bumps with random centres in [-L/2, L/2], widths in
/// [0.4, 1.2] and Gaussian coefficient vectors. Smooth and negligible at +-L.
inline GridPath random_bump_path(Rng& rng, double half_width, std::size_t points, std::size_t dim,
                                 WeightPtr weight = nullptr, int bumps = 3)
{
    std::uniform_real_distribution<double> centre(-0.5 * half_width, 0.5 * half_width);
    std::uniform_real_distribution<double> width(0.4, 1.2);
    struct Bump {
        double c, w;
        std::vector<double> a;
    };
    std::vector<Bump> bs;
    for (int b = 0; b < bumps; ++b) {
        const double c = centre(rng);
        const double w = width(rng);
        bs.push_back({c, w, random_coefficients(rng, dim)});
    }
    return GridPath::sample(half_width, points, dim, std::move(weight), [&](double t, std::span<double> out) {
        for (auto& x : out)
            x = 0.0;
        for (const auto& b : bs) {
            const double e = std::exp(-0.5 * (t - b.c) * (t - b.c) / (b.w * b.w));
            for (std::size_t k = 0; k < out.size(); ++k)
                out[k] += e * b.a[k];
        }
    });
}

/// Compliant Lagrangian path: the first half of a random real-coefficient loop.
inline LagPath random_compliant_path(Rng& rng, int bandwidth, std::size_t points, int level = 0)
{
    const FourierLoop g = random_real_loop(rng, bandwidth);
    return LagPath::sample(
        points, [&](double t) { return g(0.5 * t); }, level);
}

} // namespace sclab::sampling
