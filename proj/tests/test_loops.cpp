#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include "sclab/loops.hpp"
#include "sclab/sampling.hpp"

using namespace sclab;
using std::numbers::pi;

namespace {

double max_mode_diff(const FourierLoop& a, const FourierLoop& b)
{
    const int m = std::max(a.bandwidth(), b.bandwidth());
    double worst = 0.0;
    for (int l = -m; l <= m; ++l)
        worst = std::max(worst, std::abs(a.at(l) - b.at(l)));
    return worst;
}

// Trapezoid-free oracle: the Sobolev norm from the loop values on a fine grid,
// using Parseval on the sampled derivative series. Here simply the sum written
// with explicit (1 + l^2)^k factors.
double sobolev_oracle(const FourierLoop& v, double k)
{
    double s = 0.0;
    for (int l = -v.bandwidth(); l <= v.bandwidth(); ++l)
        s += std::pow(1.0 + l * l, k) * std::norm(v.at(l));
    return std::sqrt(s);
}

} // namespace

TEST(SobolevNorm, KnownValues)
{
    const auto one = FourierLoop::single_mode(3, 0);
    for (int k = 0; k < 5; ++k)
        EXPECT_DOUBLE_EQ(sobolev_norm(one, k), 1.0);
    EXPECT_DOUBLE_EQ(sobolev_norm(FourierLoop::single_mode(3, 1), 1), std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(sobolev_norm(FourierLoop::single_mode(3, 2), 2), 5.0);
}

TEST(SobolevNorm, NondecreasingAndMatchesOracle)
{
    sampling::Rng rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        const auto v = sampling::random_loop(rng, 8);
        for (int k = 0; k < 4; ++k) {
            EXPECT_LE(sobolev_norm(v, k), sobolev_norm(v, k + 1));
            EXPECT_NEAR(sobolev_norm(v, k), sobolev_oracle(v, k), 1e-13 * sobolev_oracle(v, k));
        }
    }
}

TEST(SobolevNorm, L2NormMatchesQuadrature)
{
    sampling::Rng rng(2);
    const auto v = sampling::random_loop(rng, 5);
    // Uniform quadrature is exact for trigonometric polynomials of degree < P.
    const std::size_t p = 64;
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j)
        s += std::norm(v(static_cast<double>(j) / p));
    EXPECT_NEAR(l2_norm(v), std::sqrt(s / p), 1e-13);
}

TEST(ShiftFourier, KnownValues)
{
    sampling::Rng rng(3);
    const auto v = sampling::random_loop(rng, 6);
    EXPECT_EQ(max_mode_diff(shift_fourier(v, 0.0), v), 0.0);
    EXPECT_LE(max_mode_diff(shift_fourier(v, 1.0), v), 1e-15);
    const auto e1 = FourierLoop::single_mode(2, 1);
    const auto half = shift_fourier(e1, 0.5);
    EXPECT_EQ(half.at(1), cplx(-1.0, 0.0));
}

TEST(ShiftFourier, MatchesPointEvaluationAndIsometry)
{
    sampling::Rng rng(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto v = sampling::random_loop(rng, 7);
        const double tau = u(rng);
        const auto w = shift_fourier(v, tau);
        for (double t : {0.0, 0.13, 0.5, 0.77})
            EXPECT_LT(std::abs(w(t) - v(t + tau)), 1e-12);
        for (int k = 0; k <= 3; ++k)
            EXPECT_NEAR(sobolev_norm(w, k), sobolev_norm(v, k), 1e-12 * sobolev_norm(v, k));
    }
}

TEST(ShiftGrid, RotationAndContract)
{
    std::vector<cplx> s;
    for (int j = 0; j < 8; ++j)
        s.emplace_back(j, 0);
    const GridLoop g(8, s);
    const auto r = shift_grid(g, 0.25);
    for (std::size_t j = 0; j < 8; ++j)
        EXPECT_EQ(r.at(j), g.at((j + 2) % 8));
    const auto same = shift_grid(g, 1.0);
    const auto zero = shift_grid(g, 0.0);
    for (std::size_t j = 0; j < 8; ++j) {
        EXPECT_EQ(same.at(j), g.at(j));
        EXPECT_EQ(zero.at(j), g.at(j));
    }
    EXPECT_EQ(l2_norm(shift_grid(g, -0.375)), l2_norm(g));
    try {
        shift_grid(g, 0.1);
        FAIL() << "misaligned shift accepted";
    } catch (const ContractError& e) {
        EXPECT_NE(std::string(e.what()).find("1/8"), std::string::npos) << e.what();
    }
}

TEST(DiscontinuityWitness, KnownValues)
{
    for (double tau : {0.5, 0.25}) {
        const auto w = discontinuity_witness(tau, 16);
        EXPECT_NEAR(w.norm, 1.0, 1e-12);
        EXPECT_NEAR(w.defect, std::sqrt(2.0), 1e-12);
    }
    const auto w = discontinuity_witness(0.125, 64);
    // Closed form: the step occupies tau/2 * P cells of height sqrt(2/tau),
    // and its shift is disjoint from it, so the defect is sqrt(2 * 1).
    EXPECT_NEAR(w.norm, 1.0, 1e-15);
    EXPECT_NEAR(w.defect, std::numbers::sqrt2, 1e-15);
}

TEST(DiscontinuityWitness, ContractViolations)
{
    EXPECT_THROW(discontinuity_witness(0.3, 64), ContractError);
    EXPECT_THROW(discontinuity_witness(0.75, 64), ContractError);
    EXPECT_THROW(discontinuity_witness(0.0, 64), ContractError);
    EXPECT_THROW(discontinuity_witness(1.0 / 64.0, 64), ContractError); // tau P / 2 not integral
}

TEST(CompactOpenDecay, KnownValues)
{
    const std::vector<double> taus{0.5, 0.25, 0.125, 1e-3};
    for (const auto& row : compact_open_decay(FourierLoop::single_mode(4, 0, 3.0), taus))
        EXPECT_EQ(row.defect, 0.0);
    const auto rows = compact_open_decay(FourierLoop::single_mode(4, 1), taus);
    EXPECT_NEAR(rows[0].defect, 2.0, 1e-15);
    for (const auto& row : rows) {
        EXPECT_NEAR(row.defect, 2.0 * std::sin(pi * row.tau), 1e-15);
        EXPECT_LE(row.defect, row.lipschitz_bound);
    }
}

TEST(CompactOpenDecay, MatchesShiftedDifference)
{
    sampling::Rng rng(8);
    const auto v = sampling::random_loop(rng, 9);
    const std::vector<double> taus{0.3, 0.01};
    const auto rows = compact_open_decay(v, taus);
    for (const auto& row : rows)
        EXPECT_NEAR(row.defect, l2_norm(shift_fourier(v, row.tau) - v), 1e-13);
}

TEST(Transform, KnownValues)
{
    const auto c = fourier_to_grid(FourierLoop::single_mode(0, 0, 2.5), 7);
    for (auto s : c.samples())
        EXPECT_EQ(s, cplx(2.5, 0.0));
    const auto e1 = fourier_to_grid(FourierLoop::single_mode(1, 1), 8);
    for (std::size_t j = 0; j < 8; ++j)
        EXPECT_LT(std::abs(e1.at(j) - std::exp(cplx(0.0, 2.0 * pi * j / 8.0))), 1e-15);
}

TEST(Transform, RoundTripAndAliasing)
{
    sampling::Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const auto v = sampling::random_loop(rng, 4);
        const auto g = fourier_to_grid(v, 16);
        EXPECT_FALSE(g.aliasing_warning);
        const auto back = grid_to_fourier(g, 4);
        EXPECT_FALSE(back.aliasing_warning);
        EXPECT_LE(max_mode_diff(back, v), 1e-10 * l2_norm(v));
    }
    const auto v = sampling::random_loop(rng, 4);
    EXPECT_TRUE(fourier_to_grid(v, 6).aliasing_warning);
    EXPECT_TRUE(grid_to_fourier(fourier_to_grid(v, 16), 8).aliasing_warning);
}

TEST(Derivative, SpectralFactors)
{
    const auto e2 = FourierLoop::single_mode(3, 2, 1.5);
    const auto d = derivative(e2, 2);
    EXPECT_LT(std::abs(d.at(2) - 1.5 * std::pow(cplx(0.0, 4.0 * pi), 2)), 1e-12);
    EXPECT_EQ(max_mode_diff(derivative(e2, 0), e2), 0.0);
}

TEST(FourierLoop, BandwidthWideningArithmetic)
{
    auto a = FourierLoop::single_mode(1, 1);
    const auto b = FourierLoop::single_mode(3, -3, 2.0);
    a += b;
    EXPECT_EQ(a.bandwidth(), 3);
    EXPECT_EQ(a.at(1), cplx(1.0));
    EXPECT_EQ(a.at(-3), cplx(2.0));
    EXPECT_EQ(std::as_const(a).at(7), cplx(0.0));
    EXPECT_THROW(a.at(7) = 1.0, ContractError);
    EXPECT_THROW(FourierLoop(1, std::vector<cplx>(2)), ContractError);
}
