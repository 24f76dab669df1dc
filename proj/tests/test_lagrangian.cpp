#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sclab/lagrangian.hpp"
#include "sclab/sampling.hpp"

using namespace sclab;
using std::numbers::pi;

namespace {

double max_sample_diff(const LagPath& a, const LagPath& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.points(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double max_residual(const std::vector<BoundaryResidual>& rs)
{
    double worst = 0.0;
    for (const auto& r : rs)
        worst = std::max(worst, r.residual);
    return worst;
}

} // namespace

TEST(Double, RealConstant)
{
    const auto g = LagPath::sample(33, [](double) { return cplx(2.5, 0.0); });
    const auto loop = double_path(g, 8).loop;
    EXPECT_NEAR(loop.at(0).real(), 2.5, 1e-14);
    for (int l = -8; l <= 8; ++l)
        if (l != 0) {
            EXPECT_LT(std::abs(loop.at(l)), 1e-14);
        }
}

TEST(Double, CosineGivesModesPlusMinusOneAtOneHalf)
{
    const auto g = LagPath::sample(65, [](double t) { return cplx(std::cos(pi * t), 0.0); });
    const auto loop = double_path(g, 8).loop;
    EXPECT_NEAR(loop.at(1).real(), 0.5, 1e-13);
    EXPECT_NEAR(loop.at(-1).real(), 0.5, 1e-13);
    EXPECT_LT(symmetry_defect(loop), 1e-14);
}

TEST(Double, ImaginarySineGivesOppositeHalves)
{
    // i sin(2 pi t) = (e^{2 pi i t} - e^{-2 pi i t}) / 2.
    const auto g = LagPath::sample(65, [](double t) { return cplx(0.0, std::sin(pi * t)); });
    const auto loop = double_path(g, 8).loop;
    EXPECT_NEAR(loop.at(1).real(), 0.5, 1e-13);
    EXPECT_NEAR(loop.at(-1).real(), -0.5, 1e-13);
    EXPECT_LT(symmetry_defect(loop), 1e-14);
}

TEST(Double, NonRealEndpointRejected)
{
    const auto g = LagPath::sample(17, [](double t) { return cplx(t, 0.1); });
    try {
        double_path(g);
        FAIL() << "non-real endpoint accepted";
    } catch (const ContractError& e) {
        EXPECT_NE(std::string(e.what()).find("boundary condition"), std::string::npos);
    }
}

TEST(Double, GridIsEvenAndContainsOneHalf)
{
    for (std::size_t p : {2u, 5u, 64u, 513u}) {
        const auto g = LagPath::sample(p, [](double t) { return cplx(t * t, 0.0); });
        const auto grid = double_to_grid(g);
        EXPECT_EQ(grid.resolution() % 2, 0u);
        EXPECT_EQ(grid.at(grid.resolution() / 2), g[p - 1]);
    }
}

TEST(Halve, KnownValues)
{
    const SymLoop constant{FourierLoop::single_mode(2, 0, 3.0)};
    const auto flat = halve(constant, 9);
    for (auto s : flat.samples())
        EXPECT_NEAR(std::abs(s - cplx(3.0)), 0.0, 1e-15);

    FourierLoop cosine(1);
    cosine.at(1) = 0.5;
    cosine.at(-1) = 0.5;
    const auto g = halve(SymLoop{cosine}, 33);
    for (std::size_t i = 0; i < g.points(); ++i) {
        const double t = static_cast<double>(i) / 32.0;
        EXPECT_NEAR(std::abs(g[i] - std::cos(pi * t)), 0.0, 1e-14);
    }
}

TEST(Halve, AsymmetricRejected)
{
    const SymLoop bad{FourierLoop::single_mode(1, 1, cplx(0.0, 1.0))};
    EXPECT_THROW(halve(bad, 16), ContractError);
}

TEST(RoundTrip, RandomRealLoopsBandwidthSix)
{
    sampling::Rng rng(40);
    for (int trial = 0; trial < 30; ++trial) {
        const SymLoop loop{sampling::random_real_loop(rng, 6)};
        const auto again = double_path(halve(loop, 256), 6).loop;
        for (int l = -6; l <= 6; ++l)
            EXPECT_LT(std::abs(again.at(l) - loop.loop.at(l)), 1e-9);
    }
}

TEST(RoundTrip, CompliantPathsHalveDouble)
{
    sampling::Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = sampling::random_compliant_path(rng, 8, 512, 2);
        const auto doubled = double_path(g, 32);
        EXPECT_LE(symmetry_defect(doubled.loop), 1e-8);
        EXPECT_LE(max_sample_diff(halve(doubled, 512, 2), g), 1e-9);
    }
}

TEST(SymmetryDefect, KnownValuesAndTimeDomainAgreement)
{
    sampling::Rng rng(42);
    const auto real = sampling::random_real_loop(rng, 5);
    EXPECT_EQ(symmetry_defect(real), 0.0);
    EXPECT_LT(symmetry_defect_sampled(real, 64), 1e-10);

    const auto tilted = FourierLoop::single_mode(1, 1, cplx(0.0, 1.0));
    EXPECT_DOUBLE_EQ(symmetry_defect(tilted), 1.0);
    EXPECT_GT(symmetry_defect_sampled(tilted, 64), 0.5);

    // A complex coefficient anywhere breaks the time-domain symmetry as well.
    for (int trial = 0; trial < 10; ++trial) {
        const auto v = sampling::random_loop(rng, 4);
        EXPECT_GT(symmetry_defect(v), 1e-3);
        EXPECT_GT(symmetry_defect_sampled(v, 64), 1e-3);
    }
}

TEST(BoundaryResiduals, KnownValues)
{
    const auto constant = LagPath::sample(65, [](double) { return cplx(1.5, 0.0); });
    for (int k = 0; k <= 3; ++k)
        EXPECT_LT(max_residual(boundary_residuals(constant, k)), 1e-12);

    const auto cosine = LagPath::sample(129, [](double t) { return cplx(std::cos(pi * t), 0.0); });
    // Only the truncation error of the one-sided stencils remains.
    EXPECT_LT(max_residual(boundary_residuals(cosine, 1)), lagrangian_tolerance);

    const auto linear = LagPath::sample(65, [](double t) { return cplx(t, 0.0); });
    const auto rs = boundary_residuals(linear, 1);
    for (const auto& r : rs) {
        if (r.l == 0)
            EXPECT_EQ(r.residual, 0.0);
        else
            EXPECT_NEAR(r.residual, 1.0, 1e-12);
    }
}

TEST(BoundaryResiduals, StencilOrderRecordedAndConverges)
{
    // gamma(t) = i t^3. Divided by i^l the derivatives are i t^3, 3 t^2, -6 i t, -6:
    // the l = 0 and l = 2 conditions fail at t = 1 with residuals 1 and 6.
    const auto g = LagPath::sample(257, [](double t) { return cplx(0.0, t * t * t); });
    const auto rs = boundary_residuals(g, 3);
    ASSERT_EQ(rs.size(), 8u);
    for (const auto& r : rs) {
        if (r.l > 0) {
            EXPECT_EQ(r.stencil_order, 4);
        }
        double want = 0.0;
        if (r.endpoint == 1 && r.l == 0)
            want = 1.0;
        if (r.endpoint == 1 && r.l == 2)
            want = 6.0;
        EXPECT_NEAR(r.residual, want, 1e-6) << "l=" << r.l << " endpoint=" << r.endpoint;
    }
    const auto tiny = LagPath::sample(5, [](double t) { return cplx(t, 0.0); });
    for (const auto& r : boundary_residuals(tiny, 1))
        if (r.l == 1) {
            EXPECT_EQ(r.stencil_order, 4);
        }
    const auto four = LagPath::sample(4, [](double t) { return cplx(t, 0.0); });
    for (const auto& r : boundary_residuals(four, 1))
        if (r.l == 1) {
            EXPECT_EQ(r.stencil_order, 2);
        }
    EXPECT_THROW(boundary_residuals(four, 2), ContractError);
}

TEST(SymmetricLoopWeight, EquivalentToNuSquared)
{
    const auto sorted = symmetric_loop_weight(100);
    EXPECT_EQ(sorted(1), 1.0);
    EXPECT_EQ(sorted(2), 2.0);
    EXPECT_EQ(sorted(3), 2.0);
    EXPECT_EQ(sorted(4), 5.0);
    const auto eq = weights_equivalent(WeightFunction::power(2.0), sorted, 201);
    EXPECT_TRUE(eq.likely_equivalent);
    EXPECT_LE(eq.constant, 5.0);
}

TEST(DoubledSobolevNorm, StableUnderRefinement)
{
    // The doubled loop of a compliant path lies one level higher; its H^1 norm
    // settles as the grid is refined.
    const auto gamma = [](double t) { return cplx(std::cos(pi * t) + 0.3 * std::cos(3 * pi * t), 0.0); };
    const double coarse = sobolev_norm(double_path(LagPath::sample(129, gamma), 16).loop, 1);
    const double fine = sobolev_norm(double_path(LagPath::sample(513, gamma), 16).loop, 1);
    EXPECT_NEAR(coarse, fine, 1e-10 * fine);
}
