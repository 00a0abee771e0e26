#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "ewm/pointer_grid.hpp"
#include "oracle.hpp"

using namespace ewm;

namespace {

FrequencyGrid grid_over(double lo, double hi, std::size_t n) { return FrequencyGrid(lo, (hi - lo) / double(n - 1), n); }

} // namespace

TEST(FrequencyGrid, RejectsDegenerateGrids)
{
    EXPECT_THROW(FrequencyGrid(0.0, 0.0, 10), InvalidArgument);
    EXPECT_THROW(FrequencyGrid(0.0, -0.1, 10), InvalidArgument);
    EXPECT_THROW(FrequencyGrid(0.0, 0.1, 1), InvalidArgument);
}

TEST(FrequencyGrid, PointFrequencies)
{
    const FrequencyGrid g(-1.0, 0.25, 9);
    EXPECT_DOUBLE_EQ(g.omega(0), -1.0);
    EXPECT_DOUBLE_EQ(g.omega(4), 0.0);
    EXPECT_DOUBLE_EQ(g.omega_max(), 1.0);
}

TEST(FrequencyGrid, QuantaForRequiresAlignment)
{
    const FrequencyGrid g(0.0, 0.01, 100);
    EXPECT_EQ(g.quanta_for(0.05), 5);
    EXPECT_EQ(g.quanta_for(-0.03), -3);
    EXPECT_THROW(g.quanta_for(0.015), AlignmentError);
}

TEST(MakeGaussian, DensityMomentsAndNorm)
{
    const auto g = grid_over(-10.0, 10.0, 4001);
    const auto psi = make_gaussian(g, 0.0, 1.0);
    EXPECT_NEAR(mean_frequency(psi), 0.0, 1e-10);
    EXPECT_NEAR(std::sqrt(variance(psi)), 1.0, 1e-6);
    EXPECT_NEAR(norm_sq(psi), 1.0, 1e-12);
    for (const auto& a : psi.amplitudes())
        EXPECT_EQ(a.imag(), 0.0);
}

TEST(MakeGaussian, TranslatedCenter)
{
    const auto g = grid_over(-10.0, 10.0, 4001);
    EXPECT_NEAR(mean_frequency(make_gaussian(g, 5.0, 0.5)), 5.0, 1e-10);
}

TEST(MakeGaussian, GridTooNarrow)
{
    const auto g = grid_over(-5.0, 5.0, 1001);
    EXPECT_THROW(make_gaussian(g, 0.0, 1.0), GridTooNarrow);
    EXPECT_THROW(make_gaussian(grid_over(-10.0, 10.0, 1001), 3.0, 1.0), GridTooNarrow);
    EXPECT_THROW(make_gaussian(g, 0.0, 0.0), InvalidArgument);
}

TEST(ShiftDown, ZeroQuantaIsIdentity)
{
    const auto g = grid_over(-10.0, 10.0, 2001);
    const auto psi = make_gaussian(g, 0.0, 1.0);
    const auto same = shift_down(psi, 0);
    for (std::size_t k = 0; k < psi.size(); ++k)
        EXPECT_EQ(psi[k], same[k]);
}

TEST(ShiftDown, MovesMeanByWholeSteps)
{
    const FrequencyGrid g(-12.0, 0.01, 2401);
    const auto psi = make_gaussian(g, 0.0, 1.0);
    const auto moved = shift_down_by(psi, 0.1);
    EXPECT_NEAR(mean_frequency(moved), -0.1, 1e-9);
    EXPECT_EQ(moved[100], psi[110]);
}

TEST(ShiftDown, InverseShiftRestores)
{
    const FrequencyGrid g(-12.0, 0.01, 2401);
    const auto psi = make_gaussian(g, 0.3, 0.8);
    const auto back = shift_down(shift_down(psi, 37), -37);
    double diff = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k)
        diff += std::norm(back[k] - psi[k]) * g.delta_omega();
    EXPECT_LE(diff, 1e-12);
}

TEST(ShiftDown, TruncationIsAnError)
{
    const auto g = grid_over(-8.0, 8.0, 1601);
    const auto psi = make_gaussian(g, 0.0, 1.0);
    EXPECT_THROW(shift_down(psi, 300), TruncationError);
    EXPECT_THROW(shift_down(psi, -300), TruncationError);
    EXPECT_THROW(shift_down_by(psi, 0.0137), AlignmentError);
}

TEST(Overlap, SelfOverlapIsNormSq)
{
    const auto g = grid_over(-10.0, 10.0, 2001);
    auto psi = complex(0.3, -0.7) * make_gaussian(g, 0.5, 1.0);
    const auto o = overlap(psi, psi);
    EXPECT_NEAR(o.real(), norm_sq(psi), 1e-15);
    EXPECT_EQ(o.imag(), 0.0);
}

TEST(Overlap, ConjugateLinearInFirstArgument)
{
    const auto g = grid_over(-10.0, 10.0, 2001);
    const auto a = make_gaussian(g, 0.0, 1.0);
    const auto b = make_gaussian(g, 0.4, 1.1);
    const complex c(0.2, 0.9);
    const auto lhs = overlap(c * a, b);
    const auto rhs = std::conj(c) * overlap(a, b);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-14);
}

TEST(Overlap, ShiftedGaussianMatchesClosedFormAndQuadrature)
{
    const FrequencyGrid g(-12.0, 0.005, 4801);
    const double sigma = 1.0;
    const auto psi = make_gaussian(g, 0.0, sigma);
    for (long q : {2L, 20L, 100L, 200L}) {
        const double wf = q * g.delta_omega();
        const double closed = std::exp(-wf * wf / (8.0 * sigma * sigma));
        // The closed form itself is checked against quadrature before use.
        ASSERT_NEAR(oracle::shifted_overlap(sigma, wf), closed, 1e-12);
        EXPECT_NEAR(overlap(psi, shift_down(psi, q)).real(), closed, 1e-6);
    }
}

TEST(Overlap, GridMismatch)
{
    const auto a = make_gaussian(grid_over(-10.0, 10.0, 2001), 0.0, 1.0);
    const auto b = make_gaussian(grid_over(-10.0, 10.0, 2003), 0.0, 1.0);
    EXPECT_THROW(overlap(a, b), GridMismatch);
}

TEST(PointerProperties, ShiftPreservesNormAndMovesMean)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> center(-1.5, 1.5);
    std::uniform_real_distribution<double> width(0.4, 1.0);
    std::uniform_int_distribution<long> steps(-150, 150);
    const FrequencyGrid g(-12.0, 0.01, 2401);
    for (int i = 0; i < 100; ++i) {
        const auto psi = make_gaussian(g, center(rng), width(rng));
        const long q = steps(rng);
        const auto moved = shift_down(psi, q);
        EXPECT_NEAR(norm_sq(moved), norm_sq(psi), 1e-12);
        EXPECT_NEAR(mean_frequency(moved), mean_frequency(psi) - q * g.delta_omega(), 1e-9);
    }
}

TEST(PointerProperties, CauchySchwarz)
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    const FrequencyGrid g(0.0, 0.1, 64);
    for (int i = 0; i < 200; ++i) {
        PointerWavefunction a(g), b(g);
        for (std::size_t k = 0; k < g.size(); ++k) {
            a[k] = {n01(rng), n01(rng)};
            b[k] = {n01(rng), n01(rng)};
        }
        EXPECT_LE(std::abs(overlap(a, b)), std::sqrt(norm_sq(a) * norm_sq(b)) * (1.0 + 1e-14));
    }
}
