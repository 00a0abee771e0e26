#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ewm/optics.hpp"
#include "test_support.hpp"

using namespace ewm;

namespace {

const FrequencyGrid kGrid(-12.0, 0.01, 2401);

PointerWavefunction phi() { return make_gaussian(kGrid, 0.0, 1.0); }

double max_abs_diff(const PointerWavefunction& a, const PointerWavefunction& b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

double branch_norm(const JointState& s, PathLabel p, Level l)
{
    const auto* psi = s.find(p, l);
    return psi ? norm_sq(*psi) : 0.0;
}

} // namespace

TEST(FirstBeamSplitter, SplitsEvenly)
{
    const auto s = first_beam_splitter(product_state(phi(), PathLabel::Input, {1.0, 0.0}));
    EXPECT_NEAR(branch_norm(s, PathLabel::ArmI, Level::Ground), 0.5, 1e-12);
    EXPECT_NEAR(branch_norm(s, PathLabel::ArmII, Level::Ground), 0.5, 1e-12);
    EXPECT_FALSE(s.occupies(PathLabel::Input));
}

TEST(FirstBeamSplitter, EmptyAndWrongStage)
{
    EXPECT_TRUE(first_beam_splitter(JointState(kGrid)).empty());
    const auto arms = first_beam_splitter(product_state(phi(), PathLabel::Input, {1.0, 0.0}));
    EXPECT_THROW(first_beam_splitter(arms), WrongStage);
}

TEST(SecondBeamSplitter, TunedInterferometerIsDarkFree)
{
    const auto s = second_beam_splitter(first_beam_splitter(product_state(phi(), PathLabel::Input, {1.0, 0.0})));
    EXPECT_NEAR(branch_norm(s, PathLabel::Bright, Level::Ground), 1.0, 1e-12);
    EXPECT_LE(branch_norm(s, PathLabel::Dark, Level::Ground), 1e-12);
}

TEST(SecondBeamSplitter, SingleArmSplitsEvenly)
{
    const auto s = second_beam_splitter(product_state(phi(), PathLabel::ArmI, {1.0, 0.0}));
    EXPECT_NEAR(branch_norm(s, PathLabel::Bright, Level::Ground), 0.5, 1e-12);
    EXPECT_NEAR(branch_norm(s, PathLabel::Dark, Level::Ground), 0.5, 1e-12);
}

TEST(SecondBeamSplitter, WrongStage)
{
    EXPECT_THROW(second_beam_splitter(product_state(phi(), PathLabel::Input, {1.0, 0.0})), WrongStage);
    const auto out = second_beam_splitter(product_state(phi(), PathLabel::ArmI, {1.0, 0.0}));
    EXPECT_THROW(second_beam_splitter(out), WrongStage);
}

TEST(BeamSplitters, PreserveNormAndAbsorberState)
{
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        const auto input = test_support::random_state(rng, kGrid, {PathLabel::Input});
        const auto arms = first_beam_splitter(input);
        EXPECT_NEAR(total_norm_sq(arms), total_norm_sq(input), 1e-12);
        EXPECT_NEAR(purity(reduced_absorber_density(arms)), purity(reduced_absorber_density(input)), 1e-10);

        const auto mixed = test_support::random_state(rng, kGrid, {PathLabel::ArmI, PathLabel::ArmII});
        const auto ports = second_beam_splitter(mixed);
        EXPECT_NEAR(total_norm_sq(ports), total_norm_sq(mixed), 1e-12);
        const auto r0 = reduced_absorber_density(mixed);
        const auto r1 = reduced_absorber_density(ports);
        for (auto a : kAllLevels)
            for (auto b : kAllLevels)
                EXPECT_NEAR(std::abs(r0(a, b) - r1(a, b)), 0.0, 1e-10);
    }
}

TEST(SecondBeamSplitter, AppliedTwicePreservesNorm)
{
    // Relabel the ports as arms and apply the map again.
    std::mt19937_64 rng(37);
    const auto s = test_support::random_state(rng, kGrid, {PathLabel::ArmI, PathLabel::ArmII});
    const auto once = second_beam_splitter(s);
    JointState relabeled(kGrid);
    for (const auto& [k, psi] : once.branches())
        relabeled.set(k.path == PathLabel::Bright ? PathLabel::ArmI : PathLabel::ArmII, k.level, psi);
    const auto twice = second_beam_splitter(relabeled);
    EXPECT_NEAR(total_norm_sq(twice), 1.0, 1e-12);
    // (Bright, Dark) from (I + II, I - II) / 2 gives Bright = I, Dark = II.
    EXPECT_LE(max_abs_diff(*twice.find(PathLabel::Bright, Level::Ground), *s.find(PathLabel::ArmI, Level::Ground)),
              1e-12);
    EXPECT_LE(max_abs_diff(*twice.find(PathLabel::Dark, Level::Excited), *s.find(PathLabel::ArmII, Level::Excited)),
              1e-12);
}

TEST(NonabsorptionInteraction, GroundInputOnArm)
{
    const auto p = AbsorberParams::from_alpha(kInvSqrt2, 0.05);
    auto s = first_beam_splitter(product_state(phi(), PathLabel::Input, {1.0, 0.0}));
    s = nonabsorption_interaction(s, PathLabel::ArmI, p);
    EXPECT_NEAR(s.absorbed_prob(), 0.25, 1e-12);
    EXPECT_NEAR(branch_norm(s, PathLabel::ArmI, Level::Ground), 0.125, 1e-12);
    EXPECT_NEAR(branch_norm(s, PathLabel::ArmI, Level::Excited), 0.125, 1e-12);
    EXPECT_NEAR(branch_norm(s, PathLabel::ArmII, Level::Ground), 0.5, 1e-12);
}

TEST(NonabsorptionInteraction, CoefficientsForGroundInput)
{
    const auto p = AbsorberParams::from_alpha(std::polar(0.6, 0.7), 0.1, -0.4);
    const auto psi = phi();
    const auto s = nonabsorption_interaction(product_state(psi, PathLabel::Input, {1.0, 0.0}), PathLabel::Input, p);
    EXPECT_LE(max_abs_diff(*s.find(PathLabel::Input, Level::Ground), std::norm(p.beta) * psi), 1e-12);
    EXPECT_LE(max_abs_diff(*s.find(PathLabel::Input, Level::Excited), (-p.alpha * p.beta) * shift_down(psi, 10)),
              1e-12);
    EXPECT_NEAR(s.absorbed_prob(), std::norm(p.alpha), 1e-12);
}

TEST(NonabsorptionInteraction, AlphaZeroIsIdentity)
{
    const auto p = AbsorberParams::from_alpha(0.0, 0.1, 0.9);
    const auto psi = phi();
    const auto s = nonabsorption_interaction(product_state(psi, PathLabel::ArmI, {1.0, 0.0}), PathLabel::ArmI, p);
    EXPECT_EQ(s.absorbed_prob(), 0.0);
    EXPECT_LE(max_abs_diff(*s.find(PathLabel::ArmI, Level::Ground), psi), 1e-15);
    EXPECT_EQ(branch_norm(s, PathLabel::ArmI, Level::Excited), 0.0);
}

TEST(NonabsorptionInteraction, AlphaOneAbsorbsEverything)
{
    const auto p = AbsorberParams::from_alpha(1.0, 0.1);
    const auto s = nonabsorption_interaction(product_state(phi(), PathLabel::ArmI, {1.0, 0.0}), PathLabel::ArmI, p);
    EXPECT_NEAR(s.absorbed_prob(), 1.0, 1e-12);
    EXPECT_EQ(total_norm_sq(s), 0.0);
}

// Excited-level input: the general rule gives <g|out><out|f> = -a* b* with the
// photon raised by omega_f, and <f|out><out|f> = |a|^2 unshifted.
TEST(NonabsorptionInteraction, ExcitedInputCoefficients)
{
    const auto p = AbsorberParams::from_alpha(std::polar(0.6, 0.3), 0.1, 1.2);
    const auto psi = phi();
    const auto s = nonabsorption_interaction(product_state(psi, PathLabel::ArmII, {0.0, 1.0}), PathLabel::ArmII, p);
    const complex cg = -std::conj(p.alpha) * std::conj(p.beta);
    EXPECT_LE(max_abs_diff(*s.find(PathLabel::ArmII, Level::Ground), cg * shift_down(psi, -10)), 1e-12);
    EXPECT_LE(max_abs_diff(*s.find(PathLabel::ArmII, Level::Excited), std::norm(p.alpha) * psi), 1e-12);
    EXPECT_NEAR(s.absorbed_prob(), std::norm(p.beta), 1e-12);
}

TEST(NonabsorptionInteraction, ErrorsAndOtherPaths)
{
    const auto p = AbsorberParams::from_alpha(0.5, 0.015);
    const auto s = product_state(phi(), PathLabel::ArmI, {1.0, 0.0});
    EXPECT_THROW(nonabsorption_interaction(s, PathLabel::ArmI, p), AlignmentError);
    EXPECT_THROW(nonabsorption_interaction(s, PathLabel::Dark, AbsorberParams::from_alpha(0.5, 0.01)),
                 InvalidArgument);
    // Nothing on the absorber's arm: untouched.
    const auto other = nonabsorption_interaction(s, PathLabel::ArmII, AbsorberParams::from_alpha(0.5, 0.01));
    EXPECT_EQ(other.absorbed_prob(), 0.0);
    EXPECT_LE(max_abs_diff(*other.find(PathLabel::ArmI, Level::Ground), *s.find(PathLabel::ArmI, Level::Ground)),
              0.0);

    const FrequencyGrid narrow(-8.0, 0.01, 1601);
    const auto edge = product_state(make_gaussian(narrow, 0.0, 1.0), PathLabel::Input, {1.0, 0.0});
    EXPECT_THROW(nonabsorption_interaction(edge, PathLabel::Input, AbsorberParams::from_alpha(0.5, 3.0)),
                 TruncationError);
}

TEST(NonabsorptionInteraction, ProbabilityBudgetAndEnergyBookkeeping)
{
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> steps(1, 100);
    const auto psi = phi();
    for (int i = 0; i < 200; ++i) {
        const auto p = test_support::random_params(rng, steps(rng) * kGrid.delta_omega());
        const auto s = test_support::random_state(rng, kGrid, {PathLabel::ArmI, PathLabel::ArmII});
        const auto after = nonabsorption_interaction(s, PathLabel::ArmI, p);
        EXPECT_NEAR(total_norm_sq(after) + after.absorbed_prob(), total_norm_sq(s), 1e-12);

        const auto g_only = nonabsorption_interaction(product_state(psi, PathLabel::ArmI, {1.0, 0.0}),
                                                      PathLabel::ArmI, p);
        if (std::abs(p.alpha * p.beta) > 1e-6) {
            EXPECT_NEAR(mean_frequency(psi) - mean_frequency(*g_only.find(PathLabel::ArmI, Level::Excited)),
                        p.omega_f, 1e-12);
        }
    }
}

TEST(FreePass, Identity)
{
    std::mt19937_64 rng(43);
    for (int i = 0; i < 3; ++i) {
        const auto s = test_support::random_state(rng, kGrid, {PathLabel::ArmI, PathLabel::ArmII});
        const auto t = free_pass(s, PathLabel::ArmI);
        for (const auto& [k, psi] : s.branches())
            EXPECT_EQ(max_abs_diff(psi, *t.find(k.path, k.level)), 0.0);
    }
}

// Full interferometer on the initial product state: dark port carries
// (|b|^2 - 1)/2 phi on g and -ab/2 phi(w + omega_f) on f; bright port
// (|b|^2 + 1)/2 phi on g and the same f term.
TEST(Interferometer, ExitPortCoefficients)
{
    const auto p = AbsorberParams::from_alpha(std::polar(0.7, -0.5), 0.05, 0.8);
    const auto psi = phi();
    const auto shifted = shift_down(psi, 5);
    auto s = first_beam_splitter(product_state(psi, PathLabel::Input, {1.0, 0.0}));
    s = second_beam_splitter(nonabsorption_interaction(s, PathLabel::ArmI, p));
    const double b2 = std::norm(p.beta);
    EXPECT_LE(max_abs_diff(*s.find(PathLabel::Dark, Level::Ground), complex((b2 - 1.0) / 2.0) * psi), 1e-12);
    EXPECT_LE(max_abs_diff(*s.find(PathLabel::Dark, Level::Excited), (-p.alpha * p.beta / 2.0) * shifted), 1e-12);
    EXPECT_LE(max_abs_diff(*s.find(PathLabel::Bright, Level::Ground), complex((b2 + 1.0) / 2.0) * psi), 1e-12);
    EXPECT_LE(max_abs_diff(*s.find(PathLabel::Bright, Level::Excited), (-p.alpha * p.beta / 2.0) * shifted),
              1e-12);
}
