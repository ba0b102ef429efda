#include "jcthermo/eigensystem.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace jcthermo;

namespace {
const JCParams kResonant{1.0, 1.0, 0.02};
}

TEST(RabiFrequency, ClosedFormExamples) {
    EXPECT_NEAR(rabi_frequency(kResonant, 1), 0.04, 1e-15);
    EXPECT_NEAR(rabi_frequency({1.0, 0.9, 0.0}, 5), 0.1, 1e-15);
    EXPECT_NEAR(rabi_frequency(kResonant, 4), 0.08, 1e-15);
}

TEST(RabiFrequency, VacuumSubspaceRejected) {
    EXPECT_THROW(rabi_frequency(kResonant, 0), std::invalid_argument);
    EXPECT_THROW(rabi_frequency(kResonant, -3), std::invalid_argument);
}

TEST(EigenLevel, GroundAndFirstDoublet) {
    EXPECT_DOUBLE_EQ(eigen_level(kResonant, 0, Branch::ground).energy, -0.5);
    const auto plus = eigen_level(kResonant, 1, Branch::plus);
    EXPECT_NEAR(plus.energy, 0.52, 1e-15);
    EXPECT_NEAR(plus.cos_half, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(plus.sin_half, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(eigen_level(kResonant, 1, Branch::minus).energy, 0.48, 1e-15);
}

TEST(EigenLevel, ResonanceUsesExactRightAngle) {
    EXPECT_EQ(mixing_angle(kResonant, 7), std::numbers::pi / 2.0);
    // θ stays in (0, π) on both sides of resonance
    EXPECT_GT(mixing_angle({1.0, 1.2, 0.02}, 3), std::numbers::pi / 2.0);
    EXPECT_LT(mixing_angle({1.0, 0.8, 0.02}, 3), std::numbers::pi / 2.0);
    EXPECT_GT(eigen_level({1.0, 1.5, 0.01}, 2, Branch::plus).sin_half, 0.0);
}

TEST(EigenLevel, InvalidLabelsRejected) {
    EXPECT_THROW(eigen_level(kResonant, 0, Branch::plus), std::invalid_argument);
    EXPECT_THROW(eigen_level(kResonant, 2, Branch::ground), std::invalid_argument);
    EXPECT_THROW(eigen_level(kResonant, -1, Branch::minus), std::invalid_argument);
    EXPECT_THROW(eigen_level({0.0, 1.0, 0.1}, 1, Branch::plus), std::invalid_argument);
    EXPECT_THROW(eigen_level({1.0, 1.0, -0.1}, 1, Branch::plus), std::invalid_argument);
}

TEST(EnumerateLevels, CountsAndOrdering) {
    EXPECT_EQ(enumerate_levels(kResonant, 17).size(), 35u);
    const auto one = enumerate_levels(kResonant, 1);
    ASSERT_EQ(one.size(), 3u);
    EXPECT_EQ(one.at_offset(0).branch, Branch::ground);
    EXPECT_EQ(one.at_offset(1).branch, Branch::minus);
    EXPECT_EQ(one.at_offset(2).branch, Branch::plus);

    const auto two = enumerate_levels(kResonant, 2);
    const double expect[] = {-0.5, 0.48, 0.52, 1.5 - 0.02 * std::sqrt(2.0), 1.5 + 0.02 * std::sqrt(2.0)};
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(two.at_offset(k).energy, expect[k], 1e-14) << k;
    EXPECT_TRUE(two.energy_ordered);
    EXPECT_THROW(enumerate_levels(kResonant, 0), std::invalid_argument);
}

TEST(EnumerateLevels, OrderingFlagWithoutResorting) {
    // g well above ωc/2: the n = 1 plus level sits above the n = 2 minus level
    const auto levels = enumerate_levels({1.0, 1.0, 0.9}, 3);
    EXPECT_FALSE(levels.energy_ordered);
    EXPECT_EQ(levels[LevelIndex{4}].n, 2);
    EXPECT_EQ(levels[LevelIndex{4}].branch, Branch::minus);
}

TEST(LevelIndex, Bijection) {
    for (int k = 1; k <= 41; ++k) {
        const LevelIndex idx{k};
        EXPECT_EQ(LevelIndex::of(idx.excitation(), idx.branch()), idx);
    }
    EXPECT_EQ(LevelIndex::of(3, Branch::minus).k, 6);
    EXPECT_EQ(LevelIndex::of(3, Branch::plus).k, 7);
    EXPECT_THROW(LevelIndex::of(0, Branch::minus), std::invalid_argument);
}

TEST(EigenLevel, OrthonormalAndSpectralAgainstDenseBlocks) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> gd(0.001, 0.2), dd(-0.3, 0.3);
    for (int trial = 0; trial < 50; ++trial) {
        const JCParams p{1.0, 1.0 - dd(rng), gd(rng)};
        const oracle::DenseSpace sp{12};
        const auto states = oracle::eigenstates({p.omega0, p.omega_c, p.g}, sp);
        const Eigen::MatrixXd H = oracle::hamiltonian({p.omega0, p.omega_c, p.g}, sp);
        for (int n = 1; n <= 12; ++n) {
            const auto plus = eigen_level(p, n, Branch::plus);
            const auto minus = eigen_level(p, n, Branch::minus);
            EXPECT_NEAR(plus.cos_half * plus.cos_half + plus.sin_half * plus.sin_half, 1.0, 1e-14);
            EXPECT_NEAR(plus.energy - minus.energy, rabi_frequency(p, n), 1e-12);
            for (const auto& lv : {minus, plus}) {
                Eigen::VectorXd v = Eigen::VectorXd::Zero(sp.dim());
                v(sp.idx(1, n - 1)) = lv.excited_amplitude();
                v(sp.idx(0, n)) = lv.ground_amplitude();
                EXPECT_LT((H * v - lv.energy * v).cwiseAbs().maxCoeff(), 1e-12);
                const auto& ref = states[static_cast<std::size_t>(LevelIndex::of(n, lv.branch).offset())];
                EXPECT_NEAR(ref.energy, lv.energy, 1e-12);
                EXPECT_LT((ref.vec - v).cwiseAbs().maxCoeff(), 1e-12);
            }
            // columns of the 2×2 transform are orthonormal
            const double dot = plus.excited_amplitude() * minus.excited_amplitude() +
                               plus.ground_amplitude() * minus.ground_amplitude();
            EXPECT_NEAR(dot, 0.0, 1e-14);
        }
    }
}

TEST(EigenLevel, DecouplingLimit) {
    const JCParams p{1.0, 0.9, 1e-12};
    for (int n = 1; n <= 6; ++n) {
        const double bare_g = 0.9 * n - 0.5;         // |g,n⟩
        const double bare_e = 0.9 * (n - 1) + 0.5;   // |e,n-1⟩
        EXPECT_NEAR(eigen_level(p, n, Branch::plus).energy, std::max(bare_g, bare_e), 1e-10);
        EXPECT_NEAR(eigen_level(p, n, Branch::minus).energy, std::min(bare_g, bare_e), 1e-10);
    }
}
