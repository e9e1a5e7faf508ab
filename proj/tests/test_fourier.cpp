#include <gtest/gtest.h>

#include "support.hpp"

using namespace fractal_frames;

namespace {

/// prod_{k=first}^{last} m_B(xi / R^k) for a scalar measure, in long double.
std::complex<long double> scalar_product(std::int64_t r, const std::vector<std::int64_t>& digits, long double xi,
                                         int first, int last) {
    std::complex<long double> acc = 1.0L;
    long double eta = xi;
    for (int k = 1; k < first; ++k) eta /= static_cast<long double>(r);
    for (int k = first; k <= last; ++k) {
        eta /= static_cast<long double>(r);
        std::complex<long double> m = 0.0L;
        for (auto b : digits) m += std::polar(1.0L, -2.0L * std::numbers::pi_v<long double> * b * eta);
        acc *= m / static_cast<long double>(digits.size());
    }
    return acc;
}

MeasureModel quarter_model() { return MeasureModel(ff_test::quarter_cantor().measure()); }

}  // namespace

TEST(Fourier, MaskExamples) {
    EXPECT_EQ(mask_eval(DigitSet::integers({0, 2}), {0.0}), std::complex<double>(1.0, 0.0));
    EXPECT_NEAR(std::abs(mask_eval(DigitSet::integers({0, 2}), {0.25})), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(mask_eval(DigitSet::integers({0, 1, 2}), {1.0 / 3.0})), 0.0, 1e-15);
}

TEST(Fourier, MuhatExamples) {
    const auto q = quarter_model();
    const auto zero = muhat(q, RealVector{0.0});
    EXPECT_EQ(zero.value, std::complex<double>(1.0, 0.0));
    EXPECT_EQ(zero.error_bound, 0.0);

    const auto one = muhat(q, IntVector{1});
    EXPECT_LE(std::abs(one.value), kDefaultTargetError);
    EXPECT_EQ(one.value, std::complex<double>(0.0, 0.0));  // exact zero factor

    const MeasureModel mid(ff_test::middle_third());
    const auto half = muhat(mid, RealVector{0.5}, 1e-12);
    const auto oracle = scalar_product(3, {0, 2}, 0.5L, 1, 40);
    EXPECT_LE(half.error_bound, 1e-12);
    EXPECT_NEAR(static_cast<double>(oracle.real()), half.value.real(), 1e-12);
    EXPECT_NEAR(static_cast<double>(oracle.imag()), half.value.imag(), 1e-12);
}

TEST(Fourier, TailExamples) {
    const auto q = quarter_model();
    const auto t = tail_muhat(q, 1, IntVector{1});
    const auto oracle = scalar_product(4, {0, 2}, 1.0L, 2, 60);
    EXPECT_GT(std::abs(t.value), 0.0);
    EXPECT_NEAR(std::abs(t.value - std::complex<double>(oracle)), 0.0, 1e-10);

    EXPECT_EQ(tail_muhat(q, 3, IntVector{0}).value, std::complex<double>(1.0, 0.0));
    const auto far = tail_muhat(q, 40, IntVector{5});
    EXPECT_NEAR(std::abs(far.value - 1.0), 0.0, kDefaultTargetError);
}

TEST(Fourier, FiniteMeasuresHaveNoCertificate) {
    MeasureSpec finite({{ExpandingMatrix(3), DigitSet::integers({0, 2})}}, TowerMode::Finite);
    EXPECT_THROW(MeasureModel{finite}, PreconditionError);
}

TEST(Fourier, ModelCertificate) {
    const auto q = quarter_model();
    EXPECT_EQ(q.block_length(), 1u);
    EXPECT_NEAR(q.contraction(), 0.25, 1e-12);
    EXPECT_NEAR(q.support_box().upper[0], 2.0 / 3.0, 1e-10);
    EXPECT_NEAR(q.support_box().lower[0], 0.0, 1e-10);
    EXPECT_NEAR(q.tail_sum(0), 1.0 / 3.0, 1e-10);
    // a strong shear has ||R^{-1}|| > 1 and needs a longer block
    const ExpandingMatrix shear(IntMatrix::from_rows({{2, 5}, {0, 2}}));
    EXPECT_GT(MeasureModel::operator_norm(shear.inverse_double()), 1.0);
    const MeasureModel m(MeasureSpec({{shear, DigitSet(std::vector<IntVector>{{0, 0}, {1, 0}})}}, TowerMode::Periodic));
    EXPECT_GT(m.block_length(), 1u);
    EXPECT_LT(m.contraction(), kDecayRatioMax);
}

TEST(Fourier, DeltaQuarterCantor) {
    const auto tower = ff_test::quarter_cantor();
    const auto q = quarter_model();
    const auto report = delta_lower_estimate(q, tower, 6);
    EXPECT_GT(report.delta_lower, 0.0);
    EXPECT_EQ(report.levels_scanned, 6u);
    EXPECT_TRUE(report.certified);
    EXPECT_GT(report.certified_bound, 0.0);
    EXPECT_LE(report.certified_bound, report.delta_lower);

    double oracle = 1.0;
    for (std::size_t n = 1; n <= 6; ++n)
        for (const auto& l : enumerate_spectrum(tower, n))
            oracle = std::min(oracle, static_cast<double>(std::norm(
                                          scalar_product(4, {0, 2}, static_cast<long double>(l[0]), static_cast<int>(n) + 1, 80))));
    EXPECT_LE(report.delta_lower, oracle + 1e-12);
    EXPECT_NEAR(report.delta_lower, oracle, 1e-8);
}

TEST(Fourier, DeltaIsMonotoneInLevels) {
    const auto tower = ff_test::quarter_cantor();
    double prev = 1.0;
    for (std::size_t n = 1; n <= 6; ++n) {
        const double d = delta_lower_estimate(tower, n, kDefaultTargetError, false).delta_lower;
        EXPECT_LE(d, prev);
        prev = d;
    }
}

TEST(Fourier, DeltaVanishingTailFactor) {
    const Tower t({{ExpandingMatrix(4), DigitSet::integers({0, 2}), DigitSet::integers({0, 1, 4})}}, TowerMode::Periodic,
                  TowerKind::Frame);
    const auto report = delta_lower_estimate(t, 2);
    EXPECT_EQ(report.delta_lower, 0.0);
    EXPECT_FALSE(report.certified);
}

TEST(Fourier, FrameEnergyExamples) {
    const auto q = quarter_model();
    const StepFunction one{0, {1.0}};
    const auto e = frame_energy(q, one, {{0}, {1}});
    EXPECT_NEAR(e[0], 1.0, 1e-12);
    EXPECT_NEAR(e[1], 0.0, 1e-20);
    const StepFunction alt{1, {1.0, -1.0}};
    EXPECT_NEAR(frame_energy(q, alt, {{0}})[0], 0.0, 1e-20);
}

TEST(FourierProperty, MaskBoundedAndPeriodic) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto b = ff_test::random_points(rng, 2, 4, 9);
        const RealVector xi{u(rng), u(rng)};
        const auto m = mask_eval(b, xi);
        EXPECT_LE(std::abs(m), 1.0 + 1e-15);
        const RealVector shifted{xi[0] + static_cast<double>(ff_test::uniform(rng, -3, 3)),
                                 xi[1] + static_cast<double>(ff_test::uniform(rng, -3, 3))};
        EXPECT_NEAR(std::abs(mask_eval(b, shifted) - m), 0.0, 1e-12);
    }
}

TEST(FourierProperty, ConvolutionFactorization) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    const MeasureModel mid(ff_test::middle_third());
    for (int trial = 0; trial < 100; ++trial) {
        const RealVector xi{u(rng)};
        const auto full = muhat(mid, xi);
        const auto tail = tail_muhat(mid, 1, xi);
        const auto head = mask_eval(DigitSet::integers({0, 2}), {xi[0] / 3.0});
        EXPECT_LE(std::abs(full.value - head * tail.value), full.error_bound + tail.error_bound + 1e-14);
    }
}

TEST(FourierProperty, TailApproachesOne) {
    const auto q = quarter_model();
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const IntVector lambda{ff_test::uniform(rng, -500, 500)};
        const std::size_t n = static_cast<std::size_t>(ff_test::uniform(rng, 0, 12));
        const auto t = tail_muhat(q, n, lambda);
        double bound = 0.0;
        for (std::size_t k = n + 1; k < 200; ++k) bound += std::abs(static_cast<double>(lambda[0])) / std::pow(4.0, k);
        EXPECT_LE(std::abs(t.value - 1.0), 2.0 * std::numbers::pi * 2.0 * bound + t.error_bound + 1e-14);
    }
}

TEST(FourierProperty, IntegerPathMatchesRealPath) {
    const MeasureModel mid(ff_test::middle_third());
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 100; ++trial) {
        const IntVector lambda{ff_test::uniform(rng, -10000, 10000)};
        const std::size_t n = static_cast<std::size_t>(ff_test::uniform(rng, 0, 6));
        const auto exact = tail_muhat(mid, n, lambda);
        const auto real = tail_muhat(mid, n, RealVector{static_cast<double>(lambda[0])});
        EXPECT_NEAR(std::abs(exact.value - real.value), 0.0, 1e-9);
    }
}
