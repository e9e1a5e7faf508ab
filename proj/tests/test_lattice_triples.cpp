#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace fractal_frames;
using ff_test::in_lattice;
using ff_test::rel_close;

namespace {

IntMatrix mat(std::vector<IntVector> rows) { return IntMatrix::from_rows(rows); }

}  // namespace

// ---- lattice ----

TEST(Lattice, CosetResidueExamples) {
    EXPECT_EQ(coset_residue({3}, LatticeMap(IntMatrix::scalar(3))), IntVector{0});
    EXPECT_EQ(coset_residue({5}, LatticeMap(IntMatrix::scalar(4))), IntVector{1});
    EXPECT_EQ(coset_residue({3, 1}, LatticeMap(mat({{2, 0}, {0, 2}}))), (IntVector{1, 1}));
    EXPECT_EQ(coset_residue({-1}, LatticeMap(IntMatrix::scalar(4))), IntVector{3});
}

TEST(Lattice, DistinctResiduesExamples) {
    const ExpandingMatrix three(3), four(4);
    EXPECT_TRUE(distinct_residues(DigitSet::integers({0, 2}), three));
    EXPECT_FALSE(distinct_residues(DigitSet::integers({0, 1, 3}), three));
    EXPECT_TRUE(distinct_residues(DigitSet::integers({0, 1, 2, 3}), four));
}

TEST(Lattice, CompleteResiduesExamples) {
    EXPECT_EQ(complete_residues(ExpandingMatrix(3)).representatives.points(),
              (std::vector<IntVector>{{0}, {1}, {2}}));
    EXPECT_EQ(complete_residues(ExpandingMatrix(4)).representatives.size(), 4u);

    const ExpandingMatrix r(mat({{2, 1}, {0, 2}}));
    const auto reps = complete_residues(r).representatives;
    ASSERT_EQ(reps.size(), 4u);
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = i + 1; j < reps.size(); ++j) EXPECT_FALSE(in_lattice(r, reps[i] - reps[j]));
    // every point of a small box lands on exactly one representative
    for (std::int64_t x = -4; x <= 4; ++x)
        for (std::int64_t y = -4; y <= 4; ++y) {
            int hits = 0;
            for (const auto& p : reps) hits += in_lattice(r, IntVector{x, y} - p);
            EXPECT_EQ(hits, 1);
        }
}

TEST(Lattice, DeterminantAdjugateSmith) {
    const IntMatrix m = mat({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}});
    EXPECT_EQ(determinant(m), 18);
    const IntMatrix prod = m * adjugate(m);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(prod(i, j), i == j ? 18 : 0);

    const auto snf = smith_normal_form(mat({{2, 4}, {6, 8}}));
    EXPECT_EQ(snf.diagonal, (IntVector{2, 4}));
}

TEST(Lattice, RejectsBadMatrices) {
    EXPECT_THROW(ExpandingMatrix(1), PreconditionError);
    EXPECT_THROW(ExpandingMatrix(mat({{2, 0}, {0, 1}})), PreconditionError);
    EXPECT_THROW(LatticeMap(mat({{1, 2}, {2, 4}})), PreconditionError);
    EXPECT_THROW(DigitSet::integers({0, 1, 1}), PreconditionError);
    EXPECT_THROW(DigitSet(std::vector<IntVector>{{0}, {1, 2}}), PreconditionError);
}

TEST(Lattice, CheckedArithmeticOverflows) {
    EXPECT_THROW(detail::mul(std::int64_t{1} << 40, std::int64_t{1} << 40), std::overflow_error);
    EXPECT_THROW(detail::add(INT64_MAX, 1), std::overflow_error);
}

TEST(LatticeProperty, ResidueIsCongruentAndIdempotent) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto r = ff_test::random_expanding(rng, 64);
        IntVector v(r.dim());
        for (auto& x : v) x = ff_test::uniform(rng, -1000, 1000);
        const IntVector res = coset_residue(v, r);
        EXPECT_TRUE(in_lattice(r, v - res));
        EXPECT_EQ(coset_residue(res, r), res);
    }
}

TEST(LatticeProperty, CompleteResidueCardinality) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = ff_test::random_expanding(rng, 64);
        const auto reps = complete_residues(r).representatives;
        ASSERT_EQ(static_cast<std::int64_t>(reps.size()), r.abs_determinant());
        EXPECT_TRUE(distinct_residues(reps, r));
        EXPECT_EQ(reps[0], IntVector(r.dim(), 0));
    }
}

TEST(LatticeProperty, DistinctResiduesMatchesPairwiseCheck) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const auto r = ff_test::random_expanding(rng, 16);
        const auto b = ff_test::random_points(rng, r.dim(), static_cast<std::size_t>(ff_test::uniform(rng, 1, 5)), 6);
        bool distinct = true;
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = i + 1; j < b.size(); ++j) distinct = distinct && !in_lattice(r, b[i] - b[j]);
        EXPECT_EQ(distinct_residues(b, r), distinct);
    }
}

// ---- triples ----

TEST(Triples, ExpVectorExamples) {
    const double s = 1.0 / std::sqrt(2.0);
    const auto v0 = exp_vector(ExpandingMatrix(4), DigitSet::integers({0, 2}), {0});
    EXPECT_NEAR(std::abs(v0(0) - s), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(v0(1) - s), 0.0, 1e-15);
    const auto v1 = exp_vector(ExpandingMatrix(4), DigitSet::integers({0, 2}), {1});
    EXPECT_EQ(v1(1), std::complex<double>(-s, 0.0));  // exact half turn
    const auto v3 = exp_vector(ExpandingMatrix(3), DigitSet::integers({0, 2}), {1});
    EXPECT_NEAR(std::abs(v3(1) - s * std::polar(1.0, 4.0 * std::numbers::pi / 3.0)), 0.0, 1e-15);
}

TEST(Triples, BuildMatrixExamples) {
    const auto f = build_exponential_matrix(ExpandingMatrix(3), DigitSet::integers({0, 1, 3}), DigitSet::integers({0, 1}));
    const double s = 1.0 / std::sqrt(3.0);
    const auto omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const std::complex<double> expected[2][3] = {{1, 1, 1}, {1, omega, 1}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(f.matrix()(i, j) - s * expected[i][j]), 0.0, 1e-15);
    const auto one = build_exponential_matrix(ExpandingMatrix(5), DigitSet::integers({0}), DigitSet::integers({0}));
    EXPECT_EQ(one.matrix()(0, 0), std::complex<double>(1.0, 0.0));
}

TEST(Triples, AnalyzeExamples) {
    const auto had = analyze_triple(ExpandingMatrix(4), DigitSet::integers({0, 2}), DigitSet::integers({0, 1}));
    EXPECT_EQ(had.classification, TripleClass::Hadamard);
    EXPECT_NEAR(had.frame_bounds->lower, 1.0, 1e-12);
    EXPECT_NEAR(had.frame_bounds->upper, 1.0, 1e-12);

    const auto tight = analyze_triple(ExpandingMatrix(3), DigitSet::integers({0, 2}), DigitSet::integers({0, 1, 2}));
    EXPECT_EQ(tight.classification, TripleClass::FrameOnly);
    EXPECT_NEAR(tight.frame_bounds->lower, 1.5, 1e-12);
    EXPECT_NEAR(tight.frame_bounds->upper, 1.5, 1e-12);
    EXPECT_FALSE(tight.is_riesz());

    const auto neither = analyze_triple(ExpandingMatrix(3), DigitSet::integers({0, 1, 3}), DigitSet::integers({0, 1, 2}));
    EXPECT_EQ(neither.classification, TripleClass::Neither);
    EXPECT_EQ(neither.rank, 2u);

    const auto riesz = analyze_triple(ExpandingMatrix(3), DigitSet::integers({0, 1, 3}), DigitSet::integers({0, 1}));
    EXPECT_EQ(riesz.classification, TripleClass::RieszSequenceOnly);
    EXPECT_NEAR(riesz.riesz_bounds->lower, 1.0 - 1.0 / std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(riesz.riesz_bounds->upper, 1.0 + 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(Triples, DualExamples) {
    const auto d1 = dual_triple(ExpandingMatrix(4), DigitSet::integers({0, 2}), DigitSet::integers({0, 1}));
    EXPECT_EQ(d1.digits.points(), DigitSet::integers({0, 1}).points());
    EXPECT_EQ(d1.frequencies.points(), DigitSet::integers({0, 2}).points());
    EXPECT_DOUBLE_EQ(d1.bound_scale, 1.0);
    EXPECT_NEAR(d1.report.riesz_bounds->lower, 1.0, 1e-12);

    const auto d2 = dual_triple(ExpandingMatrix(3), DigitSet::integers({0, 2}), DigitSet::integers({0, 1, 2}));
    EXPECT_NEAR(d2.bound_scale, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(d2.report.riesz_bounds->lower, 1.0, 1e-12);
    EXPECT_NEAR(d2.report.riesz_bounds->upper, 1.0, 1e-12);

    const auto d3 = dual_triple(ExpandingMatrix(7), DigitSet::integers({0}), DigitSet::integers({0}));
    EXPECT_EQ(d3.report.classification, TripleClass::Hadamard);
}

TEST(Triples, TightFrameExamples) {
    const auto a = tight_frame_from_complete(ExpandingMatrix(3), DigitSet::integers({0, 2}));
    EXPECT_NEAR(a.frame_bounds->lower, 1.5, 1e-12);
    EXPECT_NEAR(a.frame_bounds->upper, 1.5, 1e-12);
    const auto b = tight_frame_from_complete(ExpandingMatrix(4), DigitSet::integers({0, 1, 2, 3}));
    EXPECT_EQ(b.classification, TripleClass::Hadamard);
    const auto c = tight_frame_from_complete(ExpandingMatrix(IntMatrix::from_rows({{2, 0}, {0, 2}})),
                                             DigitSet(std::vector<IntVector>{{0, 0}, {1, 1}}));
    EXPECT_NEAR(c.frame_bounds->lower, 2.0, 1e-12);
    EXPECT_NEAR(c.frame_bounds->upper, 2.0, 1e-12);
    EXPECT_THROW(tight_frame_from_complete(ExpandingMatrix(3), DigitSet::integers({0, 3})), PreconditionError);
}

TEST(TriplesProperty, BoundsMatchSvdOracle) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 150; ++trial) {
        const auto r = ff_test::random_expanding(rng, 32);
        const auto b = ff_test::random_points(rng, r.dim(), static_cast<std::size_t>(ff_test::uniform(rng, 1, 6)), 20);
        const auto l = ff_test::random_points(rng, r.dim(), static_cast<std::size_t>(ff_test::uniform(rng, 1, 6)), 20);
        const auto report = analyze_triple(r, b, l);
        const auto sv = ff_test::squared_singular_values(ff_test::float_exponential_matrix(r, b, l));
        ASSERT_EQ(report.singular_values.size(), sv.size());
        for (std::size_t i = 0; i < sv.size(); ++i) EXPECT_NEAR(std::pow(report.singular_values[i], 2), sv[i], 1e-9);
        if (report.frame_bounds) {
            EXPECT_NEAR(report.frame_bounds->upper, sv.front(), 1e-9);
            EXPECT_NEAR(report.frame_bounds->lower, sv.back(), 1e-9);
        }
        EXPECT_EQ(report.frame_bounds.has_value(), report.rank == b.size());
        EXPECT_EQ(report.riesz_bounds.has_value(), report.rank == l.size());
    }
}

TEST(TriplesProperty, FrameInequalityOnRandomVectors) {
    std::mt19937_64 rng(22);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 40; ++trial) {
        const auto r = ff_test::random_expanding(rng, 32);
        const auto b = ff_test::random_residue_digits(rng, r, 3);
        const auto l = complete_residues(r.transpose()).representatives;
        const auto report = analyze_triple(r, b, l);
        ASSERT_TRUE(report.frame_bounds);
        const auto f = build_exponential_matrix(r, b, l).matrix();
        for (int k = 0; k < 100; ++k) {
            Eigen::VectorXcd x(static_cast<Eigen::Index>(b.size()));
            for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = {gauss(rng), gauss(rng)};
            const double energy = (f * x).squaredNorm(), norm = x.squaredNorm();
            EXPECT_GE(energy, report.frame_bounds->lower * norm * (1 - 1e-12));
            EXPECT_LE(energy, report.frame_bounds->upper * norm * (1 + 1e-12));
        }
    }
}

TEST(TriplesProperty, RieszInequalityOnRandomCoefficients) {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 40; ++trial) {
        const auto r = ff_test::random_expanding(rng, 32);
        const auto b = complete_residues(r).representatives;
        const auto l = ff_test::random_residue_digits(rng, r.transpose(), 3);
        const auto report = analyze_triple(r, b, l);
        ASSERT_TRUE(report.riesz_bounds);
        const auto f = build_exponential_matrix(r, b, l).matrix();
        for (int k = 0; k < 100; ++k) {
            Eigen::VectorXcd a(static_cast<Eigen::Index>(l.size()));
            for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = {gauss(rng), gauss(rng)};
            const double synth = (f.transpose() * a).squaredNorm(), norm = a.squaredNorm();
            EXPECT_GE(synth, report.riesz_bounds->lower * norm * (1 - 1e-12));
            EXPECT_LE(synth, report.riesz_bounds->upper * norm * (1 + 1e-12));
        }
    }
}

TEST(TriplesProperty, TranslationInvariance) {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = ff_test::random_expanding(rng, 20);
        const auto b = ff_test::random_points(rng, r.dim(), 4, 10);
        const auto l = ff_test::random_points(rng, r.dim(), 3, 10);
        auto shift = [&](const DigitSet& s, const IntMatrix& m) {
            for (;;) {
                std::vector<IntVector> out;
                for (const auto& p : s) {
                    IntVector k(r.dim());
                    for (auto& x : k) x = ff_test::uniform(rng, -3, 3);
                    out.push_back(p + m * k);
                }
                if (std::set<IntVector>(out.begin(), out.end()).size() == out.size()) return DigitSet(std::move(out));
            }
        };
        const auto base = analyze_triple(r, b, l);
        const auto moved = analyze_triple(r, shift(b, r.matrix()), shift(l, r.matrix().transpose()));
        for (std::size_t i = 0; i < base.singular_values.size(); ++i)
            EXPECT_NEAR(base.singular_values[i], moved.singular_values[i], 1e-9);
    }
}

TEST(TriplesProperty, DualityScaling) {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = ff_test::random_expanding(rng, 32);
        const auto b = ff_test::random_points(rng, r.dim(), static_cast<std::size_t>(ff_test::uniform(rng, 1, 12)), 30);
        const auto l = ff_test::random_points(rng, r.dim(), static_cast<std::size_t>(ff_test::uniform(rng, 1, 12)), 30);
        const auto primal = analyze_triple(r, b, l);
        const auto dual = dual_triple(r, b, l);
        ASSERT_EQ(primal.is_frame(), dual.report.is_riesz());
        if (primal.is_frame()) {
            EXPECT_TRUE(rel_close(primal.frame_bounds->lower * dual.bound_scale, dual.report.riesz_bounds->lower, 1e-9));
            EXPECT_TRUE(rel_close(primal.frame_bounds->upper * dual.bound_scale, dual.report.riesz_bounds->upper, 1e-9));
        }
    }
}

TEST(TriplesProperty, TightFrameLaw) {
    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = ff_test::random_expanding(rng, 32);
        const auto count = static_cast<std::size_t>(ff_test::uniform(rng, 1, r.abs_determinant()));
        const auto b = ff_test::random_residue_digits(rng, r, count);
        const auto report = tight_frame_from_complete(r, b);
        const double c = static_cast<double>(r.abs_determinant()) / static_cast<double>(b.size());
        EXPECT_TRUE(rel_close(report.frame_bounds->lower, c, 1e-9));
        EXPECT_TRUE(rel_close(report.frame_bounds->upper, c, 1e-9));
    }
}

TEST(Phase, ExactQuarterTurnsAndReduction) {
    EXPECT_EQ(unit_root({1, 4}), std::complex<double>(0.0, 1.0));
    EXPECT_EQ(unit_root({3, 4}), std::complex<double>(0.0, -1.0));
    EXPECT_EQ(unit_root({5, 10}), std::complex<double>(-1.0, 0.0));
    const auto p = pairing_phase(ExpandingMatrix(-3), {1}, {1});
    EXPECT_EQ(p.num, 2);
    EXPECT_EQ(p.den, 3);
}
