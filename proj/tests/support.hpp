#ifndef FRACTAL_FRAMES_TESTS_SUPPORT_HPP
#define FRACTAL_FRAMES_TESTS_SUPPORT_HPP

// Seeded generators and floating-point oracles shared by the unit tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "fractal_frames/fractal_frames.hpp"

namespace ff_test {

using namespace fractal_frames;

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Random expanding integer matrix of dimension 1 or 2 with 2 <= |det| <= max_det.
inline ExpandingMatrix random_expanding(std::mt19937_64& rng, std::int64_t max_det, std::size_t dim = 0) {
    if (dim == 0) dim = static_cast<std::size_t>(uniform(rng, 1, 2));
    for (;;) {
        IntMatrix m(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) m(i, j) = uniform(rng, -6, 6);
        const auto det = determinant(m);
        if (det == 0 || std::abs(det) > max_det || std::abs(det) < 2) continue;
        if (!is_expanding(m).expanding) continue;
        return ExpandingMatrix(m);
    }
}

/// Random subset of distinct residues mod M(Z^d), translated by random lattice
/// vectors M k, always containing 0.
inline DigitSet random_residue_digits(std::mt19937_64& rng, const LatticeMap& m, std::size_t count) {
    auto reps = complete_residues(m).representatives.points();
    std::shuffle(reps.begin() + 1, reps.end(), rng);
    reps.resize(std::min(count, reps.size()));
    for (std::size_t i = 1; i < reps.size(); ++i) {
        IntVector k(m.dim());
        for (auto& x : k) x = uniform(rng, -1, 1);
        reps[i] = reps[i] + m.matrix() * k;
    }
    return DigitSet(std::move(reps));
}

/// Random distinct integer points in [-range, range]^d, optionally containing 0.
inline DigitSet random_points(std::mt19937_64& rng, std::size_t dim, std::size_t count, std::int64_t range,
                              bool with_zero = true) {
    std::set<IntVector> seen;
    std::vector<IntVector> pts;
    if (with_zero) {
        pts.push_back(IntVector(dim, 0));
        seen.insert(pts.back());
    }
    while (pts.size() < count) {
        IntVector v(dim);
        for (auto& x : v) x = uniform(rng, -range, range);
        if (seen.insert(v).second) pts.push_back(v);
    }
    return DigitSet(std::move(pts));
}

/// F built with floating-point R^{-1} and std::polar, independent of the exact phase path.
inline Eigen::MatrixXcd float_exponential_matrix(const LatticeMap& r, const DigitSet& b, const DigitSet& l) {
    const Eigen::MatrixXd rinv = r.matrix().to_double().inverse();
    Eigen::MatrixXcd f(l.size(), b.size());
    for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            double phase = 0.0;
            for (std::size_t p = 0; p < r.dim(); ++p)
                for (std::size_t q = 0; q < r.dim(); ++q)
                    phase += rinv(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) *
                             static_cast<double>(b[j][q]) * static_cast<double>(l[i][p]);
            f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::polar(1.0 / std::sqrt(static_cast<double>(b.size())), 2.0 * std::numbers::pi * phase);
        }
    return f;
}

/// Squared singular values of F (descending) via Jacobi SVD.
inline std::vector<double> squared_singular_values(const Eigen::MatrixXcd& f) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) out.push_back(std::pow(svd.singularValues()(i), 2));
    return out;
}

inline bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

/// Brute-force membership of a b in M(Z^d): M^{-1} v integral.
inline bool in_lattice(const LatticeMap& m, const IntVector& v) {
    const IntVector a = m.adjugate() * v;
    return std::all_of(a.begin(), a.end(), [&](std::int64_t x) { return x % m.determinant() == 0; });
}

/// Random frame (or Riesz) tower of up to three levels with #B_j, #L_j <= 4.
inline Tower random_tower(std::mt19937_64& rng, TowerKind kind, bool hadamard = false) {
    const std::size_t levels = static_cast<std::size_t>(uniform(rng, 1, 3));
    const std::size_t dim = static_cast<std::size_t>(uniform(rng, 1, 2));
    std::vector<TowerLevel> block;
    while (block.size() < levels) {
        const auto r = random_expanding(rng, 8, dim);
        const std::size_t det = static_cast<std::size_t>(r.abs_determinant());
        std::size_t nb, nl;
        if (hadamard) {
            nb = nl = det;
        } else if (kind == TowerKind::Frame) {
            nb = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(std::min<std::size_t>(4, det))));
            nl = std::min<std::size_t>(4, det);
        } else {
            nl = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(std::min<std::size_t>(4, det))));
            nb = std::min<std::size_t>(4, det);
        }
        if (hadamard && det > 4) continue;
        const auto b = random_residue_digits(rng, r, nb);
        const auto l = random_residue_digits(rng, r.transpose(), nl);
        const auto report = analyze_triple(r, b, l);
        if (kind == TowerKind::Frame ? !report.is_frame() : !report.is_riesz()) continue;
        block.push_back({r, b, l});
    }
    return Tower(std::move(block), TowerMode::Finite, kind);
}

inline Tower quarter_cantor() {
    return Tower({{ExpandingMatrix(4), DigitSet::integers({0, 2}), DigitSet::integers({0, 1})}}, TowerMode::Periodic,
                 TowerKind::Frame);
}

inline MeasureSpec middle_third() {
    return MeasureSpec({{ExpandingMatrix(3), DigitSet::integers({0, 2})}}, TowerMode::Periodic);
}

}  // namespace ff_test

#endif  // FRACTAL_FRAMES_TESTS_SUPPORT_HPP
