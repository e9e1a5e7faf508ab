#ifndef FRACTAL_FRAMES_TRIPLES_HPP
#define FRACTAL_FRAMES_TRIPLES_HPP

// Exponential matrices F_{L,B} and frame / Riesz-sequence / Hadamard triples.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fractal_frames/lattice.hpp"
#include "fractal_frames/phase.hpp"

namespace fractal_frames {

/// A squared singular value counts as zero when <= kRankTolerance * max.
inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kHadamardTolerance = 1e-9;

struct Bounds {
    double lower = 0.0;
    double upper = 0.0;
    friend bool operator==(const Bounds&, const Bounds&) = default;
};

enum class TripleClass { Hadamard, FrameOnly, RieszSequenceOnly, FrameAndRiesz, Neither };

inline std::string_view to_string(TripleClass c) {
    switch (c) {
        case TripleClass::Hadamard: return "Hadamard";
        case TripleClass::FrameOnly: return "FrameOnly";
        case TripleClass::RieszSequenceOnly: return "RieszSequenceOnly";
        case TripleClass::FrameAndRiesz: return "FrameAndRiesz";
        case TripleClass::Neither: return "Neither";
    }
    return "Neither";
}

inline TripleClass triple_class_from_string(std::string_view s) {
    for (auto c : {TripleClass::Hadamard, TripleClass::FrameOnly, TripleClass::RieszSequenceOnly,
                   TripleClass::FrameAndRiesz, TripleClass::Neither})
        if (to_string(c) == s) return c;
    throw PreconditionError("unknown triple classification '" + std::string(s) + "'");
}

struct TripleReport {
    std::optional<Bounds> frame_bounds;
    std::optional<Bounds> riesz_bounds;
    TripleClass classification = TripleClass::Neither;
    std::size_t rank = 0;
    std::vector<double> singular_values;  // descending, min(#B, #L) entries

    bool is_frame() const { return frame_bounds.has_value(); }
    bool is_riesz() const { return riesz_bounds.has_value(); }
    friend bool operator==(const TripleReport&, const TripleReport&) = default;
};

/// e_{R,lambda} = (1/sqrt(#B)) (exp(2 pi i <R^{-1} b, lambda>))_{b in B}.
inline Eigen::VectorXcd exp_vector(const LatticeMap& dilation, const DigitSet& digits, const IntVector& lambda) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(digits.size()));
    Eigen::VectorXcd v(static_cast<Eigen::Index>(digits.size()));
    for (std::size_t j = 0; j < digits.size(); ++j)
        v(static_cast<Eigen::Index>(j)) = scale * unit_root(pairing_phase(dilation, digits[j], lambda));
    return v;
}

/// The (#L x #B) matrix whose rows are e_{R,lambda}, lambda in L.
class ExponentialMatrix {
public:
    ExponentialMatrix(LatticeMap dilation, DigitSet digits, DigitSet frequencies)
        : dilation_(std::move(dilation)), digits_(std::move(digits)), frequencies_(std::move(frequencies)) {
        if (digits_.dim() != dilation_.dim() || frequencies_.dim() != dilation_.dim())
            throw PreconditionError("digit/frequency dimension does not match the dilation");
        const auto rows = static_cast<Eigen::Index>(frequencies_.size());
        const auto cols = static_cast<Eigen::Index>(digits_.size());
        const double scale = 1.0 / std::sqrt(static_cast<double>(digits_.size()));
        std::vector<IntVector> adj_digits;
        adj_digits.reserve(digits_.size());
        for (const auto& b : digits_) adj_digits.push_back(dilation_.adjugate() * b);
        matrix_.resize(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                matrix_(i, j) = scale * unit_root(pairing_phase(adj_digits[static_cast<std::size_t>(j)],
                                                                frequencies_[static_cast<std::size_t>(i)],
                                                                dilation_.determinant()));
    }

    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    const LatticeMap& dilation() const { return dilation_; }
    const DigitSet& digits() const { return digits_; }
    const DigitSet& frequencies() const { return frequencies_; }

private:
    LatticeMap dilation_;
    DigitSet digits_;
    DigitSet frequencies_;
    Eigen::MatrixXcd matrix_;
};

inline ExponentialMatrix build_exponential_matrix(const LatticeMap& dilation, const DigitSet& digits,
                                                  const DigitSet& frequencies) {
    return ExponentialMatrix(dilation, digits, frequencies);
}

/// Frame bounds are the extreme eigenvalues of F^H F, Riesz bounds those of
/// F F^H; a single decomposition of the smaller Gram matrix gives both.
inline TripleReport analyze_matrix(const Eigen::MatrixXcd& f) {
    const auto n_freq = static_cast<std::size_t>(f.rows());
    const auto n_digit = static_cast<std::size_t>(f.cols());
    const Eigen::MatrixXcd gram = n_digit <= n_freq ? Eigen::MatrixXcd(f.adjoint() * f)
                                                    : Eigen::MatrixXcd(f * f.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd eig = solver.eigenvalues();  // ascending

    TripleReport report;
    const double top = std::max(eig.maxCoeff(), 0.0);
    for (Eigen::Index i = eig.size(); i-- > 0;) {
        const double s2 = std::max(eig(i), 0.0);
        report.singular_values.push_back(std::sqrt(s2));
        if (s2 > kRankTolerance * top) ++report.rank;
    }
    const Bounds extremes{eig.minCoeff(), eig.maxCoeff()};
    if (report.rank == n_digit) report.frame_bounds = extremes;
    if (report.rank == n_freq) report.riesz_bounds = extremes;

    if (report.frame_bounds && report.riesz_bounds) {
        const bool unit = std::abs(extremes.lower - 1.0) <= kHadamardTolerance &&
                          std::abs(extremes.upper - 1.0) <= kHadamardTolerance;
        report.classification = unit ? TripleClass::Hadamard : TripleClass::FrameAndRiesz;
    } else if (report.frame_bounds) {
        report.classification = TripleClass::FrameOnly;
    } else if (report.riesz_bounds) {
        report.classification = TripleClass::RieszSequenceOnly;
    }
    return report;
}

inline TripleReport analyze_triple(const LatticeMap& dilation, const DigitSet& digits, const DigitSet& frequencies) {
    return analyze_matrix(ExponentialMatrix(dilation, digits, frequencies).matrix());
}

struct DualTriple {
    LatticeMap dilation;  // R^T
    DigitSet digits;      // L
    DigitSet frequencies; // B
    double bound_scale = 1.0;  // #B / #L
    TripleReport report;
};

/// (R, B, L) -> (R^T, L, B). Frame bounds of the original scaled by #B/#L must
/// equal the Riesz bounds of the dual; a mismatch is a kernel bug.
inline DualTriple dual_triple(const LatticeMap& dilation, const DigitSet& digits, const DigitSet& frequencies) {
    const double scale = static_cast<double>(digits.size()) / static_cast<double>(frequencies.size());
    const TripleReport primal = analyze_triple(dilation, digits, frequencies);
    DualTriple dual{dilation.transpose(), frequencies, digits, scale, {}};
    dual.report = analyze_triple(dual.dilation, dual.digits, dual.frequencies);

    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); };
    const bool consistent =
        primal.frame_bounds.has_value() == dual.report.riesz_bounds.has_value() &&
        (!primal.frame_bounds || (close(primal.frame_bounds->lower * scale, dual.report.riesz_bounds->lower) &&
                                  close(primal.frame_bounds->upper * scale, dual.report.riesz_bounds->upper)));
    if (!consistent) throw NumericalError("frame/Riesz duality check failed");
    return dual;
}

/// (R, B, complete residues of R^T) is a tight frame with constant |det R| / #B.
inline TripleReport tight_frame_from_complete(const LatticeMap& dilation, const DigitSet& digits) {
    if (!distinct_residues(digits, dilation))
        throw PreconditionError("digits are not distinct residues modulo R(Z^d)");
    const auto dual_residues = complete_residues(dilation.transpose());
    return analyze_triple(dilation, digits, dual_residues.representatives);
}

}  // namespace fractal_frames

#endif  // FRACTAL_FRAMES_TRIPLES_HPP
