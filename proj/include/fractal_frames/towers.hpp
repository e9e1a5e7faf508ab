#ifndef FRACTAL_FRAMES_TOWERS_HPP
#define FRACTAL_FRAMES_TOWERS_HPP

// Frame and Riesz-sequence towers: concatenation of triples, the spectrum
// Lambda = U Lambda_n, exactness classification and finite-level witnesses.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fractal_frames/errors.hpp"
#include "fractal_frames/lattice.hpp"
#include "fractal_frames/phase.hpp"
#include "fractal_frames/triples.hpp"

namespace fractal_frames {

enum class TowerMode { Finite, Periodic };
enum class TowerKind { Frame, Riesz };

inline std::string_view to_string(TowerMode m) { return m == TowerMode::Finite ? "finite" : "periodic"; }
inline std::string_view to_string(TowerKind k) { return k == TowerKind::Frame ? "frame" : "riesz"; }

/// Dilation and digits of one convolution factor.
struct DigitLevel {
    ExpandingMatrix dilation;
    DigitSet digits;
};

/// The sequence {(R_j, B_j)} defining an infinite-convolution measure; a
/// periodic spec repeats its block forever, a finite one stops.
class MeasureSpec {
public:
    MeasureSpec(std::vector<DigitLevel> block, TowerMode mode) : block_(std::move(block)), mode_(mode) {
        if (block_.empty()) throw PreconditionError("measure needs at least one level");
        const std::size_t d = block_.front().dilation.dim();
        for (std::size_t j = 0; j < block_.size(); ++j) {
            const auto& lvl = block_[j];
            if (lvl.dilation.dim() != d || lvl.digits.dim() != d)
                throw PreconditionError("level " + std::to_string(j + 1) + " has mismatched dimension");
            if (!lvl.digits.contains_zero())
                throw PreconditionError("digit set at level " + std::to_string(j + 1) + " must contain 0");
            if (!distinct_residues(lvl.digits, lvl.dilation))
                throw PreconditionError("digits at level " + std::to_string(j + 1) +
                                        " are not distinct residues modulo R(Z^d)");
        }
    }

    TowerMode mode() const { return mode_; }
    std::size_t period() const { return block_.size(); }
    std::size_t dim() const { return block_.front().dilation.dim(); }
    const std::vector<DigitLevel>& block() const { return block_; }
    bool has_level(std::size_t j) const { return j >= 1 && (mode_ == TowerMode::Periodic || j <= block_.size()); }

    /// 1-based; periodic specs unroll.
    const DigitLevel& level(std::size_t j) const {
        if (!has_level(j)) throw PreconditionError("level " + std::to_string(j) + " exceeds the finite tower");
        return block_[(j - 1) % block_.size()];
    }

    /// The same measure read from level offset+1 onwards (periodic only).
    MeasureSpec shifted(std::size_t offset) const {
        if (mode_ != TowerMode::Periodic) throw PreconditionError("only periodic measures can be shifted");
        std::vector<DigitLevel> rotated;
        for (std::size_t i = 0; i < block_.size(); ++i) rotated.push_back(block_[(offset + i) % block_.size()]);
        return MeasureSpec(std::move(rotated), mode_);
    }

private:
    std::vector<DigitLevel> block_;
    TowerMode mode_;
};

/// (R_{a+g} ... R_{a+1}, R_{a+g}...R_{a+2} B_{a+1} + ... + B_{a+g}), digits in
/// lexicographic order of (b_{a+1}, ..., b_{a+g}).
inline std::pair<LatticeMap, DigitSet> concatenate_digits(const MeasureSpec& measure, std::size_t first,
                                                          std::size_t count) {
    const std::size_t d = measure.dim();
    LatticeMap product(IntMatrix::identity(d));
    std::vector<IntVector> digits{IntVector(d, 0)};
    for (std::size_t j = first + 1; j <= first + count; ++j) {
        const auto& lvl = measure.level(j);
        std::vector<IntVector> next;
        next.reserve(digits.size() * lvl.digits.size());
        for (const auto& prev : digits) {
            const IntVector lifted = lvl.dilation.matrix() * prev;
            for (const auto& b : lvl.digits) next.push_back(lifted + b);
        }
        std::set<IntVector> unique(next.begin(), next.end());
        if (unique.size() != next.size())
            throw PreconditionError("digit collision in concatenated digit set at level " + std::to_string(j));
        digits = std::move(next);
        product = LatticeMap(lvl.dilation.matrix() * product.matrix());
    }
    return {std::move(product), DigitSet(std::move(digits))};
}

struct TowerLevel {
    ExpandingMatrix dilation;
    DigitSet digits;
    DigitSet frequencies;
};

struct BoundProducts {
    double lower = 1.0;       // prod C_j
    double upper = 1.0;       // prod D_j
    std::uint64_t digit_count = 1;  // prod #B_j
};

/// Sequence of triples, each a frame triple (frame kind) or a Riesz-sequence
/// triple (riesz kind); per-level bounds are computed on construction.
class Tower {
public:
    Tower(std::vector<TowerLevel> block, TowerMode mode, TowerKind kind)
        : block_(std::move(block)), mode_(mode), kind_(kind), measure_(digit_levels(block_), mode) {
        for (std::size_t j = 0; j < block_.size(); ++j) {
            const auto& lvl = block_[j];
            if (lvl.frequencies.dim() != lvl.dilation.dim())
                throw PreconditionError("frequencies at level " + std::to_string(j + 1) + " have wrong dimension");
            if (!lvl.frequencies.contains_zero())
                throw PreconditionError("frequency set at level " + std::to_string(j + 1) + " must contain 0");
            TripleReport report = analyze_triple(lvl.dilation, lvl.digits, lvl.frequencies);
            const auto& b = kind_ == TowerKind::Frame ? report.frame_bounds : report.riesz_bounds;
            if (!b)
                throw PreconditionError("level " + std::to_string(j + 1) + " is not a " +
                                        (kind_ == TowerKind::Frame ? "frame" : "Riesz-sequence") + " triple");
            bounds_.push_back(*b);
            reports_.push_back(std::move(report));
        }
    }

    TowerMode mode() const { return mode_; }
    TowerKind kind() const { return kind_; }
    std::size_t period() const { return block_.size(); }
    std::size_t dim() const { return block_.front().dilation.dim(); }
    const std::vector<TowerLevel>& block() const { return block_; }
    const MeasureSpec& measure() const { return measure_; }
    bool has_level(std::size_t j) const { return measure_.has_level(j); }

    const TowerLevel& level(std::size_t j) const { return block_[index(j)]; }
    const Bounds& bounds(std::size_t j) const { return bounds_[index(j)]; }
    const TripleReport& report(std::size_t j) const { return reports_[index(j)]; }

    BoundProducts products(std::size_t n) const {
        BoundProducts p;
        for (std::size_t j = 1; j <= n; ++j) {
            p.lower *= bounds(j).lower;
            p.upper *= bounds(j).upper;
            p.digit_count = static_cast<std::uint64_t>(detail::mul(static_cast<std::int64_t>(p.digit_count),
                                                                   static_cast<std::int64_t>(level(j).digits.size())));
        }
        return p;
    }

    /// prod C_j > 0 and prod D_j < infinity are guaranteed: finite towers
    /// trivially, periodic ones only when every level has C_j = D_j = 1.
    bool products_certified() const {
        if (mode_ == TowerMode::Finite) return true;
        return std::all_of(bounds_.begin(), bounds_.end(), [](const Bounds& b) {
            return std::abs(b.lower - 1.0) <= kHadamardTolerance && std::abs(b.upper - 1.0) <= kHadamardTolerance;
        });
    }

    /// First n levels as a finite tower, with optional replacement of one level's frequencies.
    Tower unrolled(std::size_t n, std::size_t replace_level = 0, const DigitSet* replacement = nullptr) const {
        std::vector<TowerLevel> levels;
        for (std::size_t j = 1; j <= n; ++j) {
            TowerLevel lvl = level(j);
            if (j == replace_level && replacement) lvl.frequencies = *replacement;
            levels.push_back(std::move(lvl));
        }
        return Tower(std::move(levels), TowerMode::Finite, kind_);
    }

private:
    static std::vector<DigitLevel> digit_levels(const std::vector<TowerLevel>& block) {
        if (block.empty()) throw PreconditionError("tower needs at least one level");
        std::vector<DigitLevel> out;
        for (const auto& lvl : block) out.push_back({lvl.dilation, lvl.digits});
        return out;
    }

    std::size_t index(std::size_t j) const {
        if (!measure_.has_level(j)) throw PreconditionError("level " + std::to_string(j) + " exceeds the finite tower");
        return (j - 1) % block_.size();
    }

    std::vector<TowerLevel> block_;
    TowerMode mode_;
    TowerKind kind_;
    MeasureSpec measure_;
    std::vector<Bounds> bounds_;
    std::vector<TripleReport> reports_;
};

namespace detail {

/// All tuple sums sum_j R_1^T...R_{j-1}^T l_j in lexicographic tuple order
/// (l_1 most significant) together with the deduplicated spectrum in
/// first-appearance order.
struct SpectrumBuilder {
    const Tower& tower;
    std::vector<IntVector> tuple_sums;
    std::vector<IntVector> spectrum;
    std::set<IntVector> seen;
    IntMatrix lift;  // R_1^T ... R_{n}^T for the current n
    std::size_t level = 0;

    explicit SpectrumBuilder(const Tower& t) : tower(t), lift(IntMatrix::identity(t.dim())) {
        IntVector zero(t.dim(), 0);
        tuple_sums.push_back(zero);
        spectrum.push_back(zero);
        seen.insert(zero);
    }

    void advance() {
        ++level;
        const auto& lvl = tower.level(level);
        std::vector<IntVector> lifted_digits;
        for (const auto& l : lvl.frequencies) lifted_digits.push_back(lift * l);
        std::vector<IntVector> next;
        next.reserve(tuple_sums.size() * lifted_digits.size());
        for (const auto& s : tuple_sums)
            for (const auto& l : lifted_digits) next.push_back(s + l);
        for (const auto& v : next)
            if (seen.insert(v).second) spectrum.push_back(v);
        tuple_sums = std::move(next);
        lift = lift * lvl.dilation.matrix().transpose();
    }
};

}  // namespace detail

/// Lambda_n in canonical order: by level of first appearance, then
/// lexicographic digit tuple (l_1, ..., l_n). n = 0 gives {0}.
inline std::vector<IntVector> enumerate_spectrum(const Tower& tower, std::size_t n) {
    detail::SpectrumBuilder builder(tower);
    while (builder.level < n) builder.advance();
    return builder.spectrum;
}

struct SpectrumBall {
    std::vector<IntVector> points;  // Lambda within the closed ball, canonical order
    std::size_t levels_used = 0;
    bool complete = false;  // no element of a later level can enter the ball
};

/// Lambda intersected with the closed ball B(0, radius). After level m every
/// later element is lambda_m + R_1^T..R_m^T y with y a non-zero integer
/// vector, so its norm is at least sigma_min(R_1^T..R_m^T) - max |Lambda_m|.
inline SpectrumBall enumerate_spectrum_ball(const Tower& tower, double radius, std::size_t max_level = 64) {
    detail::SpectrumBuilder builder(tower);
    SpectrumBall ball;
    for (;;) {
        double max_norm = 0.0;
        for (const auto& v : builder.spectrum) max_norm = std::max(max_norm, euclidean_norm(v));
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(builder.lift.to_double());
        const double sigma_min = svd.singularValues().minCoeff();
        if (sigma_min - max_norm > radius) {
            ball.complete = true;
            break;
        }
        if (builder.level >= max_level || !tower.has_level(builder.level + 1)) {
            ball.complete = !tower.has_level(builder.level + 1);
            break;
        }
        builder.advance();
    }
    ball.levels_used = builder.level;
    for (const auto& v : builder.spectrum)
        if (euclidean_norm(v) <= radius) ball.points.push_back(v);
    return ball;
}

/// (R_n...R_1, B_n, Lambda_n) at level n.
struct ConcatenatedTriple {
    LatticeMap dilation;
    DigitSet digits;
    DigitSet spectrum;
    std::size_t level = 0;
    TripleReport report;
};

/// Builds the level-n concatenation and checks that its bounds lie within
/// [prod C_j - 1e-8, prod D_j + 1e-8].
inline ConcatenatedTriple concatenate(const Tower& tower, std::size_t n) {
    if (n > 0 && !tower.has_level(n)) throw PreconditionError("level " + std::to_string(n) + " exceeds the finite tower");
    auto [dilation, digits] = concatenate_digits(tower.measure(), 0, n);
    DigitSet spectrum(enumerate_spectrum(tower, n));
    TripleReport report = analyze_triple(dilation, digits, spectrum);

    const auto p = tower.products(n);
    const auto& b = tower.kind() == TowerKind::Frame ? report.frame_bounds : report.riesz_bounds;
    if (!b || b->lower < p.lower - 1e-8 || b->upper > p.upper + 1e-8)
        throw NumericalError("concatenated bounds escape the product bracket at level " + std::to_string(n));
    return {std::move(dilation), std::move(digits), std::move(spectrum), n, std::move(report)};
}

/// f = sum_b w_b 1_{K_{b,n}}, coefficients indexed by the concatenated digits.
struct StepFunction {
    std::size_t level = 0;
    std::vector<std::complex<double>> coefficients;

    /// int |f|^2 dmu = (1/#B_n) sum |w_b|^2.
    double norm_sq() const {
        double s = 0.0;
        for (const auto& w : coefficients) s += std::norm(w);
        return coefficients.empty() ? 0.0 : s / static_cast<double>(coefficients.size());
    }
};

/// <f, e_lambda> in L^2(mu_n) = (1/#B_n) sum_b w_b exp(-2 pi i <R_n^{-1} b, lambda>).
inline std::complex<double> finite_level_inner(const ConcatenatedTriple& triple, const StepFunction& f,
                                               const IntVector& lambda) {
    if (f.coefficients.size() != triple.digits.size())
        throw PreconditionError("step function does not match the concatenated digit set");
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < triple.digits.size(); ++i)
        acc += f.coefficients[i] * std::conj(unit_root(pairing_phase(triple.dilation, triple.digits[i], lambda)));
    return acc / static_cast<double>(triple.digits.size());
}

enum class Verdict { RieszBasis, OvercompleteFrame, IncompleteRieszSequence, Indeterminate };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::RieszBasis: return "RieszBasis";
        case Verdict::OvercompleteFrame: return "OvercompleteFrame";
        case Verdict::IncompleteRieszSequence: return "IncompleteRieszSequence";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

inline Verdict verdict_from_string(std::string_view s) {
    for (auto v : {Verdict::RieszBasis, Verdict::OvercompleteFrame, Verdict::IncompleteRieszSequence,
                   Verdict::Indeterminate})
        if (to_string(v) == s) return v;
    throw PreconditionError("unknown verdict '" + std::string(s) + "'");
}

struct LevelCardinality {
    std::size_t level = 0;
    std::size_t digits = 0;       // #B_j
    std::size_t frequencies = 0;  // #L_j
};

/// Removing lambda at `level` keeps a frame tower; the removed part of Lambda
/// is offset + {sum over the other levels}, an infinite set.
struct RemovableFamily {
    std::size_t level = 0;
    IntVector removed_frequency;
    IntVector offset;  // R_1^T ... R_{level-1}^T removed_frequency
    Bounds remaining_bounds;
    std::string description;
};

struct ExactnessVerdict {
    Verdict verdict = Verdict::Indeterminate;
    std::string reason;
    std::vector<LevelCardinality> compared;
    std::optional<StepFunction> witness;
    std::optional<RemovableFamily> removable;
};

struct ExactnessWitness {
    StepFunction function;
    IntVector lambda0;
    double orthogonality_residual = 0.0;  // max |<f, e_lambda>|, lambda != lambda0
    double peak_energy = 0.0;             // |<f, e_lambda0>|^2
    double lower_bound = 0.0;             // prod C_j
};

/// Normalise so the first entry of near-maximal modulus is real positive.
inline void fix_phase(std::vector<std::complex<double>>& w) {
    double top = 0.0;
    for (const auto& x : w) top = std::max(top, std::abs(x));
    for (const auto& x : w)
        if (std::abs(x) >= 0.5 * top && top > 0.0) {
            const std::complex<double> rot = std::conj(x) / std::abs(x);
            for (auto& y : w) y *= rot;
            break;
        }
    for (auto& y : w) {
        if (std::abs(y.real()) < 1e-15) y.real(0.0);
        if (std::abs(y.imag()) < 1e-15) y.imag(0.0);
    }
}

/// Unit-norm f in L^2(mu_n) orthogonal to every e_lambda, lambda in
/// Lambda_n \ {lambda0}. Needs #B_j = #L_j for j <= n.
inline ExactnessWitness exactness_witness(const Tower& tower, const IntVector& lambda0, std::size_t n) {
    if (tower.kind() != TowerKind::Frame) throw PreconditionError("exactness witness needs a frame tower");
    for (std::size_t j = 1; j <= n; ++j)
        if (tower.level(j).digits.size() != tower.level(j).frequencies.size())
            throw PreconditionError("finite frame is not exact at level " + std::to_string(j) + " (#B_j != #L_j)");
    const ConcatenatedTriple triple = concatenate(tower, n);
    const auto it = std::find(triple.spectrum.begin(), triple.spectrum.end(), lambda0);
    if (it == triple.spectrum.end())
        throw PreconditionError("lambda0 " + detail::format_vector(lambda0) + " is not in Lambda_n");
    const auto row = static_cast<Eigen::Index>(it - triple.spectrum.begin());

    const ExponentialMatrix f(triple.dilation, triple.digits, triple.spectrum);
    const Eigen::MatrixXcd analysis = f.matrix().conjugate();  // (analysis w)_lambda = <w, e_lambda>
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(analysis);
    if (!lu.isInvertible()) throw PreconditionError("finite frame at level " + std::to_string(n) + " is not exact");
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(analysis.rows());
    rhs(row) = 1.0;
    const Eigen::VectorXcd w = lu.solve(rhs);

    ExactnessWitness out;
    out.lambda0 = lambda0;
    out.function.level = n;
    const double size = static_cast<double>(triple.digits.size());
    const double scale = std::sqrt(size) / w.norm();  // ||f||_{L^2(mu_n)} = 1
    for (Eigen::Index i = 0; i < w.size(); ++i) out.function.coefficients.push_back(w(i) * scale);
    fix_phase(out.function.coefficients);

    for (const auto& lambda : triple.spectrum) {
        const double mag = std::abs(finite_level_inner(triple, out.function, lambda));
        if (lambda == lambda0)
            out.peak_energy = mag * mag;
        else
            out.orthogonality_residual = std::max(out.orthogonality_residual, mag);
    }
    out.lower_bound = tower.products(n).lower;
    if (out.peak_energy < out.lower_bound - 1e-8)
        throw NumericalError("exactness witness violates the product lower bound");
    return out;
}

/// First lambda in the canonical complete residue system of R^T, outside L,
/// with (R, B, L u {lambda}) still a Riesz-sequence triple.
inline std::optional<IntVector> find_riesz_extension(const LatticeMap& dilation, const DigitSet& digits,
                                                     const DigitSet& frequencies) {
    const auto pool = complete_residues(dilation.transpose());
    for (const auto& candidate : pool.representatives) {
        if (frequencies.contains(candidate)) continue;
        auto extended = frequencies.points();
        extended.push_back(candidate);
        if (analyze_triple(dilation, digits, DigitSet(std::move(extended))).is_riesz()) return candidate;
    }
    return std::nullopt;
}

struct IncompletenessWitness {
    std::size_t extension_level = 0;
    IntVector extension_digit;      // lambda_1 added to L_{j0}
    IntVector extension_frequency;  // R_1^T..R_{j0-1}^T lambda_1, the new element of Lambda
    StepFunction function;
    double interpolation_residual = 0.0;
    double norm = 0.0;               // ||f_n||_{L^2(mu_n)}
    double norm_bound = 0.0;         // 1 / prod C_j of the extended tower
    double sharp_norm_bound = 0.0;   // 1 / sqrt(prod C_j)
};

/// Minimal-norm f_n with <f_n, e_lambda> = 0 on Lambda_n and = 1 at the
/// extension frequency, for a Riesz tower with some #L_j < #B_j.
inline IncompletenessWitness incompleteness_witness(const Tower& tower, std::size_t n) {
    if (tower.kind() != TowerKind::Riesz) throw PreconditionError("incompleteness witness needs a Riesz tower");
    std::size_t j0 = 0;
    for (std::size_t j = 1; j <= tower.period(); ++j)
        if (tower.level(j).frequencies.size() < tower.level(j).digits.size()) {
            j0 = j;
            break;
        }
    if (j0 == 0) throw PreconditionError("no level with #L_j < #B_j");
    if (n < j0) throw PreconditionError("witness level must be at least the deficient level " + std::to_string(j0));

    const auto& lvl = tower.level(j0);
    const auto extension = find_riesz_extension(lvl.dilation, lvl.digits, lvl.frequencies);
    if (!extension)
        throw PreconditionError("no extension of L at level " + std::to_string(j0) +
                                " preserves the Riesz-sequence property");
    auto extended_points = lvl.frequencies.points();
    extended_points.push_back(*extension);
    const DigitSet extended_l(std::move(extended_points));
    const Tower extended = tower.unrolled(n, j0, &extended_l);
    const ConcatenatedTriple triple = concatenate(extended, n);

    IntMatrix lift = IntMatrix::identity(tower.dim());
    for (std::size_t j = 1; j < j0; ++j) lift = lift * tower.level(j).dilation.matrix().transpose();
    const IntVector target = lift * *extension;

    const ExponentialMatrix f(triple.dilation, triple.digits, triple.spectrum);
    const double size = static_cast<double>(triple.digits.size());
    const Eigen::MatrixXcd g = f.matrix().conjugate() / std::sqrt(size);  // (g w)_lambda = <f, e_lambda>_{mu_n}
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(g.rows());
    const auto it = std::find(triple.spectrum.begin(), triple.spectrum.end(), target);
    c(static_cast<Eigen::Index>(it - triple.spectrum.begin())) = 1.0;
    const Eigen::MatrixXcd gram = g * g.adjoint();
    const Eigen::VectorXcd w = g.adjoint() * gram.ldlt().solve(c);

    IncompletenessWitness out;
    out.extension_level = j0;
    out.extension_digit = *extension;
    out.extension_frequency = target;
    out.function.level = n;
    for (Eigen::Index i = 0; i < w.size(); ++i) out.function.coefficients.push_back(w(i));
    for (std::size_t i = 0; i < triple.spectrum.size(); ++i) {
        const auto value = finite_level_inner(triple, out.function, triple.spectrum[i]);
        const double expected = triple.spectrum[i] == target ? 1.0 : 0.0;
        out.interpolation_residual = std::max(out.interpolation_residual, std::abs(value - expected));
    }
    out.norm = std::sqrt(out.function.norm_sq());
    const double lower = extended.products(n).lower;
    out.norm_bound = 1.0 / lower;
    out.sharp_norm_bound = 1.0 / std::sqrt(lower);
    if (out.norm > out.norm_bound + 1e-10) throw NumericalError("interpolant exceeds the Riesz lower-bound estimate");
    return out;
}

/// Exactness, overcompleteness or incompleteness of E(Lambda) read off the
/// per-level cardinalities. delta_positive reports whether inf |mu_{>n}^(lambda)|^2 > 0
/// has been certified.
inline ExactnessVerdict exactness_classify(const Tower& tower, bool delta_positive) {
    ExactnessVerdict out;
    bool all_square = true, surplus = false, deficit = false;
    for (std::size_t j = 1; j <= tower.period(); ++j) {
        const auto& lvl = tower.level(j);
        out.compared.push_back({j, lvl.digits.size(), lvl.frequencies.size()});
        all_square = all_square && lvl.digits.size() == lvl.frequencies.size();
        surplus = surplus || lvl.digits.size() < lvl.frequencies.size();
        deficit = deficit || lvl.frequencies.size() < lvl.digits.size();
    }
    if (!tower.products_certified()) {
        out.reason = "bound products prod C_j, prod D_j are not certified to stay in (0, inf)";
        return out;
    }

    if (tower.kind() == TowerKind::Riesz && deficit) {
        out.verdict = Verdict::IncompleteRieszSequence;
        out.reason = "Riesz-sequence tower with #L_j < #B_j at some level";
        for (const auto& c : out.compared)
            if (c.frequencies < c.digits) {
                try {
                    out.witness = incompleteness_witness(tower, c.level).function;
                } catch (const PreconditionError&) {
                }
                break;
            }
        return out;
    }
    if (!delta_positive) {
        out.reason = "delta(Lambda) > 0 not certified";
        return out;
    }
    if (all_square) {
        out.verdict = Verdict::RieszBasis;
        out.reason = "#B_j = #L_j at every level and delta(Lambda) > 0";
        if (tower.kind() == TowerKind::Frame)
            out.witness = exactness_witness(tower, IntVector(tower.dim(), 0), 1).function;
        return out;
    }
    if (tower.kind() == TowerKind::Frame && surplus) {
        out.verdict = Verdict::OvercompleteFrame;
        out.reason = "frame tower with #B_j < #L_j at some level and delta(Lambda) > 0";
        for (const auto& c : out.compared) {
            if (c.digits >= c.frequencies) continue;
            const auto& lvl = tower.level(c.level);
            IntMatrix lift = IntMatrix::identity(tower.dim());
            for (std::size_t j = 1; j < c.level; ++j) lift = lift * tower.level(j).dilation.matrix().transpose();
            for (std::size_t i = 0; i < lvl.frequencies.size(); ++i) {
                if (lvl.frequencies[i] == IntVector(tower.dim(), 0)) continue;
                auto rest = lvl.frequencies.points();
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
                const auto report = analyze_triple(lvl.dilation, lvl.digits, DigitSet(rest));
                if (!report.frame_bounds) continue;
                RemovableFamily fam;
                fam.level = c.level;
                fam.removed_frequency = lvl.frequencies[i];
                fam.offset = lift * lvl.frequencies[i];
                fam.remaining_bounds = *report.frame_bounds;
                std::ostringstream os;
                os << detail::format_vector(fam.offset) << " + { sum_{j != " << c.level
                   << "} R_1^T...R_{j-1}^T l_j : l_j in L_j } (infinite; removal leaves a frame)";
                fam.description = os.str();
                out.removable = std::move(fam);
                break;
            }
            break;
        }
        return out;
    }
    out.reason = "mixed cardinality pattern not covered by the classification";
    return out;
}

struct FiniteFrameCheck {
    double lower = 0.0;  // smallest non-zero eigenvalue of the frame operator
    double upper = 0.0;
    std::size_t rank = 0;
    bool full_rank = false;  // rank = #B_n, so `lower` is a frame bound on S_n
};

/// Extreme non-zero eigenvalues of the frame operator of {e_lambda : lambda in
/// test} acting on the step-function space S_n with the L^2(mu_n) inner product.
inline FiniteFrameCheck finite_level_frame_check(const Tower& tower, std::size_t n,
                                                 const std::vector<IntVector>& test) {
    const ConcatenatedTriple triple = concatenate(tower, n);
    for (const auto& lambda : test)
        if (!triple.spectrum.contains(lambda))
            throw PreconditionError("test frequency " + detail::format_vector(lambda) + " is not in Lambda_n");
    // In the orthonormal basis sqrt(#B_n) 1_{K_{b,n}} of S_n the analysis
    // matrix is conj(F); its Gram matrix carries the frame operator spectrum.
    const Eigen::MatrixXcd analysis =
        ExponentialMatrix(triple.dilation, triple.digits, DigitSet(test)).matrix().conjugate();
    const Eigen::MatrixXcd op = analysis.adjoint() * analysis;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd eig = solver.eigenvalues();
    FiniteFrameCheck out;
    const double top = eig.maxCoeff();
    out.upper = top;
    out.lower = top;
    for (Eigen::Index i = 0; i < eig.size(); ++i)
        if (eig(i) > kRankTolerance * top) {
            ++out.rank;
            out.lower = std::min(out.lower, eig(i));
        }
    out.full_rank = out.rank == triple.digits.size();
    return out;
}

}  // namespace fractal_frames

#endif  // FRACTAL_FRAMES_TOWERS_HPP
