#ifndef FRACTAL_FRAMES_FOURIER_HPP
#define FRACTAL_FRAMES_FOURIER_HPP

// Fourier transforms of infinite-convolution measures as truncated products
// of masks, with certified truncation error, and the tail quantity delta(Lambda).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fractal_frames/errors.hpp"
#include "fractal_frames/lattice.hpp"
#include "fractal_frames/phase.hpp"
#include "fractal_frames/towers.hpp"

namespace fractal_frames {

inline constexpr double kDefaultTargetError = 1e-10;
inline constexpr double kDecayRatioMax = 0.95;
inline constexpr std::size_t kMaxDecayPeriods = 32;
inline constexpr std::size_t kMaxModelLevels = 2048;
inline constexpr std::size_t kMaxCertificateCenters = 65536;

using RealVector = std::vector<double>;

/// m_B(xi) = (1/#B) sum_b exp(-2 pi i <b, xi>).
inline std::complex<double> mask_eval(const DigitSet& digits, const RealVector& xi) {
    if (xi.size() != digits.dim()) throw PreconditionError("frequency dimension does not match digit set");
    std::complex<double> acc = 0.0;
    for (const auto& b : digits) {
        double t = 0.0;
        for (std::size_t i = 0; i < xi.size(); ++i) t += static_cast<double>(b[i]) * xi[i];
        t -= std::nearbyint(t);
        const double angle = -2.0 * std::numbers::pi * t;
        acc += std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return acc / static_cast<double>(digits.size());
}

struct TailEstimate {
    std::complex<double> value = 1.0;
    double error_bound = 0.0;
    std::size_t levels_used = 0;
};

struct SupportBox {
    RealVector lower;
    RealVector upper;
};

/// mu = delta_{R_1^{-1} B_1} * delta_{(R_2 R_1)^{-1} B_2} * ... for a periodic
/// measure spec, with a decay certificate for ||(R_k...R_1)^{-1}||.
///
/// Certificate: a block length m (a multiple of the period) with
/// q = max_r ||(R_{r+m}...R_{r+1})^{-1}|| < kDecayRatioMax. Then
/// a_{k+m} <= q a_k and sum_{k>N} a_k <= (a_{N+1} + ... + a_{N+m}) / (1 - q).
class MeasureModel {
public:
    explicit MeasureModel(MeasureSpec spec) : spec_(std::move(spec)) {
        if (spec_.mode() != TowerMode::Periodic)
            throw PreconditionError("decay certificate unavailable: finite towers do not define an infinite convolution");
        const std::size_t p = spec_.period();
        const std::size_t d = spec_.dim();
        for (std::size_t r = 0; r < p; ++r) {
            const auto& lvl = spec_.block()[r];
            inverse_.push_back(lvl.dilation.inverse_double());
            inverse_transpose_.push_back(inverse_.back().transpose());
            digit_radius_ = std::max(digit_radius_, lvl.digits.max_norm());
        }

        for (std::size_t periods = 1; periods <= kMaxDecayPeriods && block_ == 0; ++periods) {
            const std::size_t m = periods * p;
            double q = 0.0;
            for (std::size_t r = 0; r < p; ++r) q = std::max(q, window_inverse_norm(r, m));
            if (q < kDecayRatioMax) {
                block_ = m;
                ratio_ = q;
            }
        }
        if (block_ == 0)
            throw PreconditionError("decay certificate unavailable: no block of up to " +
                                    std::to_string(kMaxDecayPeriods) + " periods contracts below " +
                                    std::to_string(kDecayRatioMax));

        Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        norms_.push_back(1.0);  // a_0
        for (std::size_t k = 1; k <= kMaxModelLevels; ++k) {
            inv = inv * inverse_[(k - 1) % p];  // (R_k...R_1)^{-1} = R_1^{-1}...R_k^{-1}
            const double a = operator_norm(inv) * (1.0 + 1e-12);
            norms_.push_back(a);
            if (a == 0.0) break;
        }

        // support: sum_k (R_k...R_1)^{-1} b_k, truncated at K levels plus the tail radius
        lower_.assign(d, 0.0);
        upper_.assign(d, 0.0);
        inv = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        std::size_t cut = 1;
        for (;; ++cut) {
            inv = inv * inverse_[(cut - 1) % p];
            const auto& digits = spec_.level(cut).digits;
            for (std::size_t i = 0; i < d; ++i) {
                double lo = std::numeric_limits<double>::infinity(), hi = -lo;
                for (const auto& b : digits) {
                    double v = 0.0;
                    for (std::size_t j = 0; j < d; ++j)
                        v += inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * static_cast<double>(b[j]);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                lower_[i] += lo;
                upper_[i] += hi;
            }
            if (cut + block_ + 1 >= norms_.size() || digit_radius_ * tail_sum(cut) < 1e-13) break;
        }
        const double pad = digit_radius_ * tail_sum(cut) + 1e-12;
        for (std::size_t i = 0; i < d; ++i) {
            lower_[i] -= pad;
            upper_[i] += pad;
        }
        double radius = 0.0;
        for (std::size_t k = 1; k <= block_; ++k) radius += norms_[k];
        support_radius_ = digit_radius_ * radius / (1.0 - ratio_);
    }

    const MeasureSpec& spec() const { return spec_; }
    std::size_t dim() const { return spec_.dim(); }
    std::size_t block_length() const { return block_; }
    double contraction() const { return ratio_; }
    double digit_radius() const { return digit_radius_; }
    SupportBox support_box() const { return {lower_, upper_}; }
    /// sup |x| over the support.
    double support_radius() const { return support_radius_; }

    /// a_k >= ||(R_k...R_1)^{-1}||.
    double inverse_norm(std::size_t k) const {
        if (k >= norms_.size()) return 0.0;
        return norms_[k];
    }

    /// Upper bound for sum_{k>n} a_k.
    double tail_sum(std::size_t n) const {
        if (n + block_ >= norms_.size()) {
            if (norms_.back() == 0.0) return 0.0;
            throw PreconditionError("decay certificate exhausted beyond level " + std::to_string(norms_.size() - 1));
        }
        double s = 0.0;
        for (std::size_t t = 1; t <= block_; ++t) s += norms_[n + t];
        return s / (1.0 - ratio_);
    }

    /// ||(R_{r+m}...R_{r+1})^{-1}|| for a cyclic offset r.
    double window_inverse_norm(std::size_t r, std::size_t m) const {
        const auto d = static_cast<Eigen::Index>(dim());
        Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(d, d);
        for (std::size_t t = 1; t <= m; ++t) inv = inv * inverse_[(r + t - 1) % spec_.period()];
        return operator_norm(inv) * (1.0 + 1e-12);
    }

    /// (R_k^T)^{-1} in floating point (1-based level).
    const Eigen::MatrixXd& inverse_transpose(std::size_t k) const {
        return inverse_transpose_[(k - 1) % spec_.period()];
    }

    /// The measure of levels r+1, r+2, ...
    MeasureModel shifted(std::size_t r) const { return MeasureModel(spec_.shifted(r % spec_.period())); }

    static double operator_norm(const Eigen::MatrixXd& m) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        return svd.singularValues()(0);
    }

private:
    MeasureSpec spec_;
    std::vector<Eigen::MatrixXd> inverse_;
    std::vector<Eigen::MatrixXd> inverse_transpose_;
    std::vector<double> norms_;
    std::size_t block_ = 0;
    double ratio_ = 1.0;
    double digit_radius_ = 0.0;
    double support_radius_ = 0.0;
    RealVector lower_, upper_;
};

namespace detail {

inline double norm2(const RealVector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// eta = num / den with den > 0 and gcd(num, den) = 1.
struct RationalVector {
    IntVector num;
    std::int64_t den = 1;

    void reduce() {
        std::int64_t g = den;
        for (auto x : num) g = std::gcd(g, x);
        if (g > 1) {
            for (auto& x : num) x /= g;
            den /= g;
        }
    }

    /// (R^T)^{-1} eta = adj(R^T) num / (det R * den)
    RationalVector apply_inverse_transpose(const LatticeMap& rt) const {
        RationalVector out{rt.adjugate() * num, mul(rt.determinant(), den)};
        if (out.den < 0) {
            out.den = -out.den;
            for (auto& x : out.num) x = -x;
        }
        out.reduce();
        return out;
    }

    RealVector to_double() const {
        RealVector v(num.size());
        for (std::size_t i = 0; i < num.size(); ++i) v[i] = static_cast<double>(num[i]) / static_cast<double>(den);
        return v;
    }
};

inline std::complex<double> mask_eval_exact(const DigitSet& digits, const RationalVector& eta) {
    std::complex<double> acc = 0.0;
    const __int128 q = eta.den;
    for (const auto& b : digits) {
        __int128 s = 0;
        for (std::size_t i = 0; i < b.size(); ++i) s = (s + static_cast<__int128>(b[i]) * eta.num[i]) % q;
        if (s < 0) s += q;
        acc += std::conj(unit_root({static_cast<std::int64_t>(s), eta.den}));
    }
    return acc / static_cast<double>(digits.size());
}

inline RealVector mat_vec(const Eigen::MatrixXd& m, const RealVector& v) {
    RealVector out(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            out[i] += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * v[j];
    return out;
}

/// Product of masks for k = n+1, n+2, ... given eta_n = (R_n^T...R_1^T)^{-1} xi
/// (exact when available); stops when the certified tail is within target.
inline TailEstimate finish_product(const MeasureModel& model, std::size_t n, std::optional<RationalVector> exact,
                                   RealVector approx, double xi_norm, double target_error) {
    TailEstimate out;
    const double scale = 2.0 * std::numbers::pi * model.digit_radius() * xi_norm;
    if (xi_norm == 0.0) return out;
    std::size_t k = n;
    std::vector<LatticeMap> transposes;
    if (exact)
        for (const auto& lvl : model.spec().block()) transposes.push_back(lvl.dilation.transpose());
    while (scale * model.tail_sum(k) > target_error) {
        ++k;
        const auto& digits = model.spec().level(k).digits;
        std::complex<double> factor;
        if (exact) {
            try {
                exact = exact->apply_inverse_transpose(transposes[(k - 1) % transposes.size()]);
            } catch (const std::overflow_error&) {
                approx = exact->to_double();
                exact.reset();
            }
        }
        if (exact) {
            factor = mask_eval_exact(digits, *exact);
        } else {
            approx = mat_vec(model.inverse_transpose(k), approx);
            factor = mask_eval(digits, approx);
        }
        out.value *= factor;
        if (out.value == 0.0) {
            out.levels_used = k - n;
            return out;
        }
    }
    out.levels_used = k - n;
    out.error_bound = scale * model.tail_sum(k) + 4.0 * std::numeric_limits<double>::epsilon() *
                                                       static_cast<double>(out.levels_used + 1);
    return out;
}

}  // namespace detail

/// mu_{>n}^(xi) for real xi, truncated so the certified remainder is within target_error.
inline TailEstimate tail_muhat(const MeasureModel& model, std::size_t n, const RealVector& xi,
                               double target_error = kDefaultTargetError) {
    if (xi.size() != model.dim()) throw PreconditionError("frequency dimension does not match the measure");
    RealVector eta = xi;
    for (std::size_t k = 1; k <= n; ++k) eta = detail::mat_vec(model.inverse_transpose(k), eta);
    return detail::finish_product(model, n, std::nullopt, std::move(eta), detail::norm2(xi), target_error);
}

/// mu_{>n}^(lambda) for integer lambda, with exact rational phase reduction.
inline TailEstimate tail_muhat(const MeasureModel& model, std::size_t n, const IntVector& lambda,
                               double target_error = kDefaultTargetError) {
    if (lambda.size() != model.dim()) throw PreconditionError("frequency dimension does not match the measure");
    std::optional<detail::RationalVector> exact = detail::RationalVector{lambda, 1};
    exact->reduce();
    RealVector approx(lambda.begin(), lambda.end());
    for (std::size_t k = 1; k <= n; ++k) {
        if (exact) {
            try {
                exact = exact->apply_inverse_transpose(model.spec().level(k).dilation.transpose());
                continue;
            } catch (const std::overflow_error&) {
                approx = exact->to_double();
                exact.reset();
            }
        }
        approx = detail::mat_vec(model.inverse_transpose(k), approx);
    }
    return detail::finish_product(model, n, std::move(exact), std::move(approx), euclidean_norm(lambda),
                                  target_error);
}

inline TailEstimate muhat(const MeasureModel& model, const RealVector& xi, double target_error = kDefaultTargetError) {
    return tail_muhat(model, 0, xi, target_error);
}

inline TailEstimate muhat(const MeasureModel& model, const IntVector& lambda,
                          double target_error = kDefaultTargetError) {
    return tail_muhat(model, 0, lambda, target_error);
}

struct DeltaReport {
    double delta_lower = 1.0;  // certified lower bound for the inf over levels <= N
    std::size_t argmin_level = 0;
    IntVector argmin_lambda;
    std::size_t levels_scanned = 0;
    bool certified = false;  // the full infimum over all levels is certified positive
    double certified_bound = 0.0;
    std::size_t certificate_depth = 0;
};

namespace detail {

/// Cylinder cover of the closure of {(R_n^T...R_1^T)^{-1} lambda : lambda in Lambda_n, n = r mod p}.
/// Such points are sum_t P_t l_{n-t} with P_t = (R_n^T)^{-1}...(R_{n-t}^T)^{-1}; fixing the
/// last `depth` digits pins the point to a ball around the partial sum c of radius
/// ||P_{depth-1}|| * Z, with Z bounding every such sum. Then
/// |mu_{>n}^(zeta)| >= |nu_r^(c)| - err - 2 pi sup|supp nu_r| * radius.
inline std::optional<double> cylinder_certificate(const MeasureModel& model, const Tower& tower, std::size_t depth,
                                                  double target_error) {
    const std::size_t p = tower.period();
    const auto d = static_cast<Eigen::Index>(tower.dim());
    double l_radius = 0.0;
    for (const auto& lvl : tower.block()) l_radius = std::max(l_radius, lvl.frequencies.max_norm());

    // Z <= l_radius * sup_e sum_t ||P_t^{(e)}||, geometric beyond one block
    double partial = 0.0;
    const std::size_t m = model.block_length();
    for (std::size_t e = 0; e < p; ++e) {
        const std::size_t end = e + 1 + p * (m + 1);
        Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(d, d);
        double s = 0.0;
        for (std::size_t t = 0; t < m; ++t) {
            prod = prod * model.inverse_transpose(end - t);
            s += MeasureModel::operator_norm(prod);
        }
        partial = std::max(partial, s);
    }
    const double z_bound = l_radius * partial * (1.0 + 1e-12) / (1.0 - model.contraction());

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < p; ++r) {
        const MeasureModel nu = model.shifted(r);
        const double lip = 2.0 * std::numbers::pi * nu.support_radius();
        // the last digit lives at level n with n = r mod p, i.e. block index (r + p - 1) % p
        const std::size_t last = r + p * (depth + 1);  // a level index congruent to r, large enough
        Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(d, d);
        for (std::size_t t = 0; t < depth; ++t) prod = prod * model.inverse_transpose(last - t);
        const double radius = MeasureModel::operator_norm(prod) * (1.0 + 1e-12) * z_bound;

        // enumerate centers: x <- (R_j^T)^{-1}(l_j + x) for j = last-depth+1 .. last
        std::vector<RealVector> centers{RealVector(static_cast<std::size_t>(d), 0.0)};
        for (std::size_t j = last - depth + 1; j <= last; ++j) {
            std::vector<RealVector> next;
            next.reserve(centers.size() * tower.level(j).frequencies.size());
            for (const auto& x : centers)
                for (const auto& l : tower.level(j).frequencies) {
                    RealVector y = x;
                    for (std::size_t i = 0; i < y.size(); ++i) y[i] += static_cast<double>(l[i]);
                    next.push_back(mat_vec(model.inverse_transpose(j), y));
                }
            centers = std::move(next);
        }
        for (const auto& c : centers) {
            const auto est = muhat(nu, c, target_error);
            const double margin = std::abs(est.value) - est.error_bound - lip * radius;
            if (margin <= 0.0) return std::nullopt;
            best = std::min(best, margin);
        }
    }
    return best * best;
}

inline std::size_t cylinder_count(const Tower& tower, std::size_t depth) {
    std::size_t count = 1;
    for (std::size_t r = 0; r < tower.period(); ++r) {
        std::size_t c = 1;
        for (std::size_t t = 0; t < depth; ++t) {
            c *= tower.level((r + t) % tower.period() + 1).frequencies.size();
            if (c > kMaxCertificateCenters) return c;
        }
        count = std::max(count, c);
    }
    return count;
}

}  // namespace detail

/// min over n <= N, lambda in Lambda_n of (|mu_{>n}^(lambda)| - err)^2, clamped at 0.
/// For periodic towers also attempts to certify inf over all n > 0 via a cylinder cover.
inline DeltaReport delta_lower_estimate(const MeasureModel& model, const Tower& tower, std::size_t max_level,
                                        double target_error = kDefaultTargetError, bool certify = true) {
    if (tower.dim() != model.dim()) throw PreconditionError("tower and measure dimensions differ");
    DeltaReport report;
    report.argmin_lambda = IntVector(tower.dim(), 0);
    detail::SpectrumBuilder builder(tower);
    while (builder.level < max_level) {
        builder.advance();
        const std::size_t n = builder.level;
        for (const auto& lambda : builder.spectrum) {
            const auto est = tail_muhat(model, n, lambda, target_error);
            const double lower = std::max(0.0, std::abs(est.value) - est.error_bound);
            const double value = lower * lower;
            if (value < report.delta_lower) {
                report.delta_lower = value;
                report.argmin_level = n;
                report.argmin_lambda = lambda;
            }
        }
    }
    report.levels_scanned = builder.level;

    if (certify && tower.mode() == TowerMode::Periodic) {
        for (std::size_t depth = 1; detail::cylinder_count(tower, depth) <= kMaxCertificateCenters; ++depth) {
            if (auto bound = detail::cylinder_certificate(model, tower, depth, target_error)) {
                report.certified = true;
                report.certified_bound = *bound;
                report.certificate_depth = depth;
                break;
            }
        }
    }
    return report;
}

inline DeltaReport delta_lower_estimate(const Tower& tower, std::size_t max_level,
                                        double target_error = kDefaultTargetError, bool certify = true) {
    return delta_lower_estimate(MeasureModel(tower.measure()), tower, max_level, target_error, certify);
}

/// |<f, e_lambda>_{L^2(mu)}|^2 = |(1/#B_n) mu_{>n}^(lambda) sum_b w_b exp(-2 pi i <R_n^{-1} b, lambda>)|^2.
inline std::vector<double> frame_energy(const MeasureModel& model, const StepFunction& f,
                                        const std::vector<IntVector>& test) {
    const auto [dilation, digits] = concatenate_digits(model.spec(), 0, f.level);
    if (f.coefficients.size() != digits.size())
        throw PreconditionError("step function does not match the level-" + std::to_string(f.level) + " digits");
    std::vector<double> out;
    out.reserve(test.size());
    for (const auto& lambda : test) {
        std::complex<double> sum = 0.0;
        for (std::size_t i = 0; i < digits.size(); ++i)
            sum += f.coefficients[i] * std::conj(unit_root(pairing_phase(dilation, digits[i], lambda)));
        const auto tail = tail_muhat(model, f.level, lambda);
        out.push_back(std::norm(tail.value * sum / static_cast<double>(digits.size())));
    }
    return out;
}

}  // namespace fractal_frames

#endif  // FRACTAL_FRAMES_FOURIER_HPP
