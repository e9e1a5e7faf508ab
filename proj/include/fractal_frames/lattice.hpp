#ifndef FRACTAL_FRAMES_LATTICE_HPP
#define FRACTAL_FRAMES_LATTICE_HPP

// Integer lattice arithmetic: checked integer matrices, Smith normal form,
// coset representatives of Z^d / M(Z^d), and digit sets.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fractal_frames/errors.hpp"

namespace fractal_frames {

using IntVector = std::vector<std::int64_t>;

namespace detail {

[[noreturn]] inline void overflow() {
    throw std::overflow_error("integer overflow in lattice arithmetic");
}

inline std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) overflow();
    return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) overflow();
    return r;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) overflow();
    return r;
}

inline std::int64_t narrow(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        overflow();
    return static_cast<std::int64_t>(v);
}

/// floor(a / b) for b != 0.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    __int128 q = static_cast<__int128>(a) / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return narrow(q);
}

/// a mod m in [0, m) for m > 0.
inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline std::string format_vector(const IntVector& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

}  // namespace detail

/// Dense row-major integer matrix with overflow-checked arithmetic.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static IntMatrix identity(std::size_t d) {
        IntMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = 1;
        return m;
    }

    static IntMatrix scalar(std::int64_t v) {
        IntMatrix m(1, 1);
        m(0, 0) = v;
        return m;
    }

    static IntMatrix from_rows(const std::vector<IntVector>& rows) {
        if (rows.empty()) throw PreconditionError("matrix must have at least one row");
        IntMatrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) throw PreconditionError("matrix rows have unequal lengths");
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<IntVector> to_rows() const {
        std::vector<IntVector> out(rows_, IntVector(cols_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
        return out;
    }

    Eigen::MatrixXd to_double() const {
        Eigen::MatrixXd m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = static_cast<double>((*this)(i, j));
        return m;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix dimension mismatch");
        IntMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) {
                __int128 acc = 0;
                for (std::size_t k = 0; k < a.cols_; ++k) acc += static_cast<__int128>(a(i, k)) * b(k, j);
                c(i, j) = detail::narrow(acc);
            }
        return c;
    }

    friend IntVector operator*(const IntMatrix& a, const IntVector& v) {
        if (a.cols_ != v.size()) throw std::invalid_argument("matrix/vector dimension mismatch");
        IntVector out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            __int128 acc = 0;
            for (std::size_t k = 0; k < a.cols_; ++k) acc += static_cast<__int128>(a(i, k)) * v[k];
            out[i] = detail::narrow(acc);
        }
        return out;
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int64_t> data_;
};

inline IntVector operator+(const IntVector& a, const IntVector& b) {
    IntVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = detail::add(a[i], b[i]);
    return out;
}

inline IntVector operator-(const IntVector& a, const IntVector& b) {
    IntVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = detail::sub(a[i], b[i]);
    return out;
}

inline double euclidean_norm(const IntVector& v) {
    double s = 0.0;
    for (auto x : v) s += static_cast<double>(x) * static_cast<double>(x);
    return std::sqrt(s);
}

/// Fraction-free Gaussian elimination (Bareiss); exact.
inline std::int64_t determinant(const IntMatrix& m) {
    if (!m.is_square()) throw PreconditionError("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
    int sign = 1;
    __int128 prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[k], a[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                __int128 x, y, z;
                if (__builtin_mul_overflow(a[i][j], a[k][k], &x) || __builtin_mul_overflow(a[i][k], a[k][j], &y) ||
                    __builtin_sub_overflow(x, y, &z))
                    detail::overflow();
                a[i][j] = z / prev;
            }
        prev = a[k][k];
    }
    return detail::narrow(sign * a[n - 1][n - 1]);
}

/// Classical adjugate: adj(M) M = det(M) I.
inline IntMatrix adjugate(const IntMatrix& m) {
    if (!m.is_square()) throw PreconditionError("adjugate of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 1) return IntMatrix::scalar(1);
    IntMatrix adj(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            IntMatrix minor(n - 1, n - 1);
            for (std::size_t r = 0, mr = 0; r < n; ++r) {
                if (r == j) continue;
                for (std::size_t c = 0, mc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor(mr, mc++) = m(r, c);
                }
                ++mr;
            }
            const std::int64_t d = determinant(minor);
            adj(i, j) = ((i + j) % 2 == 0) ? d : detail::sub(0, d);
        }
    return adj;
}

struct ExpansionCheck {
    bool expanding = false;
    double min_modulus = 0.0;
};

/// Eigenvalue moduli must exceed 1 by this margin.
inline constexpr double kExpansionMargin = 1e-9;

inline ExpansionCheck is_expanding(const IntMatrix& m) {
    if (!m.is_square() || m.rows() == 0) throw PreconditionError("expansion check needs a non-empty square matrix");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m.to_double(), false);
    const double min_modulus = solver.eigenvalues().cwiseAbs().minCoeff();
    return {min_modulus > 1.0 + kExpansionMargin, min_modulus};
}

/// left * M * right = diag(diagonal), with left unimodular and its inverse kept
/// alongside. Diagonal entries are positive and each divides the next.
struct SmithForm {
    IntMatrix left;
    IntMatrix left_inverse;
    IntVector diagonal;
};

inline SmithForm smith_normal_form(const IntMatrix& m) {
    using detail::add;
    using detail::mul;
    using detail::sub;
    if (!m.is_square()) throw PreconditionError("Smith form requested for a non-square matrix");
    const std::size_t n = m.rows();
    IntMatrix a = m;
    IntMatrix p = IntMatrix::identity(n);
    IntMatrix pinv = IntMatrix::identity(n);

    // row_t += q * row_s; the inverse update acts on columns of pinv.
    auto row_addmul = [&](std::size_t t, std::size_t s, std::int64_t q) {
        for (std::size_t j = 0; j < n; ++j) {
            a(t, j) = add(a(t, j), mul(q, a(s, j)));
            p(t, j) = add(p(t, j), mul(q, p(s, j)));
        }
        for (std::size_t i = 0; i < n; ++i) pinv(i, s) = sub(pinv(i, s), mul(q, pinv(i, t)));
    };
    auto row_swap = [&](std::size_t x, std::size_t y) {
        if (x == y) return;
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(x, j), a(y, j));
            std::swap(p(x, j), p(y, j));
        }
        for (std::size_t i = 0; i < n; ++i) std::swap(pinv(i, x), pinv(i, y));
    };
    auto col_addmul = [&](std::size_t t, std::size_t s, std::int64_t q) {
        for (std::size_t i = 0; i < n; ++i) a(i, t) = add(a(i, t), mul(q, a(i, s)));
    };
    auto col_swap = [&](std::size_t x, std::size_t y) {
        if (x == y) return;
        for (std::size_t i = 0; i < n; ++i) std::swap(a(i, x), a(i, y));
    };

    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            std::size_t pi = n, pj = n;
            std::int64_t best = 0;
            for (std::size_t i = t; i < n; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    const std::int64_t v = a(i, j) < 0 ? sub(0, a(i, j)) : a(i, j);
                    if (v != 0 && (best == 0 || v < best)) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi == n) throw PreconditionError("matrix is singular");
            row_swap(t, pi);
            col_swap(t, pj);

            bool dirty = false;
            for (std::size_t i = t + 1; i < n; ++i) {
                const std::int64_t q = detail::floor_div(a(i, t), a(t, t));
                if (q != 0) row_addmul(i, t, sub(0, q));
                dirty = dirty || a(i, t) != 0;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                const std::int64_t q = detail::floor_div(a(t, j), a(t, t));
                if (q != 0) col_addmul(j, t, sub(0, q));
                dirty = dirty || a(t, j) != 0;
            }
            if (dirty) continue;

            std::size_t bad_row = n;
            for (std::size_t i = t + 1; i < n && bad_row == n; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        bad_row = i;
                        break;
                    }
            if (bad_row == n) break;
            row_addmul(t, bad_row, 1);
        }
        if (a(t, t) < 0)
            for (std::size_t i = 0; i < n; ++i) a(i, t) = sub(0, a(i, t));
    }

    IntVector diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
    return {std::move(p), std::move(pinv), std::move(diag)};
}

/// Nonsingular square integer matrix with cached determinant, adjugate and
/// Smith form. Serves as the dilation of a triple; products of dilations
/// (which need not stay expanding) are LatticeMaps too.
class LatticeMap {
public:
    explicit LatticeMap(IntMatrix m) : matrix_(std::move(m)) {
        if (!matrix_.is_square() || matrix_.rows() == 0)
            throw PreconditionError("dilation matrix must be square and non-empty");
        det_ = fractal_frames::determinant(matrix_);
        if (det_ == 0) throw PreconditionError("dilation matrix is singular");
        adj_ = fractal_frames::adjugate(matrix_);
        smith_ = smith_normal_form(matrix_);
    }

    std::size_t dim() const { return matrix_.rows(); }
    const IntMatrix& matrix() const { return matrix_; }
    std::int64_t determinant() const { return det_; }
    std::int64_t abs_determinant() const { return det_ < 0 ? -det_ : det_; }
    const IntMatrix& adjugate() const { return adj_; }
    const SmithForm& smith() const { return smith_; }

    LatticeMap transpose() const { return LatticeMap(matrix_.transpose()); }

    /// M^{-1} in floating point.
    Eigen::MatrixXd inverse_double() const {
        return adj_.to_double() / static_cast<double>(det_);
    }

    friend LatticeMap operator*(const LatticeMap& a, const LatticeMap& b) {
        return LatticeMap(a.matrix_ * b.matrix_);
    }

    friend bool operator==(const LatticeMap& a, const LatticeMap& b) { return a.matrix_ == b.matrix_; }

private:
    IntMatrix matrix_;
    std::int64_t det_ = 0;
    IntMatrix adj_;
    SmithForm smith_;
};

/// Integer matrix whose eigenvalues all have modulus > 1 + kExpansionMargin.
class ExpandingMatrix : public LatticeMap {
public:
    explicit ExpandingMatrix(IntMatrix m) : LatticeMap(check(m)) {}
    explicit ExpandingMatrix(std::int64_t scalar) : ExpandingMatrix(IntMatrix::scalar(scalar)) {}

    ExpandingMatrix transpose() const { return ExpandingMatrix(matrix().transpose()); }

private:
    static IntMatrix check(const IntMatrix& m) {
        const auto result = is_expanding(m);
        if (!result.expanding) {
            std::ostringstream os;
            os << "matrix is not expanding (minimum eigenvalue modulus " << result.min_modulus << ")";
            throw PreconditionError(os.str());
        }
        return m;
    }
};

/// Finite list of distinct integer vectors of common dimension; stored order
/// is significant (it indexes matrix rows/columns).
class DigitSet {
public:
    DigitSet() = default;

    explicit DigitSet(std::vector<IntVector> points) : points_(std::move(points)) {
        if (points_.empty()) throw PreconditionError("digit set must be non-empty");
        std::set<IntVector> seen;
        for (const auto& p : points_) {
            if (p.size() != points_.front().size()) throw PreconditionError("digit set mixes dimensions");
            if (!seen.insert(p).second)
                throw PreconditionError("digit set has duplicate point " + detail::format_vector(p));
        }
    }

    static DigitSet integers(std::initializer_list<std::int64_t> values) {
        std::vector<IntVector> pts;
        for (auto v : values) pts.push_back({v});
        return DigitSet(std::move(pts));
    }

    std::size_t size() const { return points_.size(); }
    std::size_t dim() const { return points_.empty() ? 0 : points_.front().size(); }
    const std::vector<IntVector>& points() const { return points_; }
    const IntVector& operator[](std::size_t i) const { return points_[i]; }
    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }

    bool contains(const IntVector& v) const { return std::find(points_.begin(), points_.end(), v) != points_.end(); }
    bool contains_zero() const { return contains(IntVector(dim(), 0)); }

    double max_norm() const {
        double m = 0.0;
        for (const auto& p : points_) m = std::max(m, euclidean_norm(p));
        return m;
    }

    friend bool operator==(const DigitSet&, const DigitSet&) = default;

private:
    std::vector<IntVector> points_;
};

/// Canonical representative of v modulo M(Z^d): with left*M*right = diag(s),
/// reduce left*v componentwise into [0, s_i) and map back.
inline IntVector coset_residue(const IntVector& v, const LatticeMap& m) {
    if (v.size() != m.dim()) throw PreconditionError("vector dimension does not match matrix");
    const auto& snf = m.smith();
    IntVector w = snf.left * v;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = detail::floor_mod(w[i], snf.diagonal[i]);
    return snf.left_inverse * w;
}

/// Representative of v modulo M(Z^d) with M^{-1}x in [-1/2, 1/2)^d.
inline IntVector centered_residue(const IntVector& v, const LatticeMap& m) {
    if (v.size() != m.dim()) throw PreconditionError("vector dimension does not match matrix");
    IntVector num = m.adjugate() * v;
    std::int64_t den = m.determinant();
    if (den < 0) {
        den = -den;
        for (auto& x : num) x = -x;
    }
    IntVector k(num.size());
    for (std::size_t i = 0; i < num.size(); ++i)
        k[i] = detail::floor_div(detail::add(detail::mul(2, num[i]), den), detail::mul(2, den));
    return v - m.matrix() * k;
}

/// True iff u - v lies in M(Z^d), tested via adj(M)(u - v) = 0 mod det M.
inline bool congruent(const IntVector& u, const IntVector& v, const LatticeMap& m) {
    const IntVector diff = m.adjugate() * (u - v);
    const std::int64_t det = m.abs_determinant();
    return std::all_of(diff.begin(), diff.end(), [det](std::int64_t x) { return x % det == 0; });
}

inline bool distinct_residues(const DigitSet& digits, const LatticeMap& m) {
    std::set<IntVector> seen;
    for (const auto& b : digits)
        if (!seen.insert(coset_residue(b, m)).second) return false;
    return true;
}

/// One representative per coset of Z^d / M(Z^d).
struct ResidueSystem {
    IntMatrix matrix;
    DigitSet representatives;
};

/// Representatives enumerated as left_inverse * w over the box prod [0, s_i),
/// first coordinate most significant; the zero vector comes first.
inline ResidueSystem complete_residues(const LatticeMap& m) {
    const auto& snf = m.smith();
    const std::size_t n = m.dim();
    const std::int64_t count = m.abs_determinant();
    std::vector<IntVector> reps;
    reps.reserve(static_cast<std::size_t>(count));
    IntVector w(n, 0);
    for (std::int64_t k = 0; k < count; ++k) {
        reps.push_back(snf.left_inverse * w);
        for (std::size_t i = n; i-- > 0;) {
            if (++w[i] < snf.diagonal[i]) break;
            w[i] = 0;
        }
    }
    return {m.matrix(), DigitSet(std::move(reps))};
}

}  // namespace fractal_frames

#endif  // FRACTAL_FRAMES_LATTICE_HPP
