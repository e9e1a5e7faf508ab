#ifndef FRACTAL_FRAMES_PHASE_HPP
#define FRACTAL_FRAMES_PHASE_HPP

// Exact rational phases <M^{-1} b, lambda> mod 1 and their unit-circle values.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "fractal_frames/lattice.hpp"

namespace fractal_frames {

/// num/den in [0, 1), den > 0.
struct RationalPhase {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

/// exp(2 pi i num/den); quarter turns are returned exactly.
inline std::complex<double> unit_root(RationalPhase phase) {
    std::int64_t p = detail::floor_mod(phase.num, phase.den);
    const std::int64_t q = phase.den;
    if (p == 0) return {1.0, 0.0};
    const __int128 four_p = static_cast<__int128>(p) * 4;
    if (four_p % q == 0) {
        switch (static_cast<int>(four_p / q)) {
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    if (2 * static_cast<__int128>(p) > q) p -= q;
    const double angle = 2.0 * std::numbers::pi * (static_cast<double>(p) / static_cast<double>(q));
    return {std::cos(angle), std::sin(angle)};
}

/// <M^{-1} b, lambda> mod 1, given adj(M) b precomputed.
inline RationalPhase pairing_phase(const IntVector& adj_b, const IntVector& lambda, std::int64_t det) {
    const __int128 q = det < 0 ? -static_cast<__int128>(det) : det;
    __int128 acc = 0;
    for (std::size_t i = 0; i < adj_b.size(); ++i) {
        acc += (static_cast<__int128>(adj_b[i]) * lambda[i]) % q;
        acc %= q;
    }
    if (det < 0) acc = -acc;
    acc %= q;
    if (acc < 0) acc += q;
    return {static_cast<std::int64_t>(acc), static_cast<std::int64_t>(q)};
}

inline RationalPhase pairing_phase(const LatticeMap& m, const IntVector& b, const IntVector& lambda) {
    return pairing_phase(m.adjugate() * b, lambda, m.determinant());
}

}  // namespace fractal_frames

#endif  // FRACTAL_FRAMES_PHASE_HPP
