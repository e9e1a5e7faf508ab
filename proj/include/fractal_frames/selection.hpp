#ifndef FRACTAL_FRAMES_SELECTION_HPP
#define FRACTAL_FRAMES_SELECTION_HPP

// Verified search for large L making (R, B, L) a Riesz-sequence triple with
// bounds 1 +- eps, Riesz-sequence towers built from such levels, and the
// self-similar maximal-dimension schedule.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fractal_frames/beurling.hpp"
#include "fractal_frames/errors.hpp"
#include "fractal_frames/lattice.hpp"
#include "fractal_frames/towers.hpp"
#include "fractal_frames/triples.hpp"

namespace fractal_frames {

inline constexpr double kFeasibilitySlack = 1e-12;
/// Pools up to this size run greedy+local-swap from every feasible pair seed.
inline constexpr std::size_t kMultistartLimit = 96;

enum class SearchStrategy { Auto, Exhaustive, Greedy, GreedySwap };

inline std::string_view to_string(SearchStrategy s) {
    switch (s) {
        case SearchStrategy::Auto: return "auto";
        case SearchStrategy::Exhaustive: return "exhaustive";
        case SearchStrategy::Greedy: return "greedy";
        case SearchStrategy::GreedySwap: return "greedy+local-swap";
    }
    return "auto";
}

inline SearchStrategy strategy_from_string(std::string_view s) {
    for (auto v : {SearchStrategy::Auto, SearchStrategy::Exhaustive, SearchStrategy::Greedy, SearchStrategy::GreedySwap})
        if (to_string(v) == s) return v;
    throw PreconditionError("unknown strategy '" + std::string(s) + "'");
}

struct SelectionConfig {
    double epsilon = 0.1;
    SearchStrategy strategy = SearchStrategy::Auto;
    std::size_t exhaustive_threshold = 16;  // max pool size for exhaustive search
    double c0_surrogate = 1.0;              // reporting only
    std::size_t pool_budget = 4096;         // max |det R| the search will enumerate

    void validate() const {
        if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("epsilon must lie in (0,1)");
        if (exhaustive_threshold < 1) throw PreconditionError("exhaustive threshold must be >= 1");
        if (!(c0_surrogate > 0.0)) throw PreconditionError("C0 surrogate must be positive");
    }
};

struct SelectionResult {
    DigitSet frequencies;
    Bounds achieved;
    std::size_t target_cardinality_paper = 0;  // ceil(#B eps^4 / C0)
    std::size_t achieved_cardinality = 0;
    SearchStrategy strategy_used = SearchStrategy::Auto;
};

/// Candidate rows e_{R,lambda} for lambda in the complete residue system of R^T.
class RieszPool {
public:
    RieszPool(const LatticeMap& dilation, const DigitSet& digits)
        : candidates_(complete_residues(dilation.transpose()).representatives),
          rows_(ExponentialMatrix(dilation, digits, candidates_).matrix()) {}

    const DigitSet& candidates() const { return candidates_; }
    std::size_t size() const { return candidates_.size(); }
    std::size_t width() const { return static_cast<std::size_t>(rows_.cols()); }

    /// Extreme eigenvalues of the Gram matrix of the chosen rows.
    Bounds bounds(const std::vector<std::size_t>& idx) const {
        Eigen::MatrixXcd sub(static_cast<Eigen::Index>(idx.size()), rows_.cols());
        for (std::size_t i = 0; i < idx.size(); ++i) sub.row(static_cast<Eigen::Index>(i)) = rows_.row(static_cast<Eigen::Index>(idx[i]));
        const Eigen::MatrixXcd gram = sub * sub.adjoint();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
        return {solver.eigenvalues().minCoeff(), solver.eigenvalues().maxCoeff()};
    }

    static bool feasible(const Bounds& b, double eps) {
        return b.lower >= 1.0 - eps - kFeasibilitySlack && b.upper <= 1.0 + eps + kFeasibilitySlack;
    }

    DigitSet select(const std::vector<std::size_t>& idx) const {
        std::vector<IntVector> pts;
        for (auto i : idx) pts.push_back(candidates_[i]);
        return DigitSet(std::move(pts));
    }

private:
    DigitSet candidates_;
    Eigen::MatrixXcd rows_;
};

namespace detail {

struct Selection {
    std::vector<std::size_t> indices;
    Bounds bounds{1.0, 1.0};
};

/// Maximum cardinality, then largest lower bound, then lexicographically first.
/// Feasibility is hereditary (Cauchy interlacing), so only feasible prefixes are extended.
inline Selection exhaustive_search(const RieszPool& pool, double eps) {
    const std::size_t cap = std::min(pool.size(), pool.width());
    Selection best{{0}, {1.0, 1.0}};
    std::vector<std::size_t> current{0};
    auto visit = [&](auto&& self, std::size_t start, const Bounds& b) -> void {
        const bool better = current.size() > best.indices.size() ||
                            (current.size() == best.indices.size() && b.lower > best.bounds.lower + 1e-12);
        if (better) best = {current, b};
        if (current.size() == cap) return;
        for (std::size_t i = start; i < pool.size(); ++i) {
            if (current.size() + (pool.size() - i) < best.indices.size()) return;
            current.push_back(i);
            const Bounds nb = pool.bounds(current);
            if (RieszPool::feasible(nb, eps)) self(self, i + 1, nb);
            current.pop_back();
        }
    };
    visit(visit, 1, best.bounds);
    return best;
}

/// Adds, while possible, the candidate maximising the resulting lower bound
/// (ties resolved by canonical order).
inline Selection greedy_extend(const RieszPool& pool, double eps, Selection sel,
                               const std::vector<std::size_t>& excluded = {}) {
    const std::size_t cap = std::min(pool.size(), pool.width());
    std::vector<bool> used(pool.size(), false);
    for (auto i : sel.indices) used[i] = true;
    for (auto i : excluded) used[i] = true;
    while (sel.indices.size() < cap) {
        std::optional<std::size_t> pick;
        Bounds pick_bounds;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            auto trial = sel.indices;
            trial.push_back(i);
            const Bounds b = pool.bounds(trial);
            if (!RieszPool::feasible(b, eps)) continue;
            if (!pick || b.lower > pick_bounds.lower + 1e-12) {
                pick = i;
                pick_bounds = b;
            }
        }
        if (!pick) break;
        sel.indices.push_back(*pick);
        used[*pick] = true;
        sel.bounds = pick_bounds;
    }
    return sel;
}

/// Drop one element, then pairs, and greedily refill; accept when the cardinality grows.
inline Selection local_swap(const RieszPool& pool, double eps, Selection sel) {
    auto refill = [&](std::vector<std::size_t> drop) -> std::optional<Selection> {
        Selection reduced;
        for (auto i : sel.indices)
            if (std::find(drop.begin(), drop.end(), i) == drop.end()) reduced.indices.push_back(i);
        reduced.bounds = pool.bounds(reduced.indices);
        Selection refilled = greedy_extend(pool, eps, std::move(reduced), drop);
        if (refilled.indices.size() > sel.indices.size()) return refilled;
        return std::nullopt;
    };
    for (;;) {
        std::optional<Selection> better;
        for (std::size_t p = 1; p < sel.indices.size() && !better; ++p) better = refill({sel.indices[p]});
        for (std::size_t p = 1; p < sel.indices.size() && !better; ++p)
            for (std::size_t q = p + 1; q < sel.indices.size() && !better; ++q)
                better = refill({sel.indices[p], sel.indices[q]});
        if (!better) return sel;
        sel = std::move(*better);
    }
}

/// Greedy plus local swap from the seed {0}, and from every feasible {0, i}
/// when the pool is small enough; best by cardinality, lower bound, then lexicographic.
inline Selection multistart_swap(const RieszPool& pool, double eps) {
    Selection best = local_swap(pool, eps, greedy_extend(pool, eps, Selection{{0}, {1.0, 1.0}}));
    if (pool.size() > kMultistartLimit) return best;
    auto key = [](Selection s) {
        std::sort(s.indices.begin(), s.indices.end());
        return s.indices;
    };
    for (std::size_t i = 1; i < pool.size(); ++i) {
        Selection seed{{0, i}, pool.bounds({0, i})};
        if (!RieszPool::feasible(seed.bounds, eps)) continue;
        Selection cand = local_swap(pool, eps, greedy_extend(pool, eps, std::move(seed)));
        const bool better =
            cand.indices.size() > best.indices.size() ||
            (cand.indices.size() == best.indices.size() &&
             (cand.bounds.lower > best.bounds.lower + 1e-12 ||
              (std::abs(cand.bounds.lower - best.bounds.lower) <= 1e-12 && key(cand) < key(best))));
        if (better) best = std::move(cand);
    }
    return best;
}

inline Selection run_strategy(const RieszPool& pool, double eps, SearchStrategy strategy) {
    switch (strategy) {
        case SearchStrategy::Exhaustive: return exhaustive_search(pool, eps);
        case SearchStrategy::Greedy: return greedy_extend(pool, eps, Selection{{0}, {1.0, 1.0}});
        default: return multistart_swap(pool, eps);
    }
}

}  // namespace detail

/// Largest L found, within the complete residues of R^T and containing 0, with
/// Riesz bounds in [1 - eps, 1 + eps].
inline SelectionResult riesz_subset_search(const LatticeMap& dilation, const DigitSet& digits,
                                           const SelectionConfig& config) {
    config.validate();
    if (!distinct_residues(digits, dilation)) throw PreconditionError("digits are not distinct residues modulo R(Z^d)");
    if (static_cast<std::size_t>(dilation.abs_determinant()) > config.pool_budget)
        throw PreconditionError("candidate pool |det R| = " + std::to_string(dilation.abs_determinant()) +
                                " exceeds the search budget " + std::to_string(config.pool_budget));
    const RieszPool pool(dilation, digits);
    SearchStrategy strategy = config.strategy;
    if (strategy == SearchStrategy::Auto)
        strategy = pool.size() <= config.exhaustive_threshold ? SearchStrategy::Exhaustive : SearchStrategy::GreedySwap;
    if (strategy == SearchStrategy::Exhaustive && pool.size() > config.exhaustive_threshold)
        throw PreconditionError("pool of " + std::to_string(pool.size()) + " candidates exceeds the exhaustive threshold");

    auto sel = detail::run_strategy(pool, config.epsilon, strategy);
    std::sort(sel.indices.begin(), sel.indices.end());

    SelectionResult out;
    out.frequencies = pool.select(sel.indices);
    out.achieved = sel.bounds;
    out.achieved_cardinality = sel.indices.size();
    out.strategy_used = strategy;
    out.target_cardinality_paper = static_cast<std::size_t>(
        std::ceil(static_cast<double>(digits.size()) * std::pow(config.epsilon, 4) / config.c0_surrogate - 1e-12));
    return out;
}

struct PartitionResult {
    std::vector<DigitSet> classes;
    double class_bound = 0.0;  // C0 * D / eps^4 with D = |det R| / #B
};

/// First-fit covering of the complete residues of R^T by Riesz-sequence classes.
inline PartitionResult partition_into_riesz_classes(const LatticeMap& dilation, const DigitSet& digits, double epsilon,
                                                    double c0_surrogate = 1.0) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("epsilon must lie in (0,1)");
    const RieszPool pool(dilation, digits);
    std::vector<bool> assigned(pool.size(), false);
    PartitionResult out;
    for (std::size_t seed = 0; seed < pool.size(); ++seed) {
        if (assigned[seed]) continue;
        std::vector<std::size_t> cls{seed};
        assigned[seed] = true;
        for (std::size_t i = seed + 1; i < pool.size(); ++i) {
            if (assigned[i]) continue;
            cls.push_back(i);
            if (RieszPool::feasible(pool.bounds(cls), epsilon))
                assigned[i] = true;
            else
                cls.pop_back();
        }
        out.classes.push_back(pool.select(cls));
    }
    const double d = static_cast<double>(dilation.abs_determinant()) / static_cast<double>(digits.size());
    out.class_bound = c0_surrogate * d / std::pow(epsilon, 4);
    return out;
}

enum class EpsilonSchedule { Auto, InverseSquare, Explicit };

inline std::string_view to_string(EpsilonSchedule s) {
    switch (s) {
        case EpsilonSchedule::Auto: return "auto";
        case EpsilonSchedule::InverseSquare: return "inverse-square";
        case EpsilonSchedule::Explicit: return "explicit";
    }
    return "auto";
}

struct RieszTowerConfig {
    std::size_t groups = 3;
    EpsilonSchedule schedule = EpsilonSchedule::Auto;
    std::vector<double> explicit_epsilons;
    double c0_surrogate = 1.0;
    SearchStrategy strategy = SearchStrategy::Auto;
    std::size_t exhaustive_threshold = 16;
    std::size_t pool_budget = 4096;
};

struct RieszGroup {
    std::size_t index = 0;       // j
    std::size_t first_level = 0; // levels first_level+1 .. first_level+size
    std::size_t size = 0;        // n_j
    double epsilon = 0.0;        // scheduled (possibly relaxed) eps_j
    bool relaxed = false;
    Bounds achieved;
    double achieved_epsilon = 0.0;  // max(1 - C, D - 1)
    SearchStrategy strategy_used = SearchStrategy::Auto;
};

struct RieszTowerResult {
    Tower tower;
    std::vector<RieszGroup> groups;
    double epsilon_sum = 0.0;
};

inline double scheduled_epsilon(const RieszTowerConfig& config, std::size_t j, std::uint64_t digit_count) {
    switch (config.schedule) {
        case EpsilonSchedule::InverseSquare: return std::min(0.9, 1.0 / static_cast<double>(j * j));
        case EpsilonSchedule::Explicit:
            if (j > config.explicit_epsilons.size())
                throw PreconditionError("explicit epsilon schedule has no entry for group " + std::to_string(j));
            return config.explicit_epsilons[j - 1];
        case EpsilonSchedule::Auto: break;
    }
    // #B_j >= 2^j makes this geometric, hence summable
    return std::min(0.9, 1.1 * std::pow(config.c0_surrogate / static_cast<double>(digit_count), 0.25));
}

/// Regroups consecutive levels so group j has prod #B >= 2^j, searches L_j per
/// group and returns the finite Riesz-sequence tower of the first `groups` groups.
inline RieszTowerResult build_riesz_tower(const MeasureSpec& measure, const RieszTowerConfig& config) {
    if (config.groups == 0) throw PreconditionError("at least one group is required");
    const std::size_t levels_needed = config.groups * (config.groups + 1) / 2;
    for (std::size_t j = 1; j <= std::min(levels_needed, measure.mode() == TowerMode::Periodic ? measure.period() : levels_needed); ++j)
        if (measure.has_level(j) && measure.level(j).digits.size() < 2)
            throw PreconditionError("level " + std::to_string(j) + " has #B_j = 1; every level needs #B_j >= 2");

    std::vector<TowerLevel> levels;
    std::vector<RieszGroup> groups;
    std::size_t next = 0;
    double eps_sum = 0.0;
    for (std::size_t j = 1; j <= config.groups; ++j) {
        std::size_t size = 0;
        std::uint64_t count = 1;
        const std::uint64_t need = std::uint64_t{1} << std::min<std::size_t>(j, 62);
        while (count < need) {
            ++size;
            if (!measure.has_level(next + size))
                throw PreconditionError("measure has too few levels for group " + std::to_string(j));
            if (measure.level(next + size).digits.size() < 2)
                throw PreconditionError("level " + std::to_string(next + size) + " has #B_j = 1; every level needs #B_j >= 2");
            count *= measure.level(next + size).digits.size();
        }
        auto [dilation, digits] = concatenate_digits(measure, next, size);
        double eps = scheduled_epsilon(config, j, count);
        if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("epsilon must lie in (0,1)");

        RieszGroup group{j, next, size, eps, false, {}, 0.0, SearchStrategy::Auto};
        std::optional<SelectionResult> found;
        for (int attempt = 0; attempt < 8; ++attempt) {
            SelectionConfig sc{eps, config.strategy, config.exhaustive_threshold, config.c0_surrogate, config.pool_budget};
            auto res = riesz_subset_search(dilation, digits, sc);
            if (res.achieved_cardinality >= 2) {
                found = std::move(res);
                break;
            }
            eps = 1.0 - (1.0 - eps) / 2.0;
            group.relaxed = true;
        }
        if (!found)
            throw PreconditionError("group " + std::to_string(j) + " admits no Riesz-sequence L with #L >= 2 within budget");
        group.epsilon = eps;
        group.achieved = found->achieved;
        group.achieved_epsilon = std::max(0.0, std::max(1.0 - found->achieved.lower, found->achieved.upper - 1.0));
        group.strategy_used = found->strategy_used;

        const LatticeMap dual = dilation.transpose();
        std::vector<IntVector> reduced;
        for (const auto& l : found->frequencies) reduced.push_back(centered_residue(l, dual));
        levels.push_back({ExpandingMatrix(dilation.matrix()), digits, DigitSet(std::move(reduced))});
        groups.push_back(group);
        eps_sum += eps;
        next += size;
    }
    return {Tower(std::move(levels), TowerMode::Finite, TowerKind::Riesz), std::move(groups), eps_sum};
}

/// R = rho O with O orthogonal, checked as R^T R = rho^2 I.
struct SelfSimilarDescriptor {
    ExpandingMatrix dilation;
    DigitSet digits;
    double rho = 0.0;
    double c0_surrogate = 1.0;

    SelfSimilarDescriptor(ExpandingMatrix r, DigitSet b, double c0 = 1.0)
        : dilation(std::move(r)), digits(std::move(b)), c0_surrogate(c0) {
        const IntMatrix gram = dilation.matrix().transpose() * dilation.matrix();
        const std::size_t d = dilation.dim();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k)
                if (gram(i, k) != (i == k ? gram(0, 0) : 0))
                    throw PreconditionError("dilation is not a similarity (R^T R is not a multiple of I)");
        rho = std::sqrt(static_cast<double>(gram(0, 0)));
        if (std::abs(std::pow(rho, static_cast<double>(d)) - static_cast<double>(dilation.abs_determinant())) >
            1e-9 * static_cast<double>(dilation.abs_determinant()))
            throw PreconditionError("rho^d does not match |det R|");
        if (!distinct_residues(digits, dilation)) throw PreconditionError("digits are not distinct residues modulo R(Z^d)");
        if (!digits.contains_zero()) throw PreconditionError("digit set must contain 0");
    }

    /// log_rho(#B), the dimension ceiling.
    double dimension_ceiling() const { return std::log(static_cast<double>(digits.size())) / std::log(rho); }

    /// eps_k = min(0.9, (C0 / n_k^5)^{1/4}) with n_k = k.
    double epsilon(std::size_t k) const {
        return std::min(0.9, std::pow(c0_surrogate / std::pow(static_cast<double>(k), 5.0), 0.25));
    }

    /// eps_k = min(0.9, 1.1 (C0 / #B^k)^{1/4}), geometric in k.
    double auto_epsilon(std::size_t k) const {
        const double count = std::pow(static_cast<double>(digits.size()), static_cast<double>(k));
        return std::min(0.9, 1.1 * std::pow(c0_surrogate / count, 0.25));
    }
};

enum class ScheduleEpsilon { Auto, Polynomial };

struct ScheduleOptions {
    ScheduleEpsilon schedule = ScheduleEpsilon::Auto;
    SearchStrategy strategy = SearchStrategy::Auto;
    std::size_t pool_budget = 4096;
    std::size_t exhaustive_threshold = 16;
};

struct ScheduleGroup {
    std::size_t k = 0;
    std::size_t n_k = 0;
    double epsilon = 0.0;
    double target_cardinality = 0.0;  // (#B)^{n_k} / n_k^5
    std::size_t achieved_cardinality = 0;
    Bounds achieved;
    DigitSet frequencies;  // centered residues, inside Q_{n_k}
};

struct ScheduleResult {
    std::optional<Tower> tower;
    std::vector<ScheduleGroup> groups;
    bool partial = false;
    std::string partial_reason;
    std::vector<IntVector> spectrum;  // Lambda of the built groups
    std::vector<double> radii;        // h_k = sqrt(d) rho^{k(k+1)/2 + 1}
    BeurlingReport beurling;
};

inline std::vector<double> schedule_radii(std::size_t dim, double rho, std::size_t max_k) {
    std::vector<double> radii;
    for (std::size_t k = 1; k <= max_k; ++k)
        radii.push_back(std::sqrt(static_cast<double>(dim)) * std::pow(rho, static_cast<double>(k * (k + 1) / 2 + 1)));
    return radii;
}

inline std::vector<double> default_alpha_grid(double ceiling) {
    std::vector<double> grid;
    for (int i = 1; i <= 8; ++i) grid.push_back(ceiling * i / 4.0);
    return grid;
}

/// Groups of n_k = k levels of the self-similar measure, each searched for the
/// largest L with bounds 1 +- eps_k; density counts at the radii h_k.
inline ScheduleResult maximal_dimension_schedule(const SelfSimilarDescriptor& desc, std::size_t max_k,
                                                 const ScheduleOptions& options = {}) {
    ScheduleResult out;
    const std::size_t d = desc.dilation.dim();
    const MeasureSpec measure({{desc.dilation, desc.digits}}, TowerMode::Periodic);
    std::vector<TowerLevel> levels;
    std::size_t next = 0;
    for (std::size_t k = 1; k <= max_k; ++k) {
        auto [dilation, digits] = concatenate_digits(measure, next, k);
        if (static_cast<std::size_t>(dilation.abs_determinant()) > options.pool_budget) {
            out.partial = true;
            out.partial_reason = "pool (#det R)^" + std::to_string(k) + " = " + std::to_string(dilation.abs_determinant()) +
                                 " exceeds budget " + std::to_string(options.pool_budget);
            break;
        }
        ScheduleGroup g;
        g.k = k;
        g.n_k = k;
        g.epsilon = options.schedule == ScheduleEpsilon::Polynomial ? desc.epsilon(k) : desc.auto_epsilon(k);
        g.target_cardinality = std::pow(static_cast<double>(desc.digits.size()), static_cast<double>(k)) /
                               std::pow(static_cast<double>(k), 5.0);
        SelectionConfig sc{g.epsilon, options.strategy, options.exhaustive_threshold, desc.c0_surrogate,
                           options.pool_budget};
        const auto res = riesz_subset_search(dilation, digits, sc);
        const LatticeMap dual = dilation.transpose();
        std::vector<IntVector> reduced;
        for (const auto& l : res.frequencies) reduced.push_back(centered_residue(l, dual));
        g.frequencies = DigitSet(std::move(reduced));
        g.achieved_cardinality = res.achieved_cardinality;
        g.achieved = res.achieved;
        levels.push_back({ExpandingMatrix(dilation.matrix()), digits, g.frequencies});
        out.groups.push_back(std::move(g));
        next += k;
    }
    const double ceiling = desc.dimension_ceiling();
    if (levels.empty()) {
        out.spectrum = {IntVector(d, 0)};
        out.beurling.alpha_grid = default_alpha_grid(ceiling);
        return out;
    }
    out.tower.emplace(std::move(levels), TowerMode::Finite, TowerKind::Riesz);
    out.spectrum = enumerate_spectrum(*out.tower, out.groups.size());
    out.radii = schedule_radii(d, desc.rho, out.groups.size());
    out.beurling = beurling_report(out.spectrum, out.radii, default_alpha_grid(ceiling), ceiling);
    return out;
}

}  // namespace fractal_frames

#endif  // FRACTAL_FRAMES_SELECTION_HPP
