#ifndef FRACTAL_FRAMES_IO_HPP
#define FRACTAL_FRAMES_IO_HPP

// JSON encodings. Matrices are nested integer arrays (a bare integer is read
// as a 1x1 matrix), point sets are arrays of integer vectors (bare integers
// are read as 1-d points), complex numbers are [re, im] pairs.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fractal_frames/beurling.hpp"
#include "fractal_frames/errors.hpp"
#include "fractal_frames/fourier.hpp"
#include "fractal_frames/lattice.hpp"
#include "fractal_frames/selection.hpp"
#include "fractal_frames/towers.hpp"
#include "fractal_frames/triples.hpp"

namespace fractal_frames {

using json = nlohmann::json;

namespace io {

inline IntMatrix matrix_from_json(const json& j) {
    if (j.is_number_integer()) return IntMatrix::scalar(j.get<std::int64_t>());
    if (!j.is_array()) throw PreconditionError("matrix must be an integer or an array of rows");
    std::vector<IntVector> rows;
    for (const auto& row : j) {
        if (row.is_number_integer())
            rows.push_back({row.get<std::int64_t>()});
        else
            rows.push_back(row.get<IntVector>());
    }
    if (rows.size() == 1 && rows.front().size() == 1) return IntMatrix::scalar(rows.front().front());
    return IntMatrix::from_rows(rows);
}

inline json matrix_to_json(const IntMatrix& m) { return m.to_rows(); }

inline std::vector<IntVector> points_from_json(const json& j) {
    if (!j.is_array()) throw PreconditionError("point set must be an array");
    std::vector<IntVector> pts;
    for (const auto& p : j) {
        if (p.is_number_integer())
            pts.push_back({p.get<std::int64_t>()});
        else if (p.is_array())
            pts.push_back(p.get<IntVector>());
        else
            throw PreconditionError("points must be integers or integer arrays");
    }
    return pts;
}

inline DigitSet digits_from_json(const json& j) { return DigitSet(points_from_json(j)); }
inline json digits_to_json(const DigitSet& s) { return s.points(); }

inline json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }
inline std::complex<double> complex_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline json bounds_to_json(const std::optional<Bounds>& b) {
    if (!b) return nullptr;
    return json::array({b->lower, b->upper});
}

inline std::optional<Bounds> bounds_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return Bounds{j.at(0).get<double>(), j.at(1).get<double>()};
}

inline TowerMode mode_from_string(const std::string& s) {
    if (s == "finite") return TowerMode::Finite;
    if (s == "periodic") return TowerMode::Periodic;
    throw PreconditionError("mode must be \"finite\" or \"periodic\"");
}

inline TowerKind kind_from_string(const std::string& s) {
    if (s == "frame") return TowerKind::Frame;
    if (s == "riesz") return TowerKind::Riesz;
    throw PreconditionError("kind must be \"frame\" or \"riesz\"");
}

}  // namespace io

}  // namespace fractal_frames

namespace nlohmann {

template <>
struct adl_serializer<fractal_frames::TowerLevel> {
    static fractal_frames::TowerLevel from_json(const json& j) {
        using namespace fractal_frames;
        return {ExpandingMatrix(io::matrix_from_json(j.at("R"))), io::digits_from_json(j.at("B")),
                io::digits_from_json(j.at("L"))};
    }
    static void to_json(json& j, const fractal_frames::TowerLevel& lvl) {
        using namespace fractal_frames;
        j = json{{"R", io::matrix_to_json(lvl.dilation.matrix())},
                 {"B", io::digits_to_json(lvl.digits)},
                 {"L", io::digits_to_json(lvl.frequencies)}};
    }
};

template <>
struct adl_serializer<fractal_frames::Tower> {
    static fractal_frames::Tower from_json(const json& j) {
        using namespace fractal_frames;
        std::vector<TowerLevel> levels;
        for (const auto& lvl : j.at("levels")) levels.push_back(lvl.get<TowerLevel>());
        return Tower(std::move(levels), io::mode_from_string(j.value("mode", std::string("finite"))),
                     io::kind_from_string(j.value("kind", std::string("frame"))));
    }
    static void to_json(json& j, const fractal_frames::Tower& t) {
        using namespace fractal_frames;
        j = json{{"levels", t.block()},
                 {"mode", std::string(to_string(t.mode()))},
                 {"kind", std::string(to_string(t.kind()))}};
    }
};

template <>
struct adl_serializer<fractal_frames::DigitLevel> {
    static fractal_frames::DigitLevel from_json(const json& j) {
        using namespace fractal_frames;
        return {ExpandingMatrix(io::matrix_from_json(j.at("R"))), io::digits_from_json(j.at("B"))};
    }
    static void to_json(json& j, const fractal_frames::DigitLevel& lvl) {
        using namespace fractal_frames;
        j = json{{"R", io::matrix_to_json(lvl.dilation.matrix())}, {"B", io::digits_to_json(lvl.digits)}};
    }
};

template <>
struct adl_serializer<fractal_frames::MeasureSpec> {
    static fractal_frames::MeasureSpec from_json(const json& j) {
        using namespace fractal_frames;
        std::vector<DigitLevel> levels;
        for (const auto& lvl : j.at("levels")) levels.push_back(lvl.get<DigitLevel>());
        return MeasureSpec(std::move(levels), io::mode_from_string(j.value("mode", std::string("periodic"))));
    }
    static void to_json(json& j, const fractal_frames::MeasureSpec& m) {
        using namespace fractal_frames;
        j = json{{"levels", m.block()}, {"mode", std::string(to_string(m.mode()))}};
    }
};

}  // namespace nlohmann

namespace fractal_frames {

inline void to_json(json& j, const Bounds& b) { j = json::array({b.lower, b.upper}); }
inline void from_json(const json& j, Bounds& b) { b = {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline void to_json(json& j, const TripleReport& r) {
    j = json{{"classification", std::string(to_string(r.classification))},
             {"frame_bounds", io::bounds_to_json(r.frame_bounds)},
             {"riesz_bounds", io::bounds_to_json(r.riesz_bounds)},
             {"rank", r.rank},
             {"singular_values", r.singular_values}};
}

inline void from_json(const json& j, TripleReport& r) {
    r.classification = triple_class_from_string(j.at("classification").get<std::string>());
    r.frame_bounds = io::bounds_from_json(j.at("frame_bounds"));
    r.riesz_bounds = io::bounds_from_json(j.at("riesz_bounds"));
    r.rank = j.at("rank").get<std::size_t>();
    r.singular_values = j.at("singular_values").get<std::vector<double>>();
}

inline void to_json(json& j, const StepFunction& f) {
    json w = json::array();
    for (const auto& z : f.coefficients) w.push_back(io::complex_to_json(z));
    j = json{{"level", f.level}, {"coefficients", w}, {"norm_sq", f.norm_sq()}};
}

inline void from_json(const json& j, StepFunction& f) {
    f.level = j.at("level").get<std::size_t>();
    f.coefficients.clear();
    for (const auto& z : j.at("coefficients")) f.coefficients.push_back(io::complex_from_json(z));
}

inline void to_json(json& j, const TailEstimate& t) {
    j = json{{"value", io::complex_to_json(t.value)}, {"error_bound", t.error_bound}, {"levels_used", t.levels_used}};
}

inline void from_json(const json& j, TailEstimate& t) {
    t.value = io::complex_from_json(j.at("value"));
    t.error_bound = j.at("error_bound").get<double>();
    t.levels_used = j.at("levels_used").get<std::size_t>();
}

inline void to_json(json& j, const DeltaReport& r) {
    j = json{{"delta_lower", r.delta_lower},
             {"argmin_level", r.argmin_level},
             {"argmin_lambda", r.argmin_lambda},
             {"levels_scanned", r.levels_scanned},
             {"certified", r.certified},
             {"certified_bound", r.certified_bound},
             {"certificate_depth", r.certificate_depth}};
}

inline void from_json(const json& j, DeltaReport& r) {
    r.delta_lower = j.at("delta_lower").get<double>();
    r.argmin_level = j.at("argmin_level").get<std::size_t>();
    r.argmin_lambda = j.at("argmin_lambda").get<IntVector>();
    r.levels_scanned = j.at("levels_scanned").get<std::size_t>();
    r.certified = j.at("certified").get<bool>();
    r.certified_bound = j.at("certified_bound").get<double>();
    r.certificate_depth = j.at("certificate_depth").get<std::size_t>();
}

inline void to_json(json& j, const LevelCardinality& c) {
    j = json{{"level", c.level}, {"digits", c.digits}, {"frequencies", c.frequencies}};
}

inline void from_json(const json& j, LevelCardinality& c) {
    c.level = j.at("level").get<std::size_t>();
    c.digits = j.at("digits").get<std::size_t>();
    c.frequencies = j.at("frequencies").get<std::size_t>();
}

inline void to_json(json& j, const RemovableFamily& f) {
    j = json{{"level", f.level},
             {"removed_frequency", f.removed_frequency},
             {"offset", f.offset},
             {"remaining_bounds", f.remaining_bounds},
             {"description", f.description}};
}

inline void from_json(const json& j, RemovableFamily& f) {
    f.level = j.at("level").get<std::size_t>();
    f.removed_frequency = j.at("removed_frequency").get<IntVector>();
    f.offset = j.at("offset").get<IntVector>();
    f.remaining_bounds = j.at("remaining_bounds").get<Bounds>();
    f.description = j.at("description").get<std::string>();
}

inline void to_json(json& j, const ExactnessVerdict& v) {
    j = json{{"verdict", std::string(to_string(v.verdict))},
             {"reason", v.reason},
             {"compared", v.compared},
             {"witness", v.witness ? json(*v.witness) : json(nullptr)},
             {"removable_set", v.removable ? json(*v.removable) : json(nullptr)}};
}

inline void from_json(const json& j, ExactnessVerdict& v) {
    v.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    v.reason = j.at("reason").get<std::string>();
    v.compared = j.at("compared").get<std::vector<LevelCardinality>>();
    v.witness.reset();
    v.removable.reset();
    if (!j.at("witness").is_null()) v.witness = j.at("witness").get<StepFunction>();
    if (!j.at("removable_set").is_null()) v.removable = j.at("removable_set").get<RemovableFamily>();
}

inline void to_json(json& j, const ExactnessWitness& w) {
    j = json{{"function", w.function},
             {"lambda0", w.lambda0},
             {"orthogonality_residual", w.orthogonality_residual},
             {"peak_energy", w.peak_energy},
             {"lower_bound", w.lower_bound}};
}

inline void from_json(const json& j, ExactnessWitness& w) {
    w.function = j.at("function").get<StepFunction>();
    w.lambda0 = j.at("lambda0").get<IntVector>();
    w.orthogonality_residual = j.at("orthogonality_residual").get<double>();
    w.peak_energy = j.at("peak_energy").get<double>();
    w.lower_bound = j.at("lower_bound").get<double>();
}

inline void to_json(json& j, const IncompletenessWitness& w) {
    j = json{{"extension_level", w.extension_level},
             {"extension_digit", w.extension_digit},
             {"extension_frequency", w.extension_frequency},
             {"function", w.function},
             {"interpolation_residual", w.interpolation_residual},
             {"norm", w.norm},
             {"norm_bound", w.norm_bound},
             {"sharp_norm_bound", w.sharp_norm_bound}};
}

inline void from_json(const json& j, IncompletenessWitness& w) {
    w.extension_level = j.at("extension_level").get<std::size_t>();
    w.extension_digit = j.at("extension_digit").get<IntVector>();
    w.extension_frequency = j.at("extension_frequency").get<IntVector>();
    w.function = j.at("function").get<StepFunction>();
    w.interpolation_residual = j.at("interpolation_residual").get<double>();
    w.norm = j.at("norm").get<double>();
    w.norm_bound = j.at("norm_bound").get<double>();
    w.sharp_norm_bound = j.at("sharp_norm_bound").get<double>();
}

inline void to_json(json& j, const FiniteFrameCheck& c) {
    j = json{{"lower", c.lower}, {"upper", c.upper}, {"rank", c.rank}, {"full_rank", c.full_rank}};
}

inline void from_json(const json& j, FiniteFrameCheck& c) {
    c.lower = j.at("lower").get<double>();
    c.upper = j.at("upper").get<double>();
    c.rank = j.at("rank").get<std::size_t>();
    c.full_rank = j.at("full_rank").get<bool>();
}

inline void to_json(json& j, const SelectionResult& r) {
    j = json{{"L", io::digits_to_json(r.frequencies)},
             {"achieved_bounds", r.achieved},
             {"target_cardinality_paper", r.target_cardinality_paper},
             {"achieved_cardinality", r.achieved_cardinality},
             {"strategy_used", std::string(to_string(r.strategy_used))}};
}

inline void from_json(const json& j, SelectionResult& r) {
    r.frequencies = io::digits_from_json(j.at("L"));
    r.achieved = j.at("achieved_bounds").get<Bounds>();
    r.target_cardinality_paper = j.at("target_cardinality_paper").get<std::size_t>();
    r.achieved_cardinality = j.at("achieved_cardinality").get<std::size_t>();
    r.strategy_used = strategy_from_string(j.at("strategy_used").get<std::string>());
}

inline void to_json(json& j, const PartitionResult& p) {
    json classes = json::array();
    for (const auto& c : p.classes) classes.push_back(io::digits_to_json(c));
    j = json{{"classes", classes}, {"r", p.classes.size()}, {"class_bound", p.class_bound}};
}

inline void from_json(const json& j, PartitionResult& p) {
    p.classes.clear();
    for (const auto& c : j.at("classes")) p.classes.push_back(io::digits_from_json(c));
    p.class_bound = j.at("class_bound").get<double>();
}

inline void to_json(json& j, const RadiusCount& rc) { j = json{{"h", rc.radius}, {"count", rc.count}}; }
inline void from_json(const json& j, RadiusCount& rc) {
    rc.radius = j.at("h").get<double>();
    rc.count = j.at("count").get<std::size_t>();
}

inline void to_json(json& j, const DimensionEstimate& e) {
    j = json{{"slope", e.slope},
             {"intercept", e.intercept},
             {"residual", e.residual},
             {"ceiling", e.ceiling ? json(*e.ceiling) : json(nullptr)},
             {"exceeds_ceiling", e.exceeds_ceiling}};
}

inline void from_json(const json& j, DimensionEstimate& e) {
    e.slope = j.at("slope").get<double>();
    e.intercept = j.at("intercept").get<double>();
    e.residual = j.at("residual").get<double>();
    e.ceiling.reset();
    if (!j.at("ceiling").is_null()) e.ceiling = j.at("ceiling").get<double>();
    e.exceeds_ceiling = j.at("exceeds_ceiling").get<bool>();
}

inline void to_json(json& j, const BeurlingReport& r) {
    j = json{{"alpha_grid", r.alpha_grid},
             {"densities", r.densities},
             {"counts", r.counts},
             {"dimension", r.dimension ? json(*r.dimension) : json(nullptr)},
             {"dimension_value", r.dimension_value}};
}

inline void from_json(const json& j, BeurlingReport& r) {
    r.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
    r.densities = j.at("densities").get<std::vector<double>>();
    r.counts = j.at("counts").get<std::vector<RadiusCount>>();
    r.dimension.reset();
    if (!j.at("dimension").is_null()) r.dimension = j.at("dimension").get<DimensionEstimate>();
    r.dimension_value = j.at("dimension_value").get<double>();
}

inline void to_json(json& j, const RieszGroup& g) {
    j = json{{"index", g.index},
             {"first_level", g.first_level},
             {"size", g.size},
             {"epsilon", g.epsilon},
             {"relaxed", g.relaxed},
             {"achieved_bounds", g.achieved},
             {"achieved_epsilon", g.achieved_epsilon},
             {"strategy_used", std::string(to_string(g.strategy_used))}};
}

inline void from_json(const json& j, RieszGroup& g) {
    g.index = j.at("index").get<std::size_t>();
    g.first_level = j.at("first_level").get<std::size_t>();
    g.size = j.at("size").get<std::size_t>();
    g.epsilon = j.at("epsilon").get<double>();
    g.relaxed = j.at("relaxed").get<bool>();
    g.achieved = j.at("achieved_bounds").get<Bounds>();
    g.achieved_epsilon = j.at("achieved_epsilon").get<double>();
    g.strategy_used = strategy_from_string(j.at("strategy_used").get<std::string>());
}

inline void to_json(json& j, const ScheduleGroup& g) {
    j = json{{"k", g.k},
             {"n_k", g.n_k},
             {"epsilon", g.epsilon},
             {"target_cardinality", g.target_cardinality},
             {"achieved_cardinality", g.achieved_cardinality},
             {"achieved_bounds", g.achieved},
             {"L", io::digits_to_json(g.frequencies)}};
}

inline void from_json(const json& j, ScheduleGroup& g) {
    g.k = j.at("k").get<std::size_t>();
    g.n_k = j.at("n_k").get<std::size_t>();
    g.epsilon = j.at("epsilon").get<double>();
    g.target_cardinality = j.at("target_cardinality").get<double>();
    g.achieved_cardinality = j.at("achieved_cardinality").get<std::size_t>();
    g.achieved = j.at("achieved_bounds").get<Bounds>();
    g.frequencies = io::digits_from_json(j.at("L"));
}

}  // namespace fractal_frames


#endif  // FRACTAL_FRAMES_IO_HPP
