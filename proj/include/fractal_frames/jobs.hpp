#ifndef FRACTAL_FRAMES_JOBS_HPP
#define FRACTAL_FRAMES_JOBS_HPP

// Batch jobs: a JobSpec names a command, its input and options; run() writes
// JSON/CSV artifacts plus manifest.json into the output directory.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fractal_frames/beurling.hpp"
#include "fractal_frames/errors.hpp"
#include "fractal_frames/fourier.hpp"
#include "fractal_frames/io.hpp"
#include "fractal_frames/selection.hpp"
#include "fractal_frames/towers.hpp"
#include "fractal_frames/triples.hpp"

namespace fractal_frames {

inline constexpr const char* kToolVersion = "0.1.0";

inline const std::vector<std::string>& job_commands() {
    static const std::vector<std::string> commands{"check-triple", "tower-report", "spectrum",   "tail-delta",
                                                   "search-riesz", "schedule-57",  "beurling",   "witness",
                                                   "muhat",        "riesz-tower"};
    return commands;
}

struct JobSpec {
    std::string command;
    std::optional<std::string> input_path;
    std::optional<json> inline_input;
    std::string output_dir = "out";
    std::optional<std::int64_t> levels;
    std::optional<double> radius;
    std::optional<double> epsilon;
    std::vector<double> alpha_grid;
    std::vector<double> radii;
    double target_error = kDefaultTargetError;
    std::uint64_t seed = 0;  // reserved
    std::string strategy = "auto";
    std::int64_t exhaustive_threshold = 16;
    double c0 = 1.0;
    std::optional<std::int64_t> max_k;
    std::optional<std::int64_t> groups;
    std::string schedule = "auto";
    std::optional<IntVector> lambda0;
    std::vector<std::vector<double>> xi;
    bool partition = false;
};

inline void to_json(json& j, const JobSpec& s) {
    j = json{{"command", s.command}, {"output_dir", s.output_dir}, {"target_error", s.target_error},
             {"seed", s.seed},       {"strategy", s.strategy},     {"exhaustive_threshold", s.exhaustive_threshold},
             {"c0", s.c0},           {"schedule", s.schedule},     {"partition", s.partition}};
    if (s.input_path) j["input"] = *s.input_path;
    if (s.inline_input) j["inline"] = *s.inline_input;
    if (s.levels) j["levels"] = *s.levels;
    if (s.radius) j["radius"] = *s.radius;
    if (s.epsilon) j["epsilon"] = *s.epsilon;
    if (!s.alpha_grid.empty()) j["alpha_grid"] = s.alpha_grid;
    if (!s.radii.empty()) j["radii"] = s.radii;
    if (s.max_k) j["max_k"] = *s.max_k;
    if (s.groups) j["groups"] = *s.groups;
    if (s.lambda0) j["lambda0"] = *s.lambda0;
    if (!s.xi.empty()) j["xi"] = s.xi;
}

/// Unknown fields are rejected.
inline void from_json(const json& j, JobSpec& s) {
    static const std::set<std::string> known{"command", "input",  "inline", "output_dir", "levels",  "radius",
                                             "epsilon", "alpha_grid", "radii", "target_error", "seed", "strategy",
                                             "exhaustive_threshold", "c0", "max_k", "groups", "schedule", "lambda0",
                                             "xi", "partition"};
    if (!j.is_object()) throw PreconditionError("job spec must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw PreconditionError("unknown job field '" + key + "'");
    s = JobSpec{};
    s.command = j.at("command").get<std::string>();
    if (j.contains("input")) s.input_path = j["input"].get<std::string>();
    if (j.contains("inline")) s.inline_input = j["inline"];
    s.output_dir = j.value("output_dir", s.output_dir);
    if (j.contains("levels")) s.levels = j["levels"].get<std::int64_t>();
    if (j.contains("radius")) s.radius = j["radius"].get<double>();
    if (j.contains("epsilon")) s.epsilon = j["epsilon"].get<double>();
    s.alpha_grid = j.value("alpha_grid", s.alpha_grid);
    s.radii = j.value("radii", s.radii);
    s.target_error = j.value("target_error", s.target_error);
    s.seed = j.value("seed", s.seed);
    s.strategy = j.value("strategy", s.strategy);
    s.exhaustive_threshold = j.value("exhaustive_threshold", s.exhaustive_threshold);
    s.c0 = j.value("c0", s.c0);
    if (j.contains("max_k")) s.max_k = j["max_k"].get<std::int64_t>();
    if (j.contains("groups")) s.groups = j["groups"].get<std::int64_t>();
    s.schedule = j.value("schedule", s.schedule);
    if (j.contains("lambda0")) s.lambda0 = io::points_from_json(json::array({j["lambda0"]})).front();
    if (j.contains("xi")) {
        for (const auto& x : j["xi"]) {
            if (x.is_number())
                s.xi.push_back({x.get<double>()});
            else
                s.xi.push_back(x.get<std::vector<double>>());
        }
    }
    s.partition = j.value("partition", s.partition);
}

namespace detail {

inline std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::optional<json> read_json_file(const std::string& path, std::string* error) {
    std::ifstream in(path);
    if (!in) {
        if (error) *error = "cannot read input file '" + path + "'";
        return std::nullopt;
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        if (error) *error = std::string("malformed JSON in '") + path + "': " + e.what();
        return std::nullopt;
    }
}

inline void check_points(const json& j, const std::string& where, std::vector<std::string>& diags) {
    if (!j.is_array()) return;
    std::set<IntVector> seen;
    for (const auto& p : j) {
        IntVector v;
        if (p.is_number_integer())
            v = {p.get<std::int64_t>()};
        else if (p.is_array() && std::all_of(p.begin(), p.end(), [](const json& x) { return x.is_number_integer(); }))
            v = p.get<IntVector>();
        else
            continue;
        if (!seen.insert(v).second) diags.push_back(where + " has duplicate point " + format_vector(v));
    }
}

inline void check_input_points(const json& input, std::vector<std::string>& diags) {
    if (!input.is_object()) return;
    for (const char* key : {"B", "L", "points"})
        if (input.contains(key)) check_points(input[key], key, diags);
    if (input.contains("levels") && input["levels"].is_array()) {
        std::size_t i = 0;
        for (const auto& lvl : input["levels"]) {
            for (const char* key : {"B", "L"})
                if (lvl.is_object() && lvl.contains(key))
                    check_points(lvl[key], "levels[" + std::to_string(i) + "]." + key, diags);
            ++i;
        }
    }
}

}  // namespace detail

/// Diagnostics for an invalid spec; empty iff valid. Reads the input file but
/// writes nothing.
inline std::vector<std::string> validate(const JobSpec& spec) {
    std::vector<std::string> diags;
    const auto& cmds = job_commands();
    if (std::find(cmds.begin(), cmds.end(), spec.command) == cmds.end())
        diags.push_back("unknown command '" + spec.command + "'");
    if (spec.input_path && spec.inline_input) diags.push_back("give either an input path or inline input, not both");
    if (!spec.input_path && !spec.inline_input) diags.push_back("an input path or inline input is required");
    if (spec.levels && *spec.levels < 0) diags.push_back("levels must be ≥ 0");
    if (spec.radius && !(*spec.radius >= 0.0)) diags.push_back("radius must be ≥ 0");
    if (spec.epsilon && !(*spec.epsilon > 0.0 && *spec.epsilon < 1.0)) diags.push_back("epsilon must lie in (0,1)");
    if (!(spec.target_error > 0.0)) diags.push_back("target_error must be positive");
    if (spec.exhaustive_threshold < 1) diags.push_back("exhaustive_threshold must be ≥ 1");
    if (!(spec.c0 > 0.0)) diags.push_back("c0 must be positive");
    if (spec.max_k && *spec.max_k < 0) diags.push_back("max_k must be ≥ 0");
    if (spec.groups && *spec.groups < 1) diags.push_back("groups must be ≥ 1");
    for (std::size_t i = 0; i < spec.radii.size(); ++i)
        if (!(spec.radii[i] > 0.0) || (i > 0 && !(spec.radii[i] > spec.radii[i - 1]))) {
            diags.push_back("radii must be positive and increasing");
            break;
        }
    try {
        strategy_from_string(spec.strategy);
    } catch (const PreconditionError&) {
        diags.push_back("unknown strategy '" + spec.strategy + "'");
    }
    if (spec.schedule != "auto" && spec.schedule != "inverse-square" && spec.schedule != "polynomial")
        diags.push_back("schedule must be auto, inverse-square or polynomial");
    if (spec.command == "muhat" && spec.xi.empty()) diags.push_back("muhat needs at least one xi");
    if (spec.command == "witness" && !spec.levels) diags.push_back("witness needs levels (the witness level n)");
    if (spec.command == "beurling" && spec.radii.empty()) diags.push_back("beurling needs radii");

    std::optional<json> input = spec.inline_input;
    if (spec.input_path && !spec.inline_input) {
        std::string error;
        input = detail::read_json_file(*spec.input_path, &error);
        if (!input) diags.push_back(error);
    }
    if (input) detail::check_input_points(*input, diags);
    return diags;
}

namespace detail {

class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    void json_file(const std::string& name, json body) {
        body["manifest"] = "manifest.json";
        write(name, body.dump(2) + "\n");
    }

    void csv_file(const std::string& name, const std::string& header, const std::vector<std::vector<double>>& rows) {
        std::string text = "# manifest: manifest.json\n" + header + "\n";
        char buf[64];
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", row[i]);
                text += (i ? "," : "") + std::string(buf);
            }
            text += "\n";
        }
        write(name, text);
    }

    void write(const std::string& name, const std::string& text) {
        std::ofstream out(dir_ / name, std::ios::binary);
        out << text;
        if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
        outputs_.push_back(name);
    }

    const std::vector<std::string>& outputs() const { return outputs_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::vector<std::string> outputs_;
};

inline json tolerances_json(const JobSpec& spec) {
    return json{{"rank_tolerance", kRankTolerance},
                {"hadamard_tolerance", kHadamardTolerance},
                {"expansion_margin", kExpansionMargin},
                {"bracket_slack", 1e-8},
                {"feasibility_slack", kFeasibilitySlack},
                {"decay_ratio_max", kDecayRatioMax},
                {"target_error", spec.target_error}};
}

inline std::vector<std::vector<double>> count_rows(const std::vector<RadiusCount>& counts) {
    std::vector<std::vector<double>> rows;
    for (const auto& rc : counts) rows.push_back({rc.radius, static_cast<double>(rc.count)});
    return rows;
}

inline std::size_t levels_or(const JobSpec& spec, std::size_t fallback) {
    return spec.levels ? static_cast<std::size_t>(*spec.levels) : fallback;
}

inline void run_check_triple(const JobSpec&, const json& input, ArtifactWriter& out) {
    const LatticeMap dilation(io::matrix_from_json(input.at("R")));
    const DigitSet digits = io::digits_from_json(input.at("B"));
    const DigitSet freqs = io::digits_from_json(input.at("L"));
    const auto report = analyze_triple(dilation, digits, freqs);
    const auto dual = dual_triple(dilation, digits, freqs);
    json body{{"input", {{"R", io::matrix_to_json(dilation.matrix())},
                         {"B", io::digits_to_json(digits)},
                         {"L", io::digits_to_json(freqs)}}},
              {"expanding", is_expanding(dilation.matrix()).expanding},
              {"distinct_residues", distinct_residues(digits, dilation)},
              {"report", report},
              {"dual", {{"R", io::matrix_to_json(dual.dilation.matrix())},
                        {"B", io::digits_to_json(dual.digits)},
                        {"L", io::digits_to_json(dual.frequencies)},
                        {"bound_scale", dual.bound_scale},
                        {"report", dual.report}}}};
    out.json_file("triple.json", body);
}

inline void run_tower_report(const JobSpec& spec, const json& input, ArtifactWriter& out) {
    const Tower tower = input.get<Tower>();
    std::size_t n = levels_or(spec, 4);
    if (tower.mode() == TowerMode::Finite) n = std::min(n, tower.period());
    json levels = json::array();
    for (std::size_t j = 1; j <= std::max<std::size_t>(tower.period(), 1); ++j)
        levels.push_back({{"level", j}, {"bounds", tower.bounds(j)}, {"report", tower.report(j)}});
    const auto products = tower.products(n);
    const auto conc = concatenate(tower, n);
    const auto check = finite_level_frame_check(tower, n, conc.spectrum.points());

    json delta = nullptr;
    bool delta_positive = false;
    if (tower.mode() == TowerMode::Periodic) {
        const auto rep = delta_lower_estimate(tower, n, spec.target_error);
        delta = rep;
        delta_positive = rep.certified;
    }
    const auto verdict = exactness_classify(tower, delta_positive);
    json body{{"tower", tower},
              {"levels_evaluated", n},
              {"per_level", levels},
              {"products", {{"C", products.lower}, {"D", products.upper}, {"M", products.digit_count}}},
              {"products_certified", tower.products_certified()},
              {"concatenated", {{"R", io::matrix_to_json(conc.dilation.matrix())},
                                {"digit_count", conc.digits.size()},
                                {"spectrum_size", conc.spectrum.size()},
                                {"report", conc.report}}},
              {"finite_level_frame_check", check},
              {"delta", delta},
              {"verdict", verdict}};
    out.json_file("tower_report.json", body);
}

inline std::vector<IntVector> cached_spectrum(const JobSpec& spec, const json& input, const Tower& tower,
                                              std::size_t n) {
    const char* cache = std::getenv("FRACTAL_FRAMES_CACHE");
    std::filesystem::path file;
    if (cache && *cache) {
        const std::string key = input.dump() + "|levels=" + std::to_string(n) + "|v=" + kToolVersion;
        file = std::filesystem::path(cache) / ("spectrum-" + hex64(fnv1a(key)) + ".json");
        if (std::filesystem::exists(file)) {
            std::string error;
            if (auto j = read_json_file(file.string(), &error)) return io::points_from_json(*j);
        }
    }
    auto points = enumerate_spectrum(tower, n);
    if (!file.empty()) {
        std::filesystem::create_directories(file.parent_path());
        std::ofstream(file) << json(points).dump();
    }
    (void)spec;
    return points;
}

inline void run_spectrum(const JobSpec& spec, const json& input, ArtifactWriter& out) {
    const Tower tower = input.get<Tower>();
    if (spec.radius) {
        const auto ball = enumerate_spectrum_ball(tower, *spec.radius, levels_or(spec, 64));
        out.json_file("spectrum.json", json{{"radius", *spec.radius},
                                            {"levels_used", ball.levels_used},
                                            {"complete", ball.complete},
                                            {"count", ball.points.size()},
                                            {"points", ball.points}});
        return;
    }
    const std::size_t n = levels_or(spec, 3);
    const auto points = cached_spectrum(spec, input, tower, n);
    out.json_file("spectrum.json", json{{"levels", n}, {"count", points.size()}, {"points", points}});
}

inline void run_tail_delta(const JobSpec& spec, const json& input, ArtifactWriter& out) {
    const Tower tower = input.get<Tower>();
    const auto rep = delta_lower_estimate(tower, levels_or(spec, 6), spec.target_error);
    out.json_file("delta.json", json(rep));
}

inline void run_muhat(const JobSpec& spec, const json& input, ArtifactWriter& out) {
    const MeasureModel model(input.get<MeasureSpec>());
    const std::size_t n = levels_or(spec, 0);
    std::vector<std::vector<double>> rows;
    std::string header;
    for (std::size_t i = 0; i < model.dim(); ++i) header += "xi" + std::to_string(i + 1) + ",";
    header += "re,im,error_bound";
    for (const auto& xi : spec.xi) {
        const auto est = tail_muhat(model, n, xi, spec.target_error);
        auto row = xi;
        row.insert(row.end(), {est.value.real(), est.value.imag(), est.error_bound});
        rows.push_back(std::move(row));
    }
    out.csv_file("muhat.csv", header, rows);
}

inline void run_search_riesz(const JobSpec& spec, const json& input, ArtifactWriter& out) {
    const LatticeMap dilation(io::matrix_from_json(input.at("R")));
    const DigitSet digits = io::digits_from_json(input.at("B"));
    SelectionConfig config;
    config.epsilon = spec.epsilon.value_or(0.1);
    config.strategy = strategy_from_string(spec.strategy);
    config.exhaustive_threshold = static_cast<std::size_t>(spec.exhaustive_threshold);
    config.c0_surrogate = spec.c0;
    const auto result = riesz_subset_search(dilation, digits, config);
    const auto verify = analyze_triple(dilation, digits, result.frequencies);
    json body{{"input", {{"R", io::matrix_to_json(dilation.matrix())}, {"B", io::digits_to_json(digits)}}},
              {"epsilon", config.epsilon},
              {"result", result},
              {"verified_riesz_bounds", io::bounds_to_json(verify.riesz_bounds)},
              {"partition", nullptr}};
    if (spec.partition) body["partition"] = partition_into_riesz_classes(dilation, digits, config.epsilon, spec.c0);
    out.json_file("selection.json", body);
}

inline RieszTowerConfig tower_config(const JobSpec& spec) {
    RieszTowerConfig config;
    config.groups = spec.groups ? static_cast<std::size_t>(*spec.groups) : 3;
    config.schedule = spec.schedule == "inverse-square" ? EpsilonSchedule::InverseSquare : EpsilonSchedule::Auto;
    config.c0_surrogate = spec.c0;
    config.strategy = strategy_from_string(spec.strategy);
    config.exhaustive_threshold = static_cast<std::size_t>(spec.exhaustive_threshold);
    return config;
}

inline void run_riesz_tower(const JobSpec& spec, const json& input, ArtifactWriter& out) {
    const MeasureSpec measure = input.get<MeasureSpec>();
    const auto result = build_riesz_tower(measure, tower_config(spec));
    const std::size_t n = std::min<std::size_t>(3, result.groups.size());
    const auto conc = concatenate(result.tower, n);
    const auto products = result.tower.products(n);
    json body{{"tower", result.tower},
              {"groups", result.groups},
              {"epsilon_sum", result.epsilon_sum},
              {"concatenated_level", n},
              {"concatenated_riesz_bounds", io::bounds_to_json(conc.report.riesz_bounds)},
              {"product_bracket", {products.lower, products.upper}}};
    out.json_file("riesz_tower.json", body);
}

inline void run_schedule(const JobSpec& spec, const json& input, ArtifactWriter& out) {
    const SelfSimilarDescriptor desc(ExpandingMatrix(io::matrix_from_json(input.at("R"))),
                                     io::digits_from_json(input.at("B")), spec.c0);
    ScheduleOptions options;
    options.strategy = strategy_from_string(spec.strategy);
    options.exhaustive_threshold = static_cast<std::size_t>(spec.exhaustive_threshold);
    options.schedule = spec.schedule == "polynomial" ? ScheduleEpsilon::Polynomial : ScheduleEpsilon::Auto;
    const auto result = maximal_dimension_schedule(desc, static_cast<std::size_t>(spec.max_k.value_or(3)), options);
    json body{{"rho", desc.rho},
              {"dimension_ceiling", desc.dimension_ceiling()},
              {"groups", result.groups},
              {"partial", result.partial},
              {"partial_reason", result.partial_reason},
              {"tower", result.tower ? json(*result.tower) : json(nullptr)},
              {"spectrum_size", result.spectrum.size()},
              {"radii", result.radii},
              {"beurling", result.beurling}};
    out.json_file("schedule.json", body);
    out.csv_file("counts.csv", "h,count", count_rows(result.beurling.counts));
}

inline void run_beurling(const JobSpec& spec, const json& input, ArtifactWriter& out) {
    std::vector<IntVector> points;
    if (input.contains("points"))
        points = io::points_from_json(input.at("points"));
    else
        points = enumerate_spectrum(input.get<Tower>(), levels_or(spec, 4));
    if (points.empty()) throw PreconditionError("beurling needs a non-empty point set");
    std::optional<double> ceiling;
    if (input.contains("ceiling")) ceiling = input.at("ceiling").get<double>();
    const auto alphas = spec.alpha_grid.empty() ? std::vector<double>{0.25, 0.5, 0.75, 1.0} : spec.alpha_grid;
    const auto report = beurling_report(points, spec.radii, alphas, ceiling);
    out.json_file("beurling.json", json{{"point_count", points.size()}, {"report", report}});
    out.csv_file("counts.csv", "h,count", count_rows(report.counts));
}

inline void run_witness(const JobSpec& spec, const json& input, ArtifactWriter& out) {
    const Tower tower = input.get<Tower>();
    const std::size_t n = levels_or(spec, 1);
    if (tower.kind() == TowerKind::Frame) {
        const auto w = exactness_witness(tower, spec.lambda0.value_or(IntVector(tower.dim(), 0)), n);
        out.json_file("witness.json", json{{"type", "exactness"}, {"witness", w}});
    } else {
        const auto w = incompleteness_witness(tower, n);
        out.json_file("witness.json", json{{"type", "incompleteness"}, {"witness", w}});
    }
}

}  // namespace detail

struct RunResult {
    int exit_code = 0;
    std::vector<std::string> outputs;
    std::string message;
};

/// 0 on success, 2 on invalid input (error.json written), 1 on internal errors.
inline RunResult run(const JobSpec& spec, const std::vector<std::string>& command_line = {}) {
    const auto start = std::chrono::steady_clock::now();
    RunResult result;
    auto fail = [&](int code, const std::string& type, const std::string& message, const std::vector<std::string>& diags) {
        result.exit_code = code;
        result.message = message;
        try {
            detail::ArtifactWriter out(spec.output_dir);
            out.write("error.json", json{{"error", {{"type", type}, {"message", message}, {"diagnostics", diags}}},
                                         {"exit_code", code}}.dump(2) + "\n");
            result.outputs = out.outputs();
        } catch (const std::exception&) {
        }
        return result;
    };

    json input;
    if (spec.input_path && !spec.inline_input) {
        std::string error;
        auto parsed = detail::read_json_file(*spec.input_path, &error);
        if (!parsed) return fail(2, "malformed_input", error, {error});
        input = std::move(*parsed);
    }
    const auto diags = validate(spec);
    if (!diags.empty()) return fail(2, "invalid_spec", diags.front(), diags);
    if (spec.inline_input) input = *spec.inline_input;

    try {
        detail::ArtifactWriter out(spec.output_dir);
        const auto& c = spec.command;
        if (c == "check-triple") detail::run_check_triple(spec, input, out);
        else if (c == "tower-report") detail::run_tower_report(spec, input, out);
        else if (c == "spectrum") detail::run_spectrum(spec, input, out);
        else if (c == "tail-delta") detail::run_tail_delta(spec, input, out);
        else if (c == "muhat") detail::run_muhat(spec, input, out);
        else if (c == "search-riesz") detail::run_search_riesz(spec, input, out);
        else if (c == "riesz-tower") detail::run_riesz_tower(spec, input, out);
        else if (c == "schedule-57") detail::run_schedule(spec, input, out);
        else if (c == "beurling") detail::run_beurling(spec, input, out);
        else if (c == "witness") detail::run_witness(spec, input, out);

        JobSpec resolved = spec;
        resolved.input_path.reset();
        resolved.inline_input = input;
        resolved.output_dir.clear();
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json manifest{{"tool", "fractal_frames"},
                      {"version", kToolVersion},
                      {"command", spec.command},
                      {"input_hash", detail::hex64(detail::fnv1a(json(resolved).dump()))},
                      {"command_line", command_line},
                      {"wall_time_seconds", wall},
                      {"tolerances", detail::tolerances_json(spec)},
                      {"outputs", out.outputs()}};
        out.write("manifest.json", manifest.dump(2) + "\n");
        result.outputs = out.outputs();
        return result;
    } catch (const PreconditionError& e) {
        return fail(2, "precondition", e.what(), {e.what()});
    } catch (const json::exception& e) {
        return fail(2, "malformed_input", e.what(), {e.what()});
    } catch (const std::overflow_error& e) {
        return fail(2, "overflow", e.what(), {e.what()});
    } catch (const std::exception& e) {
        return fail(1, "internal", e.what(), {e.what()});
    }
}

}  // namespace fractal_frames

#endif  // FRACTAL_FRAMES_JOBS_HPP
