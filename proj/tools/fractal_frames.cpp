// Command-line front end: one subcommand per job type, plus `run --job spec.json`.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fractal_frames/jobs.hpp"

namespace ff = fractal_frames;

namespace {

struct Options {
    std::string input;
    std::string inline_json;
    std::string out = "out";
    std::int64_t levels = -1;
    bool levels_set = false;
    double radius = -1.0;
    double epsilon = -1.0;
    std::vector<double> alpha_grid;
    std::vector<double> radii;
    double target_error = ff::kDefaultTargetError;
    std::string strategy = "auto";
    std::int64_t threshold = 16;
    double c0 = 1.0;
    std::int64_t max_k = 3;
    std::int64_t groups = 3;
    std::string schedule = "auto";
    std::vector<std::int64_t> lambda0;
    std::vector<double> xi;
    bool partition = false;
};

ff::JobSpec to_spec(const std::string& command, const Options& o, CLI::App* sub) {
    ff::JobSpec s;
    s.command = command;
    if (!o.input.empty()) s.input_path = o.input;
    if (!o.inline_json.empty()) s.inline_input = ff::json::parse(o.inline_json);
    s.output_dir = o.out;
    if (sub->count("--levels")) s.levels = o.levels;
    if (sub->count("--radius")) s.radius = o.radius;
    if (sub->count("--epsilon")) s.epsilon = o.epsilon;
    s.alpha_grid = o.alpha_grid;
    s.radii = o.radii;
    s.target_error = o.target_error;
    s.strategy = o.strategy;
    s.exhaustive_threshold = o.threshold;
    s.c0 = o.c0;
    if (sub->count("--max-k")) s.max_k = o.max_k;
    if (sub->count("--groups")) s.groups = o.groups;
    s.schedule = o.schedule;
    if (!o.lambda0.empty()) s.lambda0 = o.lambda0;
    for (double x : o.xi) s.xi.push_back({x});
    s.partition = o.partition;
    return s;
}

int report(const ff::RunResult& r) {
    if (r.exit_code != 0) {
        std::cerr << "error: " << r.message << "\n";
    } else {
        for (const auto& f : r.outputs) std::cout << f << "\n";
    }
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponential frames and Riesz sequences for Cantor-type measures"};
    app.require_subcommand(1);
    std::vector<std::string> command_line(argv, argv + argc);

    Options o;
    std::string job_file;
    auto* run_cmd = app.add_subcommand("run", "run a JSON job spec");
    run_cmd->add_option("--job", job_file, "job spec file")->required();

    std::vector<std::pair<std::string, CLI::App*>> subs;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"check-triple", "classify a triple (R, B, L)"},
        {"tower-report", "bounds, delta and exactness verdict of a tower"},
        {"spectrum", "enumerate Lambda_n or Lambda within a ball"},
        {"tail-delta", "level-truncated lower bound for delta(Lambda)"},
        {"muhat", "tail Fourier transform at real frequencies (CSV)"},
        {"search-riesz", "largest Riesz-sequence L with bounds 1 +- eps"},
        {"riesz-tower", "Riesz-sequence tower from a measure"},
        {"schedule-57", "maximal-dimension schedule for a self-similar measure"},
        {"beurling", "Beurling density and dimension estimate"},
        {"witness", "exactness or incompleteness witness"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("-i,--input", o.input, "input JSON file");
        sub->add_option("--inline", o.inline_json, "input JSON text");
        sub->add_option("-o,--out", o.out, "output directory");
        sub->add_option("--levels", o.levels, "number of levels");
        sub->add_option("--radius", o.radius, "ball radius (spectrum)");
        sub->add_option("--epsilon", o.epsilon, "Riesz tolerance in (0,1)");
        sub->add_option("--alpha-grid", o.alpha_grid, "density exponents")->delimiter(',');
        sub->add_option("--radii", o.radii, "ball radii")->delimiter(',');
        sub->add_option("--target-error", o.target_error, "Fourier truncation error");
        sub->add_option("--strategy", o.strategy, "auto | exhaustive | greedy | greedy+local-swap");
        sub->add_option("--exhaustive-threshold", o.threshold, "max pool size for exhaustive search");
        sub->add_option("--c0", o.c0, "C0 surrogate");
        sub->add_option("--max-k", o.max_k, "schedule groups");
        sub->add_option("--groups", o.groups, "tower groups");
        sub->add_option("--schedule", o.schedule, "epsilon schedule");
        sub->add_option("--lambda0", o.lambda0, "witness frequency")->delimiter(',');
        sub->add_option("--xi", o.xi, "frequencies (1-d)")->delimiter(',');
        sub->add_flag("--partition", o.partition, "also partition the residues");
        subs.emplace_back(name, sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            std::ifstream in(job_file);
            if (!in) {
                std::cerr << "error: cannot read job file '" << job_file << "'\n";
                return 2;
            }
            ff::JobSpec spec = ff::json::parse(in).get<ff::JobSpec>();
            return report(ff::run(spec, command_line));
        }
        for (const auto& [name, sub] : subs)
            if (*sub) return report(ff::run(to_spec(name, o, sub), command_line));
    } catch (const ff::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ff::json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
