#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sddtm/ascii_grid.hpp"
#include "sddtm/errors.hpp"
#include "sddtm/eval.hpp"
#include "sddtm/extraction.hpp"
#include "sddtm/synth.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

// FNV-1a 64-bit over file bytes; enough to tie a report to its artifacts.
std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sddtm::IoFailure("cannot open '" + path + "' for digesting");
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + hex;
}

struct ExtractArgs {
    std::string input;
    std::string output;
    double lambda = 5.0;
    std::optional<double> lambda_p;
    double tng = 0.5;
    double epsilon = 0.1;
    int max_iter = 10000;
    double tolerance = 1e-3;
    double pcg_tol = 1e-3;
    int pcg_max_iter = 1000;
    bool paper_literal_a = false;
    std::string terrain_map;
    std::string report;
    int decimals = 6;
    bool strict = false;
};

int run_extract(const ExtractArgs& args) {
    sddtm::ExtractionConfig cfg;
    cfg.lambda = args.lambda;
    cfg.lambda_p = args.lambda_p;
    cfg.t_ng = args.tng;
    cfg.epsilon = args.epsilon;
    cfg.n_max = args.max_iter;
    cfg.c_tolerance = args.tolerance;
    cfg.pcg_tol = args.pcg_tol;
    cfg.pcg_max_iter = args.pcg_max_iter;
    cfg.paper_literal_a = args.paper_literal_a;
    cfg.validate();

    const sddtm::Grid dsm = sddtm::read_ascii_grid_file(args.input);

    const auto t0 = std::chrono::steady_clock::now();
    const sddtm::ExtractionResult result = sddtm::extract_dtm(dsm, cfg);
    const double wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    sddtm::write_ascii_grid_file(result.dtm, args.output, args.decimals);
    if (!args.terrain_map.empty()) {
        sddtm::Grid t = dsm.with_values(
            std::vector<double>(result.terrain.begin(), result.terrain.end()));
        sddtm::write_ascii_grid_file(t, args.terrain_map, args.decimals);
    }

    if (!args.report.empty()) {
        ordered_json report;
        report["command"] = "extract";
        report["input"] = {{"path", args.input}, {"digest", file_digest(args.input)}};
        ordered_json outputs;
        outputs["dtm"] = {{"path", args.output}, {"digest", file_digest(args.output)}};
        if (!args.terrain_map.empty())
            outputs["terrain_map"] = {{"path", args.terrain_map},
                                      {"digest", file_digest(args.terrain_map)}};
        report["outputs"] = outputs;
        report["config"] = {{"lambda", cfg.lambda},
                            {"lambda_p", cfg.penalty_multiplier()},
                            {"tng", cfg.t_ng},
                            {"epsilon", cfg.epsilon},
                            {"max_iter", cfg.n_max},
                            {"tolerance", cfg.c_tolerance},
                            {"pcg_tol", cfg.pcg_tol},
                            {"pcg_max_iter", cfg.pcg_max_iter},
                            {"paper_literal_a", cfg.paper_literal_a},
                            {"decimals", args.decimals},
                            {"strict", args.strict}};
        report["iterations_run"] = result.iterations_run;
        report["converged"] = result.converged;
        report["wall_time_seconds"] = wall_seconds;
        report["step_norms"] = result.step_norms;
        ordered_json pcg = ordered_json::array();
        for (const sddtm::SolveReport& s : result.solve_reports) pcg.push_back(s.iterations);
        report["pcg_iterations"] = pcg;

        std::ofstream out(args.report);
        if (!out) throw sddtm::IoFailure("cannot open '" + args.report + "' for writing");
        out << report.dump(2) << '\n';
    }

    std::cout << "extract: " << result.iterations_run << " iterations, "
              << (result.converged ? "converged" : "NOT converged") << ", final step "
              << (result.step_norms.empty() ? 0.0 : result.step_norms.back()) << " m\n";

    if (args.strict && !result.converged) {
        std::cerr << "error: did not converge within " << cfg.n_max << " iterations\n";
        return kExitNotConverged;
    }
    return 0;
}

struct SynthArgs {
    std::string spec;
    std::string out_dsm;
    std::string out_truth;
    std::string out_mask;
    int decimals = 6;
};

int run_synth(const SynthArgs& args) {
    const sddtm::SceneSpec spec = sddtm::parse_scene_spec_file(args.spec);
    const sddtm::SceneData scene = sddtm::generate(spec);
    sddtm::write_ascii_grid_file(scene.dsm, args.out_dsm, args.decimals);
    sddtm::write_ascii_grid_file(scene.truth_dtm, args.out_truth, args.decimals);
    const sddtm::Grid mask = scene.dsm.with_values(
        std::vector<double>(scene.truth_mask.begin(), scene.truth_mask.end()));
    sddtm::write_ascii_grid_file(mask, args.out_mask, args.decimals);
    std::cout << "synth: wrote " << spec.rows << "x" << spec.cols << " scene\n";
    return 0;
}

struct EvalArgs {
    std::string reference;
    std::string estimate;
    std::string hist_csv;
    std::string stats_json;
    double bin_width = 0.05;
    std::vector<double> range = {-5.0, 5.0};
};

int run_eval(const EvalArgs& args) {
    const sddtm::Grid reference = sddtm::read_ascii_grid_file(args.reference);
    const sddtm::Grid estimate = sddtm::read_ascii_grid_file(args.estimate);
    const std::vector<double> r = sddtm::residuals(reference, estimate);
    const sddtm::ResidualStats stats =
        sddtm::compute_stats(r, args.bin_width, args.range[0], args.range[1]);

    if (!args.hist_csv.empty()) {
        std::ofstream out(args.hist_csv);
        if (!out) throw sddtm::IoFailure("cannot open '" + args.hist_csv + "' for writing");
        sddtm::write_histogram_csv(stats, out);
    }
    if (!args.stats_json.empty()) {
        std::ofstream out(args.stats_json);
        if (!out) throw sddtm::IoFailure("cannot open '" + args.stats_json + "' for writing");
        sddtm::write_stats_json(stats, out);
    }
    std::cout << "eval: mean " << stats.mean << " m, median " << stats.median << " m, rmse "
              << stats.rmse() << " m over " << stats.count << " cells\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational DTM extraction from high-resolution DSM rasters"};
    app.require_subcommand(1);

    ExtractArgs ex;
    CLI::App* extract = app.add_subcommand(
        "extract", "Extract a DTM from a DSM by iterative reweighted smoothing");
    extract->add_option("--input", ex.input, "Input DSM (.asc)")
        ->required()
        ->check(CLI::ExistingFile);
    extract->add_option("--output", ex.output, "Output DTM (.asc)")->required();
    extract->add_option("--lambda", ex.lambda, "Smoothing level")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    extract
        ->add_option("--lambda-p", ex.lambda_p,
                     "Constraint penalty multiplier (default 0.5*lambda)")
        ->check(CLI::NonNegativeNumber);
    extract->add_option("--tng", ex.tng, "Terrain threshold, meters")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    extract->add_option("--epsilon", ex.epsilon, "Reweighting floor, meters")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    extract->add_option("--max-iter", ex.max_iter, "Outer iteration cap")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    extract->add_option("--tolerance", ex.tolerance, "Outer step tolerance, meters")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    extract->add_option("--pcg-tol", ex.pcg_tol, "Inner solver relative residual tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    extract->add_option("--pcg-max-iter", ex.pcg_max_iter, "Inner solver iteration cap")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    extract->add_flag("--paper-literal-a", ex.paper_literal_a,
                      "Assemble the system matrix without the penalty diagonal");
    extract->add_option("--terrain-map", ex.terrain_map,
                        "Optional terrain indicator output (.asc, values in [0,1])");
    extract->add_option("--report", ex.report, "Optional JSON run report");
    extract->add_option("--decimals", ex.decimals, "Fractional digits in .asc outputs")
        ->capture_default_str()
        ->check(CLI::Range(1, 17));
    extract->add_flag("--strict", ex.strict, "Exit with status 2 if not converged");

    SynthArgs sy;
    CLI::App* synth =
        app.add_subcommand("synth", "Generate a synthetic DSM/DTM/mask fixture from a scene spec");
    synth->add_option("--spec", sy.spec, "Scene spec file")->required()->check(CLI::ExistingFile);
    synth->add_option("--out-dsm", sy.out_dsm, "Output DSM (.asc)")->required();
    synth->add_option("--out-truth", sy.out_truth, "Output ground-truth DTM (.asc)")->required();
    synth->add_option("--out-mask", sy.out_mask, "Output terrain mask (.asc)")->required();
    synth->add_option("--decimals", sy.decimals, "Fractional digits in .asc outputs")
        ->capture_default_str()
        ->check(CLI::Range(1, 17));

    EvalArgs ev;
    CLI::App* eval =
        app.add_subcommand("eval", "Residual statistics and log10-frequency histogram");
    eval->add_option("--reference", ev.reference, "Reference raster (.asc)")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--estimate", ev.estimate, "Estimate raster (.asc)")
        ->required()
        ->check(CLI::ExistingFile);
    eval->add_option("--hist-csv", ev.hist_csv, "Histogram CSV output");
    eval->add_option("--stats-json", ev.stats_json, "Stats JSON output");
    eval->add_option("--bin-width", ev.bin_width, "Histogram bin width, meters")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    eval->add_option("--range", ev.range, "Histogram range as lo,hi")
        ->delimiter(',')
        ->expected(2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints the usage message; 0 for --help
        return rc == 0 ? 0 : kExitError;
    }

    try {
        if (extract->parsed()) return run_extract(ex);
        if (synth->parsed()) return run_synth(sy);
        if (eval->parsed()) return run_eval(ev);
    } catch (const sddtm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return 0;
}
