// soilmor: run, compare and validate soil-moisture estimation scenarios.

#include "soilmor/soilmor.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace soilmor;
using namespace soilmor::scenario;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheme;
    std::optional<Index> stride;
};

ScenarioConfig load(const std::string& path, const Overrides& o) {
    auto cfg = load_config(path);
    if (o.seed) cfg.seed = *o.seed;
    if (o.scheme) cfg.schemes = {parse_scheme(*o.scheme)};
    if (o.stride) {
        if (*o.stride < 1) throw ValidationError("stride", "must be >= 1");
        cfg.stride = *o.stride;
    }
    return cfg;
}

TruthRun simulate(const ScenarioConfig& cfg) {
    std::fprintf(stderr, "truth: %zu steps, N_x = %ld, N_y = %ld, %ld sub-steps per interval\n", cfg.steps,
                 static_cast<long>(cfg.n_x()), static_cast<long>(cfg.n_y()), static_cast<long>(cfg.richards.substeps));
    auto truth = run_truth(cfg);
    if (truth.max_head > 0.0)
        std::fprintf(stderr, "warning: true state reached saturation (max h = %.4g m)\n", truth.max_head);
    return truth;
}

void report(const RunArtifacts& run) {
    const auto s = summarize(run);
    std::printf("%-15s identifications %3zu  max r_m %5.0f  %%MAE initial %.3f final %.3f  mean iter %.4f s\n",
                scheme_name(run.scheme).c_str(), s.identifications, s.max_r_m,
                run.percent_mae.empty() ? 0.0 : run.percent_mae.front(), s.final_percent_mae, s.mean_iter_seconds);
}

int cmd_validate(const std::string& path, const Overrides& o) {
    const auto cfg = load(path, o);
    std::printf("config ok: %s\n", path.c_str());
    std::printf("  grid       %ld x %ld x %ld (N_x = %ld), radius %g m, depth %g m\n",
                static_cast<long>(cfg.grid.n_r()), static_cast<long>(cfg.grid.n_theta()),
                static_cast<long>(cfg.grid.n_z()), static_cast<long>(cfg.n_x()), cfg.grid.radius(), cfg.grid.depth());
    std::printf("  sensors    N_y = %ld\n", static_cast<long>(cfg.n_y()));
    std::printf("  timing     delta %g s, %zu steps, %ld sub-steps\n", cfg.delta, cfg.steps,
                static_cast<long>(cfg.richards.substeps));
    std::printf("  trigger    N_fd %ld, th_e %g, th_C %g, slope_limit %g\n", static_cast<long>(cfg.N_fd), cfg.th_e,
                cfg.th_C, cfg.slope_limit);
    std::string schemes;
    for (auto s : cfg.schemes) schemes += (schemes.empty() ? "" : ", ") + scheme_name(s);
    std::printf("  scheme     %s\n", schemes.c_str());
    return 0;
}

int cmd_run(const std::string& path, const std::string& outdir, const Overrides& o) {
    const auto cfg = load(path, o);
    const auto truth = simulate(cfg);
    for (auto scheme : cfg.schemes) {
        const auto run = run_scheme(cfg, scheme, truth);
        export_run(run, cfg.grid, std::filesystem::path(outdir) / scheme_name(scheme));
        report(run);
    }
    return 0;
}

int cmd_compare(const std::string& path, const std::string& outdir, Overrides o) {
    o.scheme.reset();
    const auto cfg = load(path, o);
    const auto truth = simulate(cfg);
    std::vector<RunArtifacts> runs;
    for (auto scheme : {Scheme::performance, Scheme::static_model, Scheme::time_triggered}) {
        runs.push_back(run_scheme(cfg, scheme, truth));
        report(runs.back());
    }
    export_comparison(runs, cfg.grid, outdir);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive model-reduction soil-moisture estimation"};
    app.require_subcommand(1);

    std::string config;
    std::string outdir = "out";
    Overrides overrides;
    std::uint64_t seed = 0;
    std::string scheme;
    Index stride = 1;

    auto add_common = [&](CLI::App* sub, bool with_scheme) {
        sub->add_option("config", config, "Scenario configuration (JSON)")->required();
        sub->add_option("--outdir", outdir, "Output directory")->capture_default_str();
        sub->add_option("--seed", seed, "Override the configured seed");
        if (with_scheme)
            sub->add_option("--scheme", scheme, "performance | static | time-triggered")
                ->check(CLI::IsMember({"performance", "static", "time-triggered"}));
        sub->add_option("--stride", stride, "Evaluate e_L every N steps");
    };
    auto* run = app.add_subcommand("run", "Run the configured scheme(s)");
    add_common(run, true);
    auto* compare = app.add_subcommand("compare", "Run all three schemes and write a joined metrics table");
    add_common(compare, false);
    auto* validate = app.add_subcommand("validate", "Check a configuration and print its summary");
    add_common(validate, true);

    CLI11_PARSE(app, argc, argv);

    auto given = [](CLI::App* sub, const char* name) { return sub->count(name) > 0; };
    CLI::App* active = app.get_subcommands().front();
    if (given(active, "--seed")) overrides.seed = seed;
    if (active != compare && given(active, "--scheme")) overrides.scheme = scheme;
    if (given(active, "--stride")) overrides.stride = stride;

    try {
        if (active == run) return cmd_run(config, outdir, overrides);
        if (active == compare) return cmd_compare(config, outdir, overrides);
        return cmd_validate(config, overrides);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: InternalError: %s\n", e.what());
        return 70;
    }
}
