/**
 * @file export.hpp
 * @brief CSV output for single runs and scheme comparisons
 *
 * Per run directory:
 *   metrics.csv        step,time_s,percent_mae,e_L,edot_L,r_m,model_index,trigger,iter_seconds
 *   model_changes.csv  step,snapshot_origin,model_index,r_m,trigger_e_L,trigger_edot_L,refit_e_L
 *   state_snapshot_<step>.csv  node,r,theta,z,h_true,h_est,abs_err
 *
 * Comparison directory (one column group per scheme, no wall-clock data):
 *   metrics.csv, summary.csv; wall-clock goes to timings.csv.
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/hydrology/grid.hpp"
#include "soilmor/scenario/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace soilmor::scenario {

struct ExportOptions {
    bool include_timings = true;  ///< false writes iter_seconds as 0 for byte-stable output
};

/// Shortest round-trip representation; NaN is written as "nan".
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prefer the shorter form when it round-trips.
    char shorter[32];
    for (int prec = 6; prec < 17; ++prec) {
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

namespace detail {

inline std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

inline void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

}  // namespace detail

inline void write_metrics(std::ostream& out, const RunArtifacts& run, const ExportOptions& opt = {}) {
    out << "step,time_s,percent_mae,e_L,edot_L,r_m,model_index,trigger,iter_seconds\n";
    for (std::size_t i = 0; i < run.trace.records.size(); ++i) {
        const auto& r = run.trace.records[i];
        out << r.step << ',' << format_number(static_cast<double>(r.step) * run.delta) << ','
            << format_number(i < run.percent_mae.size() ? run.percent_mae[i] : std::nan("")) << ','
            << format_number(r.e_L) << ',' << format_number(r.edot_L) << ',' << r.r_m << ',' << r.model_index << ','
            << (r.triggered ? 1 : 0) << ',' << format_number(opt.include_timings ? r.iter_seconds : 0.0) << '\n';
    }
}

inline void write_model_changes(std::ostream& out, const RunArtifacts& run) {
    out << "step,snapshot_origin,model_index,r_m,trigger_e_L,trigger_edot_L,refit_e_L\n";
    for (const auto& c : run.trace.changes)
        out << c.step << ',' << c.snapshot_origin << ',' << c.model_index << ',' << c.r_m << ','
            << format_number(c.trigger_e_L) << ',' << format_number(c.trigger_edot_L) << ','
            << format_number(c.refit_e_L) << '\n';
}

inline void write_state_snapshot(std::ostream& out, const hydrology::CylindricalGrid& grid, const StateSnapshot& s) {
    out << "node,r,theta,z,h_true,h_est,abs_err\n";
    for (Index i = 0; i < s.truth.size(); ++i) {
        const auto c = grid.coord(i);
        out << i << ',' << format_number(grid.node_radius(c.i_r)) << ',' << format_number(grid.node_angle(c.i_theta))
            << ',' << format_number(grid.node_elevation(c.i_z)) << ',' << format_number(s.truth.h[i]) << ','
            << format_number(s.estimate.h[i]) << ',' << format_number(std::abs(s.estimate.h[i] - s.truth.h[i]))
            << '\n';
    }
}

inline void export_run(const RunArtifacts& run, const hydrology::CylindricalGrid& grid,
                       const std::filesystem::path& dir, const ExportOptions& opt = {}) {
    detail::ensure_dir(dir);
    {
        auto out = detail::open_csv(dir / "metrics.csv");
        write_metrics(out, run, opt);
    }
    {
        auto out = detail::open_csv(dir / "model_changes.csv");
        write_model_changes(out, run);
    }
    for (const auto& s : run.snapshots) {
        auto out = detail::open_csv(dir / ("state_snapshot_" + std::to_string(s.step) + ".csv"));
        write_state_snapshot(out, grid, s);
    }
}

inline std::string column_prefix(Scheme s) {
    std::string name = scheme_name(s);
    for (auto& ch : name)
        if (ch == '-') ch = '_';
    return name;
}

/// Joined per-step table; deterministic for a fixed seed and configuration.
inline void write_comparison_metrics(std::ostream& out, const std::vector<RunArtifacts>& runs) {
    out << "step,time_s";
    for (const auto& run : runs) {
        const auto p = column_prefix(run.scheme);
        out << ',' << p << "_percent_mae," << p << "_e_L," << p << "_edot_L," << p << "_r_m," << p
            << "_model_index," << p << "_trigger";
    }
    out << '\n';
    const std::size_t n = runs.empty() ? 0 : runs.front().trace.records.size();
    for (std::size_t k = 0; k < n; ++k) {
        out << k << ',' << format_number(static_cast<double>(k) * runs.front().delta);
        for (const auto& run : runs) {
            const auto& r = run.trace.records.at(k);
            out << ',' << format_number(run.percent_mae.at(k)) << ',' << format_number(r.e_L) << ','
                << format_number(r.edot_L) << ',' << r.r_m << ',' << r.model_index << ',' << (r.triggered ? 1 : 0);
        }
        out << '\n';
    }
}

inline void write_timings(std::ostream& out, const std::vector<RunArtifacts>& runs) {
    out << "step";
    for (const auto& run : runs) out << ',' << column_prefix(run.scheme) << "_iter_seconds";
    out << '\n';
    const std::size_t n = runs.empty() ? 0 : runs.front().trace.records.size();
    for (std::size_t k = 0; k < n; ++k) {
        out << k;
        for (const auto& run : runs) out << ',' << format_number(run.trace.records.at(k).iter_seconds);
        out << '\n';
    }
}

struct SchemeSummary {
    Scheme scheme = Scheme::performance;
    std::size_t identifications = 0;
    double mean_percent_mae = 0.0;
    double final_percent_mae = 0.0;
    double max_r_m = 0.0;
    double mean_iter_seconds = 0.0;
};

inline SchemeSummary summarize(const RunArtifacts& run) {
    SchemeSummary s;
    s.scheme = run.scheme;
    s.identifications = run.trace.identifications();
    if (!run.percent_mae.empty()) {
        for (double v : run.percent_mae) s.mean_percent_mae += v;
        s.mean_percent_mae /= static_cast<double>(run.percent_mae.size());
        s.final_percent_mae = run.percent_mae.back();
    }
    for (const auto& r : run.trace.records) {
        s.max_r_m = std::max(s.max_r_m, static_cast<double>(r.r_m));
        s.mean_iter_seconds += r.iter_seconds;
    }
    if (!run.trace.records.empty()) s.mean_iter_seconds /= static_cast<double>(run.trace.records.size());
    return s;
}

inline void write_summary(std::ostream& out, const std::vector<RunArtifacts>& runs) {
    out << "scheme,identifications,mean_percent_mae,final_percent_mae,max_r_m\n";
    for (const auto& run : runs) {
        const auto s = summarize(run);
        out << scheme_name(s.scheme) << ',' << s.identifications << ',' << format_number(s.mean_percent_mae) << ','
            << format_number(s.final_percent_mae) << ',' << format_number(s.max_r_m) << '\n';
    }
}

inline void export_comparison(const std::vector<RunArtifacts>& runs, const hydrology::CylindricalGrid& grid,
                              const std::filesystem::path& dir, const ExportOptions& opt = {}) {
    detail::ensure_dir(dir);
    for (const auto& run : runs) export_run(run, grid, dir / scheme_name(run.scheme), opt);
    {
        auto out = detail::open_csv(dir / "metrics.csv");
        write_comparison_metrics(out, runs);
    }
    {
        auto out = detail::open_csv(dir / "summary.csv");
        write_summary(out, runs);
    }
    {
        auto out = detail::open_csv(dir / "timings.csv");
        write_timings(out, runs);
    }
}

}  // namespace soilmor::scenario
