#pragma once

#include "ergoprobe/experiments.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ergoprobe {

struct CsvRow {
    std::string experiment;
    int n_total = 0;
    double n_b = 0.0;
    double g = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    double delta2 = 0.0;
    double inv_gamma = 0.0;
    double gamma_fit = 0.0;
    double dos_bar = 0.0;
    double chi = 0.0;
    double chi_times_dos = 0.0;
    std::string fit_flag;
};

extern const char* const kCsvHeader;

std::string format_double(double x);

std::vector<CsvRow> to_rows(const SweepResult& result);

void emit_csv(const SweepResult& result, const std::string& path);
std::vector<CsvRow> read_csv(const std::string& path);

// Per-point provenance, predictions and diagnostics.
void emit_points_csv(const SweepResult& result, const std::string& path);
void emit_fits_csv(const SweepResult& result, const std::string& path);
void emit_decay_series_csv(const SweepResult& result, const std::string& path);
void emit_correlator_csv(const SweepResult& result, const std::string& profile_path, const std::string& pairs_path);

enum class PlotKind { fdt_line, scaling_semilog, decay_curves };

PlotKind parse_plot_kind(const std::string& name);
PlotKind default_plot_kind(ExperimentKind kind);

void emit_plot(const SweepResult& result, PlotKind kind, const std::string& path);

// Writes every output for the experiment into dir; returns the paths written.
std::vector<std::string> write_outputs(const SweepResult& result, const std::string& dir);

}  // namespace ergoprobe
