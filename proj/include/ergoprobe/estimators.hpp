#pragma once

#include "ergoprobe/dynamics.hpp"
#include "ergoprobe/linalg.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ergoprobe {

enum class GammaEstimator { integral, fit };

GammaEstimator parse_estimator(const std::string& name);
const char* to_string(GammaEstimator e);

struct FdtPoint {
    int n_total = 0;
    double n_b = 0.0;
    double g_sb = 0.0;
    double beta = 0.0;
    double delta2 = 0.0;
    double inv_gamma = 0.0;
    double dos_bar = 0.0;
    double chi = 0.0;
};

struct FitResult {
    std::map<std::string, double> params;
    double r_squared = 0.0;
    double residual_norm = 0.0;
    bool failed = false;
    std::string diagnostic;

    double operator[](const std::string& name) const { return params.at(name); }
};

// The series ends before the decay has settled; suggested_t_end is a longer window that should suffice.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double suggested_t_end)
        : std::runtime_error(what), suggested_t_end(suggested_t_end) {}
    double suggested_t_end;
};

FitResult fit_decay_rate(const TimeSeries& series, double o_de, double window_fraction = 0.1);

double integral_inverse_gamma(const TimeSeries& series, double o_free, double o_de, double tail_tolerance = 0.01);

// First sample (after t = 0) at which y has reached o_de coming from the o_free side; -1 if none.
Index first_settling_index(const TimeSeries& series, double o_free, double o_de);

double dos_average(const VectorXd& energies);

struct GammaProfile {
    std::vector<double> energies;  // ascending
    std::vector<double> gammas;
    int failed_states = 0;

    double operator()(double e) const;
    // |Gamma(E) - Gamma(E + Gamma(E))| / Gamma(E), maximized over the sampled energies
    double max_slow_variation() const;
};

// Per-state quench: start in |phi_alpha>, fit the decay of sigma_z of the probe.
// Probes outside the central 60% of the non-interacting spectrum are skipped.
GammaProfile empirical_gamma_profile(const Spectrum<double>& spec, const VectorXd& energies_h0,
                                     const std::vector<Index>& probes, double t_end, Index n_samples = 512);

// Evenly spaced odd-sector states (probe up) in the central 60% of the spectrum.
std::vector<Index> bulk_probe_states(const VectorXd& energies_h0, int count);

double chi_estimate(double delta2, double inv_gamma);

FdtPoint make_fdt_point(int n_total, double n_b, double g_sb, double beta, double delta2, double inv_gamma,
                        double dos_bar);

// ln y = ln a - c N
FitResult fit_exponential_scaling(const std::vector<std::pair<double, double>>& points);

FitResult linear_fit(const VectorXd& x, const VectorXd& y);

}  // namespace ergoprobe
