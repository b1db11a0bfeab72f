#pragma once

#include "ergoprobe/config.hpp"
#include "ergoprobe/correlators.hpp"
#include "ergoprobe/estimators.hpp"
#include "ergoprobe/theory.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace ergoprobe {

struct GridPoint {
    std::size_t index = 0;
    int n_total = 0;  // chain qubits, or the RMT dimension
    double g = 0.0;   // RMT g or chain g_sb
    double beta = 0.0;
    std::uint64_t seed = 0;
};

std::vector<GridPoint> make_grid(const ExperimentConfig& cfg);

struct DecayCurve {
    ObservableKind observable;
    TimeSeries measured;
    VectorXd predicted;
    double o_free = 0.0;
    double o_de = 0.0;           // measured diagonal ensemble
    double o_de_theory = 0.0;    // coarse average [O] used in the prediction
    double max_abs_deviation = 0.0;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PointRecord {
    GridPoint grid;
    FdtPoint point;
    double gamma_fit = kNaN;
    bool failed = false;
    std::string diagnostic;
    GammaEstimator estimator = GammaEstimator::integral;

    double o_free = kNaN;
    double o_de = kNaN;
    double inv_gamma_integral = kNaN;
    double inv_gamma_fit = kNaN;
    double fit_r2 = kNaN;
    double series_t_end = kNaN;

    double gamma_theory = kNaN;     // RMT only
    double w_o = kNaN;
    double delta2_predicted = kNaN; // level-sum finite-T form (equals the infinite-T form at beta = 0)
    double delta2_continuum = kNaN;
    double delta2_inf_t = kNaN;
    double c_prime = kNaN;
    double chi_predicted = kNaN;
    double windowed_delta2 = kNaN;
    double windowed_mu = kNaN;
    double profile_slow_variation = kNaN;

    std::vector<DecayCurve> curves;
};

struct GroupFit {
    std::string label;
    std::string kind;  // "linear" or "exponential"
    std::vector<std::size_t> members;
    FitResult fit;
};

struct SweepResult {
    ExperimentConfig config;
    std::vector<PointRecord> points;
    std::vector<GroupFit> fits;
    std::vector<CorrelatorReport> correlators;

    bool any_failed() const;
};

SweepResult run(const ExperimentConfig& cfg, unsigned workers);

// Measured Gamma^-1 for one quench: probes the rate, evolves over integration_factor / Gamma_hat
// (doubling if the signal never reaches o_de) and integrates up to the first arrival at o_de.
struct InverseGammaMeasurement {
    double inv_gamma_integral = kNaN;
    double inv_gamma_fit = kNaN;
    double gamma_fit = kNaN;
    double fit_r2 = kNaN;
    double t_end = kNaN;
    bool integral_ok = false;
    bool fit_ok = false;
    std::string diagnostic;
};

InverseGammaMeasurement measure_inverse_gamma(const EigenbasisOperators& ops, double o_free, double o_de,
                                              double t_guess, const ExperimentConfig& cfg);

}  // namespace ergoprobe
