#pragma once

#include "ergoprobe/estimators.hpp"
#include "ergoprobe/models.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergoprobe {

enum class ExperimentKind { rmt_fdt, chain_fdt, scaling, decay, correlators };

ExperimentKind parse_experiment(const std::string& name);
const char* to_string(ExperimentKind kind);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::rmt_fdt;
    std::optional<std::uint64_t> master_seed;
    std::string output_dir = "out";
    double t_max_factor = 100.0;  // windowed averages run to t_max_factor / Gamma
    Index n_time_samples = 4096;
    ObservableKind observable = ObservableKind::sigma_z_probe;
    GammaEstimator estimator = GammaEstimator::integral;

    std::vector<double> sweep_g{0.05};
    std::vector<double> sweep_g_sb{0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
    std::vector<int> sweep_n_total{9};
    std::vector<double> sweep_beta{0.0};

    int rmt_n = 500;
    bool rmt_energy_cutoff = false;  // sector keeps only E_alpha >= e0
    double rmt_e0_fraction = 0.5;    // e0 = fraction * E_max; without the cutoff e0 = E_min
    bool rmt_windowed_check = false;

    SpinChainSpec chain;             // n_total and the probe couplings are set per grid point
    int chain_profile_states = 0;

    double gamma_integration_factor = 6.0;  // final series spans factor / Gamma_hat
    Index gamma_samples = 4096;
    Index gamma_probe_samples = 512;
    int gamma_max_attempts = 4;
    Index max_time_domain_dim = 2048;

    double decay_t_end = 3.0;        // in units of 1 / Gamma
    Index decay_samples = 1024;
    std::vector<ObservableKind> decay_observables{ObservableKind::sigma_z_probe, ObservableKind::o_odd};

    int corr_realizations = 100;
    double corr_probe_fraction = 0.4;
    int corr_probe_stride = 8;
    int corr_max_offset = 40;

    void validate() const;
};

// Flat "key = value" lines; '#' starts a comment; lists are comma separated.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

// Defaults used when a subcommand runs without --config.
ExperimentConfig default_config(ExperimentKind kind);

// Documented keys, for --help output and the README.
const std::vector<std::pair<std::string, std::string>>& config_keys();

}  // namespace ergoprobe
