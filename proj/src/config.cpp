#include "ergoprobe/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ergoprobe {

ExperimentKind parse_experiment(const std::string& name) {
    if (name == "rmt_fdt" || name == "rmt-fdt") return ExperimentKind::rmt_fdt;
    if (name == "chain_fdt" || name == "chain-fdt") return ExperimentKind::chain_fdt;
    if (name == "scaling") return ExperimentKind::scaling;
    if (name == "decay") return ExperimentKind::decay;
    if (name == "correlators") return ExperimentKind::correlators;
    throw ConfigError("unknown experiment '" + name + "'");
}

const char* to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::rmt_fdt: return "rmt_fdt";
    case ExperimentKind::chain_fdt: return "chain_fdt";
    case ExperimentKind::scaling: return "scaling";
    case ExperimentKind::decay: return "decay";
    case ExperimentKind::correlators: return "correlators";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || !std::isfinite(x))
        throw ConfigError(key + ": expected a finite number, got '" + v + "'");
    return x;
}

long long to_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size())
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    unsigned long long x = 0;
    try {
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != v.size() || v.front() == '-')
        throw ConfigError(key + ": expected an unsigned 64-bit integer, got '" + v + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& key, const std::string& v, F conv) {
    std::vector<T> out;
    for (const auto& item : split_list(v))
        out.push_back(T(conv(key, item)));
    if (out.empty())
        throw ConfigError(key + ": list must not be empty");
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

struct KeySpec {
    std::string doc;
    Setter set;
};

const std::map<std::string, KeySpec>& key_table() {
    static const std::map<std::string, KeySpec> table = {
        {"experiment", {"rmt_fdt | chain_fdt | scaling | decay | correlators",
                        [](auto& c, auto&, auto& v) { c.experiment = parse_experiment(v); }}},
        {"master_seed", {"u64, required; per-point seeds are hash(master_seed, grid index)",
                         [](auto& c, auto& k, auto& v) { c.master_seed = to_u64(k, v); }}},
        {"output_dir", {"directory for CSV and SVG output", [](auto& c, auto&, auto& v) { c.output_dir = v; }}},
        {"t_max_factor", {"windowed time average length in units of 1/Gamma (default 100)",
                          [](auto& c, auto& k, auto& v) { c.t_max_factor = to_double(k, v); }}},
        {"n_time_samples", {"samples in the windowed time average (default 4096)",
                            [](auto& c, auto& k, auto& v) { c.n_time_samples = to_int(k, v); }}},
        {"observable", {"sigma_z_probe | o_odd | o_sym",
                        [](auto& c, auto&, auto& v) {
                            try {
                                c.observable = parse_observable(v);
                            } catch (const std::invalid_argument& e) {
                                throw ConfigError(std::string("observable: ") + e.what());
                            }
                        }}},
        {"estimator", {"integral | fit; source of inv_gamma",
                       [](auto& c, auto&, auto& v) {
                           try {
                               c.estimator = parse_estimator(v);
                           } catch (const std::invalid_argument& e) {
                               throw ConfigError(std::string("estimator: ") + e.what());
                           }
                       }}},
        {"sweep.g", {"RMT couplings g", [](auto& c, auto& k, auto& v) { c.sweep_g = to_list<double>(k, v, to_double); }}},
        {"sweep.g_sb", {"probe-device couplings (Jz_sb = Jx_sb = g_sb)",
                        [](auto& c, auto& k, auto& v) { c.sweep_g_sb = to_list<double>(k, v, to_double); }}},
        {"sweep.n_total", {"chain sizes including the probe",
                           [](auto& c, auto& k, auto& v) { c.sweep_n_total = to_list<int>(k, v, to_int); }}},
        {"sweep.beta", {"inverse temperatures", [](auto& c, auto& k, auto& v) { c.sweep_beta = to_list<double>(k, v, to_double); }}},
        {"rmt.n", {"RMT dimension N (even)", [](auto& c, auto& k, auto& v) { c.rmt_n = int(to_int(k, v)); }}},
        {"rmt.energy_cutoff", {"restrict the initial state to E_alpha >= e0",
                               [](auto& c, auto& k, auto& v) { c.rmt_energy_cutoff = to_bool(k, v); }}},
        {"rmt.e0_fraction", {"e0 = fraction * E_max (default 0.5)",
                             [](auto& c, auto& k, auto& v) { c.rmt_e0_fraction = to_double(k, v); }}},
        {"rmt.windowed_check", {"also evaluate the finite-window time average",
                                [](auto& c, auto& k, auto& v) { c.rmt_windowed_check = to_bool(k, v); }}},
        {"chain.n_m", {"device site coupled to the probe", [](auto& c, auto& k, auto& v) { c.chain.n_m = int(to_int(k, v)); }}},
        {"chain.bz", {"device longitudinal field", [](auto& c, auto& k, auto& v) { c.chain.bz = to_double(k, v); }}},
        {"chain.bx", {"device transverse field", [](auto& c, auto& k, auto& v) { c.chain.bx = to_double(k, v); }}},
        {"chain.jz", {"device zz coupling", [](auto& c, auto& k, auto& v) { c.chain.jz = to_double(k, v); }}},
        {"chain.jx", {"device flip-flop coupling", [](auto& c, auto& k, auto& v) { c.chain.jx = to_double(k, v); }}},
        {"chain.profile_states", {"bulk states used for the empirical Gamma(E) profile (0 = off)",
                                  [](auto& c, auto& k, auto& v) { c.chain_profile_states = int(to_int(k, v)); }}},
        {"gamma.integration_factor", {"final decay series spans factor / Gamma_hat (default 6)",
                                      [](auto& c, auto& k, auto& v) { c.gamma_integration_factor = to_double(k, v); }}},
        {"gamma.samples", {"samples in the final decay series",
                           [](auto& c, auto& k, auto& v) { c.gamma_samples = to_int(k, v); }}},
        {"gamma.max_attempts", {"integration windows tried, doubling T when the tail has not settled (default 4)",
                                [](auto& c, auto& k, auto& v) { c.gamma_max_attempts = to_int(k, v); }}},
        {"gamma.probe_samples", {"samples in each rate-probing series",
                                 [](auto& c, auto& k, auto& v) { c.gamma_probe_samples = to_int(k, v); }}},
        {"dynamics.max_time_domain_dim", {"largest D allowed on time-domain paths (default 2048)",
                                          [](auto& c, auto& k, auto& v) { c.max_time_domain_dim = to_int(k, v); }}},
        {"decay.t_end", {"decay curve length in units of 1/Gamma (default 3)",
                         [](auto& c, auto& k, auto& v) { c.decay_t_end = to_double(k, v); }}},
        {"decay.samples", {"samples per decay curve", [](auto& c, auto& k, auto& v) { c.decay_samples = to_int(k, v); }}},
        {"decay.observables", {"observables traced in the decay experiment",
                               [](auto& c, auto& k, auto& v) {
                                   c.decay_observables.clear();
                                   for (const auto& item : split_list(v)) {
                                       try {
                                           c.decay_observables.push_back(parse_observable(item));
                                       } catch (const std::invalid_argument& e) {
                                           throw ConfigError(k + ": " + e.what());
                                       }
                                   }
                               }}},
        {"correlators.realizations", {"ensemble size m", [](auto& c, auto& k, auto& v) { c.corr_realizations = int(to_int(k, v)); }}},
        {"correlators.probe_fraction", {"central fraction of eigenstates sampled",
                                        [](auto& c, auto& k, auto& v) { c.corr_probe_fraction = to_double(k, v); }}},
        {"correlators.probe_stride", {"stride between sampled eigenstates",
                                      [](auto& c, auto& k, auto& v) { c.corr_probe_stride = int(to_int(k, v)); }}},
        {"correlators.max_offset", {"intensity profile half-width in level spacings",
                                    [](auto& c, auto& k, auto& v) { c.corr_max_offset = int(to_int(k, v)); }}},
    };
    return table;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& config_keys() {
    static const auto keys = [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& [k, spec] : key_table())
            out.emplace_back(k, spec.doc);
        return out;
    }();
    return keys;
}

void ExperimentConfig::validate() const {
    if (!master_seed)
        throw ConfigError("master_seed is required");
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(t_max_factor > 0.0, "t_max_factor must be > 0");
    require(n_time_samples >= 100, "n_time_samples must be >= 100");
    require(!sweep_beta.empty(), "sweep.beta must not be empty");
    for (double b : sweep_beta)
        require(b >= 0.0, "sweep.beta entries must be >= 0");
    const bool rmt = experiment == ExperimentKind::rmt_fdt || experiment == ExperimentKind::decay ||
                     experiment == ExperimentKind::correlators;
    if (rmt) {
        require(!sweep_g.empty(), "sweep.g must not be empty");
        for (double g : sweep_g)
            require(g > 0.0, "sweep.g entries must be > 0");
        require(rmt_n >= 4 && rmt_n % 2 == 0, "rmt.n must be even and >= 4");
        require(rmt_e0_fraction >= 0.0 && rmt_e0_fraction < 1.0, "rmt.e0_fraction must lie in [0, 1)");
    } else {
        require(!sweep_g_sb.empty() && !sweep_n_total.empty(), "sweep.g_sb and sweep.n_total must not be empty");
        for (double g : sweep_g_sb)
            require(g > 0.0, "sweep.g_sb entries must be > 0");
        for (int n : sweep_n_total)
            require(n >= 3 && n <= 16, "sweep.n_total entries must lie in 3..16");
        require(chain.n_m >= 2, "chain.n_m must be >= 2");
        for (int n : sweep_n_total)
            require(chain.n_m <= n, "chain.n_m exceeds a sweep.n_total entry");
        require(chain_profile_states >= 0, "chain.profile_states must be >= 0");
    }
    require(gamma_integration_factor > 0.0, "gamma.integration_factor must be > 0");
    require(gamma_max_attempts >= 1, "gamma.max_attempts must be >= 1");
    require(gamma_samples >= 100 && gamma_probe_samples >= 16, "gamma.samples >= 100 and gamma.probe_samples >= 16 required");
    require(max_time_domain_dim >= 2, "dynamics.max_time_domain_dim must be >= 2");
    require(decay_t_end > 0.0 && decay_samples >= 2, "decay.t_end > 0 and decay.samples >= 2 required");
    require(!decay_observables.empty(), "decay.observables must not be empty");
    require(corr_realizations >= 50, "correlators.realizations must be >= 50");
    require(corr_probe_fraction > 0.0 && corr_probe_fraction <= 1.0, "correlators.probe_fraction must lie in (0, 1]");
    require(corr_probe_stride >= 1 && corr_max_offset >= 1, "correlators.probe_stride and max_offset must be >= 1");
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    bool kind_set = false;
    std::vector<std::pair<std::string, std::string>> entries;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key_table().contains(key))
            throw ConfigError(source + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (value.empty())
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty value for '" + key + "'");
        if (key == "experiment") {
            cfg = default_config(parse_experiment(value));
            kind_set = true;
        }
        entries.emplace_back(key, value);
    }
    if (!kind_set)
        throw ConfigError(source + ": missing 'experiment'");
    for (const auto& [k, v] : entries)
        key_table().at(k).set(cfg, k, v);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.experiment = kind;
    switch (kind) {
    case ExperimentKind::rmt_fdt:
        c.sweep_g = {0.05};
        c.sweep_beta = {0.0};
        break;
    case ExperimentKind::decay:
        c.sweep_g = {0.05};
        c.sweep_beta = {100.0};
        c.rmt_energy_cutoff = true;
        break;
    case ExperimentKind::correlators:
        c.rmt_n = 400;
        c.sweep_g = {0.05};
        break;
    case ExperimentKind::chain_fdt:
        c.sweep_n_total = {9};
        break;
    case ExperimentKind::scaling:
        c.sweep_n_total = {8, 9, 10, 11, 12};
        c.sweep_g_sb = {0.3};
        c.max_time_domain_dim = 4096;
        break;
    }
    return c;
}

}  // namespace ergoprobe
