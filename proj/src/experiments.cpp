#include "ergoprobe/experiments.hpp"
#include "ergoprobe/parallel.hpp"
#include "ergoprobe/rng.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace ergoprobe {

bool SweepResult::any_failed() const {
    for (const auto& p : points)
        if (p.failed)
            return true;
    return false;
}

namespace {

bool is_rmt(ExperimentKind k) {
    return k == ExperimentKind::rmt_fdt || k == ExperimentKind::decay || k == ExperimentKind::correlators;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

struct Prepared {
    VectorXd e_alpha;
    Spectrum<double> spectrum;
    SectorMask sector;
    double e0 = 0.0;
};

Prepared prepare_rmt(const ExperimentConfig& cfg, const GridPoint& gp) {
    const SplitHamiltonian h = build_rmt(RmtSpec::make(gp.n_total, gp.g, gp.seed));
    const NoninteractingFrame frame = noninteracting_frame(h);
    Prepared p{frame.energies, eigh(frame.hamiltonian()), odd_sector(frame.dim()), 0.0};
    if (cfg.rmt_energy_cutoff) {
        p.e0 = cfg.rmt_e0_fraction * p.e_alpha.maxCoeff();
        p.sector = energy_cutoff(p.sector, p.e_alpha, p.e0);
    } else {
        p.e0 = p.e_alpha(0);
    }
    return p;
}

Prepared prepare_chain(const ExperimentConfig& cfg, const GridPoint& gp) {
    SpinChainSpec spec = cfg.chain;
    spec.n_total = gp.n_total;
    spec.jz_sb = spec.jx_sb = gp.g;
    const NoninteractingFrame frame = noninteracting_frame(build_spin_chain(spec));
    Prepared p{frame.energies, eigh(frame.hamiltonian()), odd_sector(frame.dim()), 0.0};
    p.e0 = frame.energies(0);
    return p;
}

void fill_measurement(PointRecord& rec, const InverseGammaMeasurement& m, double delta2, double n_b,
                      double dos_bar) {
    rec.inv_gamma_integral = m.inv_gamma_integral;
    rec.inv_gamma_fit = m.inv_gamma_fit;
    rec.gamma_fit = m.gamma_fit;
    rec.fit_r2 = m.fit_r2;
    rec.series_t_end = m.t_end;
    rec.point.n_b = n_b;
    rec.point.delta2 = delta2;
    rec.point.dos_bar = dos_bar;
    const bool ok = rec.estimator == GammaEstimator::integral ? m.integral_ok : m.fit_ok;
    const double ig = rec.estimator == GammaEstimator::integral ? m.inv_gamma_integral : m.inv_gamma_fit;
    if (!m.diagnostic.empty())
        rec.diagnostic = m.diagnostic;
    if (ok && ig > 0.0) {
        rec.point = make_fdt_point(rec.grid.n_total, n_b, rec.grid.g, rec.grid.beta, delta2, ig, dos_bar);
    } else {
        rec.failed = true;
        rec.point.inv_gamma = kNaN;
        rec.point.chi = kNaN;
        if (rec.diagnostic.empty())
            rec.diagnostic = "inverse rate estimate unavailable";
    }
}

void run_rmt_point(const ExperimentConfig& cfg, PointRecord& rec) {
    const GridPoint& gp = rec.grid;
    const Prepared p = prepare_rmt(cfg, gp);
    const int n = gp.n_total;
    const double omega0 = 1.0 / n;
    const double n_b = n / 2.0;
    const double gamma = gamma_fgr(gp.g, n, omega0);
    const StateWeights w = thermal_weights(p.e_alpha, gp.beta, p.sector, p.e0);
    const DiagonalObservable o = make_observable(cfg.observable, n);
    const EigenbasisOperators ops = rotate_to_eigenbasis(w, o, p.spectrum);

    const double delta2 = fluctuations_infinite(ops);
    rec.o_free = free_evolution(w, o, p.e_alpha, 0.0);
    rec.o_de = diagonal_ensemble(ops);
    const double dos_bar = dos_average(p.spectrum.energies);

    rec.gamma_theory = gamma;
    rec.w_o = w_o_constant(observable_moments(o), regime_for(gp.beta, gamma));
    const FdtPrediction pred = predict_delta2_finite_T(
        rec.w_o, gp.beta, p.e_alpha, p.sector, [gamma](double) { return gamma; },
        [omega0](double) { return 1.0 / omega0; }, p.e0);
    rec.delta2_predicted = pred.delta2;
    rec.delta2_continuum = pred.delta2_continuum;
    rec.c_prime = pred.c_prime;
    rec.delta2_inf_t = predict_delta2_rmt_inf_T(rec.w_o, omega0, n_b, gamma);
    rec.chi_predicted = chi_prediction(rec.w_o / (4.0 * std::numbers::pi), n_b, dos_bar);

    if (cfg.rmt_windowed_check) {
        const WindowedFluctuations wf = fluctuations_windowed(ops, cfg.t_max_factor / gamma, cfg.n_time_samples,
                                                              cfg.max_time_domain_dim);
        rec.windowed_delta2 = wf.delta2_t;
        rec.windowed_mu = wf.mu_t;
    }

    if (cfg.experiment == ExperimentKind::decay) {
        const VectorXd times = uniform_grid(cfg.decay_t_end / gamma, cfg.decay_samples);
        for (ObservableKind kind : cfg.decay_observables) {
            const DiagonalObservable ok = make_observable(kind, n);
            const EigenbasisOperators dops = rotate_to_eigenbasis(w, ok, p.spectrum);
            DecayCurve c{kind, observable_series(dops, times, cfg.max_time_domain_dim), VectorXd(times.size())};
            c.o_free = free_evolution(w, ok, p.e_alpha, 0.0);
            c.o_de = diagonal_ensemble(dops);
            c.o_de_theory = observable_moments(ok).mean;
            for (Index i = 0; i < times.size(); ++i)
                c.predicted(i) = predict_decay(times(i), c.o_free, c.o_de_theory, gamma);
            c.max_abs_deviation = (c.measured.values - c.predicted).cwiseAbs().maxCoeff();
            rec.curves.push_back(std::move(c));
        }
    }

    const InverseGammaMeasurement m = measure_inverse_gamma(ops, rec.o_free, rec.o_de, 1.0 / gamma, cfg);
    fill_measurement(rec, m, delta2, n_b, dos_bar);
}

void run_chain_point(const ExperimentConfig& cfg, PointRecord& rec) {
    const GridPoint& gp = rec.grid;
    const Prepared p = prepare_chain(cfg, gp);
    const Index dim = p.e_alpha.size();
    const double n_b = double(dim / 2);
    const StateWeights w = thermal_weights(p.e_alpha, gp.beta, p.sector, p.e0);
    const DiagonalObservable o = make_observable(cfg.observable, dim);
    const EigenbasisOperators ops = rotate_to_eigenbasis(w, o, p.spectrum);

    const double delta2 = fluctuations_infinite(ops);
    rec.o_free = free_evolution(w, o, p.e_alpha, 0.0);
    rec.o_de = diagonal_ensemble(ops);
    const double dos_bar = dos_average(p.spectrum.energies);

    const InverseGammaMeasurement m = measure_inverse_gamma(ops, rec.o_free, rec.o_de, 1.0 / gp.g, cfg);
    fill_measurement(rec, m, delta2, n_b, dos_bar);

    const double gamma_hat = 1.0 / rec.point.inv_gamma;
    const TemperatureRegime regime =
        std::isfinite(gamma_hat) ? regime_for(gp.beta, gamma_hat) : TemperatureRegime::high_T;
    rec.w_o = w_o_constant(observable_moments(o), regime);
    rec.chi_predicted = chi_prediction(rec.w_o / (4.0 * std::numbers::pi), n_b, dos_bar);

    if (cfg.chain_profile_states > 0 && std::isfinite(gamma_hat)) {
        const auto probes = bulk_probe_states(p.e_alpha, cfg.chain_profile_states);
        const GammaProfile prof = empirical_gamma_profile(p.spectrum, p.e_alpha, probes, 3.0 / gamma_hat);
        if (!prof.energies.empty())
            rec.profile_slow_variation = prof.max_slow_variation();
    }
}

void run_correlator_point(const ExperimentConfig& cfg, PointRecord& rec, CorrelatorReport& report,
                          unsigned workers) {
    const RmtSpec spec = RmtSpec::make(rec.grid.n_total, rec.grid.g, rec.grid.seed);
    const auto probes = central_probes(spec.n, cfg.corr_probe_fraction, cfg.corr_probe_stride);
    report = correlator_ensemble(spec, cfg.corr_realizations, probes, cfg.corr_max_offset, workers);
    rec.point.n_b = spec.n / 2.0;
    rec.point.delta2 = kNaN;
    rec.point.inv_gamma = kNaN;
    rec.point.dos_bar = kNaN;
    rec.point.chi = kNaN;
    rec.gamma_theory = report.gamma_theory;
    rec.gamma_fit = report.gamma_fit;
}

void add_fits(SweepResult& res) {
    const auto& cfg = res.config;
    std::map<std::pair<double, double>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < res.points.size(); ++i) {
        const auto& p = res.points[i];
        if (p.failed)
            continue;
        if (cfg.experiment == ExperimentKind::scaling)
            groups[{p.grid.g, p.grid.beta}].push_back(i);
        else if (cfg.experiment == ExperimentKind::chain_fdt || cfg.experiment == ExperimentKind::rmt_fdt)
            groups[{double(p.grid.n_total), p.grid.beta}].push_back(i);
    }
    for (const auto& [key, members] : groups) {
        if (cfg.experiment == ExperimentKind::scaling) {
            std::vector<std::pair<double, double>> pts, pts_fit;
            for (std::size_t i : members) {
                const auto& p = res.points[i];
                pts.emplace_back(p.grid.n_total, p.point.chi * p.point.dos_bar);
                if (p.inv_gamma_fit > 0.0)
                    pts_fit.emplace_back(p.grid.n_total, p.point.delta2 / p.inv_gamma_fit * p.point.dos_bar);
            }
            const std::string label = "g_sb=" + fmt(key.first) + " beta=" + fmt(key.second);
            if (pts.size() >= 3)
                res.fits.push_back({label, "exponential", members, fit_exponential_scaling(pts)});
            if (pts_fit.size() >= 3 && cfg.estimator == GammaEstimator::integral)
                res.fits.push_back({label + " [decay-fit inverse rate]", "exponential", members,
                                    fit_exponential_scaling(pts_fit)});
        } else {
            if (members.size() < 2)
                continue;
            VectorXd x(members.size()), y(members.size());
            for (std::size_t j = 0; j < members.size(); ++j) {
                x(Index(j)) = res.points[members[j]].point.inv_gamma;
                y(Index(j)) = res.points[members[j]].point.delta2;
            }
            const std::string label = "n_total=" + fmt(key.first) + " beta=" + fmt(key.second);
            try {
                res.fits.push_back({label, "linear", members, linear_fit(x, y)});
            } catch (const std::invalid_argument&) {
            }
        }
    }
}

}  // namespace

std::vector<GridPoint> make_grid(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<GridPoint> grid;
    auto push = [&](int n, double g, double beta) {
        GridPoint gp{grid.size(), n, g, beta, 0};
        gp.seed = hash_combine(*cfg.master_seed, gp.index);
        grid.push_back(gp);
    };
    if (cfg.experiment == ExperimentKind::correlators) {
        for (double g : cfg.sweep_g)
            push(cfg.rmt_n, g, 0.0);
    } else if (is_rmt(cfg.experiment)) {
        for (double g : cfg.sweep_g)
            for (double b : cfg.sweep_beta)
                push(cfg.rmt_n, g, b);
    } else {
        for (int n : cfg.sweep_n_total)
            for (double g : cfg.sweep_g_sb)
                for (double b : cfg.sweep_beta)
                    push(n, g, b);
    }
    return grid;
}

InverseGammaMeasurement measure_inverse_gamma(const EigenbasisOperators& ops, double o_free, double o_de,
                                              double t_guess, const ExperimentConfig& cfg) {
    InverseGammaMeasurement m;
    const double amp = o_free - o_de;
    if (!(std::abs(amp) > 0.0)) {
        m.diagnostic = "observable does not move away from its diagonal-ensemble value";
        return m;
    }
    const Index probe_n = cfg.gamma_probe_samples;
    double t = t_guess;
    double gamma_hat = kNaN;
    for (int iter = 0; iter < 40; ++iter) {
        const TimeSeries ts = observable_series(ops, uniform_grid(t, probe_n), cfg.max_time_domain_dim);
        Index hit = -1;
        for (Index i = 0; i < ts.size(); ++i)
            if (std::abs(ts.values(i) - o_de) <= std::exp(-1.0) * std::abs(amp)) {
                hit = i;
                break;
            }
        if (hit < 0) {
            t *= 4.0;
        } else if (hit < 8) {
            t /= 4.0;
        } else {
            gamma_hat = 1.0 / (2.0 * ts.times(hit));
            break;
        }
    }
    if (!std::isfinite(gamma_hat)) {
        m.diagnostic = "no 1/e crossing found while probing the decay rate";
        return m;
    }

    double t_end = cfg.gamma_integration_factor / gamma_hat;
    for (int attempt = 0; attempt < cfg.gamma_max_attempts; ++attempt) {
        const TimeSeries ts = observable_series(ops, uniform_grid(t_end, cfg.gamma_samples), cfg.max_time_domain_dim);
        const FitResult f = fit_decay_rate(ts, o_de);
        m.fit_ok = !f.failed && f["gamma"] > 0.0;
        m.gamma_fit = f["gamma"];
        m.fit_r2 = f.r_squared;
        m.inv_gamma_fit = m.fit_ok ? 1.0 / m.gamma_fit : kNaN;
        m.diagnostic = f.failed ? f.diagnostic : "";
        m.t_end = t_end;
        // Integrate the decay up to its first arrival at o_de; past that point a finite
        // system sits below o_de for long stretches and the running integral drifts.
        const Index stop = first_settling_index(ts, o_free, o_de);
        if (stop < 0) {
            m.integral_ok = false;
            m.diagnostic = "integral_inverse_gamma: signal has not reached o_de by T = " + fmt(t_end) +
                           "; rerun with T >= " + fmt(2.0 * t_end);
            t_end *= 2.0;
            continue;
        }
        const Index len = std::max<Index>(stop + 1, 10);
        const TimeSeries head{ts.times.head(len), ts.values.head(len)};
        m.t_end = head.times(len - 1);
        try {
            m.inv_gamma_integral = integral_inverse_gamma(head, o_free, o_de);
            m.integral_ok = true;
        } catch (const ConvergenceError& e) {
            m.integral_ok = false;
            m.diagnostic = e.what();
        }
        break;
    }
    return m;
}

SweepResult run(const ExperimentConfig& cfg, unsigned workers) {
    SweepResult res;
    res.config = cfg;
    const auto grid = make_grid(cfg);
    res.points.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        res.points[i].grid = grid[i];
        res.points[i].estimator = cfg.estimator;
        res.points[i].point.n_total = grid[i].n_total;
        res.points[i].point.g_sb = grid[i].g;
        res.points[i].point.beta = grid[i].beta;
    }

    if (cfg.experiment == ExperimentKind::correlators) {
        res.correlators.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            try {
                run_correlator_point(cfg, res.points[i], res.correlators[i], workers);
            } catch (const std::exception& e) {
                res.points[i].failed = true;
                res.points[i].diagnostic = e.what();
            }
        }
        return res;
    }

    parallel_for(grid.size(), workers, [&](std::size_t i) {
        PointRecord& rec = res.points[i];
        try {
            if (is_rmt(cfg.experiment))
                run_rmt_point(cfg, rec);
            else
                run_chain_point(cfg, rec);
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.diagnostic = e.what();
        }
    });
    add_fits(res);
    return res;
}

}  // namespace ergoprobe
