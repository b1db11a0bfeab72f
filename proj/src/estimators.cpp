#include "ergoprobe/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ergoprobe {

GammaEstimator parse_estimator(const std::string& name) {
    if (name == "integral") return GammaEstimator::integral;
    if (name == "fit") return GammaEstimator::fit;
    throw std::invalid_argument("unknown estimator '" + name + "' (expected integral or fit)");
}

const char* to_string(GammaEstimator e) {
    return e == GammaEstimator::integral ? "integral" : "fit";
}

namespace {

struct Ols {
    double slope, intercept, r2, resid;
};

Ols ols(const VectorXd& x, const VectorXd& y) {
    const double mx = x.mean();
    const double my = y.mean();
    const VectorXd dx = x.array() - mx;
    const VectorXd dy = y.array() - my;
    const double sxx = dx.squaredNorm();
    if (!(sxx > 0.0))
        throw std::invalid_argument("linear fit: x has zero variance");
    const double slope = dx.dot(dy) / sxx;
    const double intercept = my - slope * mx;
    const VectorXd r = y - (slope * x).array().matrix() - VectorXd::Constant(y.size(), intercept);
    const double syy = dy.squaredNorm();
    const double r2 = syy > 0.0 ? std::clamp(1.0 - r.squaredNorm() / syy, 0.0, 1.0) : 1.0;
    return {slope, intercept, r2, r.norm()};
}

}  // namespace

FitResult fit_decay_rate(const TimeSeries& series, double o_de, double window_fraction) {
    FitResult fr;
    fr.params["gamma"] = 0.0;
    const Index n = series.size();
    if (n < 3) {
        fr.failed = true;
        fr.diagnostic = "series shorter than 3 samples";
        return fr;
    }
    const double a0 = std::abs(series.values(0) - o_de);
    if (!(a0 > 0.0)) {
        fr.failed = true;
        fr.diagnostic = "no initial displacement from the diagonal ensemble";
        return fr;
    }
    Index m = 0;
    while (m < n && std::abs(series.values(m) - o_de) >= window_fraction * a0)
        ++m;
    if (m < 3) {
        fr.failed = true;
        fr.diagnostic = "fit window holds fewer than 3 samples; refine the time grid";
        return fr;
    }
    const VectorXd x = series.times.head(m);
    const VectorXd y = (series.values.head(m).array() - o_de).abs().log().matrix();
    const Ols f = ols(x, y);
    fr.params["gamma"] = -0.5 * f.slope;
    fr.params["amplitude"] = std::exp(f.intercept);
    fr.r_squared = f.r2;
    fr.residual_norm = f.resid;
    if (!(f.slope < 0.0)) {
        fr.failed = true;
        fr.diagnostic = "non-decaying series (slope >= 0)";
    }
    return fr;
}

double integral_inverse_gamma(const TimeSeries& series, double o_free, double o_de, double tail_tolerance) {
    const double amp = o_free - o_de;
    if (!(std::abs(amp) > 0.0))
        throw std::invalid_argument("integral_inverse_gamma: o_free equals o_de, nothing decays");
    const Index n = series.size();
    if (n < 10)
        throw std::invalid_argument("integral_inverse_gamma: need at least 10 samples");
    const double t_end = series.times(n - 1);
    const double last = std::abs(series.values(n - 1) - o_de) / std::abs(amp);
    if (last > tail_tolerance) {
        std::ostringstream os;
        os << "integral_inverse_gamma: tail not converged at T = " << t_end << " (|y(T) - o_de| is " << last
           << " of the initial displacement, limit " << tail_tolerance << "); rerun with T >= " << 2.0 * t_end;
        throw ConvergenceError(os.str(), 2.0 * t_end);
    }
    const VectorXd dev = series.values.array() - o_de;
    return 2.0 * trapezoid(series.times, dev) / amp;
}

Index first_settling_index(const TimeSeries& series, double o_free, double o_de) {
    const double amp = o_free - o_de;
    for (Index i = 1; i < series.size(); ++i)
        if ((series.values(i) - o_de) / amp <= 0.0)
            return i;
    return -1;
}

double dos_average(const VectorXd& energies) {
    const double span = energies.maxCoeff() - energies.minCoeff();
    if (!(span > 0.0))
        throw std::invalid_argument("dos_average: zero spectral span");
    return double(energies.size()) / span;
}

double GammaProfile::operator()(double e) const {
    if (energies.empty())
        throw std::logic_error("GammaProfile: no successful probe states");
    if (e <= energies.front()) return gammas.front();
    if (e >= energies.back()) return gammas.back();
    const auto it = std::upper_bound(energies.begin(), energies.end(), e);
    const std::size_t i = std::size_t(it - energies.begin());
    const double f = (e - energies[i - 1]) / (energies[i] - energies[i - 1]);
    return gammas[i - 1] + f * (gammas[i] - gammas[i - 1]);
}

double GammaProfile::max_slow_variation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < energies.size(); ++i) {
        const double g = gammas[i];
        worst = std::max(worst, std::abs(g - (*this)(energies[i] + g)) / g);
    }
    return worst;
}

std::vector<Index> bulk_probe_states(const VectorXd& energies_h0, int count) {
    const double lo = energies_h0.minCoeff();
    const double hi = energies_h0.maxCoeff();
    const double a = lo + 0.2 * (hi - lo);
    const double b = hi - 0.2 * (hi - lo);
    std::vector<Index> bulk;
    for (Index i = 0; i < energies_h0.size(); i += 2)
        if (energies_h0(i) >= a && energies_h0(i) <= b)
            bulk.push_back(i);
    std::sort(bulk.begin(), bulk.end(), [&](Index x, Index y) {
        return energies_h0(x) < energies_h0(y) || (energies_h0(x) == energies_h0(y) && x < y);
    });
    if (count <= 0 || bulk.empty())
        return {};
    std::vector<Index> out;
    const std::size_t k = std::min<std::size_t>(std::size_t(count), bulk.size());
    for (std::size_t j = 0; j < k; ++j)
        out.push_back(bulk[(2 * j + 1) * bulk.size() / (2 * k)]);
    return out;
}

GammaProfile empirical_gamma_profile(const Spectrum<double>& spec, const VectorXd& energies_h0,
                                     const std::vector<Index>& probes, double t_end, Index n_samples) {
    const Index d = spec.dim();
    if (energies_h0.size() != d)
        throw std::invalid_argument("empirical_gamma_profile: dimension mismatch");
    const double lo = energies_h0.minCoeff();
    const double hi = energies_h0.maxCoeff();
    const VectorXd times = uniform_grid(t_end, n_samples);
    VectorXd sz(d);
    for (Index i = 0; i < d; ++i)
        sz(i) = i % 2 == 0 ? 1.0 : -1.0;
    const MatrixXd& q = spec.vectors;
    const VectorXd o_diag = q.cwiseAbs2().transpose() * sz;
    const MatrixXd phase = spec.energies * times.transpose();
    const MatrixXd cos_p = phase.array().cos().matrix();
    const MatrixXd sin_p = phase.array().sin().matrix();

    std::vector<std::pair<double, double>> samples;
    GammaProfile prof;
    for (Index alpha : probes) {
        if (alpha < 0 || alpha >= d)
            throw std::out_of_range("empirical_gamma_profile: probe index out of range");
        const double e = energies_h0(alpha);
        if (e < lo + 0.2 * (hi - lo) || e > hi - 0.2 * (hi - lo))
            continue;
        const VectorXd c = q.row(alpha).transpose();
        const double o_de = c.cwiseAbs2().dot(o_diag);
        // amplitudes <phi_beta| e^{-iHt} |phi_alpha> for all beta at once
        const MatrixXd re = q * (cos_p.array().colwise() * c.array()).matrix();
        const MatrixXd im = q * (sin_p.array().colwise() * c.array()).matrix();
        TimeSeries ts{times, (re.array().square() + im.array().square()).matrix().transpose() * sz};
        const FitResult f = fit_decay_rate(ts, o_de);
        if (f.failed || !(f["gamma"] > 0.0)) {
            ++prof.failed_states;
            continue;
        }
        samples.emplace_back(e, f["gamma"]);
    }
    std::sort(samples.begin(), samples.end());
    for (const auto& [e, g] : samples) {
        if (!prof.energies.empty() && e == prof.energies.back())
            continue;
        prof.energies.push_back(e);
        prof.gammas.push_back(g);
    }
    return prof;
}

double chi_estimate(double delta2, double inv_gamma) {
    if (!(inv_gamma > 0.0))
        throw std::invalid_argument("chi_estimate: inverse rate must be positive");
    return delta2 / inv_gamma;
}

FdtPoint make_fdt_point(int n_total, double n_b, double g_sb, double beta, double delta2, double inv_gamma,
                        double dos_bar) {
    return {n_total, n_b, g_sb, beta, delta2, inv_gamma, dos_bar, chi_estimate(delta2, inv_gamma)};
}

FitResult fit_exponential_scaling(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw std::invalid_argument("fit_exponential_scaling: need at least 3 points");
    VectorXd x(points.size()), y(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].second > 0.0))
            throw std::invalid_argument("fit_exponential_scaling: nonpositive y at N = " +
                                        std::to_string(points[i].first));
        x(Index(i)) = points[i].first;
        y(Index(i)) = std::log(points[i].second);
    }
    const Ols f = ols(x, y);
    FitResult fr;
    fr.params["a"] = std::exp(f.intercept);
    fr.params["c"] = -f.slope;
    fr.r_squared = f.r2;
    fr.residual_norm = f.resid;
    return fr;
}

FitResult linear_fit(const VectorXd& x, const VectorXd& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need matching vectors of length >= 2");
    const Ols f = ols(x, y);
    FitResult fr;
    fr.params["slope"] = f.slope;
    fr.params["intercept"] = f.intercept;
    fr.r_squared = f.r2;
    fr.residual_norm = f.resid;
    return fr;
}

}  // namespace ergoprobe
