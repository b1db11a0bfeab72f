#include "ergoprobe/theory.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ergoprobe {

using std::numbers::pi;

ObservableMoments observable_moments(const DiagonalObservable& o) {
    if (o.d.size() < 2)
        throw std::invalid_argument("observable_moments: empty observable");
    return {o.d.mean(), o.d.squaredNorm() / double(o.d.size()), o.d(0)};
}

TemperatureRegime regime_for(double beta, double gamma) {
    return beta * gamma >= 1.0 ? TemperatureRegime::low_T : TemperatureRegime::high_T;
}

double gamma_fgr(double g, int n, double omega0) {
    if (g < 0.0 || !(omega0 > 0.0) || n < 1)
        throw std::invalid_argument("gamma_fgr: need g >= 0, omega0 > 0, N >= 1");
    return pi * g * g / (n * omega0);
}

double lambda_lorentzian(double e_mu, double e_alpha, double gamma, double omega0, int n) {
    if (!(gamma > 0.0) || n < 1)
        throw std::invalid_argument("lambda_lorentzian: need gamma > 0 and n >= 1");
    const double w = n * gamma;
    const double de = e_mu - e_alpha;
    return (omega0 * w / pi) / (de * de + w * w);
}

double four_point(Index mu, Index nu, Index a, Index b, Index ap, Index bp, const CorrelatorContext& ctx) {
    auto lam = [&](Index m, Index al) { return lambda_lorentzian(ctx.e_mu(m), ctx.e_alpha(al), ctx.gamma, ctx.omega0); };
    if (mu == nu) {
        double r = 0.0;
        if (a == b && ap == bp) r += lam(mu, a) * lam(mu, ap);
        if (a == ap && b == bp) r += lam(mu, a) * lam(mu, b);
        if (a == bp && ap == b) r += lam(mu, a) * lam(mu, b);
        return r;
    }
    double r = (a == ap && b == bp) ? lam(mu, a) * lam(nu, b) : 0.0;
    const int patterns = int(a == b && ap == bp) + int(a == bp && b == ap);
    if (patterns > 0) {
        const double l2 = lambda_lorentzian(ctx.e_mu(mu), ctx.e_mu(nu), ctx.gamma, ctx.omega0, 2);
        r -= patterns * ((lam(mu, a) * lam(nu, b)) * (lam(mu, ap) * lam(nu, bp))) / l2;
    }
    return r;
}

double w_o_constant(const ObservableMoments& m, TemperatureRegime regime) {
    if (regime == TemperatureRegime::low_T)
        return m.mean_sq - m.mean * m.mean;
    return m.mean_sq + m.o_up * m.o_up + 1.5 * m.mean * m.mean - m.mean * m.mean - 2.0 * m.mean * m.o_up -
           0.5 * m.mean_sq;
}

double predict_decay(double t, double o_free, double o_de, double gamma) {
    if (gamma < 0.0)
        throw std::invalid_argument("predict_decay: gamma must be >= 0");
    return (o_free - o_de) * std::exp(-2.0 * gamma * t) + o_de;
}

double predict_delta2_rmt_inf_T(double w_o, double omega0, double n_b, double gamma) {
    return w_o * omega0 / (4.0 * pi * n_b * gamma);
}

double adaptive_trapezoid(const std::function<double(double)>& f, double a, double b, double rtol) {
    if (!(b > a))
        return 0.0;
    Index n = Index{1} << 12;
    double h = (b - a) / double(n);
    double sum = 0.5 * (f(a) + f(b));
    for (Index i = 1; i < n; ++i)
        sum += f(a + double(i) * h);
    double est = sum * h;
    for (int level = 0; level < 10; ++level) {
        double mid = 0.0;
        for (Index i = 0; i < n; ++i)
            mid += f(a + (double(i) + 0.5) * h);
        sum += mid;
        n *= 2;
        h *= 0.5;
        const double next = sum * h;
        const bool done = std::abs(next - est) <= rtol * std::abs(next);
        est = next;
        if (done)
            break;
    }
    return est;
}

FdtPrediction predict_delta2_finite_T(double w_o, double beta, const VectorXd& energies, const SectorMask& sector,
                                      const EnergyFunction& gamma_of_e, const EnergyFunction& dos_of_e, double e0) {
    if (!(beta >= 0.0))
        throw std::invalid_argument("predict_delta2_finite_T: beta must be >= 0");
    if (Index(sector.size()) != energies.size())
        throw std::invalid_argument("predict_delta2_finite_T: sector size mismatch");

    FdtPrediction p;
    p.w_o = w_o;
    p.c_const = w_o / (4.0 * pi);
    p.beta = beta;
    p.n_b = double(energies.size()) / 2.0;
    p.dos_bar = double(energies.size()) / (energies.maxCoeff() - energies.minCoeff());

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double z = 0.0, z2 = 0.0, e_mean = 0.0, level_sum = 0.0;
    for (Index i = 0; i < energies.size(); ++i) {
        if (!sector[i])
            continue;
        const double e = energies(i);
        const double b = std::exp(-beta * (e - e0));
        z += b;
        z2 += b * b;
        e_mean += b * e;
        level_sum += b * b / (dos_of_e(e) * gamma_of_e(e));
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::range_error("predict_delta2_finite_T: Z_beta " + std::string(z > 0.0 ? "overflows" : "underflows") +
                               " at beta = " + std::to_string(beta) + "; shift e0 toward the sector energies");
    p.z_beta = z;
    p.gamma = gamma_of_e(e_mean / z);
    p.delta2 = p.c_const * level_sum / (z * z);

    // Each sector level owns a cell of width 1/D(E) on either side.
    const double a = lo - 1.0 / dos_of_e(lo);
    const double b = hi + 1.0 / dos_of_e(hi);
    auto boltz = [&](double e) { return std::exp(-2.0 * beta * (e - e0)); };
    p.delta_e_prime = adaptive_trapezoid(boltz, a, b);
    p.z_prime_2beta = adaptive_trapezoid([&](double e) { return dos_of_e(e) * boltz(e); }, a, b);
    const double inv_dg = adaptive_trapezoid([&](double e) { return boltz(e) / gamma_of_e(e); }, a, b);
    const double inv_g = adaptive_trapezoid([&](double e) { return dos_of_e(e) * boltz(e) / gamma_of_e(e); }, a, b);
    const double d2 = adaptive_trapezoid([&](double e) { return dos_of_e(e) * dos_of_e(e) * boltz(e); }, a, b);
    // <<1/(D Gamma)>>, <<D>>, <<1/Gamma>> at 2 beta
    const double avg_inv_dg = inv_dg / p.z_prime_2beta;
    const double avg_d = d2 / p.z_prime_2beta;
    const double avg_inv_g = inv_g / p.z_prime_2beta;
    p.c_prime = avg_inv_dg * avg_d / avg_inv_g;
    p.delta2_continuum = w_o * p.z_prime_2beta * avg_inv_dg / (8.0 * pi * z * z);
    return p;
}

double chi_prediction(double c_const, double n_b, double dos_bar) {
    return c_const / (n_b * dos_bar);
}

}  // namespace ergoprobe
