#pragma once

#include "ergoprobe/models.hpp"

#include <vector>

namespace ergoprobe {

struct PairStatistic {
    Index mu, nu;
    Index alpha, alpha_p;  // levels resonant with mu and nu
    double measured;       // ensemble mean of c_mu(alpha) c_nu(alpha) c_mu(alpha') c_nu(alpha')
    double stderr_;
    double theory;
};

struct CorrelatorReport {
    int realizations = 0;
    double gamma_theory = 0.0;
    double gamma_fit = 0.0;
    double max_norm_error = 0.0;   // max over realizations and mu of |sum_a c_mu(a)^2 - 1|
    double max_cross_mean = 0.0;   // max |<c_mu(a) c_nu(a)>| for mu != nu, in units of the peak <c^2>
    std::vector<double> offsets;   // (E_alpha - E_mu) / omega0 bins
    std::vector<double> profile;   // <c_mu(alpha)^2>
    std::vector<double> profile_stderr;
    std::vector<double> profile_theory;
    std::vector<PairStatistic> pairs;
    int negative_pairs = 0;

    double width_rel_error() const { return gamma_fit / gamma_theory - 1.0; }
    double negative_fraction() const { return pairs.empty() ? 0.0 : double(negative_pairs) / double(pairs.size()); }
};

// Probes are eigenstate indices mu; realization r uses seed hash(spec.seed, r).
CorrelatorReport correlator_ensemble(const RmtSpec& spec, int m_realizations, const std::vector<Index>& probes,
                                     int max_offset = 40, unsigned workers = 1);

// Every `stride`-th eigen index in the central `fraction` of the spectrum.
std::vector<Index> central_probes(int n, double fraction, int stride);

// One-parameter least-squares width of (omega0 G / pi) / (x^2 + G^2) against profile(x).
double fit_lorentzian_width(const std::vector<double>& x, const std::vector<double>& profile, double omega0,
                            double g_lo, double g_hi);

}  // namespace ergoprobe
