#include "ergoprobe/correlators.hpp"
#include "ergoprobe/parallel.hpp"
#include "ergoprobe/rng.hpp"
#include "ergoprobe/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergoprobe {

namespace {

// Non-interacting level closest to energy e; levels are sorted ascending.
Index nearest_level(const VectorXd& levels, double e) {
    const double* first = levels.data();
    const double* last = first + levels.size();
    const double* it = std::lower_bound(first, last, e);
    if (it == last)
        return levels.size() - 1;
    if (it != first && e - *(it - 1) < *it - e)
        --it;
    return Index(it - first);
}

struct Realization {
    std::vector<double> bin_sum;     // c^2 summed over probes
    std::vector<double> bin_sq;      // per-probe-averaged c^2, squared, for the standard error
    std::vector<double> bin_offset;  // actual (E_alpha - E_mu) / omega0
    std::vector<int> bin_count;
    std::vector<double> pair_value;
    std::vector<double> cross;       // c_mu(a) c_nu(a) for adjacent probes, |a - mu| <= max_offset
    VectorXd energies;
    double norm_error = 0.0;
};

}  // namespace

std::vector<Index> central_probes(int n, double fraction, int stride) {
    if (n < 2 || !(fraction > 0.0 && fraction <= 1.0) || stride < 1)
        throw std::invalid_argument("central_probes: bad arguments");
    const int half = int(0.5 * fraction * n);
    std::vector<Index> out;
    for (int i = n / 2 - half; i < n / 2 + half; i += stride)
        out.push_back(i);
    return out;
}

double fit_lorentzian_width(const std::vector<double>& x, const std::vector<double>& profile, double omega0,
                            double g_lo, double g_hi) {
    auto sse = [&](double g) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = profile[i] - lambda_lorentzian(x[i], 0.0, g, omega0);
            s += r * r;
        }
        return s;
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = g_lo, b = g_hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = sse(c), fd = sse(d);
    for (int it = 0; it < 200 && (b - a) > 1e-12 * (std::abs(a) + std::abs(b)); ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a); fc = sse(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a); fd = sse(d);
        }
    }
    return 0.5 * (a + b);
}

CorrelatorReport correlator_ensemble(const RmtSpec& spec, int m_realizations, const std::vector<Index>& probes,
                                     int max_offset, unsigned workers) {
    spec.validate();
    if (m_realizations < 50)
        throw std::invalid_argument("correlator_ensemble: need at least 50 realizations");
    if (probes.size() < 2)
        throw std::invalid_argument("correlator_ensemble: need at least 2 probe states");
    for (Index p : probes)
        if (p < 0 || p >= spec.n)
            throw std::out_of_range("correlator_ensemble: probe index out of range");

    const int nbins = 2 * max_offset + 1;
    const std::size_t np = probes.size();
    std::vector<std::pair<std::size_t, std::size_t>> pair_idx;
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = i + 1; j < np; ++j)
            pair_idx.emplace_back(i, j);

    std::vector<Realization> runs(static_cast<std::size_t>(m_realizations));
    parallel_for(runs.size(), workers, [&](std::size_t r) {
        RmtSpec s = spec;
        s.seed = hash_combine(spec.seed, r);
        const SplitHamiltonian h = build_rmt(s);
        const Spectrum<double> sp = eigh(h.h0 + h.v);
        const MatrixXd& q = sp.vectors;
        const VectorXd e0 = h.h0.matrix().diagonal();
        Realization out;
        out.bin_sum.assign(nbins, 0.0);
        out.bin_sq.assign(nbins, 0.0);
        out.bin_offset.assign(nbins, 0.0);
        out.bin_count.assign(nbins, 0);
        out.energies = sp.energies;
        out.norm_error = (q.colwise().squaredNorm().array() - 1.0).abs().maxCoeff();

        for (Index mu : probes) {
            for (Index a = 0; a < s.n; ++a) {
                const double off = (e0(a) - sp.energies(mu)) / s.omega0;
                const long k = std::lround(off);
                if (std::abs(k) > max_offset)
                    continue;
                const std::size_t b = std::size_t(k + max_offset);
                out.bin_sum[b] += q(a, mu) * q(a, mu);
                out.bin_offset[b] += off;
                ++out.bin_count[b];
            }
        }
        for (int b = 0; b < nbins; ++b)
            if (out.bin_count[b] > 0) {
                const double v = out.bin_sum[b] / out.bin_count[b];
                out.bin_sq[b] = v * v;
            }
        // Coincident pattern with alpha, alpha' the levels resonant with mu and nu in this realization.
        // Summing the pattern over all alpha != alpha' instead would give -sum_a c_mu^2 c_nu^2 by
        // orthogonality, negative by construction.
        for (const auto& [i, j] : pair_idx) {
            const Index mu = probes[i], nu = probes[j];
            const Index a = nearest_level(e0, sp.energies(mu));
            const Index ap = nearest_level(e0, sp.energies(nu));
            out.pair_value.push_back(q(a, mu) * q(a, nu) * (q(ap, mu) * q(ap, nu)));
        }
        for (std::size_t i = 0; i + 1 < np; ++i) {
            const Index mu = probes[i];
            for (Index a = std::max<Index>(0, mu - max_offset); a <= std::min<Index>(s.n - 1, mu + max_offset); ++a)
                out.cross.push_back(q(a, mu) * q(a, probes[i + 1]));
        }
        runs[r] = std::move(out);
    });

    CorrelatorReport rep;
    rep.realizations = m_realizations;
    rep.gamma_theory = gamma_fgr(spec.g, spec.n, spec.omega0);
    const double m = double(m_realizations);

    VectorXd mean_e = VectorXd::Zero(spec.n);
    std::vector<double> sum(nbins, 0.0), sq(nbins, 0.0), off(nbins, 0.0);
    std::vector<long> cnt(nbins, 0);
    std::vector<double> psum(pair_idx.size(), 0.0), psq(pair_idx.size(), 0.0);
    std::vector<double> cross_sum;
    for (const Realization& r : runs) {
        rep.max_norm_error = std::max(rep.max_norm_error, r.norm_error);
        mean_e += r.energies / m;
        for (int b = 0; b < nbins; ++b) {
            sum[b] += r.bin_sum[b];
            sq[b] += r.bin_sq[b];
            off[b] += r.bin_offset[b];
            cnt[b] += r.bin_count[b];
        }
        for (std::size_t p = 0; p < pair_idx.size(); ++p) {
            psum[p] += r.pair_value[p];
            psq[p] += r.pair_value[p] * r.pair_value[p];
        }
        if (cross_sum.size() < r.cross.size())
            cross_sum.resize(r.cross.size(), 0.0);
        for (std::size_t i = 0; i < r.cross.size(); ++i)
            cross_sum[i] += r.cross[i];
    }

    for (int b = 0; b < nbins; ++b) {
        if (cnt[b] == 0)
            continue;
        const double mean = sum[b] / double(cnt[b]);
        const double var = std::max(0.0, sq[b] / m - mean * mean);
        rep.offsets.push_back(off[b] / double(cnt[b]));
        rep.profile.push_back(mean);
        rep.profile_stderr.push_back(std::sqrt(var / m));
    }
    std::vector<double> x(rep.offsets.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rep.offsets[i] * spec.omega0;
        rep.profile_theory.push_back(lambda_lorentzian(x[i], 0.0, rep.gamma_theory, spec.omega0));
    }
    rep.gamma_fit = fit_lorentzian_width(x, rep.profile, spec.omega0, 0.1 * rep.gamma_theory, 10.0 * rep.gamma_theory);

    const double peak = *std::max_element(rep.profile.begin(), rep.profile.end());
    for (double c : cross_sum)
        rep.max_cross_mean = std::max(rep.max_cross_mean, std::abs(c / m) / peak);

    const SplitHamiltonian h0 = build_rmt(RmtSpec::make(spec.n, 0.0, spec.seed));
    const CorrelatorContext ctx{rep.gamma_theory, spec.omega0, h0.h0.matrix().diagonal(), mean_e};
    for (std::size_t p = 0; p < pair_idx.size(); ++p) {
        const Index mu = probes[pair_idx[p].first];
        const Index nu = probes[pair_idx[p].second];
        const Index a = nearest_level(ctx.e_alpha, mean_e(mu));
        const Index ap = nearest_level(ctx.e_alpha, mean_e(nu));
        const double mean = psum[p] / m;
        const double var = std::max(0.0, psq[p] / m - mean * mean);
        rep.pairs.push_back({mu, nu, a, ap, mean, std::sqrt(var / m), four_point(mu, nu, a, a, ap, ap, ctx)});
        if (mean < 0.0)
            ++rep.negative_pairs;
    }
    return rep;
}

}  // namespace ergoprobe
