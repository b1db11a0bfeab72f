#include "ergoprobe/models.hpp"
#include "ergoprobe/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ergoprobe {

void RmtSpec::validate() const {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("RmtSpec: N must be even and >= 4, got " + std::to_string(n));
    if (!(g >= 0.0) || !std::isfinite(g))
        throw std::invalid_argument("RmtSpec: g must be finite and >= 0");
    if (std::abs(omega0 - 1.0 / n) > 1e-15)
        throw std::invalid_argument("RmtSpec: omega0 must equal 1/N");
}

void SpinChainSpec::validate() const {
    if (n_total < 3)
        throw std::invalid_argument("SpinChainSpec: n_total must be >= 3");
    if (n_m < 2 || n_m > n_total)
        throw std::invalid_argument("SpinChainSpec: n_m must lie in 2..n_total");
    for (double p : {bz, bx, jz, jx, jz_sb, jx_sb})
        if (!std::isfinite(p))
            throw std::invalid_argument("SpinChainSpec: non-finite parameter");
}

SplitHamiltonian build_rmt(const RmtSpec& spec) {
    spec.validate();
    const Index n = spec.n;
    VectorXd diag = VectorXd::LinSpaced(n, 1.0, double(n)) * spec.omega0;

    MatrixXd v = MatrixXd::Zero(n, n);
    if (spec.g > 0.0) {
        const CounterRng rng(spec.seed, 0);
        const double s_off = spec.g / std::sqrt(double(n));
        const double s_diag = spec.g * std::sqrt(2.0 / double(n));
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < j; ++i) {
                const double x = s_off * rng.normal(std::uint64_t(i * n + j));
                v(i, j) = x;
                v(j, i) = x;
            }
            v(j, j) = s_diag * rng.normal(std::uint64_t(j * n + j));
        }
    }
    return {DenseSymMatrix(MatrixXd(diag.asDiagonal())), DenseSymMatrix(v)};
}

SplitHamiltonian build_spin_chain(const SpinChainSpec& spec, Index max_dim) {
    spec.validate();
    const int n = spec.n_total;
    const Index dim = Index{1} << n;
    if (dim > max_dim)
        throw std::length_error("build_spin_chain: 2^" + std::to_string(n) + " exceeds max dimension");

    using enum PauliKind;
    auto term = [&](std::vector<SiteOp> ops) { return site_product<double>(ops, n, max_dim); };

    MatrixXd hb = MatrixXd::Zero(dim, dim);
    for (int j = 2; j <= n; ++j) {
        if (spec.bz != 0.0) hb += spec.bz * term({{z, j}});
        if (spec.bx != 0.0) hb += spec.bx * term({{x, j}});
    }
    for (int j = 2; j < n; ++j) {
        if (spec.jz != 0.0) hb += spec.jz * term({{z, j}, {z, j + 1}});
        if (spec.jx != 0.0) hb += spec.jx * (term({{plus, j}, {minus, j + 1}}) + term({{minus, j}, {plus, j + 1}}));
    }

    MatrixXd hsb = MatrixXd::Zero(dim, dim);
    if (spec.jz_sb != 0.0) hsb += spec.jz_sb * term({{z, 1}, {z, spec.n_m}});
    if (spec.jx_sb != 0.0)
        hsb += spec.jx_sb * (term({{plus, 1}, {minus, spec.n_m}}) + term({{minus, 1}, {plus, spec.n_m}}));

    return {DenseSymMatrix(hb), DenseSymMatrix(hsb)};
}

DenseSymMatrix NoninteractingFrame::hamiltonian() const {
    MatrixXd h = v.matrix();
    h.diagonal() += energies;
    return DenseSymMatrix(h);
}

NoninteractingFrame noninteracting_frame(const SplitHamiltonian& h) {
    const Index dim = h.dim();
    if (h.v.dim() != dim)
        throw std::invalid_argument("noninteracting_frame: H0 and V dimensions differ");
    if (h.h0.is_diagonal())
        return {h.h0.matrix().diagonal(), h.v};
    if (dim % 2 != 0)
        throw std::invalid_argument("noninteracting_frame: odd dimension");

    const Index nb = dim / 2;
    auto half = [nb](Index s) { return Eigen::seqN(s, nb, 2); };
    const MatrixXd& h0 = h.h0.matrix();
    const MatrixXd device = h0(half(0), half(0));
    const MatrixXd down = h0(half(1), half(1));
    const MatrixXd mixed = h0(half(0), half(1));
    if (down != device || !mixed.isZero(0))
        throw std::invalid_argument("noninteracting_frame: H0 does not act trivially on the probe");

    const Spectrum<double> sb = eigh(DenseSymMatrix(device));
    const MatrixXd& u = sb.vectors;
    const MatrixXd& v = h.v.matrix();
    MatrixXd vt(dim, dim);
    for (Index s = 0; s < 2; ++s)
        for (Index sp = 0; sp < 2; ++sp) {
            const MatrixXd block = v(half(s), half(sp));
            vt(half(s), half(sp)) = u.transpose() * block * u;
        }
    VectorXd e(dim);
    for (Index b = 0; b < nb; ++b)
        e(2 * b) = e(2 * b + 1) = sb.energies(b);
    return {e, DenseSymMatrix(vt)};
}

SectorMask odd_sector(Index dim) {
    SectorMask m(dim, false);
    for (Index i = 0; i < dim; i += 2)
        m[i] = true;
    return m;
}

SectorMask energy_cutoff(SectorMask sector, const VectorXd& energies, double e0) {
    if (Index(sector.size()) != energies.size())
        throw std::invalid_argument("energy_cutoff: size mismatch");
    for (Index i = 0; i < energies.size(); ++i)
        if (energies(i) < e0)
            sector[i] = false;
    return sector;
}

StateWeights thermal_weights(const VectorXd& energies, double beta, const SectorMask& sector, double e0) {
    if (Index(sector.size()) != energies.size())
        throw std::invalid_argument("thermal_weights: sector mask size mismatch");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("thermal_weights: beta must be finite and >= 0");
    StateWeights sw{VectorXd::Zero(energies.size()), beta, e0, sector};
    bool any = false;
    for (Index i = 0; i < energies.size(); ++i) {
        if (!sector[i])
            continue;
        any = true;
        sw.w(i) = beta == 0.0 ? 1.0 : std::exp(-beta * (energies(i) - e0));
    }
    if (!any)
        throw std::invalid_argument("thermal_weights: empty sector");
    const double z = sw.w.sum();
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::range_error("thermal_weights: Boltzmann factors " + std::string(z > 0.0 ? "overflow" : "underflow") +
                               " at beta = " + std::to_string(beta) +
                               "; move e0 closer to the sector energies or lower beta");
    sw.w /= z;
    return sw;
}

ObservableKind parse_observable(std::string_view name) {
    if (name == "sigma_z_probe") return ObservableKind::sigma_z_probe;
    if (name == "o_odd") return ObservableKind::o_odd;
    if (name == "o_sym") return ObservableKind::o_sym;
    throw std::invalid_argument("unknown observable '" + std::string(name) + "'");
}

std::string_view to_string(ObservableKind kind) {
    switch (kind) {
    case ObservableKind::sigma_z_probe: return "sigma_z_probe";
    case ObservableKind::o_odd: return "o_odd";
    case ObservableKind::o_sym: return "o_sym";
    }
    return "?";
}

DiagonalObservable make_observable(ObservableKind kind, Index dim) {
    if (dim < 2 || dim % 2 != 0)
        throw std::invalid_argument("make_observable: dimension must be even");
    DiagonalObservable o{VectorXd(dim)};
    for (Index i = 0; i < dim; ++i) {
        const bool up = i % 2 == 0;
        o.d(i) = kind == ObservableKind::o_odd ? (up ? 1.0 : 0.0) : (up ? 1.0 : -1.0);
    }
    return o;
}

}  // namespace ergoprobe
