#pragma once

#include "ergoprobe/linalg.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace ergoprobe {

struct RmtSpec {
    int n = 500;
    double g = 0.05;
    double omega0 = 1.0 / 500;
    std::uint64_t seed = 0;

    static RmtSpec make(int n, double g, std::uint64_t seed) { return {n, g, 1.0 / n, seed}; }
    void validate() const;
};

struct SpinChainSpec {
    int n_total = 9;
    int n_m = 2;
    double bz = 0.1;
    double bx = 0.3;
    double jz = 0.3;
    double jx = 0.3;
    double jz_sb = 0.1;
    double jx_sb = 0.1;

    void validate() const;
    int n_device() const { return n_total - 1; }
};

// H = h0 + v, both in the product basis |probe> x |device>.
struct SplitHamiltonian {
    DenseSymMatrix h0;
    DenseSymMatrix v;

    Index dim() const { return h0.dim(); }
};

SplitHamiltonian build_rmt(const RmtSpec& spec);
SplitHamiltonian build_spin_chain(const SpinChainSpec& spec, Index max_dim = kDefaultMaxDim);

// H0 eigenbasis phi_alpha with alpha - 1 = 2 * (device level) + s, s = 0 for probe up.
struct NoninteractingFrame {
    VectorXd energies;  // E_alpha
    DenseSymMatrix v;   // V in the phi_alpha basis

    Index dim() const { return energies.size(); }
    DenseSymMatrix hamiltonian() const;
};

// H0 must be either diagonal or of the form H_B (x) 1 on the probe.
NoninteractingFrame noninteracting_frame(const SplitHamiltonian& h);

// Index 0 is alpha = 1.
using SectorMask = std::vector<bool>;

SectorMask odd_sector(Index dim);
SectorMask energy_cutoff(SectorMask sector, const VectorXd& energies, double e0);

struct StateWeights {
    VectorXd w;
    double beta = 0.0;
    double e0 = 0.0;
    SectorMask sector;
};

StateWeights thermal_weights(const VectorXd& energies, double beta, const SectorMask& sector, double e0);

enum class ObservableKind { sigma_z_probe, o_odd, o_sym };

ObservableKind parse_observable(std::string_view name);
std::string_view to_string(ObservableKind kind);

struct DiagonalObservable {
    VectorXd d;
};

DiagonalObservable make_observable(ObservableKind kind, Index dim);

}  // namespace ergoprobe
