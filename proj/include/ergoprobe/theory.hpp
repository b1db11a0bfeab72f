#pragma once

#include "ergoprobe/linalg.hpp"
#include "ergoprobe/models.hpp"

#include <functional>

namespace ergoprobe {

struct ObservableMoments {
    double mean = 0.0;     // [O]
    double mean_sq = 0.0;  // [O^2]
    double o_up = 0.0;     // O on probe-up states

    double variance() const { return mean_sq - mean * mean; }
};

// Coarse averages over all alpha; o_up is taken from alpha = 1.
ObservableMoments observable_moments(const DiagonalObservable& o);

enum class TemperatureRegime { high_T, low_T };

// low_T once the thermal window 1/beta is narrower than the level width.
TemperatureRegime regime_for(double beta, double gamma);

double gamma_fgr(double g, int n, double omega0);

double lambda_lorentzian(double e_mu, double e_alpha, double gamma, double omega0, int n = 1);

struct CorrelatorContext {
    double gamma;
    double omega0;
    VectorXd e_alpha;  // non-interacting energies
    VectorXd e_mu;     // interacting energies
};

// <c_mu(a) c_nu(b) c_mu(ap) c_nu(bp)> over the GOE ensemble (0-based indices).
double four_point(Index mu, Index nu, Index a, Index b, Index ap, Index bp, const CorrelatorContext& ctx);

double w_o_constant(const ObservableMoments& m, TemperatureRegime regime);

double predict_decay(double t, double o_free, double o_de, double gamma);

double predict_delta2_rmt_inf_T(double w_o, double omega0, double n_b, double gamma);

struct FdtPrediction {
    double delta2 = 0.0;             // level sum over the populated sector
    double delta2_continuum = 0.0;   // integral form with Z'(2 beta) and <<1/(D Gamma)>>
    double w_o = 0.0;
    double c_const = 0.0;
    double gamma = 0.0;              // Gamma at the weighted mean energy
    double n_b = 0.0;
    double dos_bar = 0.0;
    double beta = 0.0;
    double z_beta = 0.0;
    double z_prime_2beta = 0.0;
    double delta_e_prime = 0.0;      // Delta E'(2 beta)
    double c_prime = 0.0;
};

using EnergyFunction = std::function<double(double)>;

// Energies are measured from e0 inside every Boltzmann factor.
FdtPrediction predict_delta2_finite_T(double w_o, double beta, const VectorXd& energies, const SectorMask& sector,
                                      const EnergyFunction& gamma_of_e, const EnergyFunction& dos_of_e, double e0);

double chi_prediction(double c_const, double n_b, double dos_bar);

// Trapezoid on [a, b], doubling from 2^12 intervals until the relative change is below rtol.
double adaptive_trapezoid(const std::function<double(double)>& f, double a, double b, double rtol = 1e-13);

}  // namespace ergoprobe
