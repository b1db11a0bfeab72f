#pragma once

#include "ergoprobe/linalg.hpp"
#include "ergoprobe/models.hpp"

namespace ergoprobe {

struct EigenbasisOperators {
    MatrixXd rho_tilde;
    MatrixXd o_tilde;
    VectorXd energies;

    Index dim() const { return energies.size(); }
};

struct TimeSeries {
    VectorXd times;
    VectorXd values;

    Index size() const { return times.size(); }
};

EigenbasisOperators rotate_to_eigenbasis(const StateWeights& w, const DiagonalObservable& o,
                                         const Spectrum<double>& spec);

double observable_trace(const EigenbasisOperators& ops, double t);

// Same sum as observable_trace at every grid time, batched as dense products.
TimeSeries observable_series(const EigenbasisOperators& ops, const VectorXd& times,
                             Index max_dim = 2048);

VectorXd uniform_grid(double t_end, Index n_samples);

double diagonal_ensemble(const EigenbasisOperators& ops);

// Warns on stderr if two levels lie closer than 1e-10 * max|E|.
double fluctuations_infinite(const EigenbasisOperators& ops);

struct WindowedFluctuations {
    double delta2_t;
    double mu_t;
};

WindowedFluctuations fluctuations_windowed(const EigenbasisOperators& ops, double t_end, Index n_samples,
                                           Index max_dim = 2048);

double free_evolution(const StateWeights& w, const DiagonalObservable& o, const VectorXd& energies_h0, double t);

// Trapezoid rule on a possibly non-uniform grid.
double trapezoid(const VectorXd& x, const VectorXd& y);

}  // namespace ergoprobe
