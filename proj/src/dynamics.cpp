#include "ergoprobe/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ergoprobe {

namespace {

MatrixXd congruence(const MatrixXd& q, const VectorXd& d) {
    MatrixXd scaled = q.transpose() * d.asDiagonal();
    MatrixXd r(q.cols(), q.cols());
    r.noalias() = scaled * q;
    // exact symmetry for downstream elementwise products
    r = (0.5 * (r + r.transpose())).eval();
    return r;
}

void check_time_domain(Index dim, Index max_dim) {
    if (dim > max_dim)
        throw std::length_error("time-domain evaluation at D = " + std::to_string(dim) +
                                " exceeds the configured limit " + std::to_string(max_dim));
}

}  // namespace

EigenbasisOperators rotate_to_eigenbasis(const StateWeights& w, const DiagonalObservable& o,
                                         const Spectrum<double>& spec) {
    const Index d = spec.dim();
    if (w.w.size() != d || o.d.size() != d || spec.vectors.rows() != d)
        throw std::invalid_argument("rotate_to_eigenbasis: dimension mismatch");
    return {congruence(spec.vectors, w.w), congruence(spec.vectors, o.d), spec.energies};
}

double observable_trace(const EigenbasisOperators& ops, double t) {
    if (t < 0.0)
        throw std::invalid_argument("observable_trace: t must be >= 0");
    const VectorXd phase = ops.energies * t;
    const VectorXd c = phase.array().cos().matrix();
    const VectorXd s = phase.array().sin().matrix();
    const MatrixXd m = ops.rho_tilde.cwiseProduct(ops.o_tilde);
    return c.dot(m * c) + s.dot(m * s);
}

TimeSeries observable_series(const EigenbasisOperators& ops, const VectorXd& times, Index max_dim) {
    check_time_domain(ops.dim(), max_dim);
    const Index n = times.size();
    const MatrixXd m = ops.rho_tilde.cwiseProduct(ops.o_tilde);
    TimeSeries ts{times, VectorXd::Zero(n)};
    constexpr Index batch = 256;
    MatrixXd c, s, mc;
    for (Index start = 0; start < n; start += batch) {
        const Index k = std::min(batch, n - start);
        const MatrixXd phase = ops.energies * times.segment(start, k).transpose();
        c = phase.array().cos().matrix();
        s = phase.array().sin().matrix();
        mc.noalias() = m * c;
        VectorXd y = c.cwiseProduct(mc).colwise().sum().transpose();
        mc.noalias() = m * s;
        y += s.cwiseProduct(mc).colwise().sum().transpose();
        ts.values.segment(start, k) = y;
    }
    return ts;
}

VectorXd uniform_grid(double t_end, Index n_samples) {
    if (!(t_end > 0.0) || n_samples < 2)
        throw std::invalid_argument("uniform_grid: need t_end > 0 and at least 2 samples");
    return VectorXd::LinSpaced(n_samples, 0.0, t_end);
}

double diagonal_ensemble(const EigenbasisOperators& ops) {
    return ops.rho_tilde.diagonal().dot(ops.o_tilde.diagonal());
}

double fluctuations_infinite(const EigenbasisOperators& ops) {
    const VectorXd& e = ops.energies;
    const double tol = 1e-10 * e.cwiseAbs().maxCoeff();
    for (Index i = 1; i < e.size(); ++i)
        if (e(i) - e(i - 1) < tol) {
            std::fprintf(stderr, "warning: near-degenerate levels %ld,%ld (gap %.3g); fluctuation sum assumes a nondegenerate spectrum\n",
                         long(i - 1), long(i), e(i) - e(i - 1));
            break;
        }
    MatrixXd m = ops.rho_tilde.cwiseProduct(ops.o_tilde);
    m.diagonal().setZero();
    return m.squaredNorm();
}

double trapezoid(const VectorXd& x, const VectorXd& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("trapezoid: need matching arrays of length >= 2");
    const Index n = x.size();
    const VectorXd dx = x.tail(n - 1) - x.head(n - 1);
    return 0.5 * dx.dot(y.tail(n - 1) + y.head(n - 1));
}

WindowedFluctuations fluctuations_windowed(const EigenbasisOperators& ops, double t_end, Index n_samples,
                                           Index max_dim) {
    if (!(t_end > 0.0) || n_samples < 100)
        throw std::invalid_argument("fluctuations_windowed: need T > 0 and n_samples >= 100");
    const TimeSeries ts = observable_series(ops, uniform_grid(t_end, n_samples), max_dim);
    const double mu = trapezoid(ts.times, ts.values) / t_end;
    const VectorXd dev2 = (ts.values.array() - mu).square().matrix();
    return {trapezoid(ts.times, dev2) / t_end, mu};
}

double free_evolution(const StateWeights& w, const DiagonalObservable& o, const VectorXd& energies_h0, double) {
    if (w.w.size() != o.d.size() || energies_h0.size() != o.d.size())
        throw std::invalid_argument("free_evolution: dimension mismatch");
    // diagonal state and observable commute with H0
    return w.w.dot(o.d);
}

}  // namespace ergoprobe
