#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ergoprobe {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr Index kDefaultMaxDim = Index{1} << 16;

// Real symmetric matrix. Construction symmetrizes, so A(i,j) == A(j,i) bitwise.
template <typename Scalar>
class SymMatrix {
public:
    SymMatrix() = default;

    template <typename Derived>
    explicit SymMatrix(const Eigen::MatrixBase<Derived>& m) : a_(m) {
        if (a_.rows() != a_.cols())
            throw std::invalid_argument("SymMatrix: matrix is not square");
        if (a_.rows() < 2)
            throw std::invalid_argument("SymMatrix: dimension must be at least 2");
        for (Index j = 0; j < a_.cols(); ++j)
            for (Index i = j + 1; i < a_.rows(); ++i) {
                const Scalar s = (a_(i, j) + a_(j, i)) / Scalar(2);
                a_(i, j) = s;
                a_(j, i) = s;
            }
    }

    Index dim() const { return a_.rows(); }
    const Matrix<Scalar>& matrix() const { return a_; }
    Scalar operator()(Index i, Index j) const { return a_(i, j); }
    Scalar max_abs() const { return a_.cwiseAbs().maxCoeff(); }
    bool is_diagonal() const { return (a_ - Matrix<Scalar>(a_.diagonal().asDiagonal())).isZero(0); }

private:
    Matrix<Scalar> a_;
};

template <typename Scalar>
SymMatrix<Scalar> operator+(const SymMatrix<Scalar>& a, const SymMatrix<Scalar>& b) {
    return SymMatrix<Scalar>(a.matrix() + b.matrix());
}

using DenseSymMatrix = SymMatrix<double>;

template <typename Scalar>
struct Spectrum {
    Vector<Scalar> energies;  // ascending
    Matrix<Scalar> vectors;   // column mu holds c_mu(alpha)

    Index dim() const { return energies.size(); }
};

// Flip each column so its largest-magnitude entry is positive (first one on ties).
template <typename Scalar>
void fix_signs(Matrix<Scalar>& q) {
    for (Index j = 0; j < q.cols(); ++j) {
        Index imax = 0;
        q.col(j).cwiseAbs().maxCoeff(&imax);
        if (q(imax, j) < Scalar(0))
            q.col(j) = -q.col(j);
    }
}

template <typename Scalar>
Spectrum<Scalar> eigh(const SymMatrix<Scalar>& h) {
    if (!h.matrix().allFinite())
        throw std::invalid_argument("eigh: matrix has non-finite entries (dim " + std::to_string(h.dim()) + ")");
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(h.matrix(), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigh: eigensolver did not converge");
    Spectrum<Scalar> s{solver.eigenvalues(), solver.eigenvectors()};
    fix_signs(s.vectors);
    return s;
}

template <typename DA, typename DB>
Matrix<typename DA::Scalar> kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                                 Index max_dim = kDefaultMaxDim) {
    if (!a.allFinite() || !b.allFinite())
        throw std::invalid_argument("kron: non-finite entries");
    const Index rows = a.rows() * b.rows();
    const Index cols = a.cols() * b.cols();
    if (rows > max_dim || cols > max_dim)
        throw std::length_error("kron: result " + std::to_string(rows) + "x" + std::to_string(cols) +
                                " exceeds max dimension " + std::to_string(max_dim));
    return Eigen::kroneckerProduct(a.derived(), b.derived()).eval();
}

enum class PauliKind { x, z, plus, minus };

// Single-site matrix in the (up, down) basis; sigma_z = diag(1, -1), plus = |up><down|.
template <typename Scalar = double>
Matrix<Scalar> pauli(PauliKind kind) {
    Matrix<Scalar> m = Matrix<Scalar>::Zero(2, 2);
    switch (kind) {
    case PauliKind::x: m(0, 1) = m(1, 0) = Scalar(1); break;
    case PauliKind::z: m(0, 0) = Scalar(1); m(1, 1) = Scalar(-1); break;
    case PauliKind::plus: m(0, 1) = Scalar(1); break;
    case PauliKind::minus: m(1, 0) = Scalar(1); break;
    }
    return m;
}

struct SiteOp {
    PauliKind kind;
    int site;
};

// Product of single-site operators on distinct sites, identity elsewhere.
// Site 1 is the least-significant factor of the composite index.
template <typename Scalar = double>
Matrix<Scalar> site_product(const std::vector<SiteOp>& ops, int n_sites, Index max_dim = kDefaultMaxDim) {
    if (n_sites < 1 || n_sites > 62)
        throw std::out_of_range("site_product: n_sites out of range");
    if ((Index{1} << n_sites) > max_dim)
        throw std::length_error("site_product: 2^" + std::to_string(n_sites) + " exceeds max dimension");
    std::vector<const SiteOp*> at(n_sites + 1, nullptr);
    for (const auto& op : ops) {
        if (op.site < 1 || op.site > n_sites)
            throw std::out_of_range("site " + std::to_string(op.site) + " outside 1.." + std::to_string(n_sites));
        if (at[op.site])
            throw std::invalid_argument("site_product: site " + std::to_string(op.site) + " repeated");
        at[op.site] = &op;
    }
    Matrix<Scalar> result = Matrix<Scalar>::Identity(1, 1);
    Index pending = 1;
    for (int j = n_sites; j >= 1; --j) {
        if (!at[j]) {
            pending *= 2;
            continue;
        }
        if (pending > 1)
            result = kron(result, Matrix<Scalar>::Identity(pending, pending), max_dim);
        result = kron(result, pauli<Scalar>(at[j]->kind), max_dim);
        pending = 1;
    }
    if (pending > 1)
        result = kron(result, Matrix<Scalar>::Identity(pending, pending), max_dim);
    return result;
}

template <typename Scalar = double>
Matrix<Scalar> pauli_site(PauliKind kind, int site, int n_sites, Index max_dim = kDefaultMaxDim) {
    return site_product<Scalar>({SiteOp{kind, site}}, n_sites, max_dim);
}

}  // namespace ergoprobe
