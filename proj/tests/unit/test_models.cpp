#include "ergoprobe/models.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace ergoprobe;

TEST_SUITE("models") {

TEST_CASE("RmtSpec validation") {
    CHECK_THROWS(RmtSpec::make(5, 0.1, 1).validate());
    CHECK_THROWS(RmtSpec::make(2, 0.1, 1).validate());
    CHECK_THROWS(RmtSpec::make(10, -0.1, 1).validate());
    CHECK_THROWS((RmtSpec{10, 0.1, 0.2, 1}).validate());
    CHECK_NOTHROW(RmtSpec::make(10, 0.0, 1).validate());
}

TEST_CASE("RMT H0 is the picket fence and g = 0 gives V = 0") {
    const auto h = build_rmt(RmtSpec::make(10, 0.0, 3));
    for (Index a = 0; a < 10; ++a)
        CHECK(h.h0.matrix()(a, a) == doctest::Approx((a + 1) / 10.0));
    CHECK(h.h0.is_diagonal());
    CHECK(h.v.matrix().isZero(0));
}

TEST_CASE("GOE sample moments") {
    const int n = 2000;
    const double g = 0.05;
    const auto h = build_rmt(RmtSpec::make(n, g, 11));
    const MatrixXd& v = h.v.matrix();
    std::vector<double> off, diag;
    for (int j = 0; j < n; ++j) {
        diag.push_back(v(j, j));
        for (int i = 0; i < j; ++i)
            off.push_back(v(i, j));
    }
    const auto [m_off, var_off] = oracle::moments(off);
    const auto [m_diag, var_diag] = oracle::moments(diag);
    CHECK(std::abs(var_off / (g * g / n) - 1.0) <= 0.05);
    CHECK(std::abs(var_diag / var_off - 2.0) <= 0.15 * 2.0);
    CHECK(std::abs(m_off) <= 5.0 * std::sqrt(var_off / off.size()));
    CHECK(v == v.transpose());

    // doubling N halves the off-diagonal variance
    const auto h2 = build_rmt(RmtSpec::make(2 * n, g, 12));
    std::vector<double> off2;
    for (int j = 0; j < 2 * n; j += 2)
        for (int i = 0; i < j; ++i)
            off2.push_back(h2.v.matrix()(i, j));
    CHECK(oracle::moments(off2).second / var_off == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("RMT draws are a pure function of the seed") {
    const auto a = build_rmt(RmtSpec::make(64, 0.1, 5));
    const auto b = build_rmt(RmtSpec::make(64, 0.1, 5));
    const auto c = build_rmt(RmtSpec::make(64, 0.1, 6));
    CHECK(a.v.matrix() == b.v.matrix());
    CHECK(a.v.matrix() != c.v.matrix());
}

TEST_CASE("spin chain matches a term-by-term assembly") {
    oracle::ChainParams p;
    const auto [hb, hsb] = oracle::chain_by_hand(p);
    SpinChainSpec s{3, 2, p.bz, p.bx, p.jz, p.jx, p.jz_sb, p.jx_sb};
    const auto h = build_spin_chain(s);
    CHECK((h.h0.matrix() - hb).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((h.v.matrix() - hsb).cwiseAbs().maxCoeff() <= 1e-15);

    oracle::ChainParams q{5, 3, 0.1, 0.3, 0.3, 0.3, 0.2, 0.1};
    const auto [hb5, hsb5] = oracle::chain_by_hand(q);
    const auto h5 = build_spin_chain({5, 3, q.bz, q.bx, q.jz, q.jx, q.jz_sb, q.jx_sb});
    CHECK((h5.h0.matrix() - hb5).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((h5.v.matrix() - hsb5).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("spin chain: zero probe coupling, probe neutrality, guards") {
    SpinChainSpec s;
    s.n_total = 5;
    s.jz_sb = s.jx_sb = 0.0;
    const auto h = build_spin_chain(s);
    CHECK(h.v.matrix().isZero(0));
    const MatrixXd z1 = pauli_site(PauliKind::z, 1, 5);
    CHECK((h.h0.matrix() * z1 - z1 * h.h0.matrix()).isZero(0));

    CHECK_THROWS_AS(build_spin_chain(SpinChainSpec{10, 2}, 512), std::length_error);
    CHECK_THROWS(build_spin_chain(SpinChainSpec{4, 5}));
    CHECK_THROWS(build_spin_chain(SpinChainSpec{2, 2}));
}

TEST_CASE("non-interacting frame keeps the probe parity of alpha") {
    SpinChainSpec s;
    s.n_total = 5;
    const auto h = build_spin_chain(s);
    const auto f = noninteracting_frame(h);
    const DiagonalObservable o = make_observable(ObservableKind::sigma_z_probe, f.dim());
    // rebuild the probe sigma_z in the frame: it must stay diagonal with +1 on odd alpha
    const auto sb = eigh(DenseSymMatrix(MatrixXd(h.h0.matrix()(Eigen::seqN(0, 16, 2), Eigen::seqN(0, 16, 2)))));
    const MatrixXd u = oracle::kron(sb.vectors, MatrixXd::Identity(2, 2));
    const MatrixXd z = u.transpose() * pauli_site(PauliKind::z, 1, 5) * u;
    CHECK((z - MatrixXd(o.d.asDiagonal())).cwiseAbs().maxCoeff() <= 1e-12);
    // spectrum of the full Hamiltonian is unchanged by the frame
    const auto direct = eigh(DenseSymMatrix(h.h0.matrix() + h.v.matrix()));
    const auto framed = eigh(f.hamiltonian());
    CHECK((direct.energies - framed.energies).cwiseAbs().maxCoeff() <= 1e-12);
    for (Index b = 0; b < 16; ++b)
        CHECK(f.energies(2 * b) == f.energies(2 * b + 1));
}

TEST_CASE("thermal weights") {
    VectorXd e = VectorXd::LinSpaced(8, 0.1, 0.8);
    const auto sector = odd_sector(8);
    const auto w0 = thermal_weights(e, 0.0, sector, 0.0);
    for (Index a = 0; a < 8; ++a)
        CHECK(w0.w(a) == doctest::Approx(a % 2 == 0 ? 0.25 : 0.0));
    for (double beta : {0.5, 10.0, 300.0})
        CHECK(thermal_weights(e, beta, sector, 0.0).w.sum() == doctest::Approx(1.0).epsilon(1e-12));
    const auto cold = thermal_weights(e, 1e6, sector, e(0));
    CHECK(cold.w(0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(thermal_weights(e, 1e6, sector, 0.0), std::range_error);
    CHECK_THROWS(thermal_weights(e, 0.0, SectorMask(8, false), 0.0));
    CHECK_THROWS(thermal_weights(e, -1.0, sector, 0.0));

    const auto cut = energy_cutoff(sector, e, 0.45);
    CHECK_FALSE(cut[0]);
    CHECK(cut[4]);
    CHECK_FALSE(cut[5]);
}

TEST_CASE("observables") {
    const auto odd = make_observable(ObservableKind::o_odd, 4);
    const auto sym = make_observable(ObservableKind::o_sym, 4);
    const auto sz = make_observable(ObservableKind::sigma_z_probe, 4);
    CHECK(odd.d == (VectorXd(4) << 1, 0, 1, 0).finished());
    CHECK(sym.d == (VectorXd(4) << 1, -1, 1, -1).finished());
    CHECK(sz.d == sym.d);
    const auto big_odd = make_observable(ObservableKind::o_odd, 100);
    const auto big_sym = make_observable(ObservableKind::o_sym, 100);
    CHECK(big_sym.d.mean() == 0.0);
    CHECK(big_odd.d.mean() == 0.5);
    CHECK_THROWS(make_observable(ObservableKind::o_odd, 5));
    CHECK(parse_observable("o_odd") == ObservableKind::o_odd);
    CHECK(to_string(ObservableKind::o_sym) == "o_sym");
    CHECK_THROWS(parse_observable("sigma_x"));
}

}
