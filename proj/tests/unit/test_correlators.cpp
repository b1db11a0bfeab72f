#include "ergoprobe/correlators.hpp"
#include "ergoprobe/parallel.hpp"
#include "ergoprobe/theory.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace ergoprobe;

TEST_SUITE("correlators") {

TEST_CASE("probe selection") {
    const auto p = central_probes(400, 0.4, 8);
    CHECK(p.front() == 120);
    CHECK(p.back() < 280);
    CHECK(p[1] - p[0] == 8);
    CHECK_THROWS(central_probes(400, 0.0, 8));
}

TEST_CASE("Lorentzian width fit recovers a synthetic width") {
    const double w0 = 1.0 / 400, g = 0.01;
    std::vector<double> x, y;
    for (int k = -40; k <= 40; ++k) {
        x.push_back(k * w0);
        y.push_back(lambda_lorentzian(k * w0, 0.0, g, w0));
    }
    CHECK(fit_lorentzian_width(x, y, w0, 0.001, 0.1) == doctest::Approx(g).epsilon(1e-6));
}

TEST_CASE("small ensemble: orthonormality, zero cross means, negative coincident pairs") {
    const RmtSpec spec = RmtSpec::make(200, 0.08, 9);
    const auto probes = central_probes(200, 0.3, 10);
    const CorrelatorReport r = correlator_ensemble(spec, 60, probes, 30, 2);
    CHECK(r.realizations == 60);
    CHECK(r.max_norm_error <= 1e-10);
    CHECK(r.max_cross_mean < 0.5);
    CHECK(std::abs(r.width_rel_error()) <= 0.3);
    CHECK(r.negative_fraction() > 0.5);
    int within = 0;
    for (const auto& p : r.pairs) {
        CHECK(p.theory < 0.0);
        CHECK(p.alpha != p.alpha_p);
        if (std::abs(p.measured - p.theory) <= 3.0 * p.stderr_)
            ++within;
    }
    CHECK(within >= int(0.9 * double(r.pairs.size())));
    double peak_sum = std::accumulate(r.profile.begin(), r.profile.end(), 0.0);
    CHECK(peak_sum <= 1.0);

    CHECK_THROWS(correlator_ensemble(spec, 10, probes));
    CHECK_THROWS(correlator_ensemble(spec, 60, {5}));
    CHECK_THROWS(correlator_ensemble(spec, 60, {5, 999}));
}

TEST_CASE("standard errors shrink like 1/sqrt(m)") {
    const RmtSpec spec = RmtSpec::make(100, 0.1, 4);
    const auto probes = central_probes(100, 0.4, 10);
    const auto a = correlator_ensemble(spec, 100, probes, 10, 2);
    const auto b = correlator_ensemble(spec, 400, probes, 10, 2);
    const std::size_t mid = a.profile.size() / 2;
    CHECK(b.profile_stderr[mid] / a.profile_stderr[mid] == doctest::Approx(0.5).epsilon(0.25));
}

TEST_CASE("ensemble statistics do not depend on the worker count") {
    const RmtSpec spec = RmtSpec::make(80, 0.1, 3);
    const auto probes = central_probes(80, 0.5, 5);
    const auto a = correlator_ensemble(spec, 50, probes, 10, 1);
    const auto b = correlator_ensemble(spec, 50, probes, 10, 3);
    CHECK(a.profile == b.profile);
    CHECK(a.gamma_fit == b.gamma_fit);
    REQUIRE(a.pairs.size() == b.pairs.size());
    for (std::size_t i = 0; i < a.pairs.size(); ++i)
        CHECK(a.pairs[i].measured == b.pairs[i].measured);
}

TEST_CASE("parallel_for runs every index once and forwards exceptions") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                        if (i == 7)
                            throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
}

}
