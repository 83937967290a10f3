#include <doctest.h>

#include <cmath>

#include "abprop/perturbation.hpp"
#include "abprop/verify.hpp"

using namespace abprop;

TEST_CASE("potential evaluation over atoms") {
    AtomicMeasure constant;
    constant.atoms = {{0.0, 1.0}};
    for (double x : {-3.0, 0.0, 7.5}) CHECK(potential_eval(constant, x) == complex(1.0));

    AtomicMeasure single;
    single.atoms = {{0.8, 2.5}};
    CHECK(std::abs(potential_eval(single, 1.3) - 2.5 * std::exp(0.8 * 1.3)) <= 1e-14);

    AtomicMeasure cosh_m;
    cosh_m.atoms = {{1.0, 0.5}, {-1.0, 0.5}};
    CHECK(potential_eval(cosh_m, 0.9).real() == doctest::Approx(std::cosh(0.9)).epsilon(1e-15));

    AtomicMeasure hot;
    hot.atoms = {{0.0, 1.0}, {400.0, 1.0}};
    CHECK_THROWS_WITH_AS(potential_eval(hot, 2.0), doctest::Contains("atom 1"),
                         std::range_error);
}

TEST_CASE("interaction factor and its bound") {
    PhysParams p;
    p.p1 = 1.3;
    p.p0 = 1.3;
    TimeGrid grid(0.0, 1.0, 16);

    SUBCASE("empty product") {
        GridFunction phi(grid, 2);
        CHECK(g_n_eval(p, phi, {}, {}) == complex(1.0));
        CHECK(g_n_bound(p, phi, {}) == 1.0);
    }
    SUBCASE("no momentum component: endpoint factor only") {
        GridFunction phi(grid, 2);
        for (int i = 0; i < 16; ++i) phi.at(0, i) = 0.7;  // angle slot only
        const std::vector<double> s = {0.2, 0.9};
        const std::vector<double> beta = {0.5, -1.2};
        const complex want = std::exp(p.p1 / (p.m0 * p.R) * (0.5 - 1.2));
        CHECK(std::abs(g_n_eval(p, phi, s, beta) - want) <= 1e-14);
    }
    SUBCASE("insertion times at the endpoint kill the spread factor") {
        GridFunction phi(grid, 2);
        for (int i = 0; i < 16; ++i) phi.at(1, i) = -0.4 + 0.05 * i;
        const std::vector<double> s = {1.0, 1.0, 1.0};
        const std::vector<double> beta = {0.3, 0.3, -0.8};
        const complex want = std::exp(p.p1 / (p.m0 * p.R) * (0.3 + 0.3 - 0.8));
        CHECK(std::abs(g_n_eval(p, phi, s, beta) - want) <= 1e-14);
    }
    SUBCASE("argument validation") {
        GridFunction phi(grid, 2);
        CHECK_THROWS_AS(g_n_eval(p, phi, {0.5}, {0.1, 0.2}), std::invalid_argument);
        CHECK_THROWS_AS(g_n_eval(p, phi, {1.5}, {0.1}), std::invalid_argument);
    }
    SUBCASE("dominance on random draws") {
        NormalRng rng(808);
        int violations = 0;
        for (int draw = 0; draw < 500; ++draw) {
            PhysParams q = random_conserved_params(rng, 0.3, 3.0);
            TimeGrid g2(q.t0, q.t, 16);
            GridFunction phi(g2, 2);
            for (int c = 0; c < 2; ++c)
                for (int i = 0; i < 16; ++i)
                    phi.at(c, i) = -1.0 + 2.0 * rng.uniform01();
            const int n_terms = static_cast<int>(rng.uniform01() * 6.0);
            std::vector<double> s, beta;
            for (int j = 0; j < n_terms; ++j) {
                s.push_back(q.t0 + q.delta() * rng.uniform01());
                beta.push_back(-3.0 + 6.0 * rng.uniform01());
            }
            if (std::abs(g_n_eval(q, phi, s, beta)) >
                g_n_bound(q, phi, beta) * (1.0 + 1e-12))
                ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("series propagator against the closed form") {
    PhysParams unit;  // hbar = 1, t - t0 = 1, p0 = p1 = 1
    AtomicMeasure delta0;
    delta0.atoms = {{0.0, 1.0}};

    SUBCASE("order-3 value and tail") {
        const SeriesResult sr = series_propagator(unit, delta0, 3);
        CHECK(sr.report.partial_sum.real() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(sr.report.partial_sum.imag() == doctest::Approx(-5.0 / 6.0).epsilon(1e-15));
        const PropagatorValue closed = closed_form_propagator(unit, delta0);
        const double err = std::abs(sr.value.phase - closed.phase);
        CHECK(err == doctest::Approx(0.0411).epsilon(0.03));
        CHECK(err <= sr.report.remainder_bound);
        CHECK(sr.report.remainder_bound == doctest::Approx(std::exp(1.0) / 24.0).epsilon(1e-12));
    }
    SUBCASE("deep truncation converges to the rounding floor") {
        NormalRng rng(21);
        for (int i = 0; i < 30; ++i) {
            PhysParams p = unit;
            p.t = 0.2 + 1.8 * rng.uniform01();
            p.a = p.delta() / 3.0;
            AtomicMeasure m;
            m.atoms = {{0.0, complex(-1.0 + 2.0 * rng.uniform01(),
                                     -1.0 + 2.0 * rng.uniform01())}};
            const SeriesResult sr = series_propagator(p, m, 25);
            if (std::abs(sr.report.x) > 2.0) continue;
            const complex closed = closed_form_propagator(p, m).phase;
            // |phase| reaches e^2 here, so the comparison floors at a few ulps.
            CHECK(std::abs(sr.value.phase - closed) <=
                  std::max(1e-15, 8e-16 * std::abs(closed)));
        }
    }
    SUBCASE("empty measure reduces to the free circle phase") {
        const AtomicMeasure empty;
        const SeriesResult sr = series_propagator(unit, empty, 0);
        const complex circle = std::exp(complex(0.0, -0.5));
        CHECK(std::abs(sr.value.phase - circle) <= 1e-15);
        CHECK(std::abs(closed_form_propagator(unit, empty).phase - circle) <= 1e-15);
    }
    SUBCASE("conservation is required") {
        PhysParams off = unit;
        off.p1 = 2.0;
        CHECK_THROWS_AS(series_propagator(off, delta0, 3), std::invalid_argument);
    }
}

TEST_CASE("closed form on the concentrated measure") {
    PhysParams p;
    p.p0 = 2.0;
    p.p1 = 2.0;
    const ABReduction red = make_ab_reduction(p, 1, 3);
    AtomicMeasure m;
    m.atoms = {{red.b * red.alpha_frac, red.coupling}};
    const PropagatorValue got = closed_form_propagator(p, m);
    const double vhat = red.coupling *
                        std::exp(red.b * red.alpha_frac * p.p1 / (p.m0 * p.R));
    const complex want = std::exp(complex(0.0, -p.delta() / p.hbar) *
                                  (p.p0 * p.p0 / (2.0 * p.m0) + vhat));
    CHECK(std::abs(got.phase - want) <= 1e-14);
    CHECK(std::abs(std::abs(got.phase) - 1.0) <= 4e-16);  // real weights: unit modulus

    AtomicMeasure lossy;
    lossy.atoms = {{0.0, complex(0.0, 1.0)}};
    CHECK(std::abs(closed_form_propagator(p, lossy).phase) != doctest::Approx(1.0));
}

TEST_CASE("global series bound") {
    PhysParams unit;
    AtomicMeasure delta0;
    delta0.atoms = {{0.0, 1.0}};
    for (double C : {0.0, 1.0, 3.7})
        CHECK(series_global_bound(unit, delta0, C) ==
              doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(series_global_bound(unit, AtomicMeasure{}, 2.0) == 1.0);
    CHECK_THROWS_AS(series_global_bound(unit, delta0, -0.5), std::invalid_argument);

    // Monotone in C and in the interval length.
    AtomicMeasure m;
    m.atoms = {{1.2, 0.7}, {-0.4, complex(0.1, 0.3)}};
    double prev = 0.0;
    for (double C : {0.0, 0.5, 1.0, 2.0}) {
        const double bound = series_global_bound(unit, m, C);
        CHECK(bound >= prev);
        prev = bound;
    }
    PhysParams longer = unit;
    longer.t = 2.0;
    longer.a = 0.9;
    CHECK(series_global_bound(longer, m, 1.0) >= series_global_bound(unit, m, 1.0));
}

TEST_CASE("flux-ratio reduction") {
    PhysParams p;
    p.p1 = 2.0;
    const ABReduction red = make_ab_reduction(p, 1, 3);
    CHECK(red.B == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(red.b == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(red.coupling == 1.0);
    CHECK(red.detectable);

    CHECK(make_ab_reduction(p, 1, 2).detectable);
    CHECK_FALSE(make_ab_reduction(p, 4, 2).detectable);
    CHECK_FALSE(make_ab_reduction(p, -3, 3).detectable);
    CHECK(make_ab_reduction(p, -3, 2).detectable);

    PhysParams stopped = p;
    stopped.p1 = 0.0;
    CHECK_THROWS_AS(make_ab_reduction(stopped, 1, 3), std::domain_error);
    CHECK_THROWS_AS(make_ab_reduction(p, 0, 3), std::invalid_argument);
}

TEST_CASE("first-order potential and the literal expansions") {
    PhysParams p;
    p.p1 = 2.0;
    const ABReduction red = make_ab_reduction(p, 1, 3);

    CHECK(first_order_potential(red, p, 0.0) == red.coupling);
    const double td = 0.8;
    CHECK(first_order_potential(red, p, td) ==
          doctest::Approx(red.coupling * (1.0 - red.b * red.alpha_frac * td)).epsilon(1e-15));
    CHECK(potential_series(red, td, 1, -1.0) ==
          doctest::Approx(first_order_potential(red, p, td)).epsilon(1e-15));

    // The printed alternating expansion sums to the decaying exponential; the
    // concentrated measure uses the growing sign.
    const double base = red.b * red.alpha_frac * td;
    CHECK(potential_series(red, td, 40, -1.0) ==
          doctest::Approx(red.coupling * std::exp(-base)).epsilon(1e-14));
    AtomicMeasure concentrated;
    concentrated.atoms = {{red.b * red.alpha_frac, red.coupling}};
    CHECK(potential_series(red, td, 40, +1.0) ==
          doctest::Approx(potential_eval(concentrated, td).real()).epsilon(1e-14));

    // Reducing the B-dependent part at the physical angular velocity leaves
    // the bare flux-ratio slope.
    for (int k : {1, -2, 5})
        for (int n : {3, 2, -4}) {
            const ABReduction r = make_ab_reduction(p, k, n);
            const double coeff = ab_linear_coefficient(r, p);
            const double want = -static_cast<double>(k) / n;
            CHECK(std::abs(coeff - want) <= 1e-14 * std::max(1.0, std::abs(want)));
        }
}
