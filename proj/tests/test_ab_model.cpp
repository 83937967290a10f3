#include <doctest.h>

#include <cmath>
#include <numbers>

#include "abprop/ab_model.hpp"
#include "abprop/gaussian.hpp"

using namespace abprop;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed form of the regularized pairing at f = 0, kept independent of the
// library path.
complex display_value(const PhysParams& p, double eps) {
    const double delta = p.delta();
    const double dp = p.p1 - p.p0;
    const complex pref = std::sqrt(complex(delta / (2.0 * kPi * eps * p.hbar * p.m0)));
    const complex phase =
        std::exp(complex(0.0, -p.p0 / (2.0 * p.hbar * p.m0)) *
                 ((p.p1 + 2.0 * p.alpha() / p.R) * delta +
                  dp * (delta + 2.0 * p.a_value())));
    const complex tail =
        std::exp(complex(delta / (2.0 * eps * p.hbar * p.m0)) *
                 complex(-dp * dp, 2.0 * eps * dp * (-p.alpha() / p.R - dp)));
    return pref * phase * tail;
}

}  // namespace

TEST_CASE("derived constants") {
    PhysParams p;
    p.m0 = 2.0;
    p.R = 0.5;
    p.hbar = 1.5;
    p.phi = 0.7;
    CHECK(p.alpha() == doctest::Approx(-p.e * p.phi / (2.0 * kPi * p.hbar * p.c)).epsilon(1e-15));
    CHECK(p.C1() == 1.0 / (2.0 * p.m0));
    CHECK(p.C2() == doctest::Approx(-p.alpha() / (p.m0 * p.R)).epsilon(1e-15));
    CHECK(p.D() == doctest::Approx(std::sqrt(p.hbar * p.m0)).epsilon(1e-15));
    CHECK(p.E() == doctest::Approx(std::sqrt(p.hbar / (p.m0 * p.R * p.R))).epsilon(1e-15));
    CHECK(p.a_value() == doctest::Approx(0.5 * p.delta()).epsilon(1e-15));
    p.set_alpha(0.3);
    CHECK(p.alpha() == doctest::Approx(0.3).epsilon(1e-14));

    PhysParams bad;
    bad.a = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = PhysParams{};
    bad.m0 = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("paths from noise") {
    PhysParams p;
    p.p0 = 1.4;
    p.a = 0.25;
    TimeGrid grid(0.0, 1.0, 64);

    // Zero noise: straight line in theta, constant momentum.
    NoiseSample quiet{GridFunction(grid, 2), 0};
    PathPair path = build_paths(p, quiet);
    const double gamma = p.p0 / (p.m0 * p.R);
    CHECK(path.theta(0.0) == doctest::Approx(gamma * p.a).epsilon(1e-14));
    CHECK(path.theta(0.5) == doctest::Approx(gamma * (0.5 + p.a)).epsilon(1e-14));
    CHECK(path.ptheta(0.0) == p.p0);
    CHECK(path.ptheta(0.73) == p.p0);

    // Start conventions hold for any sample.
    PathPair noisy = build_paths(p, sample_noise(grid, 99));
    CHECK(noisy.theta(0.0) == doctest::Approx(gamma * p.a).epsilon(1e-14));
    CHECK(noisy.ptheta(0.0) == p.p0);

    // Brownian spread of the endpoint angle.
    const int samples = 10000;
    double mean = 0.0, sq = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double th = build_paths(p, sample_noise(grid, 5000 + s)).theta(1.0);
        mean += th;
        sq += th * th;
    }
    mean /= samples;
    const double var = sq / samples - mean * mean;
    CHECK(var == doctest::Approx(p.E() * p.E() * p.delta()).epsilon(0.10));
}

TEST_CASE("actions at zero noise") {
    PhysParams p;
    p.p0 = 1.7;
    TimeGrid grid(0.0, 1.0, 32);
    NoiseSample quiet{GridFunction(grid, 2), 0};

    SUBCASE("no flux") {
        const double want = -p.p0 * p.p0 * p.delta() / (2.0 * p.m0);
        CHECK(action_closed(p, quiet).real() == doctest::Approx(want).epsilon(1e-14));
        CHECK(action_direct(p, quiet).real() == doctest::Approx(want).epsilon(1e-14));
    }
    SUBCASE("with flux") {
        p.set_alpha(0.4);
        const double want =
            -p.p0 * (p.p0 + 2.0 * p.alpha() / p.R) * p.delta() / (2.0 * p.m0);
        const double direct_form = -(p.C1() * p.p0 * p.p0 - p.C2() * p.p0) * p.delta();
        CHECK(want == doctest::Approx(direct_form).epsilon(1e-14));
        CHECK(action_closed(p, quiet).real() == doctest::Approx(want).epsilon(1e-13));
        CHECK(action_direct(p, quiet).real() == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("integration-by-parts defect halves under refinement") {
    PhysParams p;
    p.set_alpha(0.3);
    p.p0 = 1.2;
    TimeGrid base(0.0, 1.0, 64);
    for (int s = 0; s < 5; ++s) {
        const NoiseSample noise = sample_noise(base, 31 + s);
        double defect[3];
        for (int level = 0; level < 3; ++level) {
            const NoiseSample fine{refine(noise.values, 1 << level), noise.seed};
            defect[level] =
                std::abs(action_direct(p, fine) - action_closed(p, fine));
        }
        CHECK(defect[0] / defect[1] == doctest::Approx(2.0).epsilon(0.15));
        CHECK(defect[1] / defect[2] == doctest::Approx(2.0).epsilon(0.15));
    }
    CHECK_THROWS_AS(action_direct(p, NoiseSample{GridFunction(TimeGrid(0, 1, 1), 2), 0}),
                    std::invalid_argument);
}

TEST_CASE("integrand assembly") {
    PhysParams p;
    p.set_alpha(0.2);
    p.p1 = 1.5;
    TimeGrid grid(0.0, 1.0, 16);
    const GaussianFunctional phi = build_integrand(p, grid);

    BlockOperator n = BlockOperator::identity(grid, 2);
    n += phi.K;
    CHECK(std::abs(fredholm_det(n) - complex(1.0)) <= 1e-13);

    CHECK(phi.pins.size() == 1);
    CHECK(phi.pins[0].y == doctest::Approx(p.p1 - p.p0).epsilon(1e-15));
    const complex eta_mass = inner_product(phi.pins[0].eta, indicator(grid, 0.0, 1.0, 0));
    CHECK(eta_mass.real() == doctest::Approx(p.D()).epsilon(1e-14));

    PhysParams free = p;
    free.phi = 0.0;
    free.p1 = free.p0;
    const GaussianFunctional phi_free = build_integrand(free, grid);
    CHECK(inner_product(phi_free.g, phi_free.g) == complex(0.0));
}

TEST_CASE("regularized inverse: stated windows and exact composition") {
    PhysParams p;
    TimeGrid grid(0.0, 1.0, 8);
    const double eps = 0.05;

    const BlockOperator n_inv = n_eps_inverse(p, grid, eps);
    for (int i = 0; i < 8; ++i) {
        CHECK(n_inv.block(0, 0, i) == complex(eps));
        CHECK(n_inv.block(0, 1, i) == complex(1.0));
        CHECK(n_inv.block(1, 0, i) == complex(-1.0));
        CHECK(n_inv.block(1, 1, i) == complex(0.0, -1.0));
    }

    // At eps = 0 the stated inverse composes with Id+K to the identity, and
    // the off-window block is exactly the identity.
    BlockOperator n = BlockOperator::identity(grid, 2);
    n += build_integrand(p, grid).K;
    CHECK(n_eps_inverse(p, grid, 0.0).composition_defect_from_identity(n) == 0.0);

    TimeGrid wide(0.0, 2.0, 16);  // cells beyond t are off-window
    const BlockOperator wide_inv = n_eps_inverse(p, wide, 0.0);
    for (int i = 8; i < 16; ++i) {
        CHECK(wide_inv.block(0, 0, i) == complex(1.0));
        CHECK(wide_inv.block(1, 1, i) == complex(1.0));
        CHECK(wide_inv.block(0, 1, i) == complex(0.0));
    }
    // With eps > 0 the constant term leaks off-window by design.
    CHECK(n_eps_inverse(p, wide, eps).block(0, 0, 12) == complex(1.0 + eps));

    // Forward consistency: defect O(eps) on the window.
    CHECK(n_eps_inverse(p, grid, eps).composition_defect_from_identity(n) ==
          doctest::Approx(eps * std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("quadratic form of the shifted inverse") {
    PhysParams p;
    p.set_alpha(0.2);
    p.p1 = 1.4;
    const double c_shift = (1.0 / p.D()) * (-p.alpha() / p.R - (p.p1 - p.p0));
    TimeGrid grid(0.0, 1.0, 16);
    const double eps = 0.03;

    SUBCASE("f = 0 leaves only the shift term") {
        GridFunction zero(grid, 2);
        CHECK(quad_form_feps(p, grid, eps, zero).real() ==
              doctest::Approx(eps * c_shift * c_shift * p.delta()).epsilon(1e-13));
        PhysParams plain = p;
        plain.phi = 0.0;
        plain.p1 = plain.p0;
        CHECK(quad_form_feps(plain, grid, eps, zero) == complex(0.0));
    }
    SUBCASE("off-window support sees the constant eps term") {
        TimeGrid wide(0.0, 2.0, 32);
        GridFunction f(wide, 2);
        for (int i = 16; i < 32; ++i) {
            f.at(0, i) = 0.3;
            f.at(1, i) = -0.2;
        }
        const complex got = quad_form_feps(p, wide, eps, f);
        const double f_theta_sq = 0.3 * 0.3 * 1.0;
        const double f_p_sq = 0.2 * 0.2 * 1.0;
        const double window_shift = eps * c_shift * c_shift * p.delta();
        CHECK(got.real() ==
              doctest::Approx((eps + 1.0) * f_theta_sq + f_p_sq + window_shift).epsilon(1e-13));
        CHECK(got.imag() == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("matches the operator route for random f") {
        NormalRng rng(11);
        TimeGrid wide(0.0, 1.5, 12);
        GridFunction f(wide, 2);
        for (int c = 0; c < 2; ++c)
            for (int i = 0; i < 12; ++i) f.at(c, i) = complex(rng.normal(), rng.normal());
        const GaussianFunctional phi = build_integrand(p, wide);
        const GridFunction h = f + phi.g;
        const complex via_operator =
            inner_product(h, n_eps_inverse(p, wide, eps).apply(h));
        const complex via_terms = quad_form_feps(p, wide, eps, f);
        CHECK(std::abs(via_operator - via_terms) <= 1e-12 * std::abs(via_terms));
    }
}

TEST_CASE("regularized pairing against the closed display") {
    TimeGrid grid(0.0, 1.0, 32);
    GridFunction zero(grid, 2);

    SUBCASE("free case matches the elementary value") {
        PhysParams p;  // p1 = p0 = 1, no flux
        const complex got = t_transform_eps(p, grid, 0.01, zero);
        const complex want = std::sqrt(complex(1.0 / (2.0 * kPi * 0.01))) *
                             std::exp(complex(0.0, -0.5 * p.p0 * p.p0));
        CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
        CHECK(std::abs(got) == doctest::Approx(3.98942).epsilon(1e-5));
    }
    SUBCASE("display formula across parameters") {
        for (double eps : {0.3, 0.05, 0.004}) {
            PhysParams p;
            p.p0 = 0.8;
            p.p1 = 1.3;
            p.set_alpha(-0.6);
            p.a = 0.2;
            const complex got = t_transform_eps(p, grid, eps, zero);
            const complex want = display_value(p, eps);
            CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
        }
    }
    SUBCASE("momentum mismatch decays at the stated rate") {
        PhysParams p;
        p.p1 = 1.4;
        const double eps = 0.05;
        const double dp = p.p1 - p.p0;
        const complex got = t_transform_eps(p, grid, eps, zero);
        const double want_mod = std::sqrt(p.delta() / (2.0 * kPi * eps * p.hbar * p.m0)) *
                                std::exp(-p.delta() * dp * dp / (2.0 * eps * p.hbar * p.m0));
        CHECK(std::abs(got) == doctest::Approx(want_mod).epsilon(1e-12));
    }
    SUBCASE("precondition") {
        PhysParams p;
        CHECK_THROWS_AS(t_transform_eps(p, grid, 0.0, zero), std::domain_error);
        CHECK_THROWS_AS(t_transform_eps(p, grid, -1.0, zero), std::domain_error);
    }
}

TEST_CASE("regularized pairing against the dense oracle") {
    PhysParams p;
    p.p0 = 1.0;
    p.p1 = 1.3;
    p.set_alpha(0.2);
    TimeGrid grid(0.0, 1.0, 32);
    const double eps = 0.1;

    GaussianFunctional perturbed = build_integrand(p, grid);
    BlockOperator k_eps = n_eps_forward(p, grid, eps);
    for (int i = 0; i < grid.n_cells; ++i)
        for (int r = 0; r < 2; ++r) k_eps.block(r, r, i) -= 1.0;
    perturbed.K = k_eps;

    GridFunction zero(grid, 2);
    const complex lemma = t_transform_eps(p, grid, eps, zero);
    const complex oracle = classical_prefactor(p) * t_transform_oracle(perturbed, zero, 1e-3);
    CHECK(std::abs(lemma - oracle) <= 1e-3 * std::abs(lemma));

    // Angle-component test functions keep both routes on the same branch of
    // the pin algebra.
    const GridFunction f = complex(0.4) * indicator(grid, 0.2, 0.7, 0);
    const complex lemma_f = t_transform_eps(p, grid, eps, f);
    const complex oracle_f = classical_prefactor(p) * t_transform_oracle(perturbed, f, 1e-3);
    CHECK(std::abs(lemma_f - oracle_f) <= 1e-3 * std::abs(lemma_f));
}

TEST_CASE("continuity in the regularization strength") {
    PhysParams p;
    p.p1 = 1.2;
    p.set_alpha(0.5);
    TimeGrid grid(0.0, 1.0, 16);
    GridFunction zero(grid, 2);
    // The modulus decays like exp(-c/eps) for p1 != p0; branch stability is a
    // statement about the phase: no step may flip the sign of the square root.
    complex prev = t_transform_eps(p, grid, 1.0, zero);
    for (int k = 1; k <= 80; ++k) {
        const double eps = std::pow(10.0, -4.0 * k / 80.0);
        const complex cur = t_transform_eps(p, grid, eps, zero);
        const complex step = cur * std::conj(prev);
        CHECK(step.real() > 0.5 * std::abs(step));  // phase moves < 60 deg per step
        prev = cur;
    }
}

TEST_CASE("conservation limit") {
    PhysParams p;  // unit parameters, p0 = p1 = 1
    const PropagatorValue prop = propagator_limit(p);
    CHECK(prop.delta_arg == 0.0);
    CHECK(prop.phase.real() == doctest::Approx(0.877583).epsilon(1e-6));
    CHECK(prop.phase.imag() == doctest::Approx(-0.479426).epsilon(1e-6));
    CHECK(std::abs(std::abs(prop.phase) - 1.0) <= 4e-16);
    CHECK_FALSE(prop.comb.has_value());

    PhysParams instant = p;
    instant.t = 1e-12;
    instant.a = 1e-13;
    CHECK(std::abs(propagator_limit(instant).phase - complex(1.0)) <= 1e-11);

    PhysParams free = p;
    free.phi = 0.0;
    const complex circle =
        std::exp(complex(0.0, -free.p0 * free.p0 * free.delta() / (2.0 * free.m0 * free.hbar)));
    CHECK(std::abs(propagator_limit(free).phase - circle) <= 1e-15);
}
