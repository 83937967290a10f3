#include <doctest.h>

#include <cmath>
#include <numbers>

#include "abprop/gaussian.hpp"
#include "abprop/verify.hpp"

using namespace abprop;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("fredholm determinant conventions") {
    TimeGrid grid(0.0, 2.0, 8);
    CHECK(fredholm_det(BlockOperator::identity(grid, 2)) == complex(1.0));

    // The flux-window block has unit determinant on every cell.
    BlockOperator window = BlockOperator::identity(grid, 2);
    window.fill_window(0.0, 2.0,
                       {complex(0.0, -1.0), complex(-1.0, 0.0),
                        complex(1.0, 0.0), complex(0.0, 0.0)});
    CHECK(std::abs(fredholm_det(window) - complex(1.0)) <= 1e-14);

    TimeGrid grid4(0.0, 1.0, 4);
    BlockOperator twice(grid4, 1);
    for (int i = 0; i < 4; ++i) twice.block(0, 0, i) = 2.0;
    CHECK(fredholm_det(twice) == complex(16.0));
}

TEST_CASE("inverse pairs with the forward determinant") {
    NormalRng rng(7);
    TimeGrid grid(0.0, 1.0, 12);
    BlockOperator op = BlockOperator::identity(grid, 2);
    for (int i = 0; i < 12; ++i)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                op.block(r, c, i) += complex(0.2 * rng.uniform01(), 0.2 * rng.uniform01());
    const complex prod = fredholm_det(op) * fredholm_det(op.inverse());
    CHECK(std::abs(prod - complex(1.0)) <= 1e-10);
    CHECK(op.compose(op.inverse()).composition_defect_from_identity(
              BlockOperator::identity(grid, 2)) <= 1e-12);
}

TEST_CASE("singular blocks are reported with their cell") {
    TimeGrid grid(0.0, 1.0, 4);
    BlockOperator op = BlockOperator::identity(grid, 2);
    op.block(0, 0, 2) = 0.0;
    op.block(0, 1, 2) = 0.0;
    op.block(1, 0, 2) = 0.0;
    op.block(1, 1, 2) = 0.0;
    CHECK_THROWS_WITH_AS(op.inverse(), doctest::Contains("cell 2"), SingularityError);
}

TEST_CASE("lemma evaluation: pin-free reductions") {
    TimeGrid grid(0.0, 2.0, 8);
    BlockOperator zero_k(grid, 2);
    GridFunction g(grid, 2), f(grid, 2);
    GaussianFunctional phi{zero_k, g, {}, Normalization::constant(1.0)};

    CHECK(t_transform_lemma(phi, f) == complex(1.0));

    for (int i = 0; i < 8; ++i) f.at(0, i) = 0.25 * i;
    const double norm_sq = inner_product(f, f).real();
    CHECK(t_transform_lemma(phi, f).real() ==
          doctest::Approx(std::exp(-0.5 * norm_sq)).epsilon(1e-14));

    // Translation covariance: the shift g only ever enters through f + g.
    GridFunction g2(grid, 2);
    for (int i = 0; i < 8; ++i) g2.at(1, i) = complex(0.1 * i, -0.2);
    GaussianFunctional phi_shifted{zero_k, g2, {}, Normalization::constant(1.0)};
    CHECK(t_transform_lemma(phi_shifted, f) == t_transform_lemma(phi, f + g2));
}

TEST_CASE("pin matrix structure") {
    TimeGrid grid(0.0, 2.0, 8);
    BlockOperator zero_k(grid, 2);
    const BlockOperator n_inv = BlockOperator::identity(grid, 2);
    GridFunction g(grid, 2), f(grid, 2);

    GridFunction eta1 = indicator(grid, 0.0, 1.0, 0);
    GridFunction eta2 = indicator(grid, 1.0, 2.0, 1);
    GaussianFunctional phi{zero_k, g, {Pin{eta1, 0.4}, Pin{eta2, -0.7}},
                           Normalization::constant(1.0)};
    const PinMatrix pm = pin_matrix(phi, f, n_inv);

    CHECK(pm.u[0] == complex(0.0, 0.4));  // f = g = 0: u is purely the pin values
    CHECK(pm.u[1] == complex(0.0, -0.7));
    CHECK(pm.M[1] == complex(0.0));  // orthogonal pins with trivial kernel
    CHECK(pm.M[2] == complex(0.0));
    CHECK(pm.M[0].real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(check_condition(pm));
}

TEST_CASE("lemma condition on the pin matrix") {
    PinMatrix pos{1, {complex(0.1, 0.0)}, {complex(0.0)}};
    CHECK(check_condition(pos));
    PinMatrix zero{1, {complex(0.0, 0.0)}, {complex(0.0)}};
    CHECK_FALSE(check_condition(zero));
    PinMatrix imag{1, {complex(0.0, 1.0)}, {complex(0.0)}};
    CHECK(check_condition(imag));
    PinMatrix imag_neg{1, {complex(0.0, -2.0)}, {complex(0.0)}};
    CHECK(check_condition(imag_neg));
    PinMatrix indefinite{2,
                         {complex(0.0, 1.0), complex(0.0), complex(0.0), complex(0.0, -1.0)},
                         {complex(0.0), complex(0.0)}};
    CHECK_FALSE(check_condition(indefinite));
}

TEST_CASE("oracle on closed-form cases") {
    TimeGrid grid(0.0, 2.0, 8);
    BlockOperator zero_k(grid, 2);
    GridFunction g(grid, 2), f(grid, 2);

    GaussianFunctional trivial{zero_k, g, {}, Normalization::constant(1.0)};
    for (double sigma : {1.0, 1e-2, 1e-4})
        CHECK(std::abs(t_transform_oracle(trivial, f, sigma) - complex(1.0)) <= 1e-12);

    // One pin on the unit window: the Gaussian marginal of a variance-delta
    // pairing.
    GaussianFunctional pinned{zero_k, g,
                              {Pin{indicator(grid, 0.0, 2.0, 0), 0.0}},
                              Normalization::constant(1.0)};
    const double want = 1.0 / std::sqrt(2.0 * kPi * grid.delta());
    CHECK(t_transform_oracle(pinned, f, 1e-4).real() == doctest::Approx(want).epsilon(1e-7));
    CHECK_THROWS_AS(t_transform_oracle(pinned, f, 0.0), std::invalid_argument);
}

TEST_CASE("oracle equivalence on random instances") {
    NormalRng rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const GaussianInstance inst = random_gaussian_instance(rng, 16);
        const complex lemma = t_transform_lemma(inst.phi, inst.f);
        const complex oracle = t_transform_oracle(inst.phi, inst.f, 1e-3);
        worst = std::max(worst, std::abs(lemma - oracle) / std::abs(lemma));
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("normalization modes act identically on both routes") {
    NormalRng rng(616);
    for (int i = 0; i < 6; ++i) {
        GaussianInstance inst = random_gaussian_instance(rng, 10);
        BlockOperator n = BlockOperator::identity(inst.phi.K.grid(), 2);
        n += inst.phi.K;
        const complex sqrt_det = std::exp(0.5 * fredholm_log_det(n));

        inst.phi.normalization = Normalization::constant(1.0);
        const complex plain = t_transform_lemma(inst.phi, inst.f);

        inst.phi.normalization = Normalization::eliminate_det();
        const complex eliminated = t_transform_lemma(inst.phi, inst.f);
        CHECK(std::abs(eliminated - plain * sqrt_det) <= 1e-12 * std::abs(eliminated));
        CHECK(std::abs(t_transform_oracle(inst.phi, inst.f, 1e-3) - eliminated) <=
              1e-4 * std::abs(eliminated));

        const complex prefactor(0.7, -0.2);
        inst.phi.normalization = Normalization::eliminate_det_with(prefactor);
        const complex scaled = t_transform_lemma(inst.phi, inst.f);
        CHECK(std::abs(scaled - prefactor * eliminated) <= 1e-13 * std::abs(scaled));
        CHECK(std::abs(t_transform_oracle(inst.phi, inst.f, 1e-3) - scaled) <=
              1e-4 * std::abs(scaled));
    }
}

TEST_CASE("degenerate pins are rejected") {
    TimeGrid grid(0.0, 1.0, 8);
    BlockOperator zero_k(grid, 2);
    GridFunction g(grid, 2), f(grid, 2);
    const GridFunction eta = indicator(grid, 0.0, 1.0, 0);
    GaussianFunctional phi{zero_k, g, {Pin{eta, 0.1}, Pin{eta, 0.4}},
                           Normalization::constant(1.0)};
    CHECK_THROWS_WITH_AS(t_transform_lemma(phi, f), doctest::Contains("pin matrix"),
                         SingularityError);
}

TEST_CASE("oracle converges quadratically in the delta width") {
    NormalRng rng(5150);
    int rated = 0;
    for (int i = 0; i < 8 && rated < 3; ++i) {
        const GaussianInstance inst = random_gaussian_instance(rng, 10, 1);
        const complex lemma = t_transform_lemma(inst.phi, inst.f);
        const double coarse = std::abs(t_transform_oracle(inst.phi, inst.f, 1e-2) - lemma);
        const double fine = std::abs(t_transform_oracle(inst.phi, inst.f, 1e-3) - lemma);
        if (fine < 1e-13 * std::abs(lemma)) continue;
        CHECK(coarse / fine == doctest::Approx(100.0).epsilon(0.5));
        ++rated;
    }
    CHECK(rated >= 1);
}

TEST_CASE("square-root branch tracking") {
    // Walk z(p) = exp(i p) from 0 to 3 pi/1: principal sqrt jumps at the cut,
    // the tracked value stays continuous.
    const auto value = [](double p) { return std::exp(complex(0.0, p)); };
    const complex tracked = branch_tracked_sqrt(value, 0.0, 4.5, 64);
    CHECK(std::abs(tracked - std::exp(complex(0.0, 2.25))) <= 1e-12);
    CHECK(std::abs(tracked + std::sqrt(value(4.5))) <= 1e-12);  // opposite of principal

    const complex ref(-1.0, 0.05);
    const complex s = continuous_sqrt(complex(1.0, 0.0), ref);
    CHECK(s == complex(-1.0, 0.0));
}
