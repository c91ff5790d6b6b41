#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tomolab/moments.hpp"

using namespace tomolab;

TEST_CASE("fock and coherent first moments from tomograms") {
    for (int n : {0, 1, 4}) {
        const FockVector f = build_state(StateSpec::fock(n));
        const QuadratureGrid grid = default_grid(f);
        CHECK(wunsche_moment(f, 1, 1, grid).real() == Catch::Approx(n).margin(1e-8));
        CHECK(std::abs(wunsche_moment(f, 0, 1, grid)) < 1e-10);
    }
    const FockVector cs = build_state(StateSpec::coherent(0.7));
    const QuadratureGrid grid = default_grid(cs);
    CHECK(std::abs(wunsche_moment(cs, 0, 1, grid) - cplx{0.7}) < 1e-8);
    CHECK(std::abs(wunsche_moment(cs, 0, 0, grid) - cplx{1.0}) < 1e-8);
}

TEST_CASE("tomographic moments equal the ladder-algebra route") {
    const StateSpec specs[] = {StateSpec::fock(3),          StateSpec::coherent({0.7, 0.3}),
                               StateSpec::pacs(1.0, 1),     StateSpec::svs(0.5),
                               StateSpec::pasvs(0.5, 0.0, 1)};
    for (const auto& sp : specs) {
        const FockVector st = build_state(sp);
        const QuadratureGrid grid = default_grid(st);
        for (int k = 0; k <= 4; ++k)
            for (int l = 0; k + l <= 4; ++l) {
                const cplx tomo = wunsche_moment(st, k, l, grid);
                const cplx ladder = fock_expectation(st, k, l);
                INFO(format_state_spec(sp) << " k=" << k << " l=" << l);
                CHECK(std::abs(tomo - ladder) < 1e-6);
            }
    }
}

TEST_CASE("moment tables are hermitian") {
    const FockVector st = build_state(StateSpec::pacs({0.8, 0.4}, 1));
    const QuadratureGrid grid = default_grid(st);
    const MomentTable t = moment_table(st, 4, grid, "pacs");
    CHECK(t.source == "pacs");
    for (const auto& [kl, v] : t.entries) {
        const cplx other = t.entries.at({kl.second, kl.first});
        CHECK(std::abs(v - std::conj(other)) < 1e-8);
    }
}

TEST_CASE("variance from the slice matches the moment route") {
    const FockVector st = build_state(StateSpec::pacs(1.5, 1));
    const QuadratureGrid grid = default_grid(st);
    for (double theta : {0.0, pi / 2.0}) {
        const double direct = quadrature_variance(st, theta, grid).raw_variance;
        // X_theta = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2)
        const cplx a1 = fock_expectation(st, 0, 1) * std::polar(1.0, -theta);
        const cplx a2 = fock_expectation(st, 0, 2) * std::polar(1.0, -2.0 * theta);
        const double n_mean = fock_expectation(st, 1, 1).real();
        const double x_mean = std::sqrt(2.0) * a1.real();
        const double x2_mean = 0.5 * (2.0 * a2.real() + 2.0 * n_mean + 1.0);
        CHECK(direct == Catch::Approx(x2_mean - x_mean * x_mean).margin(1e-6));
    }
}

TEST_CASE("coherent slices carry the vacuum variance") {
    const FockVector cs = build_state(StateSpec::coherent({1.0, 0.5}));
    const QuadratureGrid grid = default_grid(cs);
    for (double theta : {0.0, 0.9, 2.2}) {
        const VarianceReport r = quadrature_variance(cs, theta, grid);
        CHECK(r.normalized_variance == Catch::Approx(1.0).margin(1e-8));
        CHECK_FALSE(r.squeezed);
    }
}

TEST_CASE("uncertainty products") {
    const FockVector cs = build_state(StateSpec::coherent(0.8));
    const QuadratureGrid cg = default_grid(cs);
    const double prod_cs = quadrature_variance(cs, 0.0, cg).normalized_variance *
                           quadrature_variance(cs, pi / 2.0, cg).normalized_variance;
    CHECK(prod_cs == Catch::Approx(1.0).margin(1e-6));
    const FockVector pacs = build_state(StateSpec::pacs(2.0, 1));
    const QuadratureGrid pg = default_grid(pacs);
    const double prod_pacs = quadrature_variance(pacs, 0.0, pg).normalized_variance *
                             quadrature_variance(pacs, pi / 2.0, pg).normalized_variance;
    CHECK(prod_pacs > 1.0);
}

TEST_CASE("mean photon number via the tomographic route") {
    const FockVector svs = build_state(StateSpec::svs(0.5));
    const QuadratureGrid grid = default_grid(svs);
    CHECK(mean_photon(svs, grid) ==
          Catch::Approx(std::sinh(0.5) * std::sinh(0.5)).margin(1e-6));
}

TEST_CASE("order cap and argument guards") {
    const FockVector vac = build_state(StateSpec::fock(0));
    const QuadratureGrid grid = default_grid(vac);
    CHECK_THROWS_AS(wunsche_moment(vac, 7, 6, grid), std::domain_error);
    CHECK_THROWS_AS(wunsche_moment(vac, -1, 0, grid), std::domain_error);
    CHECK_THROWS_AS(gain(0.0, 1, grid), std::domain_error);
}
