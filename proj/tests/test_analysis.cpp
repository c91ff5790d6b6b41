#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tomolab/analysis.hpp"

using namespace tomolab;

TEST_CASE("beta_opt values and limits") {
    CHECK(beta_opt(1.0, 1) == Catch::Approx(0.5 * (1.0 + std::sqrt(5.0))).margin(1e-14));
    CHECK(beta_opt(1.0, 2) == Catch::Approx(2.0).margin(1e-14));
    // alpha >> sqrt(m): beta_opt -> alpha + m / alpha
    CHECK(beta_opt(50.0, 1) == Catch::Approx(50.0 + 1.0 / 50.0).margin(1e-4));
    // alpha -> 0: beta_opt -> sqrt(m)
    CHECK(beta_opt(1e-6, 4) == Catch::Approx(2.0).margin(1e-5));
    CHECK_THROWS_AS(beta_opt(0.0, 1), std::domain_error);
}

TEST_CASE("beta_opt maximizes the coherent fidelity") {
    for (double a : {0.7, 1.4}) {
        for (int m : {1, 2}) {
            const FockVector st = build_state(StateSpec::pacs(a, m));
            const double b0 = beta_opt(a, m);
            const double f0 = fidelity_with_coherent(st, b0);
            for (double d : {-0.05, -0.01, 0.01, 0.05})
                CHECK(fidelity_with_coherent(st, b0 + d) < f0);
        }
    }
}

TEST_CASE("fit_curve recovers exact synthetic laws") {
    std::vector<double> xs, log_ys, pow_ys;
    for (int i = 1; i <= 20; ++i) {
        const double x = 0.5 * i;
        xs.push_back(x);
        log_ys.push_back(3.0 * std::log(x) + 2.0);
        pow_ys.push_back(2.5 * std::pow(x, 0.7));
    }
    const FitResult lf = fit_curve(xs, log_ys, FitModel::LogLinear);
    CHECK(lf.c1 == Catch::Approx(3.0).margin(1e-10));
    CHECK(lf.c2 == Catch::Approx(2.0).margin(1e-10));
    CHECK(lf.rms_residual < 1e-10);
    const FitResult pf = fit_curve(xs, pow_ys, FitModel::PowerLaw);
    CHECK(pf.c1 == Catch::Approx(2.5).margin(1e-10));
    CHECK(pf.c2 == Catch::Approx(0.7).margin(1e-10));
}

TEST_CASE("fit_curve rejects degenerate designs") {
    CHECK_THROWS_AS(fit_curve({1, 2, 3}, {1, 2, 3}, FitModel::LogLinear), std::invalid_argument);
    CHECK_THROWS_AS(fit_curve({1, 2, 2, 3}, {1, 2, 3, 4}, FitModel::LogLinear),
                    std::invalid_argument);
    CHECK_THROWS_AS(fit_curve({1, 2, 3, 4}, {1, -2, 3, 4}, FitModel::PowerLaw),
                    std::invalid_argument);
}

TEST_CASE("wigner spot values") {
    const FockVector vac = build_state(StateSpec::fock(0));
    CHECK(wigner_eval(vac, 0.0, 0.0) == Catch::Approx(1.0 / pi).margin(1e-10));
    const FockVector one = build_state(StateSpec::fock(1));
    CHECK(wigner_eval(one, 0.0, 0.0) == Catch::Approx(-1.0 / pi).margin(1e-10));
    const FockVector cs = build_state(StateSpec::coherent(1.2));
    CHECK(wigner_eval(cs, std::sqrt(2.0) * 1.2, 0.0) == Catch::Approx(1.0 / pi).margin(1e-8));
}

TEST_CASE("fock distance experiment, small run") {
    const ExperimentReport rep = run_fock_distance_experiment(6);
    CHECK(rep.name == "fock-distances");
    REQUIRE(rep.curves.size() == 3);
    for (const auto& c : rep.curves) CHECK(c.xs.size() == 6);
    CHECK(rep.all_passed());
    const nlohmann::json j = to_json(rep);
    CHECK(j["all_passed"] == true);
    CHECK(j["checks"].size() == rep.checks.size());
    CHECK_THROWS_AS(run_fock_distance_experiment(1), std::domain_error);
}

TEST_CASE("gain and variance experiment, small run") {
    const ExperimentReport rep = run_gain_variance_experiment({0.5, 1.0, 1.5, 2.0}, {1});
    for (const auto& c : rep.checks) {
        INFO(c.description << " measured=" << c.measured);
        CHECK(c.pass);
    }
}

TEST_CASE("pacs marker experiment orders the curves") {
    const ExperimentReport rep =
        run_pacs_marker_experiment({1.0, 1.5, 2.0}, {1, 2}, PacsReference::BetaOpt, 3);
    for (const auto& c : rep.checks) {
        INFO(c.description);
        CHECK(c.pass);
    }
    CHECK(rep.curves.size() == 9);  // 3 markers x 2 m-values + 3 relative differences
}
