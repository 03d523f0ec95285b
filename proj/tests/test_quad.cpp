#include <doctest.h>

#include <cmath>

#include "isac/quad.hpp"
#include "oracles.hpp"

using namespace isac;

TEST_CASE("QuadSpec validation") {
    CHECK_THROWS_AS((num::QuadSpec{0.0, 0.0, 10}).validate(), DomainError);
    CHECK_THROWS_AS((num::QuadSpec{1e-6, -1.0, 10}).validate(), DomainError);
    CHECK_THROWS_AS((num::QuadSpec{1e-6, 0.0, 0}).validate(), DomainError);
    CHECK_NOTHROW(num::QuadSpec::special_function().validate());
}

TEST_CASE("incomplete_beta basics") {
    CHECK(num::incomplete_beta(1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(num::incomplete_beta(0.0, 0.7, 3.2) == 0.0);
    // int_0^0.5 t^(-1/2) dt = 2 sqrt(0.5)
    CHECK(num::incomplete_beta(0.5, 0.5, 1.0) ==
          doctest::Approx(2.0 * std::sqrt(0.5)).epsilon(1e-10));
    CHECK_THROWS_AS(num::incomplete_beta(-0.1, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(num::incomplete_beta(1.1, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(num::incomplete_beta(0.5, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(num::incomplete_beta(0.5, -1.0, 1.0), DomainError);
}

TEST_CASE("incomplete_beta against brute-force trapezoid oracle") {
    // int_0^0.3 t^(-1/2) (1-t)^(3/2) dt; substituting t = u^2 removes the
    // endpoint singularity so the plain trapezoid rule converges.
    const double frozen = 0.9388131317179206;
    auto g = [](double u) { return 2.0 * std::pow(1.0 - u * u, 1.5); };
    const double oracle = oracles::trapezoid(g, 0.0, std::sqrt(0.3), 10'000'000);
    CHECK(oracle == doctest::Approx(frozen).epsilon(1e-9));
    CHECK(num::incomplete_beta(0.3, 0.5, 2.5) == doctest::Approx(frozen).epsilon(1e-8));
}

TEST_CASE("incomplete_beta properties") {
    // monotone nondecreasing in the upper limit
    for (double b : {0.3, 0.5, 1.0, 2.0}) {
        for (double c : {0.5, 1.0, 3.2}) {
            double prev = 0.0;
            for (double a = 0.1; a <= 1.0; a += 0.1) {
                const double v = num::incomplete_beta(a, b, c);
                CHECK(v >= prev - 1e-12);
                prev = v;
            }
        }
    }
    // B(1, b, c) equals the complete Beta function
    for (double b : {0.25, 0.5, 1.5, 4.0}) {
        for (double c : {0.5, 1.0, 2.5, 6.0}) {
            CHECK(num::incomplete_beta(1.0, b, c) ==
                  doctest::Approx(num::complete_beta(b, c)).epsilon(1e-8));
        }
    }
    // c <= 0 is integrable for a < 1 but divergent at a = 1
    const double v = num::incomplete_beta(0.5, 1.0, -0.5);
    auto f = [](double t) { return std::pow(1.0 - t, -1.5); };
    CHECK(v == doctest::Approx(oracles::trapezoid(f, 0.0, 0.5, 1'000'000)).epsilon(1e-6));
    CHECK_THROWS_AS(num::incomplete_beta(1.0, 1.0, -0.5), DomainError);
}

TEST_CASE("lower_incomplete_gamma") {
    CHECK(num::lower_incomplete_gamma(1.0, 1.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    // sqrt(pi) erf(1)
    CHECK(num::lower_incomplete_gamma(0.5, 1.0) ==
          doctest::Approx(1.4936482656248540).epsilon(1e-12));
    CHECK(num::lower_incomplete_gamma(0.5, 0.0) == 0.0);
    CHECK(num::lower_incomplete_gamma(3.7, 0.0) == 0.0);
    CHECK_THROWS_AS(num::lower_incomplete_gamma(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(num::lower_incomplete_gamma(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(num::lower_incomplete_gamma(1.0, -0.1), DomainError);

    // complete-gamma limit at b = 50
    CHECK(num::lower_incomplete_gamma(0.5, 50.0) ==
          doctest::Approx(1.7724538509055160).epsilon(1e-10));
    CHECK(num::lower_incomplete_gamma(1.0, 50.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(num::lower_incomplete_gamma(1.5, 50.0) ==
          doctest::Approx(0.8862269254527580).epsilon(1e-10));
}

TEST_CASE("integrate_semi_infinite basics") {
    const auto spec = num::QuadSpec::single_integral();
    CHECK(num::integrate_semi_infinite([](double z) { return std::exp(-z); }, spec) ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(num::integrate_semi_infinite([](double z) { return z * std::exp(-z * z); }, spec) ==
          doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("integrate_semi_infinite against brute-force oracle") {
    auto f = [](double z) { return 1.0 / ((1.0 + z) * (1.0 + z * z)); };
    // 1e8-panel trapezoid on [0, 1e4] plus the analytic tail bound
    // int_X^inf dz/((1+z)(1+z^2)) < X^-2 / 2.
    const double oracle = oracles::trapezoid(f, 0.0, 1e4, 100'000'000);
    const double tail_bound = 0.5e-8;
    const double got = num::integrate_semi_infinite(f, num::QuadSpec::single_integral());
    CHECK(std::abs(got - oracle) <= 1e-6 + tail_bound);
    // the integral happens to be pi/4, a free cross-check of the oracle
    CHECK(oracle == doctest::Approx(M_PI / 4.0).epsilon(1e-7));
}

TEST_CASE("integrate_semi_infinite is linear") {
    const auto spec = num::QuadSpec::single_integral();
    auto f = [](double z) { return std::exp(-z); };
    auto g = [](double z) { return 1.0 / ((1.0 + z) * (1.0 + z * z)); };
    const double a = 2.5, b = -1.3;
    auto combo = [&](double z) { return a * f(z) + b * g(z); };
    const double lhs = num::integrate_semi_infinite(combo, spec);
    const double rhs =
        a * num::integrate_semi_infinite(f, spec) + b * num::integrate_semi_infinite(g, spec);
    CHECK(std::abs(lhs - rhs) <= spec.rel_tol * (std::abs(a) + std::abs(b) + std::abs(lhs)));
}

TEST_CASE("integrate is deterministic") {
    auto f = [](double z) { return std::exp(-z) * std::sin(10.0 * z + 1.0); };
    const double a = num::integrate_semi_infinite(f, num::QuadSpec::single_integral());
    const double b = num::integrate_semi_infinite(f, num::QuadSpec::single_integral());
    CHECK(a == b);
}

TEST_CASE("ConvergenceError carries the best estimate") {
    num::QuadSpec tight{1e-14, 0.0, 2};
    auto f = [](double z) { return std::exp(-z) * std::sin(40.0 * z); };
    try {
        num::integrate_semi_infinite(f, tight);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(std::isfinite(e.best_estimate));
        CHECK(e.error_bound > 0.0);
        // the true value is 40/1601
        CHECK(e.best_estimate == doctest::Approx(40.0 / 1601.0).epsilon(0.2));
    }
}
