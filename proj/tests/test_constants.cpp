#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypdet/constants.hpp"
#include "hypdet/errors.hpp"
#include "hypdet/quadrature.hpp"

using namespace hypdet;
namespace hc = hypdet::constants;

namespace {

// independent oracle for G: the defining t-integral, via 1/t substitution
double G_integral_oracle(double u) {
    // int_0^1 t^{-3/2} e^{-u^2/4t} dt = int_1^inf x^{-1/2} e^{-u^2 x / 4} dx
    const double a = u * u / 4.0;
    const double X = 1.0 + std::max(4.0, 60.0 / a); // truncation tail below 1e-26 relative
    return quad::integrate([a](double x) { return std::exp(-a * x) / std::sqrt(x); }, 1.0, X,
                           1e-12);
}

} // namespace

TEST_CASE("euler gamma: accelerated value against the raw limit") {
    hc::PrecisionPolicy tight{1e-10, 1 << 20};
    const double g = hc::euler_gamma(tight);
    CHECK(g == doctest::Approx(0.5772156649015329).epsilon(1e-12));
    // raw partial sums converge from above like 1/(2n)
    CHECK(std::abs(hc::euler_gamma_partial_sum(1000000) - g) < 1e-6);
    // frozen sanity point on the unaccelerated sequence
    CHECK(hc::euler_gamma_partial_sum(10) == doctest::Approx(0.6263831609742079).epsilon(1e-14));
    // loose policy containment
    hc::PrecisionPolicy loose{1e-2, 1 << 20};
    const double gl = hc::euler_gamma(loose);
    CHECK(gl > 0.567);
    CHECK(gl < 0.587);
}

TEST_CASE("euler gamma: budget errors") {
    CHECK_THROWS_AS(hc::euler_gamma({1e-10, 4}), budget_exceeded);
    CHECK_THROWS_AS(hc::euler_gamma({-1.0, 100}), std::invalid_argument);
    CHECK_THROWS_AS(hc::euler_gamma({1e-6, 0}), std::invalid_argument);
}

TEST_CASE("glaisher limit: hand value at n = 2 and convergence") {
    // defining quotient at n = 2: prod = 1 * 2^2 = 4, denominator e^{-1} 2^{37/12}
    CHECK(hc::glaisher_limit(2) == doctest::Approx(1.282858196255959).epsilon(1e-12));
    const double A = std::exp(hc::universal().log_A);
    CHECK(std::abs(hc::glaisher_limit(2000) - A) < 1e-3);
    // monotone approach along a doubling sequence
    for (int64_t n : {10, 100, 1000})
        CHECK(std::abs(hc::glaisher_limit(2 * n) - A) < std::abs(hc::glaisher_limit(n) - A));
    CHECK_THROWS_AS(hc::glaisher_limit(1), std::invalid_argument);
}

TEST_CASE("zeta'(-1) via the zeta'(2) route") {
    hc::PrecisionPolicy p{1e-9, 1 << 20};
    const double z = hc::zeta_prime_minus1(p);
    CHECK(z == doctest::Approx(-0.1654211437004509).epsilon(1e-10));
    // consistency: 1/12 - zeta'(-1) = log A, cross-checked against the limit route
    CHECK(std::abs(1.0 / 12.0 - z - std::log(hc::glaisher_limit(4000))) < 1e-4);
    // containment at loose precision
    hc::PrecisionPolicy loose{1e-2, 1 << 20};
    const double zl = hc::zeta_prime_minus1(loose);
    CHECK(zl > -0.176);
    CHECK(zl < -0.156);
}

TEST_CASE("constant E") {
    hc::PrecisionPolicy p{1e-9, 1 << 20};
    const double E = hc::constant_E(p);
    CHECK(E > 0.0);
    CHECK(E == doctest::Approx(0.0538).epsilon(2e-4)); // 4 decimals
    CHECK(E == doctest::Approx(0.053809688).epsilon(1e-8));
    // identity with its ingredients
    const auto& u = hc::universal();
    const double expected =
        (4.0 * u.zeta_prime_minus1 - 0.5 + std::log(2.0 * std::numbers::pi)) /
        (4.0 * std::numbers::pi);
    CHECK(E == expected);
    CHECK(u.E > 0.0537);
    CHECK(u.E < 0.0539);
}

TEST_CASE("universal constants: zeta'(-1) + log A = 1/12") {
    const auto& u = hc::universal();
    CHECK(std::abs(u.zeta_prime_minus1 + u.log_A - 1.0 / 12.0) < 1e-12);
}

TEST_CASE("determinism: identical calls produce bit-identical values") {
    hc::PrecisionPolicy p{1e-9, 1 << 20};
    CHECK(hc::constant_E(p) == hc::constant_E(p));
    CHECK(hc::euler_gamma(p) == hc::euler_gamma(p));
    CHECK(hc::glaisher_limit(500) == hc::glaisher_limit(500));
}

TEST_CASE("G: closed form against the defining integral") {
    CHECK(hc::G(2.0) == doctest::Approx(0.27880558528066196).epsilon(1e-10));
    for (double u : {0.3, 0.8, 2.0, 4.0, 7.0})
        CHECK(std::abs(hc::G(u) - G_integral_oracle(u)) < 1e-8);
    CHECK_THROWS_AS(hc::G(0.0), std::domain_error);
    CHECK_THROWS_AS(hc::G(-1.0), std::domain_error);
}

TEST_CASE("G: bound and strict decrease on a log grid") {
    CHECK(hc::G_bound(2.0) == doctest::Approx(1.5203469010662807).epsilon(1e-12));
    double prev = -1.0;
    for (int i = 0; i < 50; ++i) {
        const double u = 0.1 * std::pow(200.0, i / 49.0); // log grid in [0.1, 20]
        const double g = hc::G(u);
        CHECK(g > 0.0);
        CHECK(g <= hc::G_bound(u));
        if (prev > 0.0) CHECK(g < prev);
        prev = g;
    }
    CHECK(hc::G(1.0) > hc::G(2.0));
    CHECK(hc::G(2.0) > hc::G(4.0));
}
