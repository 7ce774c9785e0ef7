#include "hypdet/constants.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hypdet/errors.hpp"
#include "hypdet/quadrature.hpp"

namespace hypdet::constants {

void PrecisionPolicy::validate() const {
    if (!(target_abs_error > 0.0))
        throw std::invalid_argument("PrecisionPolicy: target_abs_error must be > 0");
    if (max_terms < 1)
        throw std::invalid_argument("PrecisionPolicy: max_terms must be >= 1");
}

double euler_gamma_partial_sum(int64_t n) {
    if (n < 1) throw std::invalid_argument("euler_gamma_partial_sum: n >= 1 required");
    KahanSum h;
    for (int64_t k = 1; k <= n; ++k) h.add(1.0 / static_cast<double>(k));
    return h.value() - std::log(static_cast<double>(n));
}

namespace {

// Terms needed so the first omitted Euler-Maclaurin correction (~ 1/(252 n^6))
// is below tol/2.
int64_t gamma_terms_needed(double tol) {
    double n = std::pow(2.0 / (252.0 * tol), 1.0 / 6.0);
    int64_t need = static_cast<int64_t>(std::ceil(n)) + 1;
    return need < 8 ? 8 : need;
}

double euler_gamma_at(int64_t n) {
    KahanSum h;
    for (int64_t k = 1; k <= n; ++k) h.add(1.0 / static_cast<double>(k));
    const double x = static_cast<double>(n);
    // H_n - log n - gamma = 1/(2n) - 1/(12 n^2) + 1/(120 n^4) - 1/(252 n^6) + ...
    return h.value() - std::log(x) - 0.5 / x + 1.0 / (12.0 * x * x) -
           1.0 / (120.0 * x * x * x * x);
}

// Euler-Maclaurin terms for the tail of sum log(n)/n^2 from N.
int64_t zeta2_terms_needed(double tol) {
    int64_t n = 64;
    while (n < (int64_t{1} << 40)) {
        double x = static_cast<double>(n);
        double first_omitted = (26.0 + 24.0 * std::log(x)) / (720.0 * x * x * x * x * x);
        if (first_omitted < 0.5 * tol) return n;
        n *= 2;
    }
    return int64_t{1} << 40;
}

double zeta_prime_2_at(int64_t n_tail) {
    KahanSum s;
    for (int64_t k = 2; k < n_tail; ++k) {
        double x = static_cast<double>(k);
        s.add(std::log(x) / (x * x));
    }
    const double x = static_cast<double>(n_tail);
    const double lx = std::log(x);
    // sum_{n>=N} log(n)/n^2 = (log N + 1)/N + log N/(2N^2) - (1-2 log N)/(12 N^3) + ...
    double tail = (lx + 1.0) / x + lx / (2.0 * x * x) - (1.0 - 2.0 * lx) / (12.0 * x * x * x);
    return -(s.value() + tail);
}

struct Cache {
    double gamma;
    double zp2;
    double log_A;
    double zpm1;
    double E;
};

const Cache& cache() {
    static Cache c;
    static std::once_flag once;
    std::call_once(once, [] {
        c.gamma = euler_gamma_at(gamma_terms_needed(1e-13));
        c.zp2 = zeta_prime_2_at(zeta2_terms_needed(1e-13));
        const double log2pi = std::log(2.0 * std::numbers::pi);
        c.log_A = (c.gamma + log2pi) / 12.0 - c.zp2 / (2.0 * std::numbers::pi * std::numbers::pi);
        c.zpm1 = 1.0 / 12.0 - c.log_A;
        c.E = (4.0 * c.zpm1 - 0.5 + log2pi) / (4.0 * std::numbers::pi);
    });
    return c;
}

} // namespace

double euler_gamma(const PrecisionPolicy& policy) {
    policy.validate();
    if (gamma_terms_needed(policy.target_abs_error) > policy.max_terms)
        throw budget_exceeded("euler_gamma: max_terms too small for target_abs_error");
    return cache().gamma;
}

double glaisher_limit(int64_t n) {
    if (n < 2) throw std::invalid_argument("glaisher_limit: n >= 2 required");
    // log of the quotient cancels two ~n^2 log n sized terms; long double
    // accumulation keeps the cancellation noise below the n^{-2} convergence
    long double s = 0.0L; // log prod k^k = sum k log k
    for (int64_t k = 2; k <= n; ++k) {
        const long double x = static_cast<long double>(k);
        s += x * std::log(x);
    }
    const long double x = static_cast<long double>(n);
    const long double log_q =
        s + x * x / 4.0L - (x * x / 2.0L + x / 2.0L + 1.0L / 12.0L) * std::log(x);
    return static_cast<double>(std::exp(log_q));
}

double zeta_prime_2(const PrecisionPolicy& policy) {
    policy.validate();
    if (zeta2_terms_needed(policy.target_abs_error) > policy.max_terms)
        throw budget_exceeded("zeta_prime_2: max_terms too small for target_abs_error");
    return cache().zp2;
}

double zeta_prime_minus1(const PrecisionPolicy& policy) {
    policy.validate();
    if (zeta2_terms_needed(policy.target_abs_error) > policy.max_terms)
        throw budget_exceeded("zeta_prime_minus1: max_terms too small for target_abs_error");
    return cache().zpm1;
}

double constant_E(const PrecisionPolicy& policy) {
    policy.validate();
    if (zeta2_terms_needed(policy.target_abs_error) > policy.max_terms)
        throw budget_exceeded("constant_E: max_terms too small for target_abs_error");
    return cache().E;
}

double G(double u) {
    if (!(u > 0.0)) throw std::domain_error("G: u must be > 0");
    return 2.0 * std::sqrt(std::numbers::pi) / u * std::erfc(0.5 * u);
}

double G_bound(double u) {
    if (!(u > 0.0)) throw std::domain_error("G_bound: u must be > 0");
    return 2.0 * std::sqrt(2.0 * std::numbers::pi) / u * std::exp(-u * u / 8.0);
}

const UniversalConstants& universal() {
    static UniversalConstants u = [] {
        const Cache& c = cache();
        return UniversalConstants{c.E, c.zpm1, c.log_A, c.gamma};
    }();
    return u;
}

} // namespace hypdet::constants
