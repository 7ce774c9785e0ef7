#pragma once

#include <cstdint>

namespace hypdet::constants {

// Absolute-error target plus a hard cap on series length.  Evaluations that
// cannot meet the target within max_terms throw budget_exceeded.
struct PrecisionPolicy {
    double target_abs_error = 1e-10;
    int64_t max_terms = 1 << 20;

    void validate() const;
};

struct UniversalConstants {
    double E;                  // growth rate of log det per unit hyperbolic area
    double zeta_prime_minus1;  // zeta'(-1)
    double log_A;              // log of the Glaisher-Kinkelin constant
    double euler_gamma;        // gamma_0
};

// gamma_0 = lim_n (sum_{k<=n} 1/k - log n), evaluated with Euler-Maclaurin
// correction terms so that modest n reaches ~1e-13.
double euler_gamma(const PrecisionPolicy& policy);

// The raw partial sum sum_{k<=n} 1/k - log n (unaccelerated; test oracle).
double euler_gamma_partial_sum(int64_t n);

// The defining finite-n quotient for the Glaisher-Kinkelin constant,
//   prod_{k<=n} k^k / (e^{-n^2/4} n^{n^2/2 + n/2 + 1/12}),
// evaluated in log space.  Slowly convergent; serves as the independent
// cross-check for the zeta'(2) route.
double glaisher_limit(int64_t n);

// zeta'(2) = -sum_{n>=2} log(n)/n^2 with Euler-Maclaurin tail correction.
double zeta_prime_2(const PrecisionPolicy& policy);

// zeta'(-1) = 1/12 - log A, with log A obtained from the functional-equation
// identity  log A = (gamma_0 + log 2pi)/12 - zeta'(2)/(2 pi^2).
double zeta_prime_minus1(const PrecisionPolicy& policy);

// E = (1/4pi) (4 zeta'(-1) - 1/2 + log 2pi)
double constant_E(const PrecisionPolicy& policy);

// G(u) = int_0^1 t^{-3/2} e^{-u^2/(4t)} dt = (2 sqrt(pi)/u) erfc(u/2), u > 0.
double G(double u);

// Closed-form majorant (2 sqrt(2 pi)/u) e^{-u^2/8} >= G(u).
double G_bound(double u);

// All four constants at maximum internal precision (cached, thread-safe).
const UniversalConstants& universal();

} // namespace hypdet::constants
