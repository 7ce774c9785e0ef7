#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hypdet/spectrum.hpp"

namespace hypdet::determinant {

struct DetParams {
    double L = 8.0;       // geodesic cutoff; spectrum must be complete to L
    double R = 40.0;      // heat-time cutoff
    double eta = 0.2;     // trusted spectral-gap lower bound (caller-supplied)
    double quad_abs_tol = 1e-9;

    void validate() const;
};

// log det of the Laplacian with an itemized certified error interval.
// budget keys: t_tail, geodesic_tail_small_t, geodesic_tail_large_t,
// quadrature; error is exactly their sum.
struct DetResult {
    double value = 0.0;
    double error = 0.0;
    std::map<std::string, double> budget;
    std::vector<std::string> warnings;
};

// value = Vol E + gamma_0 - int_0^1 S^{L,-}(t)/t dt - int_1^R (S^{L,-}(t)-1)/t dt,
// with every truncation charged to the budget.  eta must be a trusted lower
// bound for lambda_1 of this surface.
DetResult log_det(const spectrum::LengthSpectrum& s, double volume, const DetParams& params);

// Multiplicative normalization: det.value - volume * E (the log-derivative of
// the Selberg zeta function at s = 1 up to the additive constant fixed by the
// determinant identity).
double log_selberg_derivative_at_1(const DetResult& det, double volume);

// (value/volume, error/volume)
std::pair<double, double> normalized_log_det(const DetResult& det, double volume);

} // namespace hypdet::determinant
