#pragma once

#include "hypdet/spectrum.hpp"

namespace hypdet::heat {

struct HeatEvalConfig {
    double quad_abs_tol = 1e-11;
    int64_t max_k_iterates = int64_t{1} << 20;

    void validate() const;
};

// I(t) = integral over R of x tanh(pi x) e^{-(x^2 + 1/4) t} dx, so that the
// smooth part of the heat trace is Vol * I(t) / (4 pi).  Primary evaluation.
double identity_term(double t, const HeatEvalConfig& cfg = {});

// The same quantity through the r-integral form
//   e^{-t/4} / (sqrt(4 pi) t^{3/2}) * int_0^inf r e^{-r^2/4t} / sinh(r/2) dr;
// kept as an independent cross-check of identity_term.
double identity_term_r_form(double t, const HeatEvalConfig& cfg = {});

// S^{L,-}(t): the geodesic sum over pairs (gamma, m) with m l(gamma) <= L,
//   e^{-t/4}/(4 pi t)^{1/2} sum l(gamma)/(2 sinh(m l /2)) e^{-(m l)^2 / 4t},
// over oriented classes.
double geodesic_term(const spectrum::LengthSpectrum& s, double t, double L,
                     const HeatEvalConfig& cfg = {});

// Certified upper bound for the omitted tail S^{L,+}(t): the decreasing term
// profile integrated against the explicit Buser-type counting bound above L.
// Requires the spectrum complete to 2 arcsinh(1) and L >= 2 arcsinh(1).
double geodesic_tail_bound(int genus, const spectrum::LengthSpectrum& s, double t, double L);

// Fully computable upper bound for |S_X(t) - 1| for t >= 1:
//   B1 e^{-t/4} + e^{-(t-1) eta} (TrHat(1) - 1),
// where B1 = Vol e^{1/4} I(1)/(4 pi) dominates the smooth term and TrHat(1)
// is the computed upper estimate of the heat trace at t = 1.  eta must be a
// trusted lower bound for lambda_1 (caller's responsibility).
double keylemma_bound(const spectrum::LengthSpectrum& s, double volume, double eta, double t,
                      double L, int genus, const HeatEvalConfig& cfg = {});

} // namespace hypdet::heat
