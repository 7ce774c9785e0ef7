#include "hypdet/heat.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hypdet/errors.hpp"
#include "hypdet/quadrature.hpp"

namespace hypdet::heat {

namespace {
constexpr double kPi = std::numbers::pi;

void require_covered(const spectrum::LengthSpectrum& s, double L, const char* who) {
    if (L > s.cutoff_L + 1e-12)
        throw cutoff_exceeded(std::string(who) + ": L exceeds the spectrum completeness cutoff");
}

} // namespace

void HeatEvalConfig::validate() const {
    if (!(quad_abs_tol > 0)) throw std::invalid_argument("HeatEvalConfig: quad_abs_tol must be > 0");
    if (max_k_iterates < 1) throw std::invalid_argument("HeatEvalConfig: max_k_iterates >= 1");
}

double identity_term(double t, const HeatEvalConfig& cfg) {
    cfg.validate();
    if (!(t > 0)) throw std::domain_error("identity_term: t > 0 required");
    const double tol = cfg.quad_abs_tol;
    // integrand (doubled half-line form) decays like x e^{-x^2 t}; cut where
    // the analytic tail bound e^{-X^2 t}/(2t) drops below tol/4
    const double X = std::sqrt((std::max(10.0, -std::log(tol) + 6.0)) / t);
    auto f = [t](double x) { return x * std::tanh(kPi * x) * std::exp(-(x * x + 0.25) * t); };
    const double core = quad::integrate(f, 0.0, X, 0.5 * tol);
    return 2.0 * core;
}

double identity_term_r_form(double t, const HeatEvalConfig& cfg) {
    cfg.validate();
    if (!(t > 0)) throw std::domain_error("identity_term_r_form: t > 0 required");
    const double tol = cfg.quad_abs_tol;
    const double pref = std::exp(-0.25 * t) / (std::sqrt(4.0 * kPi) * t * std::sqrt(t));
    const double R = std::sqrt(4.0 * t * std::max(10.0, -std::log(tol) + 8.0));
    auto f = [t](double r) {
        if (r == 0.0) return 2.0;
        return r * std::exp(-r * r / (4.0 * t)) / std::sinh(0.5 * r);
    };
    const double core = quad::integrate(f, 0.0, R, 0.5 * tol / std::max(pref, 1e-300));
    return pref * core;
}

double geodesic_term(const spectrum::LengthSpectrum& s, double t, double L,
                     const HeatEvalConfig& cfg) {
    cfg.validate();
    if (!(t > 0)) throw std::domain_error("geodesic_term: t > 0 required");
    require_covered(s, L, "geodesic_term");
    const double pref = std::exp(-0.25 * t) / std::sqrt(4.0 * kPi * t);
    KahanSum acc;
    for (const auto& c : s.classes) {
        if (c.length > L) break;
        const int64_t kmax = static_cast<int64_t>(std::floor(L / c.length + 1e-12));
        if (kmax > cfg.max_k_iterates)
            throw budget_exceeded("geodesic_term: iterate count exceeds max_k_iterates");
        for (int64_t m = 1; m <= kmax; ++m) {
            const double u = m * c.length;
            acc.add(c.oriented_multiplicity * c.length / (2.0 * std::sinh(0.5 * u)) *
                    std::exp(-u * u / (4.0 * t)));
        }
    }
    return pref * acc.value();
}

double geodesic_tail_bound(int genus, const spectrum::LengthSpectrum& s, double t, double L) {
    if (!(t > 0)) throw std::domain_error("geodesic_tail_bound: t > 0 required");
    const double L0 = spectrum::buser_L0();
    if (L < L0 - 1e-12)
        throw std::invalid_argument("geodesic_tail_bound: L >= 2 arcsinh(1) required");
    // Buser-type counting majorant above L: Nbar(u) = (g-1) e^{u+6} + c u
    const double gm1 = static_cast<double>(genus - 1);
    const double c_short =
        (2.0 / L0) * static_cast<double>(spectrum::count_with_iterates(s, L0));
    const double one_minus = 1.0 - std::exp(-L);
    const double sqt = std::sqrt(t);

    // boundary term f_t(L) Nbar(L)
    const double f_at_L = L * std::exp(-L * L / (4.0 * t)) / (2.0 * std::sinh(0.5 * L));
    const double nbar_L = gm1 * std::exp(L + 6.0) + c_short * L;
    const double pref = std::exp(-0.25 * t) / std::sqrt(4.0 * kPi * t);
    double bound = pref * f_at_L * nbar_L;

    // int_L^inf f_t(u) e^{u+6} du, with e^{t/4} cancelled against the prefactor:
    //   pref * e^{t/4} [2t e^{-(L-t)^2/4t} + t sqrt(pi t) erfc((L-t)/(2 sqrt t))] / (1 - e^{-L})
    const double grow = 2.0 * t * std::exp(-(L - t) * (L - t) / (4.0 * t)) +
                        t * std::sqrt(kPi * t) * std::erfc((L - t) / (2.0 * sqt));
    bound += gm1 * std::exp(6.0) / (std::sqrt(4.0 * kPi * t) * one_minus) * grow;

    // int_L^inf f_t(u) du against the linear part c u of the majorant
    const double flat = std::max(0.0, 2.0 * t * std::exp(-(L + t) * (L + t) / (4.0 * t)) -
                                          t * std::sqrt(kPi * t) * std::erfc((L + t) / (2.0 * sqt)));
    bound += c_short / (std::sqrt(4.0 * kPi * t) * one_minus) * flat;
    return bound;
}

double keylemma_bound(const spectrum::LengthSpectrum& s, double volume, double eta, double t,
                      double L, int genus, const HeatEvalConfig& cfg) {
    cfg.validate();
    if (!(t >= 1.0)) throw std::invalid_argument("keylemma_bound: t >= 1 required");
    if (!(eta > 0)) throw std::invalid_argument("keylemma_bound: eta > 0 required");
    const double I1 = identity_term(1.0, cfg);
    // e^{t/4} I(t) is decreasing, so its supremum on t >= 1 is at t = 1
    const double B1 = volume * std::exp(0.25) * I1 / (4.0 * kPi);
    const double tr_hat1 = volume * I1 / (4.0 * kPi) + geodesic_term(s, 1.0, L, cfg) +
                           geodesic_tail_bound(genus, s, 1.0, L);
    const double excited = std::max(tr_hat1 - 1.0, 0.0);
    return B1 * std::exp(-0.25 * t) + std::exp(-(t - 1.0) * eta) * excited;
}

} // namespace hypdet::heat
