#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypdet/cover.hpp"
#include "hypdet/errors.hpp"
#include "hypdet/fuchsian.hpp"
#include "hypdet/heat.hpp"
#include "hypdet/spectrum.hpp"

using namespace hypdet;

namespace {

spectrum::LengthSpectrum single_class_spectrum(double length, double cutoff) {
    spectrum::LengthSpectrum s;
    spectrum::PrimitiveClass c;
    c.word = group::parse_word("a1", 4);
    c.length = length;
    c.trace_value = 2.0 * std::cosh(0.5 * length);
    c.oriented_multiplicity = 2;
    s.classes.push_back(c);
    s.cutoff_L = cutoff;
    s.volume = 4.0 * std::acos(-1.0);
    s.exact = false;
    s.base_name = "synthetic";
    return s;
}

const spectrum::LengthSpectrum& bolza8() {
    static const auto s =
        fuchsian::enumerate_primitives(fuchsian::catalog("bolza"), 8.0);
    return s;
}

} // namespace

TEST_CASE("identity term: cross-form agreement and small-t law") {
    for (double t : {0.1, 1.0, 10.0}) {
        const double a = heat::identity_term(t);
        const double b = heat::identity_term_r_form(t);
        CHECK(std::abs(a - b) < 1e-10);
        CHECK(a > 0.0);
    }
    // t I(t) -> 1 as t -> 0+
    CHECK(std::abs(0.01 * heat::identity_term(0.01) - 1.0) < 0.05);
    CHECK_THROWS_AS(heat::identity_term(0.0), std::domain_error);
    CHECK_THROWS_AS(heat::identity_term(-1.0), std::domain_error);
}

TEST_CASE("geodesic term: single-class oracle") {
    const auto s = single_class_spectrum(3.0, 7.0);
    // direct summation with the two admissible iterates u = 3, 6
    CHECK(heat::geodesic_term(s, 1.0, 7.0) ==
          doctest::Approx(0.032632888934955334).epsilon(1e-13));
    CHECK(heat::geodesic_term(s, 1.0, 0.5) == 0.0); // no pairs below the systole
    CHECK_THROWS_AS(heat::geodesic_term(s, 1.0, 8.0), cutoff_exceeded);
    CHECK_THROWS_AS(heat::geodesic_term(s, 0.0, 7.0), std::domain_error);
}

TEST_CASE("geodesic term: empty spectrum and monotonicity in L") {
    spectrum::LengthSpectrum empty;
    empty.cutoff_L = 10.0;
    empty.volume = 1.0;
    CHECK(heat::geodesic_term(empty, 1.0, 5.0) == 0.0);

    const auto& s = bolza8();
    for (double t : {0.5, 1.0, 3.0}) {
        CHECK(heat::geodesic_term(s, t, 6.0) <= heat::geodesic_term(s, t, 8.0));
        CHECK(heat::geodesic_term(s, t, 4.0) <= heat::geodesic_term(s, t, 6.0));
    }
    // S^{L,-}(t) -> 0 as t -> 0+ for a spectrum with positive systole
    CHECK(heat::geodesic_term(s, 1e-3, 8.0) < 1e-300);
}

TEST_CASE("geodesic tail bound: positivity, decay, and dominance") {
    const auto& s = bolza8();
    for (double t : {0.5, 1.0, 2.0, 5.0}) CHECK(heat::geodesic_tail_bound(2, s, t, 6.0) >= 0.0);
    // decay in L at fixed t
    CHECK(heat::geodesic_tail_bound(2, s, 1.0, 10.0) < heat::geodesic_tail_bound(2, s, 1.0, 6.0));
    // dominance: the mass between cutoffs 6 and 8 is below the bound at L = 6
    for (double t : {0.5, 1.0, 2.0}) {
        const double extra = heat::geodesic_term(s, t, 8.0) - heat::geodesic_term(s, t, 6.0);
        CHECK(extra <= heat::geodesic_tail_bound(2, s, t, 6.0));
    }
    CHECK_THROWS_AS(heat::geodesic_tail_bound(2, s, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("keylemma bound: positivity, decay, and cover consistency") {
    const auto& s = bolza8();
    const double vol = s.volume;
    CHECK(heat::keylemma_bound(s, vol, 0.1, 2.0, 8.0, 2) > 0.0);
    CHECK(heat::keylemma_bound(s, vol, 0.1, 10.0, 8.0, 2) <
          heat::keylemma_bound(s, vol, 0.1, 2.0, 8.0, 2));
    CHECK_THROWS_AS(heat::keylemma_bound(s, vol, 0.1, 0.5, 8.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(heat::keylemma_bound(s, vol, 0.0, 2.0, 8.0, 2), std::invalid_argument);

    // explicit degree-3 connected cover: the certified enclosure of S_X(t)
    // (geodesic term plus [0, tail]) must intersect [1 - bound, 1 + bound]
    const auto base = fuchsian::catalog("bolza");
    const auto hom = cover::sample_hom(base, 3, 20250807);
    REQUIRE(group::is_transitive(hom.perms));
    const auto cs = cover::lift_spectrum(bolza8(), hom, 8.0);
    const int genus = *cs.spec.genus;
    const double t = 5.0;
    const double s_low = heat::geodesic_term(cs.spec, t, 8.0);
    const double s_high = s_low + heat::geodesic_tail_bound(genus, cs.spec, t, 8.0);
    const double kb = heat::keylemma_bound(cs.spec, cs.spec.volume, 0.1, t, 8.0, genus);
    CHECK(s_low <= 1.0 + kb);
    CHECK(s_high >= 1.0 - kb);
}

TEST_CASE("heat trace structure on the bolza spectrum") {
    const auto& s = bolza8();
    const double fourpi = 4.0 * std::numbers::pi;
    // t -> Vol I(t)/(4pi) + S^{L,-}(t) - 1 is positive, decreasing and
    // log-convex within the certified budget on an equispaced grid in
    // [0.5, 10] (the three-point convexity test needs arithmetic midpoints)
    const int npts = 20;
    std::vector<double> ts(npts), f(npts), b(npts);
    for (int i = 0; i < npts; ++i) {
        ts[i] = 0.5 + (10.0 - 0.5) * i / double(npts - 1);
        f[i] = s.volume * heat::identity_term(ts[i]) / fourpi + heat::geodesic_term(s, ts[i], 8.0) -
               1.0;
        b[i] = heat::geodesic_tail_bound(2, s, ts[i], 8.0) + 1e-9;
    }
    for (int i = 0; i < npts; ++i) CHECK(f[i] + b[i] > 0.0);
    for (int i = 0; i + 1 < npts; ++i) CHECK(f[i + 1] - b[i + 1] <= f[i] + b[i]);
    for (int i = 0; i + 2 < npts; ++i) {
        const double low_mid = std::max(f[i + 1] - b[i + 1], 0.0);
        CHECK(low_mid * low_mid <= (f[i] + b[i]) * (f[i + 2] + b[i + 2]));
    }
    // below t ~ 1.5 the cutoff L = 8 captures essentially all of the trace,
    // so the spectral sum is positive without help from the budget
    for (int i = 0; i < npts && ts[i] <= 1.5; ++i) CHECK(f[i] > 0.0);
}

TEST_CASE("heat config validation") {
    heat::HeatEvalConfig bad;
    bad.quad_abs_tol = 0.0;
    CHECK_THROWS_AS(heat::identity_term(1.0, bad), std::invalid_argument);
    heat::HeatEvalConfig capped;
    capped.max_k_iterates = 1;
    const auto s = single_class_spectrum(1.0, 10.0);
    CHECK_THROWS_AS(heat::geodesic_term(s, 1.0, 10.0, capped), budget_exceeded);
}
