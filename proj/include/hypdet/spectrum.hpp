#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hypdet/group.hpp"

namespace hypdet::spectrum {

// One unoriented primitive closed geodesic.  The two orientations are stored
// once with oriented_multiplicity = 2; all sums over oriented classes consume
// that field.  In exact mode |trace| = trace_p + trace_q * sqrt(2).
struct PrimitiveClass {
    group::Word word;              // conjugacy representative, canonical cyclic form
    int64_t trace_p = 0;
    int64_t trace_q = 0;
    double trace_value = 0.0;      // |trace| as a double (authoritative in float mode)
    double length = 0.0;           // 2 arccosh(|trace|/2)
    int oriented_multiplicity = 2;
};

// Truncated primitive length spectrum with its completeness certificate:
// every primitive class of length <= cutoff_L is present.
struct LengthSpectrum {
    std::vector<PrimitiveClass> classes; // sorted by (length, word)
    double cutoff_L = 0.0;
    double volume = 0.0;
    std::optional<int> genus;
    bool exact = true;
    std::string base_name;
};

// 2 arcsinh(1): the short-geodesic threshold in the Buser-type bound.
double buser_L0();

// N(L) = #{(gamma, m) oriented primitive x iterate : m l(gamma) <= L}.
// Throws cutoff_exceeded when L > cutoff_L.
int64_t count_with_iterates(const LengthSpectrum& s, double L);

// N0(L): oriented primitive classes of length <= L.
int64_t count_primitive(const LengthSpectrum& s, double L);

// Length of the shortest class; throws std::domain_error on empty spectra.
double systole(const LengthSpectrum& s);

// sum over oriented classes of 1/l(gamma) for l(gamma) <= L.
double reciprocal_sum(const LengthSpectrum& s, double L);

// Explicit upper bound for N(T), valid for any T >= 0 whenever s is complete
// to buser_L0():  (g-1) e^{T+6} + (2/L0) N(L0) T.
double buser_bound(int genus, double T, const LengthSpectrum& s);

bool check_H1(double gap, double eta);
// N(L) <= C * volume^alpha
bool check_H2(const LengthSpectrum& s, double C, double L, double alpha);

// Combined hypothesis snapshot for one surface.  The gap is an input, never
// inferred: certified spectral-gap lower bounds come from outside.
struct HypothesisReport {
    bool h1_holds = false;
    bool h2_holds = false;
    int64_t n_of_L = 0;
    double systole = 0.0; // 0 for an empty spectrum
};

HypothesisReport hypothesis_report(const LengthSpectrum& s, double gap, double eta, double C,
                                   double L, double alpha);

void save(const LengthSpectrum& s, std::ostream& out);
LengthSpectrum load(std::istream& in);
void save_file(const LengthSpectrum& s, const std::string& path);
LengthSpectrum load_file(const std::string& path);

} // namespace hypdet::spectrum
