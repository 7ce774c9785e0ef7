#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hypdet/fuchsian.hpp"
#include "hypdet/group.hpp"
#include "hypdet/spectrum.hpp"

namespace hypdet::cover {

// A homomorphism from the base surface group to S_n: one permutation per
// standard generator, satisfying the relator.
struct HomSample {
    std::vector<group::Permutation> perms;
    int n = 1;
    std::string sampler_tag; // "exhaustive" | "mcmc" | "explicit"
    uint64_t seed = 0;

    bool relator_holds(const group::Presentation& pres) const;
    std::string to_json() const;
    static HomSample from_json(const std::string& text);
};

struct CoverSpectrum {
    std::string base_name;
    HomSample hom;
    spectrum::LengthSpectrum spec; // volume = n * base volume
};

// Number of relator-satisfying tuples (exact, n <= 5 for genus 2).
uint64_t count_homs(const fuchsian::BaseSurface& base, int n);

// Visit every relator-satisfying tuple exactly once, in a deterministic
// order.  Throws budget_exceeded for n > 5.
void enumerate_homs(const fuchsian::BaseSurface& base, int n,
                    const std::function<void(const HomSample&)>& visit);

// Exact-uniform draw for n <= 5 (index into the enumeration); documented
// approximate MCMC for larger n (tagged "mcmc").
HomSample sample_hom(const fuchsian::BaseSurface& base, int n, uint64_t seed);

// Lift a base spectrum through the permutation action: each k-cycle of the
// image of gamma yields a primitive cover class of length k l(gamma).
// Requires the base spectrum complete to L.
CoverSpectrum lift_spectrum(const spectrum::LengthSpectrum& base_spec, const HomSample& hom,
                            double L);

// Both sides of the induction identity
//   sum_{cover pairs, q l <= L} l(gamma')  =  sum_{base pairs, q l <= L} l(gamma) Fix(phi(gamma^q)),
// computed through independent code paths.
std::pair<double, double> vz_check(const spectrum::LengthSpectrum& base_spec, const HomSample& hom,
                                   double L);

struct FixStats {
    double mean = 0.0;
    double std_error = 0.0;
    std::string sampler_tag;
};

// Monte-Carlo mean of Fix(phi(gamma^q)) over random homomorphisms.
FixStats fix_statistics(const fuchsian::BaseSurface& base, const group::Word& word, int q, int n,
                        int num_samples, uint64_t seed);

// Exact expectation of Fix(phi(gamma^q)) under the uniform measure (n <= 5).
double exact_mean_fix(const fuchsian::BaseSurface& base, const group::Word& word, int q, int n);

struct SunadaDiagnostic {
    double bound = 0.0; // 1 / ((n-1) sqrt(2n)); the unknown base-surface factor is excluded
    int diameter = 0;   // Schreier-graph diameter actually observed
};

// Structural factor of the connected-cover spectral-gap lower bound; throws
// not_connected on intransitive homomorphisms.  n = 1 returns +infinity.
SunadaDiagnostic sunada_diagnostic(const HomSample& hom);

} // namespace hypdet::cover
