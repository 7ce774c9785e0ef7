#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypdet/group.hpp"
#include "hypdet/spectrum.hpp"

namespace hypdet::fuchsian {

// |trace| of a catalog group element, exactly: p + q sqrt(2).
struct TraceQ2 {
    int64_t p = 0;
    int64_t q = 0;
    double value() const;
    bool operator==(const TraceQ2&) const = default;
};

// Plain 2x2 real matrix; the float-mode representation and the float view of
// exact elements (upper half-plane model).
struct Mat2d {
    double a = 1, b = 0, c = 0, d = 1;
    double trace() const { return a + d; }
    double det() const { return a * d - b * c; }
};

// Exact unit-disk isometry for the catalog group: [[alpha, beta],
// [conj beta, conj alpha]] with entries in Z[i, s], s = sqrt(1 + sqrt 2)
// (s^4 = 2 s^2 + 1).  Group elements keep alpha in the even-grade part and
// beta in the odd-grade part, which puts all traces in Z[sqrt 2].
class Isometry {
public:
    // coordinate layout: alpha_re[4], alpha_im[4], beta_re[4], beta_im[4]
    // over the power basis {1, s, s^2, s^3}.
    using Coords = std::array<int64_t, 16>;

    static Isometry identity();
    static Isometry from_coords(const Coords& c);

    Isometry operator*(const Isometry& rhs) const;
    Isometry inverted() const;
    bool operator==(const Isometry&) const = default;

    // Sign-normalized representative of {g, -g} (projective group element).
    Isometry normalized() const;

    TraceQ2 abs_trace() const;           // |alpha + conj alpha| in Z[sqrt 2]
    double frobenius() const;            // |alpha|^2 + |beta|^2 = cosh d(0, g.0)
    bool frobenius_leq(int64_t cap) const; // exact comparison against an integer
    double displacement() const;         // d(0, g.0)
    Mat2d to_sl2r() const;               // real matrix in the half-plane model

    const Coords& coords() const { return c_; }
    uint64_t hash() const;

private:
    Coords c_{};
};

struct BaseSurface {
    std::string name;
    group::Presentation presentation;    // <a1,b1,a2,b2 | [a1,b1][a2,b2]>
    std::vector<Isometry> generators;    // exact mode: matrices of a1,b1,a2,b2
    std::vector<Mat2d> generators_float; // always populated (float view)
    bool exact = true;
    int genus = 2;
    double volume = 0.0;                 // 4 pi (g - 1)
    std::optional<double> certified_gap; // user/catalog-supplied lower bound on lambda_1

    // side-pairing alphabet of the fundamental octagon, used internally by the
    // enumerator; side_to_standard[k] expresses side generator k in the
    // standard alphabet.
    std::vector<Isometry> side_pairing;
    std::vector<group::Word> side_to_standard;
};

// Verified construction of a catalog surface.  Names: "bolza" (exact, genus
// 2), "demo-float" (the same surface carried in double precision; exercises
// the float data path, excluded from certified runs).
BaseSurface catalog(const std::string& name);

// l = 2 arccosh(|tr|/2); throws std::domain_error for |tr| <= 2.
double length_from_trace(double tr);

// Complete multiset of unoriented primitive classes with length <= L,
// each carrying oriented_multiplicity 2.  node_budget = 0 picks the default
// ceil(128 e^L) ball budget; enumeration throws resource_limit beyond it.
spectrum::LengthSpectrum enumerate_primitives(const BaseSurface& base, double L,
                                              int64_t node_budget = 0);

} // namespace hypdet::fuchsian
