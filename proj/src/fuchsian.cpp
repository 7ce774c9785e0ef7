#include "hypdet/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hypdet/errors.hpp"

namespace hypdet::fuchsian {

namespace {

using R4 = std::array<int64_t, 4>;

R4 radd(const R4& a, const R4& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }
R4 rsub(const R4& a, const R4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
R4 rneg(const R4& a) { return {-a[0], -a[1], -a[2], -a[3]}; }

// multiply in Z[s]/(s^4 - 2 s^2 - 1)
R4 rmul(const R4& a, const R4& b) {
    int64_t t[7] = {0, 0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t[i + j] += a[i] * b[j];
    // s^4 = 2 s^2 + 1, s^5 = 2 s^3 + s, s^6 = 5 s^2 + 2
    R4 r{t[0], t[1], t[2], t[3]};
    r[2] += 2 * t[4]; r[0] += t[4];
    r[3] += 2 * t[5]; r[1] += t[5];
    r[2] += 5 * t[6]; r[0] += 2 * t[6];
    return r;
}

struct C8 {
    R4 re{0, 0, 0, 0}, im{0, 0, 0, 0};
};
C8 cadd(const C8& a, const C8& b) { return {radd(a.re, b.re), radd(a.im, b.im)}; }
C8 cmul(const C8& a, const C8& b) {
    return {rsub(rmul(a.re, b.re), rmul(a.im, b.im)), radd(rmul(a.re, b.im), rmul(a.im, b.re))};
}
C8 cconj(const C8& a) { return {a.re, rneg(a.im)}; }
C8 cneg(const C8& a) { return {rneg(a.re), rneg(a.im)}; }

double s_val() {
    static const double s = std::sqrt(1.0 + std::sqrt(2.0));
    return s;
}
double r4_value(const R4& a) {
    const double s = s_val();
    return static_cast<double>(a[0]) + a[1] * s + a[2] * s * s + a[3] * s * s * s;
}

// sign of p + q sqrt(2), exactly
int sign_p_q_sqrt2(__int128 p, __int128 q) {
    if (p >= 0 && q >= 0) return (p != 0 || q != 0) ? 1 : 0;
    if (p <= 0 && q <= 0) return (p != 0 || q != 0) ? -1 : 0;
    __int128 p2 = p * p, q2 = 2 * q * q;
    if (p > 0) return p2 > q2 ? 1 : (p2 < q2 ? -1 : 0);
    return p2 > q2 ? -1 : (p2 < q2 ? 1 : 0);
}

} // namespace

double TraceQ2::value() const {
    return static_cast<double>(p) + std::sqrt(2.0) * static_cast<double>(q);
}

// ---------------------------------------------------------------------------
// Isometry

namespace {
C8 coords_alpha(const Isometry::Coords& c) {
    return {{c[0], c[1], c[2], c[3]}, {c[4], c[5], c[6], c[7]}};
}
C8 coords_beta(const Isometry::Coords& c) {
    return {{c[8], c[9], c[10], c[11]}, {c[12], c[13], c[14], c[15]}};
}
Isometry::Coords pack(const C8& a, const C8& b) {
    return {a.re[0], a.re[1], a.re[2], a.re[3], a.im[0], a.im[1], a.im[2], a.im[3],
            b.re[0], b.re[1], b.re[2], b.re[3], b.im[0], b.im[1], b.im[2], b.im[3]};
}
} // namespace

Isometry Isometry::identity() {
    Isometry g;
    g.c_[0] = 1;
    return g;
}

Isometry Isometry::from_coords(const Coords& c) {
    Isometry g;
    g.c_ = c;
    return g;
}

Isometry Isometry::operator*(const Isometry& rhs) const {
    const C8 a1 = coords_alpha(c_), b1 = coords_beta(c_);
    const C8 a2 = coords_alpha(rhs.c_), b2 = coords_beta(rhs.c_);
    const C8 a = cadd(cmul(a1, a2), cmul(b1, cconj(b2)));
    const C8 b = cadd(cmul(a1, b2), cmul(b1, cconj(a2)));
    Isometry r;
    r.c_ = pack(a, b);
    return r;
}

Isometry Isometry::inverted() const {
    const C8 a = coords_alpha(c_), b = coords_beta(c_);
    Isometry r;
    r.c_ = pack(cconj(a), cneg(b));
    return r;
}

Isometry Isometry::normalized() const {
    for (int64_t v : c_) {
        if (v > 0) return *this;
        if (v < 0) {
            Isometry r;
            for (int i = 0; i < 16; ++i) r.c_[i] = -c_[i];
            return r;
        }
    }
    return *this;
}

TraceQ2 Isometry::abs_trace() const {
    // trace = alpha + conj(alpha) = 2 Re(alpha); group elements carry Re(alpha)
    // in the even-grade part {1, s^2}, hence trace = p + q sqrt2 with
    // p = 2(c0 + c2), q = 2 c2.
    if (c_[1] != 0 || c_[3] != 0)
        throw std::logic_error("Isometry: trace left Z[sqrt2] (odd-grade contamination)");
    int64_t p = 2 * (c_[0] + c_[2]);
    int64_t q = 2 * c_[2];
    if (sign_p_q_sqrt2(p, q) < 0) { p = -p; q = -q; }
    return TraceQ2{p, q};
}

namespace {

using R4w = std::array<__int128, 4>;

// square in Z[s]/(s^4 - 2 s^2 - 1) with 128-bit accumulation; coordinates of
// conjugation products reach ~1e10 and their squares overflow int64.
R4w rsquare_wide(const R4& a) {
    __int128 t[7] = {0, 0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t[i + j] += static_cast<__int128>(a[i]) * a[j];
    R4w r{t[0], t[1], t[2], t[3]};
    r[2] += 2 * t[4]; r[0] += t[4];
    r[3] += 2 * t[5]; r[1] += t[5];
    r[2] += 5 * t[6]; r[0] += 2 * t[6];
    return r;
}

// F = |alpha|^2 + |beta|^2 as p + q sqrt2
void frobenius_pq(const Isometry::Coords& c, __int128& p, __int128& q) {
    const C8 a = coords_alpha(c), b = coords_beta(c);
    const R4w n1 = rsquare_wide(a.re), n2 = rsquare_wide(a.im);
    const R4w n3 = rsquare_wide(b.re), n4 = rsquare_wide(b.im);
    R4w f;
    for (int i = 0; i < 4; ++i) f[i] = n1[i] + n2[i] + n3[i] + n4[i];
    if (f[1] != 0 || f[3] != 0) throw std::logic_error("Isometry: Frobenius norm left Z[sqrt2]");
    p = f[0] + f[2];
    q = f[2];
}

} // namespace

double Isometry::frobenius() const {
    __int128 p, q;
    frobenius_pq(c_, p, q);
    return static_cast<double>(p) + std::sqrt(2.0) * static_cast<double>(q);
}

bool Isometry::frobenius_leq(int64_t cap) const {
    __int128 p, q;
    frobenius_pq(c_, p, q);
    return sign_p_q_sqrt2(static_cast<__int128>(cap) - p, -q) >= 0;
}

double Isometry::displacement() const { return std::acosh(std::max(1.0, frobenius())); }

Mat2d Isometry::to_sl2r() const {
    using cd = std::complex<double>;
    const C8 a = coords_alpha(c_), b = coords_beta(c_);
    const cd alpha{r4_value(a.re), r4_value(a.im)};
    const cd beta{r4_value(b.re), r4_value(b.im)};
    // conjugate the disk-model matrix back to the upper half-plane:
    // T(z) = (z - i)/(z + i),  M_uhp = T^{-1} M_disk T
    const cd i{0, 1};
    const cd T[2][2] = {{1.0, -i}, {1.0, i}};
    const cd Tinv[2][2] = {{0.5, 0.5}, {0.5 * i, -0.5 * i}};
    const cd M[2][2] = {{alpha, beta}, {std::conj(beta), std::conj(alpha)}};
    cd MT[2][2], R[2][2];
    for (int r = 0; r < 2; ++r)
        for (int cix = 0; cix < 2; ++cix) MT[r][cix] = M[r][0] * T[0][cix] + M[r][1] * T[1][cix];
    for (int r = 0; r < 2; ++r)
        for (int cix = 0; cix < 2; ++cix) R[r][cix] = Tinv[r][0] * MT[0][cix] + Tinv[r][1] * MT[1][cix];
    for (int r = 0; r < 2; ++r)
        for (int cix = 0; cix < 2; ++cix)
            if (std::abs(R[r][cix].imag()) > 1e-8)
                throw std::logic_error("Isometry::to_sl2r: non-real half-plane matrix");
    return Mat2d{R[0][0].real(), R[0][1].real(), R[1][0].real(), R[1][1].real()};
}

uint64_t Isometry::hash() const {
    uint64_t h = 0x9E3779B97F4A7C15ULL;
    for (int64_t v : c_) {
        uint64_t z = static_cast<uint64_t>(v) + 0x9E3779B97F4A7C15ULL + h;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        h = z ^ (z >> 31);
    }
    return h;
}

// ---------------------------------------------------------------------------
// catalog

namespace {

Isometry octagon_generator(int k) {
    // alpha = s^2; beta = (s^3 - s) zeta8^k, all coordinates integral.
    C8 a, b;
    a.re = {0, 0, 1, 0};
    switch (k) {
        case 0: b.re = {0, -1, 0, 1}; break;
        case 1: b.re = {0, 1, 0, 0}; b.im = {0, 1, 0, 0}; break;
        case 2: b.im = {0, -1, 0, 1}; break;
        case 3: b.re = {0, -1, 0, 0}; b.im = {0, 1, 0, 0}; break;
        default: throw std::logic_error("octagon_generator: k in 0..3");
    }
    return Isometry::from_coords(pack(a, b));
}

Isometry eval_octagon_word(const std::vector<Isometry>& gens, const std::vector<int>& w) {
    Isometry r = Isometry::identity();
    for (int x : w) {
        Isometry g = gens[std::abs(x) - 1];
        if (x < 0) g = g.inverted();
        r = r * g;
    }
    return r;
}

bool is_pm_identity(const Isometry& g) {
    return g.normalized() == Isometry::identity();
}

void verify_base(BaseSurface& base) {
    // relator image
    Isometry rel = Isometry::identity();
    for (int x : base.presentation.relators.at(0).letters) {
        Isometry g = base.generators[std::abs(x) - 1];
        if (x < 0) g = g.inverted();
        rel = rel * g;
    }
    if (!is_pm_identity(rel))
        throw std::logic_error("catalog: relator image is not +-identity");
    // generators hyperbolic
    for (const auto& g : base.generators) {
        TraceQ2 t = g.abs_trace();
        if (sign_p_q_sqrt2(t.p - 2, t.q) <= 0)
            throw std::logic_error("catalog: non-hyperbolic generator");
    }
    // side pairing expressible in the standard alphabet
    for (size_t k = 0; k < base.side_pairing.size(); ++k) {
        Isometry v = Isometry::identity();
        for (int x : base.side_to_standard[k].letters) {
            Isometry g = base.generators[std::abs(x) - 1];
            if (x < 0) g = g.inverted();
            v = v * g;
        }
        if (!(v == base.side_pairing[k]))
            throw std::logic_error("catalog: side-pairing translation table is wrong");
    }
}

BaseSurface build_bolza() {
    BaseSurface base;
    base.name = "bolza";
    base.genus = 2;
    base.volume = 4.0 * std::acos(-1.0);
    base.exact = true;
    base.presentation = group::surface_presentation(2);

    for (int k = 0; k < 4; ++k) base.side_pairing.push_back(octagon_generator(k));
    // octagon relator g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3 = +-1
    if (!is_pm_identity(eval_octagon_word(base.side_pairing, {1, -2, 3, -4, -1, 2, -3, 4})))
        throw std::logic_error("catalog: octagon side-pairing relator failed");

    // standard generators (a1, b1, a2, b2) as words in the side pairing:
    //   a1 = g3^-1, b1 = g0^-1, a2 = g0^-1 g3^-1 g1, b2 = g2^-1 g1
    const std::vector<std::vector<int>> std_words = {{-4}, {-1}, {-1, -4, 2}, {-3, 2}};
    for (const auto& w : std_words) base.generators.push_back(eval_octagon_word(base.side_pairing, w));
    for (const auto& g : base.generators) base.generators_float.push_back(g.to_sl2r());

    // inverse change of alphabet: g0 = b1^-1, g1 = a1^-1 b1^-1 a2,
    // g2 = a1^-1 b1^-1 a2 b2^-1, g3 = a1^-1
    base.side_to_standard.resize(4);
    base.side_to_standard[0].letters = {-2};
    base.side_to_standard[1].letters = {-1, -2, 3};
    base.side_to_standard[2].letters = {-1, -2, 3, -4};
    base.side_to_standard[3].letters = {-1};

    verify_base(base);
    return base;
}

void verify_systole(const BaseSurface& base) {
    auto s = enumerate_primitives(base, 3.1);
    if (s.classes.empty()) throw std::logic_error("catalog: systole verification found no classes");
    const double l0 = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
    if (std::abs(s.classes.front().length - l0) > 1e-12)
        throw std::logic_error("catalog: systole length mismatch");
    for (const auto& c : s.classes)
        if (!(c.trace_p == 2 && c.trace_q == 2))
            throw std::logic_error("catalog: unexpected short-geodesic trace");
}

} // namespace

BaseSurface catalog(const std::string& name) {
    if (name == "bolza") {
        BaseSurface base = build_bolza();
        verify_systole(base);
        return base;
    }
    if (name == "demo-float") {
        BaseSurface base = build_bolza();
        verify_systole(base);
        base.name = "demo-float";
        base.exact = false;
        return base;
    }
    throw std::invalid_argument("catalog: unknown name '" + name + "'");
}

double length_from_trace(double tr) {
    const double t = std::abs(tr);
    if (!(t > 2.0)) throw std::domain_error("length_from_trace: |trace| must exceed 2");
    return 2.0 * std::acosh(0.5 * t);
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

struct CoordsHash {
    size_t operator()(const Isometry::Coords& c) const {
        return Isometry::from_coords(c).hash();
    }
};

struct Ball {
    std::vector<Isometry> els;
    std::vector<int32_t> parent;
    std::vector<int8_t> letter; // octagon alphabet, +-(k+1)
    std::vector<double> fval;
    std::unordered_map<Isometry::Coords, int32_t, CoordsHash> index;
    std::vector<int32_t> by_f; // indices sorted by fval

    int32_t find(const Isometry& g) const {
        auto it = index.find(g.normalized().coords());
        return it == index.end() ? -1 : it->second;
    }
};

Ball build_ball(const BaseSurface& base, int64_t f_cap, int64_t budget) {
    Ball ball;
    auto push = [&](const Isometry& g, int32_t parent, int8_t letter) -> bool {
        Isometry n = g.normalized();
        auto [it, fresh] = ball.index.try_emplace(n.coords(), static_cast<int32_t>(ball.els.size()));
        if (!fresh) return false;
        ball.els.push_back(n);
        ball.parent.push_back(parent);
        ball.letter.push_back(letter);
        ball.fval.push_back(n.frobenius());
        return true;
    };
    push(Isometry::identity(), -1, 0);
    size_t head = 0;
    while (head < ball.els.size()) {
        const Isometry cur = ball.els[head];
        for (int k = 0; k < 4; ++k) {
            for (int sgn : {1, -1}) {
                Isometry g = base.side_pairing[k];
                if (sgn < 0) g = g.inverted();
                Isometry nxt = cur * g;
                if (!nxt.frobenius_leq(f_cap)) continue;
                if (push(nxt, static_cast<int32_t>(head), static_cast<int8_t>(sgn * (k + 1)))) {
                    if (static_cast<int64_t>(ball.els.size()) > budget)
                        throw resource_limit("enumerate_primitives: ball exceeded node budget");
                }
            }
        }
        ++head;
    }
    ball.by_f.resize(ball.els.size());
    for (size_t i = 0; i < ball.els.size(); ++i) ball.by_f[i] = static_cast<int32_t>(i);
    std::sort(ball.by_f.begin(), ball.by_f.end(), [&](int32_t a, int32_t b) {
        if (ball.fval[a] != ball.fval[b]) return ball.fval[a] < ball.fval[b];
        return ball.els[a].coords() < ball.els[b].coords();
    });
    return ball;
}

// total order: (F, coords); the double prefilter avoids exact work except
// near ties, where both operands are small.
bool element_less(const Isometry& x, const Isometry& y) {
    const double fx = x.frobenius(), fy = y.frobenius();
    if (fx < fy * (1.0 - 1e-9) - 1.0) return true;
    if (fy < fx * (1.0 - 1e-9) - 1.0) return false;
    __int128 px, qx, py, qy;
    frobenius_pq(x.coords(), px, qx);
    frobenius_pq(y.coords(), py, qy);
    int s = sign_p_q_sqrt2(px - py, qx - qy);
    if (s != 0) return s < 0;
    return x.coords() < y.coords();
}

// greedy conjugation descent to a local (F, coords) minimum, memoized
using DescentMemo = std::unordered_map<Isometry::Coords, Isometry::Coords, CoordsHash>;

Isometry descend(const BaseSurface& base, Isometry x, DescentMemo& memo) {
    std::vector<Isometry::Coords> path;
    for (;;) {
        auto it = memo.find(x.coords());
        if (it != memo.end()) {
            x = Isometry::from_coords(it->second);
            break;
        }
        path.push_back(x.coords());
        Isometry best = x;
        bool moved = false;
        for (int k = 0; k < 4; ++k) {
            for (int sgn : {1, -1}) {
                Isometry g = base.side_pairing[k];
                if (sgn < 0) g = g.inverted();
                Isometry cand = (g * x * g.inverted()).normalized();
                if (element_less(cand, best)) {
                    best = cand;
                    moved = true;
                }
            }
        }
        if (!moved) break;
        x = best;
    }
    for (const auto& c : path) memo.emplace(c, x.coords());
    return x;
}

// minimum of {k x k^-1 : d(k.0, 0) <= kappa_bound} under (F, coords); by the
// conjugator-displacement lemma this is the canonical class representative.
Isometry orbit_min(const Ball& ball, const Isometry& x, double kappa_bound) {
    const double f_cut = std::cosh(kappa_bound) + 2.0;
    Isometry best = x.normalized();
    for (int32_t idx : ball.by_f) {
        if (ball.fval[idx] > f_cut) break;
        const Isometry& k = ball.els[idx];
        Isometry cand = (k * x * k.inverted()).normalized();
        if (element_less(cand, best)) best = cand;
    }
    return best;
}

double axis_distance(double frob, double len) {
    // sinh(d/2) = cosh(rho) sinh(l/2) with cosh d = frob
    const double d = std::acosh(std::max(1.0, frob));
    const double arg = std::sinh(0.5 * d) / std::sinh(0.5 * len);
    return std::acosh(std::max(1.0, arg));
}

group::Word node_word(const Ball& ball, int32_t idx, const BaseSurface& base) {
    std::vector<int> oct;
    while (idx > 0) {
        oct.push_back(ball.letter[idx]);
        idx = ball.parent[idx];
    }
    std::reverse(oct.begin(), oct.end());
    group::Word w;
    for (int x : oct) {
        const group::Word& t = base.side_to_standard[std::abs(x) - 1];
        w = group::concat(w, x > 0 ? t : group::inverse(t));
    }
    return group::free_reduce(std::move(w));
}

// trace of the m-th power through Chebyshev-style recurrence in Z[sqrt2]
TraceQ2 power_trace(TraceQ2 t, int m) {
    int64_t p0 = 2, q0 = 0, p1 = t.p, q1 = t.q;
    for (int i = 1; i < m; ++i) {
        const int64_t p2 = t.p * p1 + 2 * t.q * q1 - p0;
        const int64_t q2 = t.p * q1 + t.q * p1 - q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    if (sign_p_q_sqrt2(p1, q1) < 0) { p1 = -p1; q1 = -q1; }
    return TraceQ2{p1, q1};
}

struct OrientedClass {
    Isometry canonical;
    TraceQ2 trace;
    double length = 0;
    double rho = 0;     // axis distance of the canonical representative
    int32_t partner = -1;
    bool primitive = true;
};

} // namespace

spectrum::LengthSpectrum enumerate_primitives(const BaseSurface& base, double L,
                                              int64_t node_budget) {
    if (!(L >= 0)) throw std::invalid_argument("enumerate_primitives: L >= 0 required");
    spectrum::LengthSpectrum out;
    out.cutoff_L = L;
    out.volume = base.volume;
    out.genus = base.genus;
    out.exact = base.exact;
    out.base_name = base.name;
    if (L == 0) return out;

    const double D = std::acosh(1.0 + std::sqrt(2.0)); // octagon circumradius
    const double d_rep = 2.0 * std::asinh(std::cosh(D) * std::sinh(0.5 * L));
    const double d_slack = d_rep + 2.0 * D + 0.5;
    // the ball provably contains every group element displaced at most
    // d_complete; the extra 2D of slack only feeds BFS reachability
    const double d_complete = d_rep + 0.5;
    if (d_slack > 42.0) throw resource_limit("enumerate_primitives: L too large for exact ball");
    const int64_t f_cap = static_cast<int64_t>(std::ceil(std::cosh(d_slack)));
    const int64_t budget =
        node_budget > 0 ? node_budget
                        : std::max<int64_t>(int64_t{1} << 21,
                                            static_cast<int64_t>(std::ceil(128.0 * std::exp(L))));

    const Ball ball = build_ball(base, f_cap, budget);

    const double max_trace = 2.0 * std::cosh(0.5 * L);

    // candidates: near-axis representatives (every class has one by the
    // axis-through-tile argument)
    DescentMemo memo;
    std::unordered_map<Isometry::Coords, int32_t, CoordsHash> canon_index;
    std::vector<OrientedClass> classes;
    std::vector<Isometry> group_reps;

    std::unordered_map<Isometry::Coords, char, CoordsHash> seen_local_min;

    for (size_t i = 1; i < ball.els.size(); ++i) {
        const Isometry& g = ball.els[i];
        TraceQ2 t;
        t = g.abs_trace();
        if (sign_p_q_sqrt2(t.p - 2, t.q) <= 0) continue; // not hyperbolic
        const double tv = t.value();
        if (tv > max_trace) continue;
        const double len = 2.0 * std::acosh(0.5 * tv);
        // prune far-from-axis copies; each class keeps its tile representative
        const double d_need = 2.0 * std::asinh(std::cosh(D) * std::sinh(0.5 * len)) + 0.05;
        if (ball.fval[i] > std::cosh(d_need)) continue;

        Isometry lm = descend(base, g, memo);
        if (!seen_local_min.emplace(lm.coords(), 1).second) continue;
        group_reps.push_back(lm);
    }

    for (const Isometry& rep : group_reps) {
        const TraceQ2 t = rep.abs_trace();
        const double len = 2.0 * std::acosh(0.5 * t.value());
        const double rho = axis_distance(rep.frobenius(), len);
        const double kb = rho + D + 0.5 * len + 0.35;
        if (kb > d_complete)
            throw resource_limit("enumerate_primitives: conjugator bound exceeds certified ball zone");
        Isometry canon = orbit_min(ball, rep, kb);
        auto [it, fresh] = canon_index.try_emplace(canon.coords(), static_cast<int32_t>(classes.size()));
        if (fresh) {
            OrientedClass oc;
            oc.canonical = canon;
            oc.trace = t;
            oc.length = len;
            oc.rho = axis_distance(canon.frobenius(), len);
            classes.push_back(oc);
        }
    }

    // orientation pairing: the inverse of a canonical representative lands in
    // the canonical form of the reversed class
    for (size_t i = 0; i < classes.size(); ++i) {
        if (classes[i].partner >= 0) continue;
        const Isometry invr = classes[i].canonical.inverted();
        const double kb = classes[i].rho + D + 0.5 * classes[i].length + 0.35;
        Isometry inv_canon = orbit_min(ball, invr, std::min(kb, d_complete));
        auto it = canon_index.find(inv_canon.coords());
        if (it == canon_index.end() || it->second == static_cast<int32_t>(i))
            throw std::logic_error("enumerate_primitives: orientation pairing failed");
        classes[i].partner = it->second;
        classes[it->second].partner = static_cast<int32_t>(i);
    }

    // primitivity: is the class conjugate to a power of a shorter one?
    std::vector<size_t> order(classes.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return classes[a].length < classes[b].length; });
    const double l_min = classes.empty() ? 1.0 : classes[order.front()].length - 1e-9;
    for (size_t oi = 0; oi < order.size(); ++oi) {
        OrientedClass& c = classes[order[oi]];
        for (int m = 2; m * l_min <= c.length + 1e-9; ++m) {
            const double root_len = c.length / m;
            for (size_t oj = 0; oj < oi; ++oj) {
                const OrientedClass& r = classes[order[oj]];
                if (!r.primitive) continue;
                if (std::abs(r.length - root_len) > 1e-7) continue;
                if (!(power_trace(r.trace, m) == c.trace)) continue;
                Isometry pw = Isometry::identity();
                for (int k = 0; k < m; ++k) pw = pw * r.canonical;
                const double kb = r.rho + D + 0.5 * c.length + 0.35;
                Isometry pw_canon = orbit_min(ball, pw, std::min(kb, d_complete));
                if (pw_canon.coords() == c.canonical.coords()) {
                    c.primitive = false;
                    break;
                }
            }
            if (!c.primitive) break;
        }
    }

    // assemble unoriented records
    std::vector<char> done(classes.size(), 0);
    for (size_t i = 0; i < classes.size(); ++i) {
        if (done[i]) continue;
        const OrientedClass& c = classes[i];
        const int32_t j = c.partner;
        done[i] = 1;
        done[j] = 1;
        if (!c.primitive || !classes[j].primitive) {
            if (c.primitive != classes[j].primitive)
                throw std::logic_error("enumerate_primitives: orientation pair disagrees on primitivity");
            continue;
        }
        const int32_t node_i = ball.find(c.canonical);
        const int32_t node_j = ball.find(classes[j].canonical);
        if (node_i < 0 || node_j < 0)
            throw std::logic_error("enumerate_primitives: canonical element missing from ball");
        const group::Word wi = node_word(ball, node_i, base);
        const group::Word wj = node_word(ball, node_j, base);
        const std::string ki = group::conjugacy_key(wi, base.presentation);
        const std::string kj = group::conjugacy_key(wj, base.presentation);
        spectrum::PrimitiveClass rec;
        rec.word = group::parse_word(std::min(ki, kj), base.presentation.num_generators);
        if (base.exact) {
            rec.trace_p = c.trace.p;
            rec.trace_q = c.trace.q;
            rec.trace_value = c.trace.value();
        } else {
            rec.trace_value = c.trace.value();
        }
        rec.length = c.length;
        rec.oriented_multiplicity = 2;
        out.classes.push_back(std::move(rec));
    }

    std::sort(out.classes.begin(), out.classes.end(), [](const auto& a, const auto& b) {
        if (a.length != b.length) return a.length < b.length;
        return group::format_word(a.word) < group::format_word(b.word);
    });
    return out;
}

} // namespace hypdet::fuchsian
