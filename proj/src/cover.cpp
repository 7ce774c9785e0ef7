#include "hypdet/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "hypdet/errors.hpp"
#include "hypdet/quadrature.hpp"
#include "hypdet/rng.hpp"

namespace hypdet::cover {

using group::Permutation;

bool HomSample::relator_holds(const group::Presentation& pres) const {
    for (const auto& rel : pres.relators)
        if (!group::evaluate_hom(perms, rel).is_identity()) return false;
    return true;
}

std::string HomSample::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["sampler_tag"] = sampler_tag;
    j["seed"] = seed;
    auto arr = nlohmann::json::array();
    for (const auto& p : perms) {
        auto row = nlohmann::json::array();
        for (int v : p.images) row.push_back(v + 1); // serialized 1-based
        arr.push_back(row);
    }
    j["perms"] = arr;
    return j.dump();
}

HomSample HomSample::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    HomSample h;
    h.n = j.at("n").get<int>();
    h.sampler_tag = j.at("sampler_tag").get<std::string>();
    h.seed = j.at("seed").get<uint64_t>();
    for (const auto& row : j.at("perms")) {
        Permutation p;
        for (const auto& v : row) p.images.push_back(v.get<int>() - 1);
        p.validate();
        h.perms.push_back(std::move(p));
    }
    return h;
}

// ---------------------------------------------------------------------------
// exact enumeration for n <= 5 (genus 2): [c, d] must equal [a, b]^{-1};
// bucket all 2-generator commutators once, then stream (a, b) against the
// matching bucket.

namespace {

struct SymmetricGroup {
    int n = 1;
    std::vector<Permutation> perms; // all n! elements, lexicographic
    std::vector<std::vector<uint16_t>> mult; // mult[a][b] = index of perms[a] o perms[b]
    std::vector<uint16_t> inv;

    explicit SymmetricGroup(int n_) : n(n_) {
        Permutation p = Permutation::identity(n);
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        do {
            Permutation q;
            q.images = idx;
            perms.push_back(q);
        } while (std::next_permutation(idx.begin(), idx.end()));
        std::map<std::vector<int>, uint16_t> lookup;
        for (size_t i = 0; i < perms.size(); ++i) lookup[perms[i].images] = static_cast<uint16_t>(i);
        mult.assign(perms.size(), std::vector<uint16_t>(perms.size()));
        inv.resize(perms.size());
        for (size_t a = 0; a < perms.size(); ++a) {
            for (size_t b = 0; b < perms.size(); ++b)
                mult[a][b] = lookup.at(group::compose(perms[a], perms[b]).images);
            inv[a] = lookup.at(group::inverse(perms[a]).images);
        }
    }

    uint16_t comm(uint16_t a, uint16_t b) const {
        return mult[mult[mult[a][b]][inv[a]]][inv[b]];
    }
};

struct HomTable {
    SymmetricGroup sym;
    // commutator_buckets[g] = all (c, d) with [c, d] = g
    std::vector<std::vector<std::pair<uint16_t, uint16_t>>> buckets;
    // prefix[a*|G|+b] = homs with (sigma_a, sigma_b) lexicographically before (a, b)
    std::vector<uint64_t> prefix;
    uint64_t total = 0;

    explicit HomTable(int n) : sym(n) {
        const size_t m = sym.perms.size();
        buckets.resize(m);
        for (uint16_t c = 0; c < m; ++c)
            for (uint16_t d = 0; d < m; ++d) buckets[sym.comm(c, d)].push_back({c, d});
        prefix.resize(m * m + 1, 0);
        for (size_t a = 0; a < m; ++a)
            for (size_t b = 0; b < m; ++b) {
                const uint16_t need = sym.inv[sym.comm(static_cast<uint16_t>(a), static_cast<uint16_t>(b))];
                prefix[a * m + b + 1] = prefix[a * m + b] + buckets[need].size();
            }
        total = prefix[m * m];
    }
};

const HomTable& hom_table(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<HomTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<HomTable>(n)).first;
    return *it->second;
}

void require_small_n(const fuchsian::BaseSurface& base, int n, const char* who) {
    if (base.presentation.num_generators != 4)
        throw std::invalid_argument(std::string(who) + ": genus-2 presentation expected");
    if (n < 1) throw std::invalid_argument(std::string(who) + ": n >= 1 required");
    if (n > 5)
        throw budget_exceeded(std::string(who) +
                              ": exhaustive enumeration is limited to n <= 5 (budget (n!)^4)");
}

HomSample hom_from_indices(const SymmetricGroup& sym, uint16_t a, uint16_t b, uint16_t c,
                           uint16_t d, int n) {
    HomSample h;
    h.n = n;
    h.perms = {sym.perms[a], sym.perms[b], sym.perms[c], sym.perms[d]};
    h.sampler_tag = "exhaustive";
    return h;
}

// Fix(pi^q) from the cycle structure: sum of k cnt_k over k | q.
int64_t fix_power(const Permutation& pi, int64_t q) {
    int64_t f = 0;
    for (auto [k, cnt] : group::cycle_count(pi))
        if (q % k == 0) f += static_cast<int64_t>(k) * cnt;
    return f;
}

// uniform random permutation (Fisher-Yates on the seeded stream)
Permutation random_permutation(int n, SeededRng& rng) {
    Permutation p = Permutation::identity(n);
    for (int i = n - 1; i > 0; --i)
        std::swap(p.images[i], p.images[static_cast<int>(rng.next_below(i + 1))]);
    return p;
}

// uniform element of the centralizer of pi: independent rotations of each
// cycle plus a uniform permutation of equal-length cycles
Permutation random_centralizer_element(const Permutation& pi, SeededRng& rng) {
    const int n = pi.degree();
    std::vector<std::vector<int>> cycles;
    std::vector<char> seen(n, 0);
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        std::vector<int> cyc;
        int j = i;
        while (!seen[j]) {
            seen[j] = 1;
            cyc.push_back(j);
            j = pi.images[j];
        }
        cycles.push_back(std::move(cyc));
    }
    std::map<size_t, std::vector<size_t>> by_len;
    for (size_t ci = 0; ci < cycles.size(); ++ci) by_len[cycles[ci].size()].push_back(ci);
    Permutation z = Permutation::identity(n);
    for (auto& [len, ids] : by_len) {
        std::vector<size_t> target = ids;
        for (size_t i = target.size(); i > 1; --i)
            std::swap(target[i - 1], target[static_cast<size_t>(rng.next_below(i))]);
        for (size_t i = 0; i < ids.size(); ++i) {
            const auto& src = cycles[ids[i]];
            const auto& dst = cycles[target[i]];
            const size_t off = rng.next_below(len);
            for (size_t k = 0; k < len; ++k) z.images[src[k]] = dst[(k + off) % len];
        }
    }
    return z;
}

// any conjugator mapping x to y (same cycle type required)
Permutation canonical_conjugator(const Permutation& x, const Permutation& y) {
    const int n = x.degree();
    auto cycles_sorted = [n](const Permutation& p) {
        std::vector<std::vector<int>> cycles;
        std::vector<char> seen(n, 0);
        for (int i = 0; i < n; ++i) {
            if (seen[i]) continue;
            std::vector<int> cyc;
            int j = i;
            while (!seen[j]) {
                seen[j] = 1;
                cyc.push_back(j);
                j = p.images[j];
            }
            cycles.push_back(std::move(cyc));
        }
        std::stable_sort(cycles.begin(), cycles.end(),
                         [](const auto& a, const auto& b) { return a.size() < b.size(); });
        return cycles;
    };
    auto cx = cycles_sorted(x), cy = cycles_sorted(y);
    Permutation t = Permutation::identity(n);
    for (size_t ci = 0; ci < cx.size(); ++ci)
        for (size_t k = 0; k < cx[ci].size(); ++k) t.images[cx[ci][k]] = cy[ci][k];
    return t;
}

HomSample sample_hom_mcmc(const fuchsian::BaseSurface& base, int n, uint64_t seed) {
    SeededRng rng(seed ^ 0xC0FFEEULL);
    // start at the trivial tuple (relator trivially satisfied) and mix
    std::vector<Permutation> cur(4, Permutation::identity(n));
    const int steps = 200 + 40 * n;
    for (int it = 0; it < steps; ++it) {
        const int kind = static_cast<int>(rng.next_below(3));
        if (kind == 0) {
            // simultaneous conjugation by a random transposition
            int i = static_cast<int>(rng.next_below(n));
            int j = static_cast<int>(rng.next_below(n));
            if (i == j) continue;
            Permutation t = Permutation::identity(n);
            std::swap(t.images[i], t.images[j]);
            for (auto& p : cur) p = group::compose(group::compose(t, p), group::inverse(t));
        } else {
            // re-solve one commutator pair against the other's inverse
            const int pair = static_cast<int>(rng.next_below(2));
            const int ia = pair == 0 ? 0 : 2, ib = pair == 0 ? 1 : 3;
            const int oa = pair == 0 ? 2 : 0, ob = pair == 0 ? 3 : 1;
            const Permutation other = group::compose(
                group::compose(group::compose(cur[oa], cur[ob]), group::inverse(cur[oa])),
                group::inverse(cur[ob]));
            const Permutation target = group::inverse(other); // [a,b] must equal this
            bool solved = false;
            for (int attempt = 0; attempt < 24 && !solved; ++attempt) {
                Permutation a = random_permutation(n, rng);
                // [a, b] = target <=> b a^{-1} b^{-1} = a^{-1} target
                const Permutation lhs = group::inverse(a);
                const Permutation rhs = group::compose(lhs, target);
                if (group::cycle_type(lhs) != group::cycle_type(rhs)) continue;
                Permutation t = canonical_conjugator(lhs, rhs);
                Permutation b = group::compose(t, random_centralizer_element(lhs, rng));
                // b lhs b^{-1} = rhs up to centralizer freedom; verify and accept
                std::vector<Permutation> cand = cur;
                cand[ia] = a;
                cand[ib] = b;
                HomSample probe;
                probe.perms = cand;
                probe.n = n;
                if (probe.relator_holds(base.presentation)) {
                    cur = cand;
                    solved = true;
                }
            }
        }
    }
    HomSample h;
    h.perms = cur;
    h.n = n;
    h.sampler_tag = "mcmc";
    h.seed = seed;
    if (!h.relator_holds(base.presentation))
        throw std::logic_error("sample_hom_mcmc: relator lost during mixing");
    return h;
}

} // namespace

uint64_t count_homs(const fuchsian::BaseSurface& base, int n) {
    require_small_n(base, n, "count_homs");
    return hom_table(n).total;
}

void enumerate_homs(const fuchsian::BaseSurface& base, int n,
                    const std::function<void(const HomSample&)>& visit) {
    require_small_n(base, n, "enumerate_homs");
    const HomTable& tab = hom_table(n);
    const size_t m = tab.sym.perms.size();
    for (uint16_t a = 0; a < m; ++a) {
        for (uint16_t b = 0; b < m; ++b) {
            const uint16_t need = tab.sym.inv[tab.sym.comm(a, b)];
            for (auto [c, d] : tab.buckets[need]) visit(hom_from_indices(tab.sym, a, b, c, d, n));
        }
    }
}

HomSample sample_hom(const fuchsian::BaseSurface& base, int n, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_hom: n >= 1 required");
    if (n == 1) {
        HomSample h;
        h.perms.assign(4, Permutation::identity(1));
        h.n = 1;
        h.sampler_tag = "exhaustive";
        h.seed = seed;
        return h;
    }
    if (n > 5) return sample_hom_mcmc(base, n, seed);
    const HomTable& tab = hom_table(n);
    SeededRng rng(seed);
    const uint64_t idx = rng.next_below(tab.total);
    // locate the (a, b) cell by binary search in the prefix table, then the
    // (c, d) entry inside its bucket
    const auto it = std::upper_bound(tab.prefix.begin(), tab.prefix.end(), idx);
    const size_t cell = static_cast<size_t>(it - tab.prefix.begin()) - 1;
    const size_t m = tab.sym.perms.size();
    const uint16_t a = static_cast<uint16_t>(cell / m), b = static_cast<uint16_t>(cell % m);
    const uint16_t need = tab.sym.inv[tab.sym.comm(a, b)];
    const auto& bucket = tab.buckets[need];
    const auto [c, d] = bucket[idx - tab.prefix[cell]];
    HomSample h = hom_from_indices(tab.sym, a, b, c, d, n);
    h.seed = seed;
    return h;
}

CoverSpectrum lift_spectrum(const spectrum::LengthSpectrum& base_spec, const HomSample& hom,
                            double L) {
    if (base_spec.cutoff_L + 1e-12 < L)
        throw incomplete_spectrum("lift_spectrum: base spectrum not complete to L");
    CoverSpectrum cs;
    cs.base_name = base_spec.base_name;
    cs.hom = hom;
    cs.spec.cutoff_L = L;
    cs.spec.volume = hom.n * base_spec.volume;
    cs.spec.exact = base_spec.exact;
    cs.spec.base_name = base_spec.base_name + "-cover-n" + std::to_string(hom.n);
    if (base_spec.genus) cs.spec.genus = hom.n * (*base_spec.genus - 1) + 1;

    for (const auto& c : base_spec.classes) {
        if (c.length > L) break;
        const Permutation pi = group::evaluate_hom(hom.perms, c.word);
        for (auto [k, cnt] : group::cycle_count(pi)) {
            const double lifted = k * c.length;
            if (lifted > L + 1e-12) continue;
            spectrum::PrimitiveClass rec;
            rec.word = group::power(c.word, k);
            rec.length = lifted;
            rec.oriented_multiplicity = c.oriented_multiplicity * cnt;
            if (base_spec.exact) {
                // trace of the k-th power through the two-term recurrence in Z[sqrt2]
                int64_t p0 = 2, q0 = 0, p1 = c.trace_p, q1 = c.trace_q;
                for (int i = 1; i < k; ++i) {
                    const int64_t p2 = c.trace_p * p1 + 2 * c.trace_q * q1 - p0;
                    const int64_t q2 = c.trace_p * q1 + c.trace_q * p1 - q0;
                    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
                }
                rec.trace_p = p1;
                rec.trace_q = q1;
                rec.trace_value = static_cast<double>(p1) + std::sqrt(2.0) * static_cast<double>(q1);
            } else {
                rec.trace_value = 2.0 * std::cosh(0.5 * lifted);
            }
            cs.spec.classes.push_back(std::move(rec));
        }
    }
    std::sort(cs.spec.classes.begin(), cs.spec.classes.end(), [](const auto& x, const auto& y) {
        if (x.length != y.length) return x.length < y.length;
        return group::format_word(x.word) < group::format_word(y.word);
    });
    if (!cs.spec.classes.empty() && !base_spec.classes.empty() &&
        cs.spec.classes.front().length < base_spec.classes.front().length - 1e-9)
        throw std::logic_error("lift_spectrum: cover systole below base systole");
    return cs;
}

std::pair<double, double> vz_check(const spectrum::LengthSpectrum& base_spec, const HomSample& hom,
                                   double L) {
    const CoverSpectrum cs = lift_spectrum(base_spec, hom, L);
    KahanSum lhs;
    for (const auto& c : cs.spec.classes) {
        const int64_t qmax = static_cast<int64_t>(std::floor(L / c.length + 1e-12));
        lhs.add(static_cast<double>(c.oriented_multiplicity) * static_cast<double>(qmax) * c.length);
    }
    KahanSum rhs;
    for (const auto& c : base_spec.classes) {
        if (c.length > L) break;
        const Permutation pi = group::evaluate_hom(hom.perms, c.word);
        const int64_t qmax = static_cast<int64_t>(std::floor(L / c.length + 1e-12));
        int64_t fix_sum = 0;
        for (int64_t q = 1; q <= qmax; ++q) fix_sum += fix_power(pi, q);
        rhs.add(c.oriented_multiplicity * c.length * static_cast<double>(fix_sum));
    }
    return {lhs.value(), rhs.value()};
}

FixStats fix_statistics(const fuchsian::BaseSurface& base, const group::Word& word, int q, int n,
                        int num_samples, uint64_t seed) {
    if (q < 1) throw std::invalid_argument("fix_statistics: q >= 1 required");
    if (num_samples < 2) throw std::invalid_argument("fix_statistics: num_samples >= 2 required");
    KahanSum sum, sumsq;
    std::string tag;
    for (int i = 0; i < num_samples; ++i) {
        const uint64_t s = SeededRng::sub_stream(seed, static_cast<uint64_t>(i)).next_u64();
        HomSample h = sample_hom(base, n, s);
        tag = h.sampler_tag;
        const Permutation pi = group::evaluate_hom(h.perms, word);
        const double f = static_cast<double>(fix_power(pi, q));
        sum.add(f);
        sumsq.add(f * f);
    }
    const double mean = sum.value() / num_samples;
    const double var = std::max(0.0, (sumsq.value() - num_samples * mean * mean) / (num_samples - 1));
    FixStats out;
    out.mean = mean;
    out.std_error = std::sqrt(var / num_samples);
    out.sampler_tag = tag;
    return out;
}

double exact_mean_fix(const fuchsian::BaseSurface& base, const group::Word& word, int q, int n) {
    if (q < 1) throw std::invalid_argument("exact_mean_fix: q >= 1 required");
    require_small_n(base, n, "exact_mean_fix");
    long double total = 0;
    uint64_t count = 0;
    enumerate_homs(base, n, [&](const HomSample& h) {
        const Permutation pi = group::evaluate_hom(h.perms, word);
        total += static_cast<long double>(fix_power(pi, q));
        ++count;
    });
    return static_cast<double>(total / count);
}

SunadaDiagnostic sunada_diagnostic(const HomSample& hom) {
    if (!group::is_transitive(hom.perms))
        throw not_connected("sunada_diagnostic: cover is not connected");
    SunadaDiagnostic d;
    if (hom.n == 1) {
        d.bound = std::numeric_limits<double>::infinity();
        d.diameter = 0;
        return d;
    }
    d.bound = 1.0 / ((hom.n - 1) * std::sqrt(2.0 * hom.n));
    d.diameter = group::schreier_diameter(hom.perms);
    return d;
}

} // namespace hypdet::cover
