#include "hypdet/group.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

#include "hypdet/errors.hpp"

namespace hypdet::group {

Word free_reduce(Word w) {
    std::vector<int> out;
    out.reserve(w.letters.size());
    for (int x : w.letters) {
        if (x == 0) throw std::invalid_argument("Word: zero letter");
        if (!out.empty() && out.back() == -x)
            out.pop_back();
        else
            out.push_back(x);
    }
    w.letters = std::move(out);
    return w;
}

Word cyclic_reduce(Word w) {
    w = free_reduce(std::move(w));
    auto& v = w.letters;
    while (v.size() >= 2 && v.front() == -v.back()) {
        v.erase(v.begin());
        v.pop_back();
    }
    return w;
}

Word inverse(const Word& w) {
    Word r;
    r.letters.reserve(w.letters.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) r.letters.push_back(-*it);
    return r;
}

Word concat(const Word& a, const Word& b) {
    Word r = a;
    for (int x : b.letters) {
        if (!r.letters.empty() && r.letters.back() == -x)
            r.letters.pop_back();
        else
            r.letters.push_back(x);
    }
    return r;
}

Word power(const Word& w, int k) {
    Word r;
    Word base = k >= 0 ? w : inverse(w);
    for (int i = 0; i < std::abs(k); ++i) r = concat(r, base);
    return r;
}

std::string format_word(const Word& w) {
    std::string s;
    for (int x : w.letters) {
        int idx = std::abs(x);
        char c = (idx % 2 == 1) ? 'a' : 'b';
        if (x < 0) c = static_cast<char>(std::toupper(c));
        s += c;
        s += std::to_string((idx + 1) / 2);
    }
    return s;
}

Word parse_word(const std::string& text, int num_generators) {
    Word w;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i++];
        bool inv = std::isupper(static_cast<unsigned char>(c));
        char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (lc != 'a' && lc != 'b')
            throw std::invalid_argument("parse_word: expected a/b letter, got '" + std::string(1, c) + "'");
        size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j == i) throw std::invalid_argument("parse_word: letter without index");
        int pair_idx = std::stoi(text.substr(i, j - i));
        i = j;
        if (pair_idx < 1) throw std::invalid_argument("parse_word: index must be >= 1");
        int gen = (lc == 'a') ? 2 * pair_idx - 1 : 2 * pair_idx;
        if (gen > num_generators)
            throw std::invalid_argument("parse_word: generator index out of range");
        w.letters.push_back(inv ? -gen : gen);
    }
    return free_reduce(std::move(w));
}

bool is_cyclic_power(const Word& w) {
    const auto& v = w.letters;
    const size_t n = v.size();
    if (n < 2) return false;
    for (size_t p = 1; p <= n / 2; ++p) {
        if (n % p != 0) continue;
        bool periodic = true;
        for (size_t i = p; i < n && periodic; ++i) periodic = (v[i] == v[i - p]);
        if (periodic) return true;
    }
    return false;
}

Permutation Permutation::identity(int n) {
    Permutation p;
    p.images.resize(n);
    std::iota(p.images.begin(), p.images.end(), 0);
    return p;
}

bool Permutation::is_identity() const {
    for (int i = 0; i < degree(); ++i)
        if (images[i] != i) return false;
    return true;
}

void Permutation::validate() const {
    std::vector<char> seen(images.size(), 0);
    for (int v : images) {
        if (v < 0 || v >= degree() || seen[v])
            throw std::invalid_argument("Permutation: not a bijection on [0..n-1]");
        seen[v] = 1;
    }
}

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree())
        throw std::invalid_argument("compose: size mismatch");
    Permutation r;
    r.images.resize(a.degree());
    for (int i = 0; i < a.degree(); ++i) r.images[i] = a.images[b.images[i]];
    return r;
}

Permutation inverse(const Permutation& p) {
    Permutation r;
    r.images.resize(p.degree());
    for (int i = 0; i < p.degree(); ++i) r.images[p.images[i]] = i;
    return r;
}

std::vector<int> cycle_type(const Permutation& p) {
    std::vector<int> lens;
    std::vector<char> seen(p.degree(), 0);
    for (int i = 0; i < p.degree(); ++i) {
        if (seen[i]) continue;
        int len = 0, j = i;
        while (!seen[j]) {
            seen[j] = 1;
            j = p.images[j];
            ++len;
        }
        lens.push_back(len);
    }
    std::sort(lens.rbegin(), lens.rend());
    return lens;
}

int fixed_points(const Permutation& p) {
    int c = 0;
    for (int i = 0; i < p.degree(); ++i)
        if (p.images[i] == i) ++c;
    return c;
}

std::vector<std::pair<int, int>> cycle_count(const Permutation& p) {
    auto lens = cycle_type(p);
    std::vector<std::pair<int, int>> out;
    for (int len : lens) {
        if (!out.empty() && out.back().first == len)
            out.back().second++;
        else
            out.push_back({len, 1});
    }
    return out;
}

Presentation surface_presentation(int genus) {
    if (genus < 1) throw std::invalid_argument("surface_presentation: genus >= 1");
    Presentation pres;
    pres.num_generators = 2 * genus;
    Word r;
    for (int k = 0; k < genus; ++k) {
        int a = 2 * k + 1, b = 2 * k + 2;
        for (int x : {a, b, -a, -b}) r.letters.push_back(x);
    }
    pres.relators.push_back(free_reduce(std::move(r)));
    return pres;
}

namespace {

// All cyclic rotations of each relator and its inverse.
std::vector<std::vector<int>> symmetrized_relators(const Presentation& pres) {
    std::set<std::vector<int>> out;
    for (const Word& rel : pres.relators) {
        for (int inv = 0; inv < 2; ++inv) {
            Word r = inv ? inverse(rel) : rel;
            r = cyclic_reduce(std::move(r));
            const size_t n = r.letters.size();
            for (size_t i = 0; i < n; ++i) {
                std::vector<int> rot(r.letters.begin() + i, r.letters.end());
                rot.insert(rot.end(), r.letters.begin(), r.letters.begin() + i);
                out.insert(rot);
            }
        }
    }
    return {out.begin(), out.end()};
}

// Longest common prefix of the cyclic word (v, start) with rel.
size_t cyclic_match_len(const std::vector<int>& v, size_t start, const std::vector<int>& rel) {
    const size_t n = v.size();
    size_t k = 0;
    while (k < rel.size() && k < n && v[(start + k) % n] == rel[k]) ++k;
    return k;
}

// Replace the k-letter cyclic subword at `start` by the inverse of the
// relator remainder (valid because the relator is trivial in the group).
std::vector<int> apply_relator(const std::vector<int>& v, size_t start, const std::vector<int>& rel,
                               size_t k) {
    const size_t n = v.size();
    std::vector<int> kept;
    kept.reserve(n - k + rel.size() - k);
    for (size_t i = 0; i < n - k; ++i) kept.push_back(v[(start + k + i) % n]);
    // u v = 1 with |u| = k matched  =>  u = v^{-1}; replacement = inverse of remainder
    std::vector<int> repl;
    for (size_t i = rel.size(); i > k; --i) repl.push_back(-rel[i - 1]);
    // new cyclic word = repl + kept
    repl.insert(repl.end(), kept.begin(), kept.end());
    return repl;
}

int letter_rank(int x) { return 2 * std::abs(x) + (x < 0 ? 1 : 0); }

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return letter_rank(a[i]) < letter_rank(b[i]);
    }
    return false;
}

std::vector<int> min_rotation(const std::vector<int>& v) {
    if (v.empty()) return v;
    std::vector<int> best = v;
    const size_t n = v.size();
    for (size_t s = 1; s < n; ++s) {
        std::vector<int> rot(v.begin() + s, v.end());
        rot.insert(rot.end(), v.begin(), v.begin() + s);
        if (lex_less(rot, best)) best = rot;
    }
    return best;
}

} // namespace

std::string conjugacy_key(const Word& w, const Presentation& pres) {
    Word start = cyclic_reduce(w);
    if (start.empty()) throw std::domain_error("conjugacy_key: identity word");

    const auto rels = symmetrized_relators(pres);
    const size_t rlen = rels.empty() ? 0 : rels.front().size();

    // Phase 1: Dehn shortening until no cyclic subword exceeds half a relator.
    std::vector<int> cur = start.letters;
    bool shortened = true;
    while (shortened) {
        shortened = false;
        const size_t n = cur.size();
        for (size_t s = 0; s < n && !shortened; ++s) {
            for (const auto& rel : rels) {
                size_t k = cyclic_match_len(cur, s, rel);
                if (2 * k > rel.size()) {
                    Word next;
                    next.letters = apply_relator(cur, s, rel, k);
                    next = cyclic_reduce(std::move(next));
                    if (next.empty()) throw std::domain_error("conjugacy_key: word is trivial in the group");
                    cur = next.letters;
                    shortened = true;
                    break;
                }
            }
        }
    }

    // Phase 2: orbit closure under exactly-half-relator swaps (length
    // preserving); if a swap enables further shortening, restart phase 1.
    std::set<std::vector<int>> orbit;
    std::vector<std::vector<int>> stack{cur};
    orbit.insert(cur);
    while (!stack.empty()) {
        std::vector<int> v = stack.back();
        stack.pop_back();
        const size_t n = v.size();
        for (size_t s = 0; s < n; ++s) {
            for (const auto& rel : rels) {
                size_t k = cyclic_match_len(v, s, rel);
                if (2 * k == rlen && k > 0) {
                    Word next;
                    next.letters = apply_relator(v, s, rel, k);
                    next = cyclic_reduce(std::move(next));
                    if (next.empty()) throw std::domain_error("conjugacy_key: word is trivial in the group");
                    if (next.size() < n) {
                        // shorter form found; recurse on it
                        return conjugacy_key(next, pres);
                    }
                    if (orbit.insert(next.letters).second) stack.push_back(next.letters);
                }
            }
        }
    }

    std::vector<int> best;
    for (const auto& v : orbit) {
        auto rot = min_rotation(v);
        if (best.empty() || lex_less(rot, best)) best = rot;
    }
    Word canon;
    canon.letters = best;
    return format_word(canon);
}

Permutation evaluate_hom(std::span<const Permutation> hom, const Word& w) {
    if (hom.empty()) throw std::invalid_argument("evaluate_hom: empty homomorphism");
    const int n = hom[0].degree();
    for (const auto& p : hom)
        if (p.degree() != n) throw std::invalid_argument("evaluate_hom: size mismatch");
    Permutation cur = Permutation::identity(n);
    for (int x : w.letters) {
        const int idx = std::abs(x) - 1;
        if (idx >= static_cast<int>(hom.size()))
            throw std::invalid_argument("evaluate_hom: generator index out of range");
        const Permutation& g = hom[idx];
        // right multiplication: the image of w1 w2 is the composition of the
        // images, making this a genuine homomorphism
        if (x > 0)
            cur = compose(cur, g);
        else
            cur = compose(cur, inverse(g));
    }
    return cur;
}

namespace {

std::vector<int> components(std::span<const Permutation> hom) {
    const int n = hom.empty() ? 0 : hom[0].degree();
    std::vector<int> comp(n, -1);
    int c = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::queue<int> q;
        q.push(s);
        comp[s] = c;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const auto& p : hom) {
                for (int w : {p.images[v], inverse(p).images[v]}) {
                    if (comp[w] < 0) {
                        comp[w] = c;
                        q.push(w);
                    }
                }
            }
        }
        ++c;
    }
    return comp;
}

} // namespace

std::vector<std::vector<int>> schreier_graph(std::span<const Permutation> hom) {
    if (hom.empty()) throw std::invalid_argument("schreier_graph: empty homomorphism");
    const int n = hom[0].degree();
    std::vector<std::vector<int>> adj(n);
    for (const auto& p : hom) {
        const Permutation inv = inverse(p);
        for (int i = 0; i < n; ++i) {
            adj[i].push_back(p.images[i]);
            adj[i].push_back(inv.images[i]);
        }
    }
    return adj;
}

bool is_transitive(std::span<const Permutation> hom) {
    if (hom.empty()) throw std::invalid_argument("is_transitive: empty homomorphism");
    auto comp = components(hom);
    for (int c : comp)
        if (c != 0) return false;
    return true;
}

int schreier_diameter(std::span<const Permutation> hom) {
    if (!is_transitive(hom)) throw not_connected("schreier_diameter: Schreier graph is disconnected");
    const int n = hom[0].degree();
    if (n == 1) return 0;
    std::vector<Permutation> invs;
    for (const auto& p : hom) invs.push_back(inverse(p));
    int diam = 0;
    for (int s = 0; s < n; ++s) {
        std::vector<int> dist(n, -1);
        std::queue<int> q;
        q.push(s);
        dist[s] = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (size_t gi = 0; gi < hom.size(); ++gi) {
                for (int w : {hom[gi].images[v], invs[gi].images[v]}) {
                    if (dist[w] < 0) {
                        dist[w] = dist[v] + 1;
                        q.push(w);
                    }
                }
            }
        }
        diam = std::max(diam, *std::max_element(dist.begin(), dist.end()));
    }
    return diam;
}

double gap_estimate(std::span<const Permutation> hom, int iterations) {
    if (hom.empty()) throw std::invalid_argument("gap_estimate: empty homomorphism");
    const int n = hom[0].degree();
    if (n == 1) return std::numeric_limits<double>::infinity();

    std::vector<Permutation> invs;
    for (const auto& p : hom) invs.push_back(inverse(p));
    const double d = 2.0 * static_cast<double>(hom.size());

    // Power iteration on (I + A/d)/2 restricted to the complement of the
    // constant vector; eigenvalues lie in [0, 1] so the dominant deflated
    // eigenvalue is (1 + lambda_2(A/d))/2.
    std::vector<double> v(n), nv(n);
    for (int i = 0; i < n; ++i) v[i] = std::sin(1.0 + 2.0 * i) + 1e-3 * i;
    auto deflate = [&](std::vector<double>& x) {
        double mean = 0;
        for (double t : x) mean += t;
        mean /= n;
        for (double& t : x) t -= mean;
    };
    auto normalize = [&](std::vector<double>& x) {
        double s = 0;
        for (double t : x) s += t * t;
        s = std::sqrt(s);
        if (s > 0)
            for (double& t : x) t /= s;
    };
    deflate(v);
    normalize(v);
    double mu = 0.5;
    for (int it = 0; it < iterations; ++it) {
        for (int i = 0; i < n; ++i) {
            double acc = 0;
            for (size_t gi = 0; gi < hom.size(); ++gi)
                acc += v[hom[gi].images[i]] + v[invs[gi].images[i]];
            nv[i] = 0.5 * (v[i] + acc / d);
        }
        deflate(nv);
        double num = 0;
        for (int i = 0; i < n; ++i) num += nv[i] * v[i];
        mu = num; // Rayleigh quotient with unit v
        normalize(nv);
        std::swap(v, nv);
    }
    const double lambda2 = 2.0 * mu - 1.0;
    return 1.0 - lambda2;
}

} // namespace hypdet::group
