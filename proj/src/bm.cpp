#include "hypdet/bm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hypdet/errors.hpp"
#include "hypdet/rng.hpp"

namespace hypdet::bm {

void OrientedCubicGraph::validate() const {
    if (n < 1) throw std::invalid_argument("OrientedCubicGraph: n >= 1 required");
    if (static_cast<int>(pairing.size()) != half_edges() ||
        static_cast<int>(rotation.size()) != vertices())
        throw std::invalid_argument("OrientedCubicGraph: wrong array sizes");
    for (int h = 0; h < half_edges(); ++h) {
        const int32_t p = pairing[h];
        if (p < 0 || p >= half_edges() || p == h || pairing[p] != h)
            throw std::invalid_argument("OrientedCubicGraph: pairing is not a fixed-point-free involution");
    }
    for (int8_t r : rotation)
        if (r != 1 && r != -1) throw std::invalid_argument("OrientedCubicGraph: rotation must be +-1");
}

OrientedCubicGraph sample_graph(int n, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_graph: n >= 1 required");
    OrientedCubicGraph g;
    g.n = n;
    const int H = g.half_edges();
    SeededRng rng(seed);
    // uniform perfect matching: repeatedly pair the first unmatched half-edge
    // with a uniform choice among the remaining ones
    std::vector<int32_t> pool(H);
    for (int i = 0; i < H; ++i) pool[i] = i;
    g.pairing.assign(H, -1);
    int live = H;
    while (live > 0) {
        const int32_t a = pool[0];
        std::swap(pool[0], pool[live - 1]);
        --live;
        const int j = static_cast<int>(rng.next_below(live));
        const int32_t b = pool[j];
        std::swap(pool[j], pool[live - 1]);
        --live;
        g.pairing[a] = b;
        g.pairing[b] = a;
    }
    g.rotation.resize(g.vertices());
    for (int v = 0; v < g.vertices(); ++v) g.rotation[v] = rng.next_below(2) == 0 ? 1 : -1;
    return g;
}

namespace {

int vertex_of(int h) { return h / 3; }
int slot_of(int h) { return h % 3; }
int half(int v, int s) { return 3 * v + ((s % 3) + 3) % 3; }

// Continue a non-backtracking path arriving along half-edge h: the reversed
// edge sits at the far vertex; turn left = rotation successor, turn right =
// rotation predecessor.
int step(const OrientedCubicGraph& g, int h, bool left) {
    const int rev = g.pairing[h];
    const int v = vertex_of(rev);
    const int dir = left ? g.rotation[v] : -g.rotation[v];
    return half(v, slot_of(rev) + dir);
}

} // namespace

Mat2i word_matrix(const std::string& word) {
    if (word.empty()) throw std::invalid_argument("word_matrix: empty word");
    bool has_l = false, has_r = false;
    Mat2i m;
    for (char ch : word) {
        if (ch == 'l') {
            // multiply by [[1,1],[0,1]] on the right
            m.b += m.a;
            m.d += m.c;
            has_l = true;
        } else if (ch == 'r') {
            m.a += m.b;
            m.c += m.d;
            has_r = true;
        } else {
            throw std::invalid_argument("word_matrix: letters must be 'l' or 'r'");
        }
    }
    if (!has_l || !has_r)
        throw std::domain_error("word_matrix: pure powers are parabolic (trace 2)");
    return m;
}

int64_t word_trace(const std::string& word) {
    Mat2i m;
    for (char ch : word) {
        if (ch == 'l') {
            m.b += m.a;
            m.d += m.c;
        } else if (ch == 'r') {
            m.a += m.b;
            m.c += m.d;
        } else {
            throw std::invalid_argument("word_trace: letters must be 'l' or 'r'");
        }
    }
    return m.trace();
}

double word_length(const std::string& word) {
    const Mat2i m = word_matrix(word);
    const double tr = static_cast<double>(m.trace());
    return 2.0 * std::acosh(0.5 * tr);
}

std::string canonical_rotation(const std::string& word) {
    std::string best = word;
    std::string rot = word;
    for (size_t i = 1; i < word.size(); ++i) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    return best;
}

bool is_primitive_word(const std::string& w) {
    const size_t n = w.size();
    for (size_t p = 1; p <= n / 2; ++p) {
        if (n % p != 0) continue;
        bool periodic = true;
        for (size_t i = p; i < n && periodic; ++i) periodic = (w[i] == w[i - p]);
        if (periodic) return false;
    }
    return true;
}

std::string mirror_word(const std::string& word) {
    std::string m(word.rbegin(), word.rend());
    for (char& c : m) c = (c == 'l') ? 'r' : 'l';
    return m;
}

std::vector<std::string> word_set_WL(double L) {
    if (!(L > 0)) throw std::invalid_argument("word_set_WL: L > 0 required");
    const double cap_real = 2.0 * std::cosh(0.5 * L);
    if (cap_real > 1e7) throw resource_limit("word_set_WL: trace cap too large");
    const int64_t cap = static_cast<int64_t>(std::floor(cap_real + 1e-9));
    // minimal trace among length-N words is N + 1 (attained by l^{N-1} r)
    const int max_len = static_cast<int>(cap) - 1;
    std::vector<std::string> out;
    std::string w;
    // DFS with trace pruning: appending letters never decreases the trace of
    // a nonnegative product
    auto dfs = [&](auto&& self, const Mat2i& m) -> void {
        if (!w.empty() && m.trace() > cap) return;
        if (!w.empty()) {
            const bool has_l = w.find('l') != std::string::npos;
            const bool has_r = w.find('r') != std::string::npos;
            if (has_l && has_r && m.trace() <= cap && is_primitive_word(w) &&
                w == canonical_rotation(w))
                out.push_back(w);
        }
        if (static_cast<int>(w.size()) >= max_len) return;
        for (char ch : {'l', 'r'}) {
            Mat2i next = m;
            if (ch == 'l') {
                next.b += next.a;
                next.d += next.c;
            } else {
                next.a += next.b;
                next.c += next.d;
            }
            w.push_back(ch);
            self(self, next);
            w.pop_back();
        }
    };
    dfs(dfs, Mat2i{});
    std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

FaceCycles face_cycles(const OrientedCubicGraph& g) {
    FaceCycles f;
    for (bool left : {true, false}) {
        std::vector<char> seen(g.half_edges(), 0);
        auto& lens = left ? f.left_lengths : f.right_lengths;
        for (int h0 = 0; h0 < g.half_edges(); ++h0) {
            if (seen[h0]) continue;
            int len = 0, h = h0;
            while (!seen[h]) {
                seen[h] = 1;
                h = step(g, h, left);
                ++len;
            }
            lens.push_back(len);
        }
        std::sort(lens.rbegin(), lens.rend());
    }
    return f;
}

namespace {

// fixed points of the composite step permutation of a primitive canonical
// word = closed walks whose turn word reads exactly that rotation
int64_t word_walk_count(const OrientedCubicGraph& g, const std::string& word) {
    int64_t count = 0;
    for (int h0 = 0; h0 < g.half_edges(); ++h0) {
        int h = h0;
        for (char ch : word) h = step(g, h, ch == 'l');
        if (h == h0) ++count;
    }
    return count;
}

} // namespace

CycleReport leftright_cycles(const OrientedCubicGraph& g, int max_word_len) {
    if (max_word_len < 2) throw std::invalid_argument("leftright_cycles: max_word_len >= 2");
    CycleReport rep;
    rep.faces = face_cycles(g);
    // geodesic words up to the requested combinatorial length: use the trace
    // cap matching the longest admissible word
    std::vector<std::string> words;
    {
        std::string w;
        auto gen = [&](auto&& self) -> void {
            if (!w.empty() && w.find('l') != std::string::npos &&
                w.find('r') != std::string::npos && is_primitive_word(w) &&
                w == canonical_rotation(w))
                words.push_back(w);
            if (static_cast<int>(w.size()) >= max_word_len) return;
            for (char ch : {'l', 'r'}) {
                w.push_back(ch);
                self(self);
                w.pop_back();
            }
        };
        gen(gen);
    }
    std::sort(words.begin(), words.end(), [](const std::string& a, const std::string& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    for (const auto& w : words) {
        const int64_t c = word_walk_count(g, w);
        if (c == 0) continue;
        CycleEntry e;
        e.word = w;
        e.trace = word_trace(w);
        e.length = word_length(w);
        e.count = c;
        rep.geodesic_cycles.push_back(std::move(e));
    }
    return rep;
}

std::vector<CycleEntry> census(const OrientedCubicGraph& g, double L) {
    std::vector<CycleEntry> out;
    for (const auto& w : word_set_WL(L)) {
        CycleEntry e;
        e.word = w;
        e.trace = word_trace(w);
        e.length = word_length(w);
        e.count = word_walk_count(g, w);
        out.push_back(std::move(e));
    }
    return out;
}

int64_t n_of_L(const OrientedCubicGraph& g, double L) {
    int64_t total = 0;
    for (const auto& e : census(g, L)) {
        for (int64_t m = 1; m * e.length <= L + 1e-12; ++m) total += e.count;
    }
    return total;
}

int64_t unoriented_cycle_count(const OrientedCubicGraph& g, const std::string& word) {
    const std::string canon = canonical_rotation(word);
    const std::string mirror = canonical_rotation(mirror_word(word));
    const int64_t walks = word_walk_count(g, canon);
    // mirror-symmetric class: the two orientations of every cycle both read
    // the same word, so oriented walks come in exact reversal pairs
    if (mirror == canon) return walks / 2;
    return walks;
}

std::vector<PoissonRow> poisson_stats(int n, double L, int num_samples, uint64_t seed) {
    if (num_samples < 2) throw std::invalid_argument("poisson_stats: num_samples >= 2 required");
    // one row per word class up to rotation and orientation reversal
    std::vector<std::string> words;
    for (const auto& w : word_set_WL(L)) {
        if (w <= canonical_rotation(mirror_word(w))) words.push_back(w);
    }
    std::vector<double> sum(words.size(), 0.0), sumsq(words.size(), 0.0);
    for (int i = 0; i < num_samples; ++i) {
        const uint64_t s = SeededRng::sub_stream(seed, static_cast<uint64_t>(i)).next_u64();
        const OrientedCubicGraph g = sample_graph(n, s);
        for (size_t wi = 0; wi < words.size(); ++wi) {
            const double c = static_cast<double>(unoriented_cycle_count(g, words[wi]));
            sum[wi] += c;
            sumsq[wi] += c * c;
        }
    }
    std::vector<PoissonRow> rows;
    for (size_t wi = 0; wi < words.size(); ++wi) {
        PoissonRow r;
        r.word = words[wi];
        r.trace = word_trace(words[wi]);
        r.length = word_length(words[wi]);
        r.mean = sum[wi] / num_samples;
        r.variance = std::max(0.0, (sumsq[wi] - num_samples * r.mean * r.mean) / (num_samples - 1));
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace hypdet::bm
