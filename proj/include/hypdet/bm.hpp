#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hypdet::bm {

// Random oriented cubic graph from the configuration model: 2n vertices,
// half-edges 3v..3v+2, a uniform fixed-point-free pairing of the 6n labeled
// half-edges, and an independent uniform rotation sense at each vertex.
// Loops and multi-edges are allowed.
struct OrientedCubicGraph {
    int n = 1;                     // 2n vertices, 6n half-edges
    std::vector<int32_t> pairing;  // fixed-point-free involution on [0, 6n)
    std::vector<int8_t> rotation;  // per-vertex cyclic sense, +1 or -1

    int vertices() const { return 2 * n; }
    int half_edges() const { return 6 * n; }
    void validate() const;
};

OrientedCubicGraph sample_graph(int n, uint64_t seed);

// integer 2x2 matrix assembled from the turn word over L = [[1,1],[0,1]],
// R = [[1,0],[1,1]]
struct Mat2i {
    int64_t a = 1, b = 0, c = 0, d = 1;
    int64_t trace() const { return a + d; }
};

Mat2i word_matrix(const std::string& word);       // letters 'l' / 'r'; throws on pure powers
int64_t word_trace(const std::string& word);      // trace of the product (no hyperbolicity check)
double word_length(const std::string& word);      // 2 arccosh(tr/2); throws on parabolic words

// canonical (lexicographically minimal) rotation of a cyclic word
std::string canonical_rotation(const std::string& word);
bool is_primitive_word(const std::string& word);
std::string mirror_word(const std::string& word); // reverse + swap l/r (orientation reversal)

// All primitive cyclic words (canonical rotation, both letters present) with
// tr(M_w) <= 2 cosh(L/2), enumerated by DFS with trace pruning.
std::vector<std::string> word_set_WL(double L);

// Constant-turn successor cycles: the pure-left and pure-right face
// decompositions of the ribbon structure (cusp data).  Left lengths sum to
// 6n and right lengths sum to 6n.
struct FaceCycles {
    std::vector<int> left_lengths;
    std::vector<int> right_lengths;
};
FaceCycles face_cycles(const OrientedCubicGraph& g);

struct CycleEntry {
    std::string word; // canonical primitive turn word
    int64_t trace = 0;
    double length = 0.0;
    int64_t count = 0; // closed non-backtracking walks realizing the word
};

// Combined structural report: face cycles (pure words, cusp data, a
// partition of the 12n (half-edge, side) states) plus the geodesic words
// realized by closed left-right paths up to the given word length.
struct CycleReport {
    FaceCycles faces;
    std::vector<CycleEntry> geodesic_cycles;
};
CycleReport leftright_cycles(const OrientedCubicGraph& g, int max_word_len = 8);

// Z_{n,w} for every word in word_set_WL(L): the number of closed
// non-backtracking walks whose primitive turn word is w, counted as fixed
// points of the word's step permutation.
std::vector<CycleEntry> census(const OrientedCubicGraph& g, double L);

// N_n^O(L): pairs (gamma, m) with m * l(gamma) <= L, from the census.
int64_t n_of_L(const OrientedCubicGraph& g, double L);

struct PoissonRow {
    std::string word; // representative of the word class up to rotation and mirror
    int64_t trace = 0;
    double length = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

// Empirical first two moments of the unoriented cycle counts Z_{n,w} across
// independent samples.  Counting is per word class up to rotation AND
// orientation reversal: oriented walk counts come in exact reversal pairs,
// which doubles the variance of mirror-symmetric words and destroys the
// Poisson limit; the unoriented counts are the convergent variables.
std::vector<PoissonRow> poisson_stats(int n, double L, int num_samples, uint64_t seed);

// unoriented cycle count of one word class in one sample
int64_t unoriented_cycle_count(const OrientedCubicGraph& g, const std::string& word);

} // namespace hypdet::bm
