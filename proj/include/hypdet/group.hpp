#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hypdet::group {

// A word in a finitely generated group: signed 1-based generator indices,
// negative for inverses.  Kept freely reduced by the factory functions.
// Serialized as e.g. "a1b1A1" (letter a/b alternates by index parity,
// capital = inverse).
struct Word {
    std::vector<int> letters;

    bool empty() const { return letters.empty(); }
    size_t size() const { return letters.size(); }
};

Word free_reduce(Word w);
Word cyclic_reduce(Word w);
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b); // freely reduced
Word power(const Word& w, int k);

std::string format_word(const Word& w);
Word parse_word(const std::string& text, int num_generators);

// True if the cyclic word is a proper power of a shorter cyclic word
// (string periodicity; callers use it on canonical conjugacy forms).
bool is_cyclic_power(const Word& w);

struct Permutation {
    std::vector<int> images; // 0-based, images[i] = p(i)

    static Permutation identity(int n);
    int degree() const { return static_cast<int>(images.size()); }
    bool is_identity() const;
    void validate() const; // throws if not a bijection
};

Permutation compose(const Permutation& a, const Permutation& b); // (a.b)(i) = a(b(i))
Permutation inverse(const Permutation& p);
std::vector<int> cycle_type(const Permutation& p); // nonincreasing
int fixed_points(const Permutation& p);
// cycle lengths with counts: result[k] = number of k-cycles
std::vector<std::pair<int, int>> cycle_count(const Permutation& p);

struct Presentation {
    int num_generators = 0;
    std::vector<Word> relators;
};

// <a1,b1,...,ag,bg | [a1,b1]...[ag,bg]>
Presentation surface_presentation(int genus);

// Canonical label for the conjugacy class of a nontrivial cyclically reduced
// word in a one-relator small-cancellation presentation: Dehn shortening
// (subwords longer than half a relator cycle), half-relator swaps, then the
// lexicographically minimal rotation over the resulting orbit.
// Throws std::domain_error on words trivial in the group.
std::string conjugacy_key(const Word& w, const Presentation& pres);

// Image of w under the homomorphism sending generator i to hom[i-1];
// letters applied left to right.
Permutation evaluate_hom(std::span<const Permutation> hom, const Word& w);

// Schreier graph of the action on [0..n-1]: vertex i joins phi(g)(i) for
// every generator g (multi-edges and loops kept, so the graph is
// 2#generators-regular).
std::vector<std::vector<int>> schreier_graph(std::span<const Permutation> hom);
bool is_transitive(std::span<const Permutation> hom);
// Graph-distance diameter of the Schreier graph on [0..n-1]; requires
// transitivity (throws not_connected otherwise); 0 for n = 1.
int schreier_diameter(std::span<const Permutation> hom);
// Second-smallest eigenvalue of the normalized Schreier-graph Laplacian,
// by deflated power iteration.  Diagnostic only, not a certified bound.
// Returns +infinity for n = 1.
double gap_estimate(std::span<const Permutation> hom, int iterations = 600);

} // namespace hypdet::group
