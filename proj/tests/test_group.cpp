#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "hypdet/errors.hpp"
#include "hypdet/fuchsian.hpp"
#include "hypdet/group.hpp"
#include "hypdet/rng.hpp"

using namespace hypdet;
using group::Word;

namespace {

Word W(std::initializer_list<int> letters) {
    Word w;
    w.letters = letters;
    return group::free_reduce(std::move(w));
}

Word random_reduced_word(SeededRng& rng, int num_gens, int len) {
    Word w;
    for (int i = 0; i < len; ++i) {
        for (;;) {
            int g = 1 + static_cast<int>(rng.next_below(num_gens));
            if (rng.next_below(2)) g = -g;
            if (!w.letters.empty() && w.letters.back() == -g) continue;
            w.letters.push_back(g);
            break;
        }
    }
    return w;
}

group::Permutation P(std::initializer_list<int> images) {
    group::Permutation p;
    p.images = images;
    p.validate();
    return p;
}

} // namespace

TEST_CASE("word reduction and cyclic reduction") {
    CHECK(group::cyclic_reduce(W({1, 2, -1})).letters == std::vector<int>{2});
    CHECK(group::cyclic_reduce(W({})).letters.empty());
    CHECK(group::cyclic_reduce(W({1, 2})).letters == std::vector<int>{1, 2});
    CHECK(group::free_reduce(W({1, -1})).letters.empty());
    CHECK(group::concat(W({1, 2}), W({-2, 3})).letters == std::vector<int>{1, 3});
}

TEST_CASE("word serialization round-trip") {
    const Word w = W({1, 2, -1, -2, 3, -4});
    CHECK(group::format_word(w) == "a1b1A1B1a2B2");
    CHECK(group::parse_word("a1b1A1B1a2B2", 4).letters == w.letters);
    CHECK_THROWS_AS(group::parse_word("z9", 4), std::invalid_argument);
    CHECK_THROWS_AS(group::parse_word("a3", 4), std::invalid_argument);
}

TEST_CASE("cyclic power detection") {
    CHECK(group::is_cyclic_power(W({1, 2, 1, 2})));
    CHECK(!group::is_cyclic_power(W({1, 2})));
    CHECK(!group::is_cyclic_power(W({1})));
}

TEST_CASE("conjugacy key: rotation invariance and relator detection") {
    const auto pres = group::surface_presentation(2);
    SeededRng rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        Word w = group::cyclic_reduce(random_reduced_word(rng, 4, 3 + trial % 8));
        if (w.empty()) continue;
        bool trivial = false;
        std::string key;
        try {
            key = group::conjugacy_key(w, pres);
        } catch (const std::domain_error&) {
            trivial = true;
        }
        if (trivial) continue;
        // every rotation produces the same key
        for (size_t r = 1; r < w.size(); ++r) {
            Word rot;
            rot.letters.assign(w.letters.begin() + r, w.letters.end());
            rot.letters.insert(rot.letters.end(), w.letters.begin(), w.letters.begin() + r);
            rot = group::cyclic_reduce(std::move(rot));
            CHECK(group::conjugacy_key(rot, pres) == key);
        }
        // conjugation by each generator preserves the key
        for (int g = 1; g <= 4; ++g) {
            Word conj = group::concat(group::concat(W({g}), w), W({-g}));
            conj = group::cyclic_reduce(std::move(conj));
            CHECK(group::conjugacy_key(conj, pres) == key);
        }
    }
    // the relator itself is trivial in the group
    CHECK_THROWS_AS(group::conjugacy_key(pres.relators[0], pres), std::domain_error);
    CHECK_THROWS_AS(group::conjugacy_key(W({}), pres), std::domain_error);
}

TEST_CASE("conjugacy key: a1 b1 a1^-1 is conjugate to b1") {
    const auto pres = group::surface_presentation(2);
    CHECK(group::conjugacy_key(W({1, 2, -1}), pres) == group::conjugacy_key(W({2}), pres));
}

TEST_CASE("conjugacy key: equal keys imply equal traces in the matrix model") {
    const auto base = fuchsian::catalog("bolza");
    const auto pres = base.presentation;
    auto abs_trace = [&](const Word& w) {
        fuchsian::Isometry m = fuchsian::Isometry::identity();
        for (int x : w.letters) {
            auto g = base.generators[std::abs(x) - 1];
            if (x < 0) g = g.inverted();
            m = m * g;
        }
        return m.abs_trace();
    };
    SeededRng rng(99);
    std::map<std::string, fuchsian::TraceQ2> seen;
    for (int trial = 0; trial < 80; ++trial) {
        Word w = group::cyclic_reduce(random_reduced_word(rng, 4, 2 + trial % 6));
        if (w.empty()) continue;
        std::string key;
        try {
            key = group::conjugacy_key(w, pres);
        } catch (const std::domain_error&) {
            continue;
        }
        const auto t = abs_trace(w);
        auto it = seen.find(key);
        if (it == seen.end())
            seen.emplace(key, t);
        else
            CHECK(it->second == t);
    }
}

TEST_CASE("evaluate_hom basics") {
    std::vector<group::Permutation> hom = {P({1, 0, 2}), P({1, 2, 0})};
    CHECK(group::evaluate_hom(hom, W({})).is_identity());
    CHECK(group::evaluate_hom(hom, W({1})).images == std::vector<int>{1, 0, 2});
    // square of a 3-cycle
    CHECK(group::evaluate_hom(hom, W({2, 2})).images == std::vector<int>{2, 0, 1});
    // homomorphism property on random word pairs
    SeededRng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const Word w1 = random_reduced_word(rng, 2, 1 + trial % 5);
        const Word w2 = random_reduced_word(rng, 2, 1 + (trial * 3) % 5);
        const auto lhs = group::evaluate_hom(hom, group::concat(w1, w2));
        const auto rhs = group::compose(group::evaluate_hom(hom, w1), group::evaluate_hom(hom, w2));
        CHECK(lhs.images == rhs.images);
    }
}

TEST_CASE("cycle type and fixed points") {
    CHECK(group::cycle_type(group::Permutation::identity(4)) == std::vector<int>{1, 1, 1, 1});
    CHECK(group::fixed_points(group::Permutation::identity(4)) == 4);
    CHECK(group::cycle_type(P({1, 0, 2})) == std::vector<int>{2, 1});
    CHECK(group::fixed_points(P({1, 0, 2})) == 1);
    CHECK(group::cycle_type(P({1, 2, 3, 0})) == std::vector<int>{4});
    CHECK(group::fixed_points(P({1, 2, 3, 0})) == 0);
}

TEST_CASE("schreier graph: transitivity, diameter, gap") {
    // all-identity action on n >= 2 is intransitive
    std::vector<group::Permutation> triv = {group::Permutation::identity(3),
                                            group::Permutation::identity(3)};
    CHECK(!group::is_transitive(triv));

    // an n-cycle generator is transitive with diameter <= n - 1
    std::vector<group::Permutation> cyc = {P({1, 2, 3, 4, 0}), group::Permutation::identity(5)};
    CHECK(group::is_transitive(cyc));
    CHECK(group::schreier_diameter(cyc) <= 4);

    // n = 1: sentinel gap
    std::vector<group::Permutation> one = {group::Permutation::identity(1)};
    CHECK(group::is_transitive(one));
    CHECK(group::schreier_diameter(one) == 0);
    CHECK(std::isinf(group::gap_estimate(one)));

    // the gap estimate is a diagnostic: check it is sane on the 5-cycle
    const double gap = group::gap_estimate(cyc, 2000);
    // normalized Laplacian gap of the lazy cycle structure is positive and < 2
    CHECK(gap > 0.0);
    CHECK(gap < 2.0);
    // intransitive action: some eigenvector orthogonal to constants has
    // eigenvalue 1 in A/d, so the estimated gap collapses to ~0
    CHECK(group::gap_estimate(triv, 2000) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("orbit count equals component count") {
    // two 2-cycles on 4 points acting separately: 2 orbits, not transitive
    std::vector<group::Permutation> hom = {P({1, 0, 3, 2})};
    CHECK(!group::is_transitive(hom));
}
