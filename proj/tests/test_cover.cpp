#include <doctest.h>

#include <cmath>
#include <map>

#include "hypdet/cover.hpp"
#include "hypdet/errors.hpp"
#include "hypdet/fuchsian.hpp"
#include "hypdet/group.hpp"
#include "hypdet/rng.hpp"
#include "hypdet/spectrum.hpp"

using namespace hypdet;
using group::Permutation;

namespace {

const fuchsian::BaseSurface& base() {
    static const auto b = fuchsian::catalog("bolza");
    return b;
}

const spectrum::LengthSpectrum& base_spec7() {
    static const auto s = fuchsian::enumerate_primitives(base(), 7.0);
    return s;
}

// brute-force count of Hom(genus-2 group, S_n) by scanning all tuples
uint64_t brute_force_homs(int n) {
    std::vector<Permutation> all;
    Permutation p = Permutation::identity(n);
    std::vector<int> idx = p.images;
    do {
        Permutation q;
        q.images = idx;
        all.push_back(q);
    } while (std::next_permutation(idx.begin(), idx.end()));
    const auto relator = group::surface_presentation(2).relators[0];
    uint64_t count = 0;
    for (const auto& a : all)
        for (const auto& b : all)
            for (const auto& c : all)
                for (const auto& d : all) {
                    std::vector<Permutation> hom = {a, b, c, d};
                    if (group::evaluate_hom(hom, relator).is_identity()) ++count;
                }
    return count;
}

} // namespace

TEST_CASE("enumerate_homs: counts against brute force and the character sum") {
    CHECK(cover::count_homs(base(), 1) == 1);
    CHECK(cover::count_homs(base(), 2) == 16); // (2!)^3 (1 + 1) from the two linear characters
    CHECK(cover::count_homs(base(), 2) == brute_force_homs(2));
    CHECK(cover::count_homs(base(), 3) == brute_force_homs(3));
    CHECK_THROWS_AS(cover::count_homs(base(), 6), budget_exceeded);

    // every emitted tuple satisfies the relator; total matches the count
    uint64_t seen = 0;
    cover::enumerate_homs(base(), 2, [&](const cover::HomSample& h) {
        ++seen;
        CHECK(h.relator_holds(base().presentation));
    });
    CHECK(seen == 16);
}

TEST_CASE("sample_hom: n = 1 trivial, relator always holds, exactness tags") {
    const auto h1 = cover::sample_hom(base(), 1, 123);
    CHECK(h1.n == 1);
    CHECK(h1.perms.size() == 4);
    CHECK(h1.perms[0].is_identity());
    for (uint64_t seed : {1ull, 2ull, 77ull}) {
        const auto h = cover::sample_hom(base(), 3, seed);
        CHECK(h.sampler_tag == "exhaustive");
        CHECK(h.relator_holds(base().presentation));
    }
    const auto hm = cover::sample_hom(base(), 8, 5);
    CHECK(hm.sampler_tag == "mcmc");
    CHECK(hm.relator_holds(base().presentation));
}

TEST_CASE("sample_hom: chi-square uniformity against exhaustive enumeration") {
    // exact-uniform sampling versus the full enumeration frequencies; the
    // 0.001-level decision uses the normal approximation of chi^2, so draw
    // counts are chosen to keep expected cell counts well away from the
    // sparse regime (~206 at n = 3, ~29 at n = 4)
    auto run = [&](int n, int draws, uint64_t seed_base) {
        std::map<std::string, int> freq;
        for (int i = 0; i < draws; ++i) {
            const auto h = cover::sample_hom(base(), n, seed_base + i);
            std::string key;
            for (const auto& p : h.perms)
                for (int v : p.images) key += static_cast<char>('a' + v);
            freq[key]++;
        }
        const double cells = static_cast<double>(cover::count_homs(base(), n));
        CHECK(freq.size() <= static_cast<size_t>(cells));
        const double expected = draws / cells;
        double chi2 = 0.0;
        int covered = 0;
        for (const auto& [k, c] : freq) {
            chi2 += (c - expected) * (c - expected) / expected;
            ++covered;
        }
        chi2 += (cells - covered) * expected; // unobserved cells
        const double dof = cells - 1.0;
        return (chi2 - dof) / std::sqrt(2.0 * dof);
    };
    CHECK(std::abs(run(3, 100000, 900000)) < 3.09);
    CHECK(std::abs(run(4, 1000000, 7700000)) < 3.09);
}

TEST_CASE("hom JSON round-trip") {
    const auto h = cover::sample_hom(base(), 4, 99);
    const auto j = h.to_json();
    const auto back = cover::HomSample::from_json(j);
    CHECK(back.n == h.n);
    CHECK(back.sampler_tag == h.sampler_tag);
    CHECK(back.seed == h.seed);
    REQUIRE(back.perms.size() == h.perms.size());
    for (size_t i = 0; i < h.perms.size(); ++i) CHECK(back.perms[i].images == h.perms[i].images);
}

TEST_CASE("lift_spectrum: trivial cover reproduces the base") {
    const auto h1 = cover::sample_hom(base(), 1, 0);
    const auto cs = cover::lift_spectrum(base_spec7(), h1, 7.0);
    REQUIRE(cs.spec.classes.size() == base_spec7().classes.size());
    CHECK(cs.spec.volume == base_spec7().volume);
    for (size_t i = 0; i < cs.spec.classes.size(); ++i) {
        CHECK(cs.spec.classes[i].length == base_spec7().classes[i].length);
        CHECK(cs.spec.classes[i].oriented_multiplicity ==
              base_spec7().classes[i].oriented_multiplicity);
    }
}

TEST_CASE("lift_spectrum: explicit cycle structure") {
    // synthetic base class of length 1 and a hom sending it to (1 2)(3):
    // lifted lengths are {2, 1}, and the fixed point count matches the
    // number of length-1 lifts
    spectrum::LengthSpectrum bs;
    spectrum::PrimitiveClass c;
    c.word = group::parse_word("a1", 4);
    c.length = 1.0;
    c.trace_value = 2.0 * std::cosh(0.5);
    c.oriented_multiplicity = 2;
    bs.classes.push_back(c);
    bs.cutoff_L = 4.0;
    bs.volume = 4.0 * std::acos(-1.0);
    bs.exact = false;
    cover::HomSample h;
    h.n = 3;
    Permutation swap12;
    swap12.images = {1, 0, 2};
    h.perms = {swap12, Permutation::identity(3), Permutation::identity(3),
               Permutation::identity(3)};
    const auto cs = cover::lift_spectrum(bs, h, 4.0);
    REQUIRE(cs.spec.classes.size() == 2);
    CHECK(cs.spec.classes[0].length == doctest::Approx(1.0));
    CHECK(cs.spec.classes[0].oriented_multiplicity == 2); // one fixed point
    CHECK(cs.spec.classes[1].length == doctest::Approx(2.0));
    CHECK(cs.spec.classes[1].oriented_multiplicity == 2); // one 2-cycle
    CHECK(group::fixed_points(group::evaluate_hom(h.perms, c.word)) == 1);
    CHECK_THROWS_AS(cover::lift_spectrum(bs, h, 5.0), incomplete_spectrum);
}

TEST_CASE("lift_spectrum: conservation and systole bound on random covers") {
    SeededRng rng(314);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(4));
        const auto hom = cover::sample_hom(base(), n, rng.next_u64());
        const auto cs = cover::lift_spectrum(base_spec7(), hom, 7.0);
        CHECK(cs.spec.volume == doctest::Approx(n * base_spec7().volume));
        // cover systole never below the base systole
        if (!cs.spec.classes.empty())
            CHECK(cs.spec.classes.front().length >=
                  base_spec7().classes.front().length - 1e-12);
        // per base class: cycle lengths partition n
        for (const auto& c : base_spec7().classes) {
            const auto pi = group::evaluate_hom(hom.perms, c.word);
            int total = 0;
            for (auto [k, cnt] : group::cycle_count(pi)) total += k * cnt;
            CHECK(total == n);
        }
        // exact-trace classes stay exact through Chebyshev lifting
        for (const auto& c : cs.spec.classes) {
            CHECK(2.0 * std::acosh(0.5 * c.trace_value) == doctest::Approx(c.length).epsilon(1e-9));
        }
    }
}

TEST_CASE("vz identity: trivial hom, explicit hom, and a randomized sweep") {
    const auto h1 = cover::sample_hom(base(), 1, 0);
    auto [l1, r1] = cover::vz_check(base_spec7(), h1, 7.0);
    CHECK(l1 == doctest::Approx(r1).epsilon(1e-12));

    const auto h3 = cover::sample_hom(base(), 3, 42);
    auto [l3, r3] = cover::vz_check(base_spec7(), h3, 7.0);
    CHECK(std::abs(l3 - r3) < 1e-9);

    for (uint64_t seed = 1; seed <= 50; ++seed) {
        const auto h = cover::sample_hom(base(), 5, seed);
        auto [lhs, rhs] = cover::vz_check(base_spec7(), h, 7.0);
        CHECK(std::abs(lhs - rhs) < 1e-9);
    }
}

TEST_CASE("per-level refinement of the vz identity") {
    // at every common level q l(gamma) the oriented length mass matches the
    // fixed-point weighted base mass
    const auto hom = cover::sample_hom(base(), 4, 7);
    const auto cs = cover::lift_spectrum(base_spec7(), hom, 7.0);
    std::map<int64_t, double> cover_mass, base_mass;
    auto level_key = [](double x) { return static_cast<int64_t>(std::llround(x * 1e6)); };
    for (const auto& c : cs.spec.classes)
        for (int64_t q = 1; q * c.length <= 7.0 + 1e-12; ++q)
            cover_mass[level_key(q * c.length)] += c.oriented_multiplicity * c.length;
    for (const auto& c : base_spec7().classes) {
        const auto pi = group::evaluate_hom(hom.perms, c.word);
        for (int64_t q = 1; q * c.length <= 7.0 + 1e-12; ++q) {
            int64_t fix = 0;
            for (auto [k, cnt] : group::cycle_count(pi))
                if (q % k == 0) fix += static_cast<int64_t>(k) * cnt;
            base_mass[level_key(q * c.length)] += c.oriented_multiplicity * c.length * fix;
        }
    }
    REQUIRE(!cover_mass.empty());
    for (const auto& [lvl, mass] : base_mass) {
        if (mass == 0.0) continue;
        REQUIRE(cover_mass.count(lvl) == 1);
        CHECK(cover_mass.at(lvl) == doctest::Approx(mass).epsilon(1e-10));
    }
}

TEST_CASE("fix statistics: exact reference and n = 1 degenerate") {
    const auto w = group::parse_word("a1", 4);
    const auto one = cover::fix_statistics(base(), w, 3, 1, 10, 5);
    CHECK(one.mean == 1.0);
    CHECK(one.std_error == 0.0);

    // n <= 5: Monte-Carlo mean within 3 standard errors of the exact mean
    for (int q : {1, 2}) {
        const double exact = cover::exact_mean_fix(base(), w, q, 4);
        const auto mc = cover::fix_statistics(base(), w, q, 4, 4000, 11);
        CHECK(std::abs(mc.mean - exact) <= 3.0 * mc.std_error + 1e-12);
    }
}

TEST_CASE("connectivity frequency is nondecreasing on n = 2..5 (exact sampling)") {
    double prev = -1.0;
    for (int n = 2; n <= 5; ++n) {
        int connected = 0;
        const int trials = 400;
        for (int i = 0; i < trials; ++i) {
            const auto h = cover::sample_hom(base(), n, 1000 + 131 * n + i);
            if (group::is_transitive(h.perms)) ++connected;
        }
        const double freq = static_cast<double>(connected) / trials;
        CHECK(freq >= prev - 0.05); // trend with sampling slack
        prev = freq;
    }
    CHECK(prev > 0.9);
}

TEST_CASE("sunada diagnostic") {
    const auto h1 = cover::sample_hom(base(), 1, 0);
    CHECK(std::isinf(cover::sunada_diagnostic(h1).bound));

    // find a connected n = 2 sample: the bound is 1/(1 * sqrt 4) = 0.5
    for (uint64_t seed = 0;; ++seed) {
        const auto h = cover::sample_hom(base(), 2, seed);
        if (!group::is_transitive(h.perms)) {
            CHECK_THROWS_AS(cover::sunada_diagnostic(h), not_connected);
            continue;
        }
        const auto d = cover::sunada_diagnostic(h);
        CHECK(d.bound == doctest::Approx(0.5));
        CHECK(d.diameter >= 1);
        break;
    }

    // n^{3/2} scaling of the structural factor
    for (int n : {4, 8, 16, 32, 64}) {
        const double b = 1.0 / ((n - 1) * std::sqrt(2.0 * n));
        const double scaled = b * std::pow(n, 1.5);
        CHECK(scaled > 0.7);
        CHECK(scaled < 1.5);
    }
}
