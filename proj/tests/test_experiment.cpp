#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hypdet/constants.hpp"
#include "hypdet/determinant.hpp"
#include "hypdet/experiment.hpp"
#include "hypdet/fuchsian.hpp"

using namespace hypdet;
using experiment::ExperimentConfig;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.model = "cover";
    c.base_name = "bolza";
    c.n_grid = {1, 2};
    c.L = 5.0;
    c.R = 20.0;
    c.eta = 0.5;
    c.num_samples = 4;
    c.master_seed = 31;
    c.epsilon = 0.05;
    return c;
}

} // namespace

TEST_CASE("config json round-trip and validation") {
    const auto c = small_config();
    const auto back = ExperimentConfig::from_json(c.to_json());
    CHECK(back.model == c.model);
    CHECK(back.n_grid == c.n_grid);
    CHECK(back.L == c.L);
    CHECK(back.master_seed == c.master_seed);
    CHECK(back.config_hash() == c.config_hash());

    auto bad = c;
    bad.model = "wp";
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = c;
    bad.n_grid = {0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("run_concentration: reproducibility and n = 1 degeneracy") {
    const auto c = small_config();
    const auto r1 = experiment::run_concentration(c);
    const auto r2 = experiment::run_concentration(c);
    CHECK(experiment::records_to_jsonl(r1) == experiment::records_to_jsonl(r2));
    REQUIRE(r1.size() == 8);

    // n = 1 records all equal the base surface determinant
    const auto base_spec = fuchsian::enumerate_primitives(fuchsian::catalog("bolza"), c.L);
    determinant::DetParams p;
    p.L = c.L;
    p.R = c.R;
    p.eta = c.eta;
    const auto det = determinant::log_det(base_spec, base_spec.volume, p);
    for (const auto& rec : r1) {
        if (rec.n != 1) continue;
        CHECK(rec.connected);
        REQUIRE(rec.has_det);
        CHECK(rec.log_det == doctest::Approx(det.value).epsilon(1e-12));
        CHECK(rec.normalized == doctest::Approx(det.value / base_spec.volume).epsilon(1e-12));
    }
    // every record carries the assumed eta and a consistent in_band flag
    const auto& u = constants::universal();
    for (const auto& rec : r1) {
        CHECK(rec.eta_assumed == c.eta);
        if (!rec.has_det) continue;
        const bool expect = (rec.normalized + rec.normalized_error >= u.E - c.epsilon) &&
                            (rec.normalized - rec.normalized_error <= u.E + c.epsilon);
        CHECK(rec.in_band == expect);
    }
}

TEST_CASE("disconnected samples carry no determinant but are logged") {
    ExperimentConfig c = small_config();
    c.n_grid = {2};
    c.num_samples = 60;
    const auto recs = experiment::run_concentration(c);
    int disconnected = 0;
    for (const auto& r : recs) {
        if (!r.connected) {
            ++disconnected;
            CHECK(!r.has_det);
        }
    }
    CHECK(disconnected > 0); // at n = 2 a sizable fraction is disconnected
}

TEST_CASE("summaries are pure functions of the records") {
    const auto c = small_config();
    const auto recs = experiment::run_concentration(c);
    const auto s1 = experiment::summarize(c, recs);
    const auto s2 = experiment::summarize(c, recs);
    CHECK(experiment::summary_to_csv(s1) == experiment::summary_to_csv(s2));
    REQUIRE(s1.size() == 2);
    CHECK(s1[0].n == 1);
    CHECK(s1[0].samples == 4);
    CHECK(s1[0].connected == 4);
}

TEST_CASE("hypothesis report: cover trend and bm mode") {
    ExperimentConfig c = small_config();
    c.n_grid = {2, 3, 4, 5};
    c.num_samples = 120;
    const auto rows = experiment::run_hypothesis_report(c);
    REQUIRE(rows.size() == 4);
    // connectivity frequency trends upward under exact sampling
    for (size_t i = 0; i + 1 < rows.size(); ++i)
        CHECK(rows[i + 1].connected_frequency >= rows[i].connected_frequency - 0.08);
    for (const auto& r : rows) {
        CHECK(r.samples == 120);
        CHECK(r.h2_frequency >= 0.0);
        CHECK(r.h2_frequency <= 1.0);
        CHECK(r.eta_assumed == c.eta);
    }

    ExperimentConfig b;
    b.model = "bm";
    b.n_grid = {20, 40};
    b.L = 2.0 * std::acosh(3.5);
    b.num_samples = 30;
    b.master_seed = 5;
    b.epsilon = 0.05;
    const auto brows = experiment::run_hypothesis_report(b);
    REQUIRE(brows.size() == 2);
    for (const auto& r : brows) {
        CHECK(r.samples == 30);
        CHECK(r.h2_frequency >= 0.0);
    }

    ExperimentConfig e = small_config();
    e.n_grid = {};
    CHECK(experiment::run_hypothesis_report(e).empty());
}

TEST_CASE("manifest content") {
    const auto c = small_config();
    const auto m = experiment::manifest_json(c);
    CHECK(m.find("config_hash") != std::string::npos);
    CHECK(m.find("schema_version") != std::string::npos);
    CHECK(m.find("concentration_in_band_min_fraction") != std::string::npos);
    CHECK(m.find("eta_provenance") != std::string::npos);
}
