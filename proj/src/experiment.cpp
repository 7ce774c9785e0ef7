#include "hypdet/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hypdet/bm.hpp"
#include "hypdet/constants.hpp"
#include "hypdet/determinant.hpp"
#include "hypdet/fuchsian.hpp"
#include "hypdet/rng.hpp"

namespace hypdet::experiment {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t record_seed(const ExperimentConfig& cfg, int n, int index) {
    return SeededRng::sub_stream(cfg.master_seed ^ (0x9E3779B97F4A7C15ULL * n),
                                 static_cast<uint64_t>(index))
        .next_u64();
}

} // namespace

void ExperimentConfig::validate() const {
    if (model != "cover" && model != "bm")
        throw std::invalid_argument("ExperimentConfig: model must be 'cover' or 'bm'");
    if (!(epsilon > 0)) throw std::invalid_argument("ExperimentConfig: epsilon > 0 required");
    if (num_samples < 1) throw std::invalid_argument("ExperimentConfig: num_samples >= 1 required");
    for (int n : n_grid)
        if (n < 1) throw std::invalid_argument("ExperimentConfig: n_grid entries must be >= 1");
}

std::string ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["model"] = model;
    j["base_name"] = base_name;
    j["n_grid"] = n_grid;
    j["L"] = L;
    j["R"] = R;
    j["eta"] = eta;
    j["num_samples"] = num_samples;
    j["master_seed"] = master_seed;
    j["epsilon"] = epsilon;
    j["h2_C"] = h2_C;
    j["h2_alpha"] = h2_alpha;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    ExperimentConfig c;
    c.model = j.at("model").get<std::string>();
    c.base_name = j.value("base_name", std::string("bolza"));
    c.n_grid = j.at("n_grid").get<std::vector<int>>();
    c.L = j.at("L").get<double>();
    c.R = j.value("R", 40.0);
    c.eta = j.at("eta").get<double>();
    c.num_samples = j.at("num_samples").get<int>();
    c.master_seed = j.at("master_seed").get<uint64_t>();
    c.epsilon = j.at("epsilon").get<double>();
    c.h2_C = j.value("h2_C", 10.0);
    c.h2_alpha = j.value("h2_alpha", 0.5);
    c.validate();
    return c;
}

uint64_t ExperimentConfig::config_hash() const { return fnv1a(to_json()); }

std::vector<ExperimentRecord> run_concentration(const ExperimentConfig& config) {
    config.validate();
    if (config.model != "cover")
        throw std::invalid_argument("run_concentration: only the cover model has computable determinants");
    const auto base = fuchsian::catalog(config.base_name);
    const auto base_spec = fuchsian::enumerate_primitives(base, config.L);
    const auto& uni = constants::universal();

    std::vector<ExperimentRecord> records;
    for (int n : config.n_grid) {
        for (int i = 0; i < config.num_samples; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            ExperimentRecord rec;
            rec.n = n;
            rec.sample_index = i;
            rec.seed = record_seed(config, n, i);
            rec.eta_assumed = config.eta;
            try {
                const cover::HomSample hom = cover::sample_hom(base, n, rec.seed);
                rec.connected = group::is_transitive(hom.perms);
                if (rec.connected) {
                    const auto cs = cover::lift_spectrum(base_spec, hom, config.L);
                    determinant::DetParams params;
                    params.L = config.L;
                    params.R = config.R;
                    params.eta = config.eta;
                    const auto det = determinant::log_det(cs.spec, cs.spec.volume, params);
                    rec.has_det = true;
                    rec.log_det = det.value;
                    rec.error = det.error;
                    const auto [nrm, nerr] = determinant::normalized_log_det(det, cs.spec.volume);
                    rec.normalized = nrm;
                    rec.normalized_error = nerr;
                    rec.in_band = (nrm + nerr >= uni.E - config.epsilon) &&
                                  (nrm - nerr <= uni.E + config.epsilon);
                    rec.h2_holds =
                        spectrum::check_H2(cs.spec, config.h2_C, config.L, config.h2_alpha);
                }
            } catch (const std::exception&) {
                rec.has_det = false; // per-sample failures never abort the batch
            }
            rec.elapsed_ms = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
            records.push_back(std::move(rec));
        }
    }
    return records;
}

std::vector<ConcentrationSummaryRow> summarize(const ExperimentConfig& config,
                                               const std::vector<ExperimentRecord>& records) {
    std::vector<ConcentrationSummaryRow> rows;
    for (int n : config.n_grid) {
        ConcentrationSummaryRow row;
        row.n = n;
        std::vector<double> normalized;
        double err_sum = 0;
        int in_band = 0, with_det = 0;
        for (const auto& r : records) {
            if (r.n != n) continue;
            ++row.samples;
            if (r.connected) ++row.connected;
            if (!r.has_det) continue;
            ++with_det;
            normalized.push_back(r.normalized);
            err_sum += r.error;
            if (r.in_band) ++in_band;
        }
        if (with_det > 0) {
            std::sort(normalized.begin(), normalized.end());
            const size_t m = normalized.size();
            row.median_normalized =
                (m % 2 == 1) ? normalized[m / 2]
                             : 0.5 * (normalized[m / 2 - 1] + normalized[m / 2]);
            row.in_band_fraction = static_cast<double>(in_band) / with_det;
            row.mean_error = err_sum / with_det;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<HypothesisRow> run_hypothesis_report(const ExperimentConfig& config) {
    config.validate();
    std::vector<HypothesisRow> rows;
    if (config.model == "cover") {
        const auto base = fuchsian::catalog(config.base_name);
        const auto base_spec = fuchsian::enumerate_primitives(base, config.L);
        for (int n : config.n_grid) {
            HypothesisRow row;
            row.n = n;
            row.eta_assumed = config.eta;
            int h2 = 0, conn = 0;
            double sunada_sum = 0;
            int sunada_count = 0;
            for (int i = 0; i < config.num_samples; ++i) {
                const uint64_t seed = record_seed(config, n, i);
                const auto hom = cover::sample_hom(base, n, seed);
                ++row.samples;
                const bool connected = group::is_transitive(hom.perms);
                if (connected) ++conn;
                const auto cs = cover::lift_spectrum(base_spec, hom, config.L);
                if (spectrum::check_H2(cs.spec, config.h2_C, config.L, config.h2_alpha)) ++h2;
                if (connected && n > 1) {
                    sunada_sum += cover::sunada_diagnostic(hom).bound;
                    ++sunada_count;
                }
            }
            row.h2_frequency = row.samples ? static_cast<double>(h2) / row.samples : 0.0;
            row.connected_frequency = row.samples ? static_cast<double>(conn) / row.samples : 0.0;
            row.mean_sunada_bound = sunada_count ? sunada_sum / sunada_count : 0.0;
            rows.push_back(row);
        }
        return rows;
    }
    // bm model: frequency of N_n^O(L) <= C (2 pi n)^alpha
    for (int n : config.n_grid) {
        HypothesisRow row;
        row.n = n;
        row.eta_assumed = config.eta;
        int h2 = 0;
        for (int i = 0; i < config.num_samples; ++i) {
            const uint64_t seed = record_seed(config, n, i);
            const auto g = bm::sample_graph(n, seed);
            ++row.samples;
            const double count = static_cast<double>(bm::n_of_L(g, config.L));
            const double vol = 2.0 * std::acos(-1.0) * n;
            if (count <= config.h2_C * std::pow(vol, config.h2_alpha)) ++h2;
        }
        row.h2_frequency = row.samples ? static_cast<double>(h2) / row.samples : 0.0;
        rows.push_back(row);
    }
    return rows;
}

std::string records_to_jsonl(const std::vector<ExperimentRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += "{\"n\":" + std::to_string(r.n);
        out += ",\"sample_index\":" + std::to_string(r.sample_index);
        out += ",\"seed\":" + std::to_string(r.seed);
        out += ",\"connected\":" + std::string(r.connected ? "true" : "false");
        out += ",\"has_det\":" + std::string(r.has_det ? "true" : "false");
        if (r.has_det) {
            out += ",\"log_det\":" + fmt_double(r.log_det);
            out += ",\"error\":" + fmt_double(r.error);
            out += ",\"normalized\":" + fmt_double(r.normalized);
            out += ",\"normalized_error\":" + fmt_double(r.normalized_error);
            out += ",\"in_band\":" + std::string(r.in_band ? "true" : "false");
            out += ",\"h2_holds\":" + std::string(r.h2_holds ? "true" : "false");
        }
        out += ",\"eta_assumed\":" + fmt_double(r.eta_assumed);
        out += "}\n";
    }
    return out;
}

std::string summary_to_csv(const std::vector<ConcentrationSummaryRow>& rows) {
    std::string out = "n,samples,connected,median_normalized,in_band_fraction,mean_error\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + "," + std::to_string(r.samples) + "," +
               std::to_string(r.connected) + "," + fmt_double(r.median_normalized) + "," +
               fmt_double(r.in_band_fraction) + "," + fmt_double(r.mean_error) + "\n";
    }
    return out;
}

std::string hypothesis_to_csv(const std::vector<HypothesisRow>& rows) {
    std::string out = "n,samples,h2_frequency,connected_frequency,mean_sunada_bound,eta_assumed\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + "," + std::to_string(r.samples) + "," +
               fmt_double(r.h2_frequency) + "," + fmt_double(r.connected_frequency) + "," +
               fmt_double(r.mean_sunada_bound) + "," + fmt_double(r.eta_assumed) + "\n";
    }
    return out;
}

std::string manifest_json(const ExperimentConfig& config) {
    const auto& uni = constants::universal();
    nlohmann::json j;
    j["schema_version"] = 1;
    j["code_version"] = "hypdet 0.1.0";
    j["config"] = nlohmann::json::parse(config.to_json());
    j["config_hash"] = config.config_hash();
    j["constants"] = {{"E", uni.E},
                      {"euler_gamma", uni.euler_gamma},
                      {"zeta_prime_minus1", uni.zeta_prime_minus1},
                      {"log_A", uni.log_A}};
    j["frozen_thresholds"] = {{"concentration_in_band_min_fraction", 0.8}};
    j["eta_provenance"] =
        "assumed input, motivated by the uniform spectral gap known to hold "
        "asymptotically almost surely for random covers; not certified per sample";
    return j.dump(2);
}

void run_to_directory(const ExperimentConfig& config, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto records = run_concentration(config);
    const auto rows = summarize(config, records);
    std::ofstream(fs::path(out_dir) / "records.jsonl") << records_to_jsonl(records);
    std::ofstream(fs::path(out_dir) / "summary.csv") << summary_to_csv(rows);
    std::ofstream(fs::path(out_dir) / "manifest.json") << manifest_json(config);
}

} // namespace hypdet::experiment
