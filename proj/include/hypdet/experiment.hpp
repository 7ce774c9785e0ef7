#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypdet/cover.hpp"
#include "hypdet/spectrum.hpp"

namespace hypdet::experiment {

struct ExperimentConfig {
    std::string model = "cover"; // "cover" | "bm"
    std::string base_name = "bolza";
    std::vector<int> n_grid;
    double L = 8.0;
    double R = 40.0;
    double eta = 0.2; // assumed gap, stamped into every record
    int num_samples = 1;
    uint64_t master_seed = 0;
    double epsilon = 0.05;
    // constants for the hypothesis-frequency flags
    double h2_C = 10.0;
    double h2_alpha = 0.5;

    void validate() const;
    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
    uint64_t config_hash() const;
};

struct ExperimentRecord {
    int n = 1;
    int sample_index = 0;
    uint64_t seed = 0;
    bool connected = false;
    bool has_det = false; // disconnected samples carry no determinant
    double log_det = 0.0;
    double error = 0.0;
    double normalized = 0.0;
    double normalized_error = 0.0;
    bool in_band = false;
    bool h2_holds = false;
    double eta_assumed = 0.0;
    double elapsed_ms = 0.0; // never serialized into records.jsonl
};

struct ConcentrationSummaryRow {
    int n = 0;
    int samples = 0;
    int connected = 0;
    double median_normalized = 0.0;
    double in_band_fraction = 0.0;
    double mean_error = 0.0;
};

// Draw covers per n in the grid, run the determinant pipeline on connected
// samples, skip (but log) disconnected ones.  Per-sample failures are
// recorded, never abort the batch.
std::vector<ExperimentRecord> run_concentration(const ExperimentConfig& config);

std::vector<ConcentrationSummaryRow> summarize(const ExperimentConfig& config,
                                               const std::vector<ExperimentRecord>& records);

struct HypothesisRow {
    int n = 0;
    int samples = 0;
    double h2_frequency = 0.0;
    double connected_frequency = 0.0; // cover model only
    double mean_sunada_bound = 0.0;   // cover model only
    double eta_assumed = 0.0;
};

std::vector<HypothesisRow> run_hypothesis_report(const ExperimentConfig& config);

// deterministic serialization (records.jsonl is byte-stable across reruns)
std::string records_to_jsonl(const std::vector<ExperimentRecord>& records);
std::string summary_to_csv(const std::vector<ConcentrationSummaryRow>& rows);
std::string hypothesis_to_csv(const std::vector<HypothesisRow>& rows);
std::string manifest_json(const ExperimentConfig& config);

// full pipeline: records.jsonl, summary.csv, manifest.json under out_dir
void run_to_directory(const ExperimentConfig& config, const std::string& out_dir);

} // namespace hypdet::experiment
