#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "psytab/backend.hpp"
#include "psytab/generation.hpp"
#include "psytab/selection.hpp"

namespace psytab {

struct GenerateConfig {
    std::filesystem::path schema_path;
    std::filesystem::path out_dir;
    std::size_t n_patients = 10;
    KbMode mode = KbMode::no_kb;
    std::filesystem::path kb_manifest;
    int top_k = 4;
    int max_retries = 2;
    int workers = 1;
    std::uint64_t master_seed = 0;
    std::string mock_spec = "severity";  // empty selects the HTTP backend
    BackendConfig backend;
    nlohmann::json persona_overrides;  // null for none
};

struct EvaluateConfig {
    std::filesystem::path real_path;
    std::filesystem::path syn_path;
    std::filesystem::path schema_path;  // empty: infer from the CSV pair
    std::filesystem::path json_out;     // empty: JSON goes to the stream
};

struct AblateConfig {
    std::filesystem::path real_path;
    std::map<std::string, std::filesystem::path> variants;  // keyed by kb mode name
    std::filesystem::path schema_path;
    int n_resamples = 1000;
    std::uint64_t seed = 0;
    std::filesystem::path json_out;
};

struct SelectConfig {
    std::filesystem::path real_path;
    std::filesystem::path manifest_path;
    std::filesystem::path schema_path;
    GateConfig gates;
    double train_fraction = 0.7;
    std::uint64_t seed = 0;
    std::filesystem::path json_out;
};

struct BaselineConfig {
    std::filesystem::path real_path;
    std::filesystem::path out_path;
    std::filesystem::path schema_path;
    std::uint64_t seed = 0;
};

/// Writes <out_dir>/synthetic.csv and <out_dir>/run_log.json.
/// Returns 0, or 5 when some patients failed and were skipped.
int cmd_generate(const GenerateConfig& config, std::ostream& out);

/// Prints a metric summary table; emits the combined fidelity+privacy JSON
/// report to json_out (or the stream). Returns 0.
int cmd_evaluate(const EvaluateConfig& config, std::ostream& out);

/// Paired bootstrap deltas of each knowledge variant against the required
/// "nokb" variant, for mean JSD, Cramer's V MAE, and squared energy distance.
int cmd_ablate(const AblateConfig& config, std::ostream& out);

/// Splits the real table, scores every manifest candidate, and reports the
/// privacy-gated winner with the full score table.
int cmd_select(const SelectConfig& config, std::ostream& out);

/// Writes the random-baseline table for the given real CSV.
int cmd_baseline(const BaselineConfig& config, std::ostream& out);

}  // namespace psytab
