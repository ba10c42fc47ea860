#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "psytab/table.hpp"

namespace psytab {

struct CandidateScores {
    double jsd = 0.0;            // fidelity proxy on the tune half
    double eo = 0.0;             // exact overlap against the train half
    double near_share_le1 = 0.0; // Hamming <= 1 share against the train half
    double q05_ham = 0.0;        // 5th percentile of unnormalized Hamming NN distance
};

struct CandidateRecord {
    std::string candidate_id;  // e.g. "epochs=100,seed=23"
    std::filesystem::path sample_path;
    CandidateScores scores;
};

struct GateConfig {
    double eo_max = 0.01;
    double near_share_max = 0.10;
    double q05_ham_min = 1.0;
};

enum class SelectionMode { gated, fallback };

struct SelectionResult {
    CandidateRecord winner;
    SelectionMode mode;
};

/// Tuning-time proxy scores for one candidate sample: mean JSD against the
/// tune half, privacy proxies against the train half. A candidate row count
/// different from |d_tune| is tolerated (a warning is the caller's business).
/// Throws errc::schema_mismatch.
CandidateScores score_candidate(const CategoricalTable& candidate_sample,
                                const CategoricalTable& d_train, const CategoricalTable& d_tune);

bool passes_gates(const CandidateScores& scores, const GateConfig& gates);

/// Picks the minimum-JSD candidate among gate passers; when nothing passes,
/// falls back to the lexicographic order (min EO, min near-match share,
/// max q05, min JSD) over all candidates. Ties at every stage break by
/// candidate_id, so the winner is independent of list order.
/// Throws errc::empty_candidate_list.
SelectionResult select(std::span<const CandidateRecord> candidates, const GateConfig& gates);

/// Manifest: JSON array of {candidate_id, sample_path}. Relative sample paths
/// resolve against the manifest's directory.
std::vector<CandidateRecord> load_manifest(const std::filesystem::path& manifest_path);

}  // namespace psytab
