#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "psytab/table.hpp"

namespace psytab {

/// Fraction of synthetic rows that exactly match at least one real row on all
/// columns; duplicates in the synthetic table count per row.
/// Throws errc::schema_mismatch, errc::empty_synthetic.
double exact_overlap(const CategoricalTable& syn, const CategoricalTable& real);

struct NnDistance {
    double normalized;  // hamming / p
    int hamming;        // differing columns to the closest real row
};

/// Nearest-neighbour Hamming distance from each synthetic row to the real
/// table, in synthetic row order. Throws errc::schema_mismatch, errc::empty_real.
std::vector<NnDistance> nn_distances(const CategoricalTable& syn, const CategoricalTable& real);

/// Lower empirical quantile with linear interpolation between order statistics.
/// Throws errc::empty_input; q outside [0, 1] throws errc::invalid_argument.
double quantile(std::vector<double> values, double q);

/// Fraction of synthetic rows whose raw Hamming NN distance is <= threshold.
double near_match_share(const CategoricalTable& syn, const CategoricalTable& real, int threshold);

struct KMapResult {
    double average;
    std::vector<double> per_record;  // 1/k(q) or 0 when the QI pattern is absent
};

/// Known-QI linkage risk against the real table's quasi-identifier
/// equivalence classes. Throws errc::schema_mismatch, errc::unknown_column.
KMapResult k_map_risk(const CategoricalTable& syn, const CategoricalTable& real,
                      std::span<const std::string> qi_columns);

struct PrivacyReport {
    double exact_overlap = 0.0;
    double nn_q05_normalized = 0.0;
    double nn_q05_hamming = 0.0;
    double near_match_share_le1 = 0.0;
    double k_map_risk_avg = 0.0;
    std::vector<NnDistance> per_record_nn;  // not serialized

    nlohmann::ordered_json to_json() const;
};

/// Full privacy bundle: EO, NN q05 (normalized and raw Hamming), near-match
/// share at threshold 1, and average k-map risk over the given QI columns
/// (defaults to sex and age when present).
PrivacyReport privacy_report(const CategoricalTable& syn, const CategoricalTable& real,
                             std::span<const std::string> qi_columns = {});

}  // namespace psytab
