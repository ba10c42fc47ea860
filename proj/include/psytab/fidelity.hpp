#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "psytab/table.hpp"

namespace psytab {

/// Jensen-Shannon divergence between two PMFs over the same domain, log base 2
/// (bounded in [0, 1]). Zero-probability terms contribute 0.
/// Throws errc::domain_mismatch.
double jsd(const EmpiricalPMF& p, const EmpiricalPMF& q);

/// Mean univariate JSD across all columns (demographics and items).
/// Throws errc::schema_mismatch, errc::empty_table.
double mean_jsd(const CategoricalTable& real, const CategoricalTable& syn);

/// Bias-corrected Cramér's V between two equal-length categorical columns.
/// Returns 0 for a constant column or when the corrected denominator vanishes.
/// Throws errc::length_mismatch, errc::empty_input.
double cramers_v_bias_corrected(std::span<const std::string> a, std::span<const std::string> b);

/// Mean absolute pairwise Cramér's V difference over all unordered column
/// pairs: returns (error, 1 - error). Throws errc::schema_mismatch,
/// errc::too_few_columns.
std::pair<double, double> mae_v(const CategoricalTable& real, const CategoricalTable& syn);

/// Squared energy distance between the two row distributions under Hamming
/// distance over all columns (V-statistic). Throws errc::schema_mismatch,
/// errc::empty_table.
double energy_distance_sq(const CategoricalTable& real, const CategoricalTable& syn);

struct PairAssociation {
    std::string column_a;
    std::string column_b;
    double v_real;
    double v_syn;
};

struct FidelityReport {
    double mean_jsd = 0.0;
    std::vector<std::pair<std::string, double>> per_column_jsd;  // schema column order
    double mae_v_error = 0.0;
    double mae_v_complement = 1.0;
    double energy_distance_sq = 0.0;
    std::vector<PairAssociation> per_pair_v;  // j < k in schema column order

    nlohmann::ordered_json to_json() const;
};

FidelityReport fidelity_report(const CategoricalTable& real, const CategoricalTable& syn);

}  // namespace psytab
