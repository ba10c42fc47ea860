#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "psytab/table.hpp"

namespace psytab {

/// Error-directed fidelity metrics eligible for bootstrap machinery
/// (lower is better for all three).
enum class FidelityMetric { jsd, mae_v, ed2 };

const char* metric_name(FidelityMetric metric) noexcept;
FidelityMetric metric_from_name(const std::string& name);

/// Plug-in value of the selected metric.
double eval_metric(FidelityMetric metric, const CategoricalTable& real,
                   const CategoricalTable& syn);

struct DeltaEstimate {
    std::string metric_name;
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int n_resamples = 0;
    std::uint64_t seed = 0;

    nlohmann::ordered_json to_json() const;
};

/// Paired bootstrap delta of syn_b (knowledge variant) against syn_a
/// (reference): positive means syn_b improves on syn_a. Each iteration
/// resamples rows with replacement independently from all three tables and
/// recomputes both metrics on the shared real resample; the CI is the
/// [2.5%, 97.5%] percentile interval of the resampled deltas. Deterministic
/// for a fixed seed and independent of evaluation order.
/// Throws errc::schema_mismatch, errc::insufficient_resamples.
DeltaEstimate bootstrap_delta(const CategoricalTable& real, const CategoricalTable& syn_a,
                              const CategoricalTable& syn_b, FidelityMetric metric,
                              int n_resamples, std::uint64_t seed);

/// Percentile 95% CI for the metric itself under paired row resampling: when
/// the tables have equal row counts one index draw is applied to both (so a
/// table paired with itself yields a degenerate [0, 0] interval); otherwise
/// each table is resampled independently.
DeltaEstimate metric_ci(const CategoricalTable& real, const CategoricalTable& syn,
                        FidelityMetric metric, int n_resamples, std::uint64_t seed);

}  // namespace psytab
