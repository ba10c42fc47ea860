#include "psytab/bootstrap.hpp"

#include "psytab/errors.hpp"
#include "psytab/fidelity.hpp"
#include "psytab/privacy.hpp"
#include "psytab/rng.hpp"

namespace psytab {

namespace {

constexpr std::uint64_t kRealStream = 0;
constexpr std::uint64_t kSynAStream = 1;
constexpr std::uint64_t kSynBStream = 2;

CategoricalTable resample(const CategoricalTable& t, std::uint64_t seed, std::uint64_t iter,
                          std::uint64_t stream) {
    auto rng = make_rng(seed, iter, stream);
    auto idx = sample_indices_with_replacement(rng, t.row_count(), t.row_count());
    return t.select_rows(idx);
}

void check_resamples(int n_resamples) {
    if (n_resamples < 100)
        throw Error(errc::insufficient_resamples,
                    "n_resamples must be at least 100, got " + std::to_string(n_resamples));
}

}  // namespace

const char* metric_name(FidelityMetric metric) noexcept {
    switch (metric) {
        case FidelityMetric::jsd: return "jsd";
        case FidelityMetric::mae_v: return "mae_v";
        case FidelityMetric::ed2: return "ed2";
    }
    return "?";
}

FidelityMetric metric_from_name(const std::string& name) {
    if (name == "jsd") return FidelityMetric::jsd;
    if (name == "mae_v") return FidelityMetric::mae_v;
    if (name == "ed2") return FidelityMetric::ed2;
    throw Error(errc::invalid_argument, "unknown metric '" + name + "'");
}

double eval_metric(FidelityMetric metric, const CategoricalTable& real,
                   const CategoricalTable& syn) {
    switch (metric) {
        case FidelityMetric::jsd: return mean_jsd(real, syn);
        case FidelityMetric::mae_v: return mae_v(real, syn).first;
        case FidelityMetric::ed2: return energy_distance_sq(real, syn);
    }
    throw Error(errc::invalid_argument, "unknown metric selector");
}

DeltaEstimate bootstrap_delta(const CategoricalTable& real, const CategoricalTable& syn_a,
                              const CategoricalTable& syn_b, FidelityMetric metric,
                              int n_resamples, std::uint64_t seed) {
    if (!real.same_layout(syn_a) || !real.same_layout(syn_b))
        throw Error(errc::schema_mismatch, "bootstrap_delta: tables do not share a schema layout");
    check_resamples(n_resamples);

    DeltaEstimate est;
    est.metric_name = metric_name(metric);
    est.n_resamples = n_resamples;
    est.seed = seed;
    // Positive = improvement of syn_b over syn_a for error-directed metrics.
    est.point = eval_metric(metric, real, syn_a) - eval_metric(metric, real, syn_b);

    std::vector<double> deltas(static_cast<std::size_t>(n_resamples));
    for (int it = 0; it < n_resamples; ++it) {
        const auto iter = static_cast<std::uint64_t>(it);
        const auto r = resample(real, seed, iter, kRealStream);
        const auto a = resample(syn_a, seed, iter, kSynAStream);
        const auto b = resample(syn_b, seed, iter, kSynBStream);
        deltas[static_cast<std::size_t>(it)] =
            eval_metric(metric, r, a) - eval_metric(metric, r, b);
    }
    est.ci_low = quantile(deltas, 0.025);
    est.ci_high = quantile(deltas, 0.975);
    return est;
}

DeltaEstimate metric_ci(const CategoricalTable& real, const CategoricalTable& syn,
                        FidelityMetric metric, int n_resamples, std::uint64_t seed) {
    if (!real.same_layout(syn))
        throw Error(errc::schema_mismatch, "metric_ci: tables do not share a schema layout");
    check_resamples(n_resamples);

    DeltaEstimate est;
    est.metric_name = metric_name(metric);
    est.n_resamples = n_resamples;
    est.seed = seed;
    est.point = eval_metric(metric, real, syn);

    const bool paired = real.row_count() == syn.row_count();
    std::vector<double> values(static_cast<std::size_t>(n_resamples));
    for (int it = 0; it < n_resamples; ++it) {
        const auto iter = static_cast<std::uint64_t>(it);
        if (paired) {
            auto rng = make_rng(seed, iter, kRealStream);
            auto idx = sample_indices_with_replacement(rng, real.row_count(), real.row_count());
            values[static_cast<std::size_t>(it)] =
                eval_metric(metric, real.select_rows(idx), syn.select_rows(idx));
        } else {
            const auto r = resample(real, seed, iter, kRealStream);
            const auto s = resample(syn, seed, iter, kSynAStream);
            values[static_cast<std::size_t>(it)] = eval_metric(metric, r, s);
        }
    }
    est.ci_low = quantile(values, 0.025);
    est.ci_high = quantile(values, 0.975);
    return est;
}

nlohmann::ordered_json DeltaEstimate::to_json() const {
    nlohmann::ordered_json doc;
    doc["metric_name"] = metric_name;
    doc["point"] = point;
    doc["ci_low"] = ci_low;
    doc["ci_high"] = ci_high;
    doc["n_resamples"] = n_resamples;
    doc["seed"] = seed;
    return doc;
}

}  // namespace psytab
