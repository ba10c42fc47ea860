#include "psytab/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>
#include <unordered_set>

#include "psytab/errors.hpp"

namespace psytab {

namespace {

void check_same_layout(const CategoricalTable& a, const CategoricalTable& b) {
    if (!a.same_layout(b))
        throw Error(errc::schema_mismatch, "tables do not share a schema layout");
}

std::string pack_codes(std::span<const std::uint16_t> codes) {
    std::string key(codes.size() * sizeof(std::uint16_t), '\0');
    std::memcpy(key.data(), codes.data(), key.size());
    return key;
}

std::string pack_selected(const CategoricalTable& t, std::size_t row,
                          std::span<const std::size_t> cols) {
    std::string key(cols.size() * sizeof(std::uint16_t), '\0');
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const std::uint16_t c = t.code(row, cols[j]);
        std::memcpy(key.data() + j * sizeof(std::uint16_t), &c, sizeof(c));
    }
    return key;
}

}  // namespace

double exact_overlap(const CategoricalTable& syn, const CategoricalTable& real) {
    check_same_layout(syn, real);
    if (syn.empty()) throw Error(errc::empty_synthetic, "exact_overlap: synthetic table is empty");

    std::unordered_set<std::string> real_rows;
    real_rows.reserve(real.row_count() * 2);
    for (std::size_t i = 0; i < real.row_count(); ++i)
        real_rows.insert(pack_codes(real.row_codes(i)));

    std::size_t hits = 0;
    for (std::size_t i = 0; i < syn.row_count(); ++i)
        if (real_rows.count(pack_codes(syn.row_codes(i)))) ++hits;
    return static_cast<double>(hits) / static_cast<double>(syn.row_count());
}

std::vector<NnDistance> nn_distances(const CategoricalTable& syn, const CategoricalTable& real) {
    check_same_layout(syn, real);
    if (real.empty()) throw Error(errc::empty_real, "nn_distances: real table is empty");

    const std::size_t p = syn.column_count();
    std::vector<NnDistance> out;
    out.reserve(syn.row_count());
    for (std::size_t i = 0; i < syn.row_count(); ++i) {
        const auto srow = syn.row_codes(i);
        int best = static_cast<int>(p) + 1;
        for (std::size_t r = 0; r < real.row_count() && best > 0; ++r) {
            const auto rrow = real.row_codes(r);
            int d = 0;
            for (std::size_t j = 0; j < p && d < best; ++j) d += (srow[j] != rrow[j]);
            best = std::min(best, d);
        }
        out.push_back({static_cast<double>(best) / static_cast<double>(p), best});
    }
    return out;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw Error(errc::empty_input, "quantile: empty input");
    if (!(q >= 0.0 && q <= 1.0))
        throw Error(errc::invalid_argument, "quantile: q must lie in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double near_match_share(const CategoricalTable& syn, const CategoricalTable& real, int threshold) {
    if (threshold < 0) throw Error(errc::invalid_argument, "near_match_share: threshold < 0");
    const auto nn = nn_distances(syn, real);
    std::size_t hits = 0;
    for (const auto& d : nn)
        if (d.hamming <= threshold) ++hits;
    return static_cast<double>(hits) / static_cast<double>(nn.size());
}

KMapResult k_map_risk(const CategoricalTable& syn, const CategoricalTable& real,
                      std::span<const std::string> qi_columns) {
    check_same_layout(syn, real);
    if (syn.empty()) throw Error(errc::empty_synthetic, "k_map_risk: synthetic table is empty");

    std::vector<std::size_t> cols;
    cols.reserve(qi_columns.size());
    for (const auto& name : qi_columns) cols.push_back(syn.schema().column_index(name));

    std::unordered_map<std::string, std::size_t> class_size;
    for (std::size_t i = 0; i < real.row_count(); ++i)
        class_size[pack_selected(real, i, cols)]++;

    KMapResult result;
    result.per_record.reserve(syn.row_count());
    double sum = 0.0;
    for (std::size_t i = 0; i < syn.row_count(); ++i) {
        auto it = class_size.find(pack_selected(syn, i, cols));
        const double risk =
            (it == class_size.end()) ? 0.0 : 1.0 / static_cast<double>(it->second);
        result.per_record.push_back(risk);
        sum += risk;
    }
    result.average = sum / static_cast<double>(syn.row_count());
    return result;
}

PrivacyReport privacy_report(const CategoricalTable& syn, const CategoricalTable& real,
                             std::span<const std::string> qi_columns) {
    PrivacyReport report;
    report.exact_overlap = exact_overlap(syn, real);
    report.per_record_nn = nn_distances(syn, real);

    std::vector<double> raw;
    raw.reserve(report.per_record_nn.size());
    std::size_t near = 0;
    for (const auto& d : report.per_record_nn) {
        raw.push_back(static_cast<double>(d.hamming));
        if (d.hamming <= 1) ++near;
    }
    report.nn_q05_hamming = quantile(raw, 0.05);
    report.nn_q05_normalized = report.nn_q05_hamming / static_cast<double>(syn.column_count());
    report.near_match_share_le1 =
        static_cast<double>(near) / static_cast<double>(report.per_record_nn.size());

    std::vector<std::string> qi(qi_columns.begin(), qi_columns.end());
    if (qi.empty()) {
        for (const auto& col : syn.schema().demographic_columns) qi.push_back(col);
    }
    if (!qi.empty()) {
        report.k_map_risk_avg = k_map_risk(syn, real, qi).average;
    }
    return report;
}

nlohmann::ordered_json PrivacyReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["exact_overlap"] = exact_overlap;
    doc["nn_q05_normalized"] = nn_q05_normalized;
    doc["nn_q05_hamming"] = nn_q05_hamming;
    doc["near_match_share_le1"] = near_match_share_le1;
    doc["k_map_risk_avg"] = k_map_risk_avg;
    return doc;
}

}  // namespace psytab
