#include "psytab/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "psytab/errors.hpp"

namespace psytab {

namespace {

void check_same_layout(const CategoricalTable& a, const CategoricalTable& b) {
    if (!a.same_layout(b))
        throw Error(errc::schema_mismatch, "tables do not share a schema layout");
}

double kl_base2(std::span<const double> p, std::span<const double> m) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) sum += p[i] * std::log2(p[i] / m[i]);
    }
    return sum;
}

/// Cramér's V on integer-coded columns. `a` and `b` need not use dense codes;
/// the contingency table is built over observed categories only.
double cramers_v_codes(std::span<const std::uint16_t> a, std::span<const std::uint16_t> b) {
    if (a.size() != b.size())
        throw Error(errc::length_mismatch, "cramers_v: column lengths differ");
    if (a.empty()) throw Error(errc::empty_input, "cramers_v: empty columns");

    const std::size_t n = a.size();

    // Dense re-coding of observed categories.
    std::unordered_map<std::uint16_t, std::size_t> amap, bmap;
    for (auto v : a) amap.emplace(v, amap.size());
    for (auto v : b) bmap.emplace(v, bmap.size());
    const std::size_t r = amap.size(), c = bmap.size();
    if (r < 2 || c < 2) return 0.0;  // constant column

    std::vector<double> table(r * c, 0.0), row(r, 0.0), col(c, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ai = amap[a[i]], bi = bmap[b[i]];
        table[ai * c + bi] += 1.0;
        row[ai] += 1.0;
        col[bi] += 1.0;
    }

    double chi2 = 0.0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            const double expected = row[i] * col[j] / static_cast<double>(n);
            if (expected > 0.0) {
                const double diff = table[i * c + j] - expected;
                chi2 += diff * diff / expected;
            }
        }

    const double nd = static_cast<double>(n);
    const double rd = static_cast<double>(r), cd = static_cast<double>(c);
    const double phi2 = chi2 / nd;
    const double phi2_corr = std::max(0.0, phi2 - (rd - 1.0) * (cd - 1.0) / (nd - 1.0));
    const double r_corr = rd - (rd - 1.0) * (rd - 1.0) / (nd - 1.0);
    const double c_corr = cd - (cd - 1.0) * (cd - 1.0) / (nd - 1.0);
    const double denom = std::min(r_corr, c_corr) - 1.0;
    if (denom <= 0.0) return 0.0;
    return std::sqrt(phi2_corr / denom);
}

std::vector<std::uint16_t> column_codes(const CategoricalTable& t, std::size_t j) {
    std::vector<std::uint16_t> out(t.row_count());
    for (std::size_t i = 0; i < t.row_count(); ++i) out[i] = t.code(i, j);
    return out;
}

}  // namespace

double jsd(const EmpiricalPMF& p, const EmpiricalPMF& q) {
    if (!p.same_domain(q))
        throw Error(errc::domain_mismatch, "jsd: PMFs are over different domains");
    std::vector<double> m(p.probabilities.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        m[i] = 0.5 * (p.probabilities[i] + q.probabilities[i]);
    return 0.5 * kl_base2(p.probabilities, m) + 0.5 * kl_base2(q.probabilities, m);
}

double mean_jsd(const CategoricalTable& real, const CategoricalTable& syn) {
    check_same_layout(real, syn);
    if (real.empty() || syn.empty()) throw Error(errc::empty_table, "mean_jsd: empty table");
    const auto cols = real.schema().columns();
    double sum = 0.0;
    for (const auto& col : cols) sum += jsd(empirical_pmf(real, col), empirical_pmf(syn, col));
    return sum / static_cast<double>(cols.size());
}

double cramers_v_bias_corrected(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.size() != b.size())
        throw Error(errc::length_mismatch, "cramers_v: column lengths differ");
    if (a.empty()) throw Error(errc::empty_input, "cramers_v: empty columns");
    // Map tokens to codes by first appearance; the statistic only depends on
    // the partition, not on labels.
    std::unordered_map<std::string_view, std::uint16_t> amap, bmap;
    std::vector<std::uint16_t> ac(a.size()), bc(b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        ac[i] = amap.emplace(a[i], static_cast<std::uint16_t>(amap.size())).first->second;
    for (std::size_t i = 0; i < b.size(); ++i)
        bc[i] = bmap.emplace(b[i], static_cast<std::uint16_t>(bmap.size())).first->second;
    return cramers_v_codes(ac, bc);
}

std::pair<double, double> mae_v(const CategoricalTable& real, const CategoricalTable& syn) {
    check_same_layout(real, syn);
    const std::size_t p = real.column_count();
    if (p < 2) throw Error(errc::too_few_columns, "mae_v needs at least 2 columns");
    if (real.empty() || syn.empty()) throw Error(errc::empty_table, "mae_v: empty table");

    std::vector<std::vector<std::uint16_t>> rc(p), sc(p);
    for (std::size_t j = 0; j < p; ++j) {
        rc[j] = column_codes(real, j);
        sc[j] = column_codes(syn, j);
    }

    double sum_abs = 0.0;
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = j + 1; k < p; ++k)
            sum_abs += std::abs(cramers_v_codes(rc[j], rc[k]) - cramers_v_codes(sc[j], sc[k]));
    const double n_pairs = static_cast<double>(p) * static_cast<double>(p - 1) / 2.0;
    const double error = sum_abs / n_pairs;
    return {error, 1.0 - error};
}

double energy_distance_sq(const CategoricalTable& real, const CategoricalTable& syn) {
    check_same_layout(real, syn);
    if (real.empty() || syn.empty())
        throw Error(errc::empty_table, "energy_distance_sq: empty table");

    // Hamming distance is additive over columns, so the V-statistic double
    // sums collapse to per-column category frequencies:
    //   ED^2 = sum_j sum_c (p_jc - q_jc)^2.
    const auto& schema = real.schema();
    const std::size_t p = real.column_count();
    double total = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        const std::size_t domain_size = schema.domain_of_index(j).size();
        std::vector<double> pr(domain_size, 0.0), qr(domain_size, 0.0);
        for (std::size_t i = 0; i < real.row_count(); ++i) pr[real.code(i, j)] += 1.0;
        for (std::size_t i = 0; i < syn.row_count(); ++i) qr[syn.code(i, j)] += 1.0;
        for (auto& v : pr) v /= static_cast<double>(real.row_count());
        for (auto& v : qr) v /= static_cast<double>(syn.row_count());
        for (std::size_t cidx = 0; cidx < domain_size; ++cidx) {
            const double d = pr[cidx] - qr[cidx];
            total += d * d;
        }
    }
    if (total < 0.0 && total > -1e-9) total = 0.0;
    return total;
}

FidelityReport fidelity_report(const CategoricalTable& real, const CategoricalTable& syn) {
    check_same_layout(real, syn);
    if (real.empty() || syn.empty())
        throw Error(errc::empty_table, "fidelity_report: empty table");

    FidelityReport report;
    const auto cols = real.schema().columns();
    double jsd_sum = 0.0;
    for (const auto& col : cols) {
        const double v = jsd(empirical_pmf(real, col), empirical_pmf(syn, col));
        report.per_column_jsd.emplace_back(col, v);
        jsd_sum += v;
    }
    report.mean_jsd = jsd_sum / static_cast<double>(cols.size());

    const std::size_t p = cols.size();
    if (p >= 2) {
        std::vector<std::vector<std::uint16_t>> rc(p), sc(p);
        for (std::size_t j = 0; j < p; ++j) {
            rc[j] = column_codes(real, j);
            sc[j] = column_codes(syn, j);
        }
        double sum_abs = 0.0;
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = j + 1; k < p; ++k) {
                PairAssociation pair;
                pair.column_a = cols[j];
                pair.column_b = cols[k];
                pair.v_real = cramers_v_codes(rc[j], rc[k]);
                pair.v_syn = cramers_v_codes(sc[j], sc[k]);
                sum_abs += std::abs(pair.v_real - pair.v_syn);
                report.per_pair_v.push_back(std::move(pair));
            }
        report.mae_v_error = sum_abs / (static_cast<double>(p) * static_cast<double>(p - 1) / 2.0);
        report.mae_v_complement = 1.0 - report.mae_v_error;
    }
    report.energy_distance_sq = energy_distance_sq(real, syn);
    return report;
}

nlohmann::ordered_json FidelityReport::to_json() const {
    nlohmann::ordered_json doc;
    doc["mean_jsd"] = mean_jsd;
    nlohmann::ordered_json cols;
    for (const auto& [name, v] : per_column_jsd) cols[name] = v;
    doc["per_column_jsd"] = cols;
    doc["mae_v_error"] = mae_v_error;
    doc["mae_v_complement"] = mae_v_complement;
    doc["energy_distance_sq"] = energy_distance_sq;
    nlohmann::ordered_json pairs;
    for (const auto& pair : per_pair_v) {
        nlohmann::ordered_json entry;
        entry["real"] = pair.v_real;
        entry["syn"] = pair.v_syn;
        pairs[pair.column_a + "|" + pair.column_b] = entry;
    }
    doc["per_pair_v"] = pairs;
    return doc;
}

}  // namespace psytab
