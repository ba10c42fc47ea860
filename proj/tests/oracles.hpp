#pragma once

// Reference implementations for cross-checking the optimized metric code.
// Deliberately written the slow, obvious way, against string cell values
// rather than the library's internal codes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "psytab/schema.hpp"
#include "psytab/table.hpp"

namespace oracle {

using psytab::CategoricalTable;
using psytab::DisorderSchema;

inline std::vector<std::string> column_tokens(const CategoricalTable& t, std::size_t col) {
    std::vector<std::string> out;
    out.reserve(t.row_count());
    for (std::size_t r = 0; r < t.row_count(); ++r) out.push_back(t.value(r, col));
    return out;
}

inline std::vector<double> pmf_over(const std::vector<std::string>& values,
                                    const std::vector<std::string>& domain) {
    std::vector<double> probs(domain.size(), 0.0);
    for (const std::string& v : values) {
        auto it = std::find(domain.begin(), domain.end(), v);
        probs[static_cast<std::size_t>(it - domain.begin())] += 1.0;
    }
    for (double& p : probs) p /= static_cast<double>(values.size());
    return probs;
}

inline double jsd(const std::vector<double>& p, const std::vector<double>& q) {
    double kl_p = 0.0;
    double kl_q = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double m = 0.5 * (p[i] + q[i]);
        if (p[i] > 0.0) kl_p += p[i] * std::log2(p[i] / m);
        if (q[i] > 0.0) kl_q += q[i] * std::log2(q[i] / m);
    }
    return 0.5 * kl_p + 0.5 * kl_q;
}

inline double mean_jsd(const CategoricalTable& real, const CategoricalTable& syn) {
    const DisorderSchema& schema = real.schema();
    double total = 0.0;
    for (std::size_t c = 0; c < schema.column_count(); ++c) {
        const std::vector<std::string>& domain = schema.domain_of_index(c);
        total += jsd(pmf_over(column_tokens(real, c), domain),
                     pmf_over(column_tokens(syn, c), domain));
    }
    return total / static_cast<double>(schema.column_count());
}

inline double cramers_v(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::map<std::string, std::size_t> row_of, col_of;
    for (const std::string& v : a)
        if (!row_of.count(v)) row_of.emplace(v, row_of.size());
    for (const std::string& v : b)
        if (!col_of.count(v)) col_of.emplace(v, col_of.size());
    const std::size_t r = row_of.size();
    const std::size_t c = col_of.size();
    if (r < 2 || c < 2) return 0.0;

    const double n = static_cast<double>(a.size());
    std::vector<std::vector<double>> counts(r, std::vector<double>(c, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) counts[row_of[a[i]]][col_of[b[i]]] += 1.0;

    std::vector<double> row_sum(r, 0.0), col_sum(c, 0.0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            row_sum[i] += counts[i][j];
            col_sum[j] += counts[i][j];
        }

    double chi2 = 0.0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            double expected = row_sum[i] * col_sum[j] / n;
            if (expected > 0.0) {
                double diff = counts[i][j] - expected;
                chi2 += diff * diff / expected;
            }
        }

    double phi2 = chi2 / n;
    double rd = static_cast<double>(r);
    double cd = static_cast<double>(c);
    double phi2_corr = std::max(0.0, phi2 - (rd - 1.0) * (cd - 1.0) / (n - 1.0));
    double r_corr = rd - (rd - 1.0) * (rd - 1.0) / (n - 1.0);
    double c_corr = cd - (cd - 1.0) * (cd - 1.0) / (n - 1.0);
    double denom = std::min(r_corr, c_corr) - 1.0;
    if (denom <= 0.0) return 0.0;
    return std::sqrt(phi2_corr / denom);
}

inline double mae_v_error(const CategoricalTable& real, const CategoricalTable& syn) {
    const std::size_t p = real.column_count();
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = j + 1; k < p; ++k) {
            double v_real = cramers_v(column_tokens(real, j), column_tokens(real, k));
            double v_syn = cramers_v(column_tokens(syn, j), column_tokens(syn, k));
            sum += std::abs(v_real - v_syn);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

inline int hamming(const CategoricalTable& a, std::size_t i, const CategoricalTable& b,
                   std::size_t j) {
    int d = 0;
    for (std::size_t c = 0; c < a.column_count(); ++c)
        if (a.value(i, c) != b.value(j, c)) ++d;
    return d;
}

inline double ed2(const CategoricalTable& x, const CategoricalTable& y) {
    const double n = static_cast<double>(x.row_count());
    const double m = static_cast<double>(y.row_count());
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < x.row_count(); ++i)
        for (std::size_t j = 0; j < y.row_count(); ++j) xy += hamming(x, i, y, j);
    for (std::size_t i = 0; i < x.row_count(); ++i)
        for (std::size_t j = 0; j < x.row_count(); ++j) xx += hamming(x, i, x, j);
    for (std::size_t i = 0; i < y.row_count(); ++i)
        for (std::size_t j = 0; j < y.row_count(); ++j) yy += hamming(y, i, y, j);
    return 2.0 * xy / (n * m) - xx / (n * n) - yy / (m * m);
}

inline double exact_overlap(const CategoricalTable& syn, const CategoricalTable& real) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < syn.row_count(); ++i) {
        for (std::size_t j = 0; j < real.row_count(); ++j) {
            if (hamming(syn, i, real, j) == 0) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(syn.row_count());
}

inline std::vector<int> nn_hamming(const CategoricalTable& syn, const CategoricalTable& real) {
    std::vector<int> out;
    out.reserve(syn.row_count());
    for (std::size_t i = 0; i < syn.row_count(); ++i) {
        int best = static_cast<int>(syn.column_count());
        for (std::size_t j = 0; j < real.row_count(); ++j)
            best = std::min(best, hamming(syn, i, real, j));
        out.push_back(best);
    }
    return out;
}

inline double quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    double h = q * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

inline std::pair<double, std::vector<double>> k_map(const CategoricalTable& syn,
                                                    const CategoricalTable& real,
                                                    const std::vector<std::string>& qi_columns) {
    std::vector<std::string> all_columns = syn.schema().columns();
    std::vector<std::size_t> qi;
    for (const std::string& name : qi_columns) {
        auto it = std::find(all_columns.begin(), all_columns.end(), name);
        qi.push_back(static_cast<std::size_t>(it - all_columns.begin()));
    }
    std::vector<double> per_record;
    double total = 0.0;
    for (std::size_t i = 0; i < syn.row_count(); ++i) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < real.row_count(); ++j) {
            bool match = true;
            for (std::size_t c : qi)
                if (syn.value(i, c) != real.value(j, c)) {
                    match = false;
                    break;
                }
            if (match) ++k;
        }
        double risk = k > 0 ? 1.0 / static_cast<double>(k) : 0.0;
        per_record.push_back(risk);
        total += risk;
    }
    return {total / static_cast<double>(syn.row_count()), per_record};
}

// Small random instances for oracle-equivalence sweeps.

inline DisorderSchema random_schema(std::mt19937_64& rng, std::size_t max_items) {
    std::size_t n_items = 1 + rng() % max_items;
    std::vector<std::string> items;
    for (std::size_t i = 0; i < n_items; ++i) items.push_back("it" + std::to_string(i + 1));
    DisorderSchema schema = DisorderSchema::make("toy", items);
    schema.age_domain = {"20", "30", "40"};
    return schema;
}

inline CategoricalTable random_table(std::mt19937_64& rng, const DisorderSchema& schema,
                                     std::size_t rows) {
    CategoricalTable table(schema);
    std::vector<std::string> tokens(schema.column_count());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < schema.column_count(); ++c) {
            const std::vector<std::string>& domain = schema.domain_of_index(c);
            tokens[c] = domain[rng() % domain.size()];
        }
        table.append_row(tokens);
    }
    return table;
}

inline std::vector<double> random_pmf(std::mt19937_64& rng, std::size_t size) {
    std::vector<double> probs(size);
    double total = 0.0;
    for (double& p : probs) {
        p = static_cast<double>(rng() % 1000 + 1);
        total += p;
    }
    for (double& p : probs) p /= total;
    return probs;
}

}  // namespace oracle
