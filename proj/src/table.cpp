#include "psytab/table.hpp"

#include <limits>

#include "psytab/errors.hpp"

namespace psytab {

CategoricalTable::Codec::Codec(DisorderSchema s) : schema(std::move(s)) {
    schema.validate();
    const std::size_t p = schema.column_count();
    to_code.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const auto& domain = schema.domain_of_index(j);
        if (domain.size() > std::numeric_limits<std::uint16_t>::max())
            throw Error(errc::invalid_schema, "domain of column '" + schema.column_name(j) +
                                                  "' exceeds 65535 categories");
        for (std::size_t c = 0; c < domain.size(); ++c)
            to_code[j].emplace(domain[c], static_cast<std::uint16_t>(c));
    }
}

CategoricalTable::CategoricalTable(DisorderSchema schema)
    : codec_(std::make_shared<const Codec>(std::move(schema))) {
    p_ = codec_->schema.column_count();
}

std::shared_ptr<const DisorderSchema> CategoricalTable::schema_ptr() const {
    return {codec_, &codec_->schema};
}

int CategoricalTable::token_code(std::size_t col, std::string_view token) const {
    const auto& map = codec_->to_code[col];
    auto it = map.find(std::string(token));
    return it == map.end() ? -1 : static_cast<int>(it->second);
}

void CategoricalTable::append_row(std::span<const std::string> tokens) {
    if (tokens.size() != p_)
        throw Error(errc::malformed_row, "row has " + std::to_string(tokens.size()) +
                                             " cells, expected " + std::to_string(p_));
    const std::size_t row = row_count();
    std::vector<std::uint16_t> codes(p_);
    for (std::size_t j = 0; j < p_; ++j) {
        if (tokens[j].empty())
            throw Error(errc::missing_cell, "missing cell at row " + std::to_string(row) +
                                                ", column '" + codec_->schema.column_name(j) + "'");
        int c = token_code(j, tokens[j]);
        if (c < 0)
            throw Error(errc::out_of_domain_value,
                        "value '" + tokens[j] + "' at row " + std::to_string(row) + ", column '" +
                            codec_->schema.column_name(j) + "' is not in the column domain");
        codes[j] = static_cast<std::uint16_t>(c);
    }
    cells_.insert(cells_.end(), codes.begin(), codes.end());
}

void CategoricalTable::append_row_codes(std::span<const std::uint16_t> codes) {
    if (codes.size() != p_)
        throw Error(errc::malformed_row, "row code width mismatch");
    for (std::size_t j = 0; j < p_; ++j)
        if (codes[j] >= codec_->schema.domain_of_index(j).size())
            throw Error(errc::out_of_domain_value, "code out of domain range");
    cells_.insert(cells_.end(), codes.begin(), codes.end());
}

const std::string& CategoricalTable::value(std::size_t row, std::size_t col) const {
    return codec_->schema.domain_of_index(col)[code(row, col)];
}

std::vector<std::string> CategoricalTable::row_tokens(std::size_t row) const {
    std::vector<std::string> out;
    out.reserve(p_);
    for (std::size_t j = 0; j < p_; ++j) out.push_back(value(row, j));
    return out;
}

std::vector<std::string> CategoricalTable::column_values(std::string_view column) const {
    const std::size_t j = codec_->schema.column_index(column);
    std::vector<std::string> out;
    out.reserve(row_count());
    for (std::size_t i = 0; i < row_count(); ++i) out.push_back(value(i, j));
    return out;
}

CategoricalTable CategoricalTable::select_rows(std::span<const std::size_t> indices) const {
    CategoricalTable out(codec_);
    out.cells_.reserve(indices.size() * p_);
    for (std::size_t i : indices) {
        auto row = row_codes(i);
        out.cells_.insert(out.cells_.end(), row.begin(), row.end());
    }
    return out;
}

double EmpiricalPMF::prob_of(std::string_view token) const {
    for (std::size_t c = 0; c < domain.size(); ++c)
        if (domain[c] == token) return probabilities[c];
    throw Error(errc::domain_mismatch, "category '" + std::string(token) + "' not in PMF domain");
}

EmpiricalPMF empirical_pmf(const CategoricalTable& table, std::string_view column) {
    if (table.empty()) throw Error(errc::empty_table, "empirical_pmf: table is empty");
    const std::size_t j = table.schema().column_index(column);
    const auto& domain = table.schema().domain_of_index(j);

    std::vector<std::size_t> counts(domain.size(), 0);
    const std::size_t n = table.row_count();
    for (std::size_t i = 0; i < n; ++i) counts[table.code(i, j)]++;

    EmpiricalPMF pmf;
    pmf.column = std::string(column);
    pmf.domain = domain;
    pmf.probabilities.resize(domain.size());
    for (std::size_t c = 0; c < domain.size(); ++c)
        pmf.probabilities[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
    return pmf;
}

}  // namespace psytab
