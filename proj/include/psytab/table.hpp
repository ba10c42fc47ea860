#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "psytab/schema.hpp"

namespace psytab {

/// Rows of categorical values conforming to a schema. Cells are stored as
/// per-column domain codes; tokens are recovered through the schema. Immutable
/// after construction apart from append_row, so shared use across threads is
/// safe once populated.
class CategoricalTable {
public:
    explicit CategoricalTable(DisorderSchema schema);

    std::size_t row_count() const { return cells_.size() / std::max<std::size_t>(p_, 1); }
    std::size_t column_count() const { return p_; }
    bool empty() const { return cells_.empty(); }

    const DisorderSchema& schema() const { return codec_->schema; }
    std::shared_ptr<const DisorderSchema> schema_ptr() const;

    /// Validates every token against its column domain.
    /// Throws errc::malformed_row / errc::missing_cell / errc::out_of_domain_value.
    void append_row(std::span<const std::string> tokens);
    void append_row_codes(std::span<const std::uint16_t> codes);

    std::uint16_t code(std::size_t row, std::size_t col) const { return cells_[row * p_ + col]; }
    const std::string& value(std::size_t row, std::size_t col) const;
    std::span<const std::uint16_t> row_codes(std::size_t row) const {
        return {cells_.data() + row * p_, p_};
    }

    std::vector<std::string> row_tokens(std::size_t row) const;
    std::vector<std::string> column_values(std::string_view column) const;

    /// New table holding the given rows (duplicates allowed), in index order.
    CategoricalTable select_rows(std::span<const std::size_t> indices) const;

    bool same_layout(const CategoricalTable& other) const {
        return schema().same_layout(other.schema());
    }

    /// Code for a token in a column, or -1 when the token is not in the domain.
    int token_code(std::size_t col, std::string_view token) const;

private:
    struct Codec {
        DisorderSchema schema;
        std::vector<std::unordered_map<std::string, std::uint16_t>> to_code;
        explicit Codec(DisorderSchema s);
    };

    explicit CategoricalTable(std::shared_ptr<const Codec> codec) : codec_(std::move(codec)) {
        p_ = codec_->schema.column_count();
    }

    std::shared_ptr<const Codec> codec_;
    std::size_t p_ = 0;
    std::vector<std::uint16_t> cells_;  // row-major
};

/// Per-column empirical distribution; every domain category appears, aligned
/// with the schema's domain order (zero-count categories have probability 0).
struct EmpiricalPMF {
    std::string column;
    std::vector<std::string> domain;
    std::vector<double> probabilities;

    double prob_of(std::string_view token) const;
    bool same_domain(const EmpiricalPMF& other) const { return domain == other.domain; }
};

/// Relative category frequencies of one column. Throws errc::unknown_column,
/// errc::empty_table.
EmpiricalPMF empirical_pmf(const CategoricalTable& table, std::string_view column);

}  // namespace psytab
