#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "psytab/schema.hpp"
#include "psytab/table.hpp"

namespace psytab {

/// Parses CSV text (UTF-8, comma-delimited, header = schema column order).
/// Throws errc::missing_column on header mismatch, errc::missing_cell /
/// errc::out_of_domain_value / errc::malformed_row on bad rows.
CategoricalTable parse_csv(std::string_view text, const DisorderSchema& schema);

/// Loads a table from disk; row order is preserved.
CategoricalTable load_table(const std::filesystem::path& path, const DisorderSchema& schema);

std::string to_csv(const CategoricalTable& table);
void save_table(const CategoricalTable& table, const std::filesystem::path& path);

/// Builds a schema from CSV headers and observed values: items are the
/// header columns after sex/age, the Likert domain is the default 0-4
/// extended by any other observed item values, and sex/age domains are the
/// observed category sets. Useful when evaluating external files that ship
/// without a schema document.
DisorderSchema infer_schema(const std::vector<std::filesystem::path>& csv_paths,
                            const std::string& disorder_name);

}  // namespace psytab
