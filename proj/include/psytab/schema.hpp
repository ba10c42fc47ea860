#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace psytab {

/// Column layout for one disorder questionnaire. Columns are the demographic
/// columns followed by the item columns; every column has a finite category
/// domain and all values are nominal-categorical.
struct DisorderSchema {
    std::string disorder_name;
    std::vector<std::string> demographic_columns{"sex", "age"};
    std::vector<std::string> item_ids;
    std::vector<std::string> likert_domain{"0", "1", "2", "3", "4"};
    std::vector<std::string> sex_domain{"female", "male"};
    std::vector<std::string> age_domain;  // default 18..80, see make()

    /// Schema with default domains (Likert 0-4, sex female/male, ages 18-80).
    static DisorderSchema make(std::string name, std::vector<std::string> items);

    static std::vector<std::string> default_age_domain();

    /// Throws errc::invalid_schema when any invariant is violated.
    void validate() const;

    std::vector<std::string> columns() const;
    std::size_t column_count() const { return demographic_columns.size() + item_ids.size(); }
    std::string column_name(std::size_t index) const;
    /// Throws errc::unknown_column.
    std::size_t column_index(std::string_view name) const;
    bool has_column(std::string_view name) const;
    bool is_item_column(std::size_t index) const { return index >= demographic_columns.size(); }

    const std::vector<std::string>& domain_of(std::string_view column) const;
    const std::vector<std::string>& domain_of_index(std::size_t index) const;

    /// True when column names and domains agree (disorder_name is ignored);
    /// this is the compatibility notion behind SchemaMismatch errors.
    bool same_layout(const DisorderSchema& other) const;

    static DisorderSchema from_json(const nlohmann::json& doc);
    static DisorderSchema from_json_file(const std::filesystem::path& path);
    nlohmann::ordered_json to_json() const;
    void save_json(const std::filesystem::path& path) const;
};

}  // namespace psytab
