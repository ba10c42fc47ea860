#include "psytab/schema.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "psytab/errors.hpp"

namespace psytab {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw Error(errc::invalid_schema, "invalid schema: " + what);
}

bool has_duplicates(const std::vector<std::string>& values) {
    std::unordered_set<std::string_view> seen;
    for (const auto& v : values)
        if (!seen.insert(v).second) return true;
    return false;
}

std::vector<std::string> tokens_from_json(const nlohmann::json& arr, const char* field) {
    if (!arr.is_array())
        throw Error(errc::invalid_schema, std::string("schema field '") + field + "' must be an array");
    std::vector<std::string> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (v.is_string())
            out.push_back(v.get<std::string>());
        else if (v.is_number_integer())
            out.push_back(std::to_string(v.get<long long>()));
        else
            throw Error(errc::invalid_schema,
                        std::string("schema field '") + field + "' holds a non-categorical value");
    }
    return out;
}

}  // namespace

std::vector<std::string> DisorderSchema::default_age_domain() {
    std::vector<std::string> ages;
    for (int a = 18; a <= 80; ++a) ages.push_back(std::to_string(a));
    return ages;
}

DisorderSchema DisorderSchema::make(std::string name, std::vector<std::string> items) {
    DisorderSchema s;
    s.disorder_name = std::move(name);
    s.item_ids = std::move(items);
    s.age_domain = default_age_domain();
    s.validate();
    return s;
}

void DisorderSchema::validate() const {
    require(!disorder_name.empty(), "disorder_name is empty");
    require(!item_ids.empty(), "item_ids is empty");
    require(!has_duplicates(item_ids), "item_ids contains duplicates");
    require(likert_domain.size() >= 2, "likert_domain needs at least 2 categories");
    require(!has_duplicates(likert_domain), "likert_domain contains duplicates");
    require(!has_duplicates(demographic_columns), "demographic_columns contains duplicates");
    for (const auto& d : demographic_columns) {
        require(std::find(item_ids.begin(), item_ids.end(), d) == item_ids.end(),
                "column '" + d + "' is both demographic and item");
        require(d == "sex" || d == "age", "unsupported demographic column '" + d + "'");
    }
    if (has_column("sex")) {
        require(sex_domain.size() >= 1 && !has_duplicates(sex_domain), "bad sex_domain");
    }
    if (has_column("age")) {
        require(age_domain.size() >= 1 && !has_duplicates(age_domain), "bad age_domain");
    }
}

std::vector<std::string> DisorderSchema::columns() const {
    std::vector<std::string> cols = demographic_columns;
    cols.insert(cols.end(), item_ids.begin(), item_ids.end());
    return cols;
}

std::string DisorderSchema::column_name(std::size_t index) const {
    if (index < demographic_columns.size()) return demographic_columns[index];
    return item_ids.at(index - demographic_columns.size());
}

bool DisorderSchema::has_column(std::string_view name) const {
    for (const auto& c : demographic_columns)
        if (c == name) return true;
    for (const auto& c : item_ids)
        if (c == name) return true;
    return false;
}

std::size_t DisorderSchema::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < demographic_columns.size(); ++i)
        if (demographic_columns[i] == name) return i;
    for (std::size_t i = 0; i < item_ids.size(); ++i)
        if (item_ids[i] == name) return demographic_columns.size() + i;
    throw Error(errc::unknown_column, "unknown column '" + std::string(name) + "'");
}

const std::vector<std::string>& DisorderSchema::domain_of_index(std::size_t index) const {
    if (index < demographic_columns.size()) {
        const auto& name = demographic_columns[index];
        if (name == "sex") return sex_domain;
        return age_domain;
    }
    if (index >= column_count())
        throw Error(errc::unknown_column, "column index out of range");
    return likert_domain;
}

const std::vector<std::string>& DisorderSchema::domain_of(std::string_view column) const {
    return domain_of_index(column_index(column));
}

bool DisorderSchema::same_layout(const DisorderSchema& other) const {
    if (demographic_columns != other.demographic_columns) return false;
    if (item_ids != other.item_ids) return false;
    const std::size_t p = column_count();
    for (std::size_t j = 0; j < p; ++j)
        if (domain_of_index(j) != other.domain_of_index(j)) return false;
    return true;
}

DisorderSchema DisorderSchema::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(errc::invalid_schema, "schema document must be a JSON object");
    DisorderSchema s;
    if (!doc.contains("disorder_name") || !doc["disorder_name"].is_string())
        throw Error(errc::invalid_schema, "schema field 'disorder_name' missing or not a string");
    s.disorder_name = doc["disorder_name"].get<std::string>();
    if (!doc.contains("item_ids"))
        throw Error(errc::invalid_schema, "schema field 'item_ids' missing");
    s.item_ids = tokens_from_json(doc["item_ids"], "item_ids");
    if (doc.contains("likert_domain")) s.likert_domain = tokens_from_json(doc["likert_domain"], "likert_domain");
    if (doc.contains("sex_domain")) s.sex_domain = tokens_from_json(doc["sex_domain"], "sex_domain");
    if (doc.contains("age_domain"))
        s.age_domain = tokens_from_json(doc["age_domain"], "age_domain");
    else
        s.age_domain = default_age_domain();
    if (doc.contains("demographic_columns"))
        s.demographic_columns = tokens_from_json(doc["demographic_columns"], "demographic_columns");
    s.validate();
    return s;
}

DisorderSchema DisorderSchema::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::unreadable_file, "cannot open schema file: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::invalid_schema, "schema file " + path.string() + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::ordered_json DisorderSchema::to_json() const {
    nlohmann::ordered_json doc;
    doc["disorder_name"] = disorder_name;
    doc["item_ids"] = item_ids;
    doc["likert_domain"] = likert_domain;
    doc["sex_domain"] = sex_domain;
    doc["age_domain"] = age_domain;
    if (demographic_columns != std::vector<std::string>{"sex", "age"})
        doc["demographic_columns"] = demographic_columns;
    return doc;
}

void DisorderSchema::save_json(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error(errc::unreadable_file, "cannot write schema file: " + path.string());
    out << to_json().dump(2) << '\n';
}

}  // namespace psytab
