#include "psytab/csv.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "psytab/errors.hpp"

namespace psytab {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

/// Canonicalizes a cell token: trims whitespace and rewrites integer-valued
/// decimals ("3.0" -> "3") so files written by numeric tooling compare
/// cell-exactly against declared integer domains.
std::string canonical_token(const std::string& raw) {
    std::string t = trim(raw);
    std::size_t dot = t.find('.');
    if (dot == std::string::npos || dot == 0) return t;
    std::size_t start = (t[0] == '+' || t[0] == '-') ? 1 : 0;
    if (dot <= start) return t;
    for (std::size_t i = start; i < dot; ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return t;
    for (std::size_t i = dot + 1; i < t.size(); ++i)
        if (t[i] != '0') return t;
    std::string head = t.substr(0, dot);
    return (t[0] == '+') ? head.substr(1) : head;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::vector<std::string> read_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            lines.push_back(strip_cr(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) lines.push_back(strip_cr(cur));
    // UTF-8 BOM on the first line
    if (!lines.empty() && lines[0].rfind("\xEF\xBB\xBF", 0) == 0) lines[0] = lines[0].substr(3);
    return lines;
}

void check_header(const std::vector<std::string>& fields, const DisorderSchema& schema) {
    const auto expected = schema.columns();
    std::vector<std::string> got;
    got.reserve(fields.size());
    for (const auto& f : fields) got.push_back(trim(f));
    if (got == expected) return;
    for (const auto& col : expected)
        if (std::find(got.begin(), got.end(), col) == got.end())
            throw Error(errc::missing_column, "CSV header is missing column '" + col + "'");
    std::ostringstream msg;
    msg << "CSV header does not match schema column order; expected '";
    for (std::size_t i = 0; i < expected.size(); ++i) msg << (i ? "," : "") << expected[i];
    msg << "'";
    throw Error(errc::missing_column, msg.str());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::unreadable_file, "cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

CategoricalTable parse_csv(std::string_view text, const DisorderSchema& schema) {
    auto lines = read_lines(text);
    if (lines.empty()) throw Error(errc::missing_column, "CSV has no header line");
    check_header(split_fields(lines[0]), schema);

    CategoricalTable table(schema);
    const std::size_t p = schema.column_count();
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;  // tolerate blank trailing lines
        auto fields = split_fields(lines[li]);
        if (fields.size() != p)
            throw Error(errc::malformed_row, "row " + std::to_string(li - 1) + " has " +
                                                 std::to_string(fields.size()) +
                                                 " cells, expected " + std::to_string(p));
        std::vector<std::string> tokens(p);
        for (std::size_t j = 0; j < p; ++j) tokens[j] = canonical_token(fields[j]);
        table.append_row(tokens);
    }
    return table;
}

CategoricalTable load_table(const std::filesystem::path& path, const DisorderSchema& schema) {
    return parse_csv(read_file(path), schema);
}

std::string to_csv(const CategoricalTable& table) {
    std::ostringstream out;
    const auto cols = table.schema().columns();
    for (std::size_t j = 0; j < cols.size(); ++j) out << (j ? "," : "") << cols[j];
    out << '\n';
    for (std::size_t i = 0; i < table.row_count(); ++i) {
        for (std::size_t j = 0; j < table.column_count(); ++j)
            out << (j ? "," : "") << table.value(i, j);
        out << '\n';
    }
    return out.str();
}

void save_table(const CategoricalTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::unreadable_file, "cannot write file: " + path.string());
    out << to_csv(table);
}

DisorderSchema infer_schema(const std::vector<std::filesystem::path>& csv_paths,
                            const std::string& disorder_name) {
    if (csv_paths.empty()) throw Error(errc::invalid_argument, "infer_schema: no files given");

    std::vector<std::string> header;
    std::vector<std::set<std::string>> observed;
    for (const auto& path : csv_paths) {
        auto lines = read_lines(read_file(path));
        if (lines.empty()) throw Error(errc::missing_column, "CSV has no header: " + path.string());
        auto fields = split_fields(lines[0]);
        std::vector<std::string> cols;
        for (const auto& f : fields) cols.push_back(trim(f));
        if (header.empty()) {
            header = cols;
            observed.resize(header.size());
        } else if (cols != header) {
            throw Error(errc::schema_mismatch, "CSV headers differ across files");
        }
        for (std::size_t li = 1; li < lines.size(); ++li) {
            if (lines[li].empty()) continue;
            auto row = split_fields(lines[li]);
            if (row.size() != header.size())
                throw Error(errc::malformed_row,
                            "row width mismatch in " + path.string() + " at line " + std::to_string(li + 1));
            for (std::size_t j = 0; j < row.size(); ++j) observed[j].insert(canonical_token(row[j]));
        }
    }

    std::size_t n_demo = 0;
    while (n_demo < header.size() && (header[n_demo] == "sex" || header[n_demo] == "age")) ++n_demo;
    if (header.size() - n_demo == 0)
        throw Error(errc::invalid_schema, "CSV header has no item columns");

    auto sorted_tokens = [](const std::set<std::string>& values) {
        std::vector<std::string> out(values.begin(), values.end());
        bool all_numeric = !out.empty();
        for (const auto& v : out) {
            if (v.empty() || v.find_first_not_of("0123456789-+") != std::string::npos) {
                all_numeric = false;
                break;
            }
        }
        if (all_numeric)
            std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
                return std::stoll(a) < std::stoll(b);
            });
        return out;
    };

    DisorderSchema s;
    s.disorder_name = disorder_name;
    s.demographic_columns.assign(header.begin(), header.begin() + n_demo);
    s.item_ids.assign(header.begin() + n_demo, header.end());

    // Likert domain: default 0-4 plus anything else the item columns contain.
    std::set<std::string> likert{"0", "1", "2", "3", "4"};
    for (std::size_t j = n_demo; j < header.size(); ++j)
        likert.insert(observed[j].begin(), observed[j].end());
    s.likert_domain = sorted_tokens(likert);

    for (std::size_t j = 0; j < n_demo; ++j) {
        if (header[j] == "sex") {
            std::set<std::string> sexes = observed[j];
            sexes.insert("female");
            sexes.insert("male");
            s.sex_domain = sorted_tokens(sexes);
        } else {
            s.age_domain = sorted_tokens(observed[j]);
        }
    }
    if (s.age_domain.empty()) s.age_domain = DisorderSchema::default_age_domain();
    s.validate();
    return s;
}

}  // namespace psytab
