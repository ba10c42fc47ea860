#pragma once

#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "doctest.h"
#include "psytab/errors.hpp"
#include "psytab/schema.hpp"
#include "psytab/table.hpp"

namespace testutil {

inline void expect_error(psytab::errc code, const std::function<void()>& fn) {
    try {
        fn();
        FAIL_CHECK("expected error " << psytab::errc_name(code));
    } catch (const psytab::Error& e) {
        CHECK(e.code() == code);
    }
}

inline psytab::DisorderSchema toy_schema(std::size_t n_items = 3) {
    std::vector<std::string> items;
    for (std::size_t i = 0; i < n_items; ++i) items.push_back("it" + std::to_string(i + 1));
    psytab::DisorderSchema schema = psytab::DisorderSchema::make("toy", items);
    schema.age_domain = {"20", "30", "40"};
    return schema;
}

inline psytab::CategoricalTable make_table(
    const psytab::DisorderSchema& schema,
    std::initializer_list<std::vector<std::string>> rows) {
    psytab::CategoricalTable table(schema);
    for (const std::vector<std::string>& row : rows) table.append_row(row);
    return table;
}

inline std::string data_dir() { return PSYTAB_TEST_DATA_DIR; }

}  // namespace testutil
