#pragma once

#include <stdexcept>
#include <string>

namespace psytab {

enum class errc {
    // configuration / input description problems
    invalid_config,
    invalid_schema,
    invalid_manifest,
    unreadable_file,
    empty_corpus,
    index_not_built,
    invalid_argument,

    // data problems
    missing_column,
    missing_cell,
    malformed_row,
    out_of_domain_value,
    unknown_column,
    empty_table,
    empty_input,
    empty_domain,
    schema_mismatch,
    domain_mismatch,
    length_mismatch,
    too_few_columns,
    empty_synthetic,
    empty_real,
    insufficient_resamples,
    empty_candidate_list,
    missing_nokb_variant,
    item_out_of_order,

    // backend problems
    backend_unavailable,
    no_score_line,
    out_of_domain_score,
    patient_generation_failed,
};

enum class error_category { config, data, backend };

/// All library failures surface as this exception; `code()` identifies the
/// condition and `category()` maps onto the CLI exit-code taxonomy.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }
    error_category category() const noexcept;
    const char* code_name() const noexcept;

private:
    errc code_;
};

const char* errc_name(errc code) noexcept;
error_category errc_category(errc code) noexcept;

}  // namespace psytab
