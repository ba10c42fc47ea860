#include "psytab/errors.hpp"

namespace psytab {

const char* errc_name(errc code) noexcept {
    switch (code) {
        case errc::invalid_config: return "InvalidConfig";
        case errc::invalid_schema: return "InvalidSchema";
        case errc::invalid_manifest: return "InvalidManifest";
        case errc::unreadable_file: return "UnreadableFile";
        case errc::empty_corpus: return "EmptyCorpus";
        case errc::index_not_built: return "IndexNotBuilt";
        case errc::invalid_argument: return "InvalidArgument";
        case errc::missing_column: return "MissingColumn";
        case errc::missing_cell: return "MissingCell";
        case errc::malformed_row: return "MalformedRow";
        case errc::out_of_domain_value: return "OutOfDomainValue";
        case errc::unknown_column: return "UnknownColumn";
        case errc::empty_table: return "EmptyTable";
        case errc::empty_input: return "EmptyInput";
        case errc::empty_domain: return "EmptyDomain";
        case errc::schema_mismatch: return "SchemaMismatch";
        case errc::domain_mismatch: return "DomainMismatch";
        case errc::length_mismatch: return "LengthMismatch";
        case errc::too_few_columns: return "TooFewColumns";
        case errc::empty_synthetic: return "EmptySynthetic";
        case errc::empty_real: return "EmptyReal";
        case errc::insufficient_resamples: return "InsufficientResamples";
        case errc::empty_candidate_list: return "EmptyCandidateList";
        case errc::missing_nokb_variant: return "MissingNoKBVariant";
        case errc::item_out_of_order: return "ItemOutOfOrder";
        case errc::backend_unavailable: return "BackendUnavailable";
        case errc::no_score_line: return "NoScoreLine";
        case errc::out_of_domain_score: return "OutOfDomainScore";
        case errc::patient_generation_failed: return "PatientGenerationFailed";
    }
    return "UnknownError";
}

error_category errc_category(errc code) noexcept {
    switch (code) {
        case errc::invalid_config:
        case errc::invalid_schema:
        case errc::invalid_manifest:
        case errc::unreadable_file:
        case errc::empty_corpus:
        case errc::index_not_built:
        case errc::invalid_argument:
            return error_category::config;
        case errc::backend_unavailable:
        case errc::no_score_line:
        case errc::out_of_domain_score:
        case errc::patient_generation_failed:
            return error_category::backend;
        default:
            return error_category::data;
    }
}

error_category Error::category() const noexcept { return errc_category(code_); }

const char* Error::code_name() const noexcept { return errc_name(code_); }

}  // namespace psytab
