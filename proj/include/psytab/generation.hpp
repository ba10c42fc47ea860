#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "psytab/backend.hpp"
#include "psytab/knowledge.hpp"
#include "psytab/persona.hpp"
#include "psytab/table.hpp"

namespace psytab {

struct GenerationOptions {
    KbMode mode = KbMode::no_kb;
    int top_k = 4;
    int max_retries = 2;
    int workers = 1;
};

struct ItemLog {
    std::string item_id;
    std::string score;
    int retries = 0;
    std::vector<std::string> snippet_ids;
    std::string answer_text;
};

struct PatientLog {
    std::size_t index = 0;
    Persona persona;
    std::vector<ItemLog> items;
    bool ok = false;
    std::string error;
};

struct GenerationRun {
    CategoricalTable table;
    std::vector<PatientLog> patients;
    std::size_t requested = 0;
    std::size_t generated = 0;

    nlohmann::ordered_json run_log(const GenerationOptions& options,
                                   const std::string& backend_name,
                                   std::uint64_t master_seed) const;
};

/// One conversational loop over the schema items: retrieve (unless NoKB),
/// prompt, parse, remember. Each item gets at most 1 + max_retries backend
/// calls; transient backend and parse failures both consume retries.
/// Throws errc::patient_generation_failed when an item exhausts its retries,
/// errc::index_not_built when retrieval is needed but no index was given.
PatientLog generate_patient(const Persona& persona, const DisorderSchema& schema,
                            const GenerationOptions& options, const LlmBackend& backend,
                            const KnowledgeIndex* index);

/// n_patients conversational loops with per-patient personas seeded from
/// (master_seed, patient index). Failed patients are skipped and logged; the
/// table keeps successful rows in patient-index order. With workers > 1,
/// patients generate concurrently (items within a patient stay sequential).
GenerationRun generate_dataset(std::size_t n_patients, const DisorderSchema& schema,
                               const GenerationOptions& options, const LlmBackend& backend,
                               const KnowledgeIndex* index, std::uint64_t master_seed,
                               const std::optional<PersonaConfig>& persona_config = std::nullopt);

/// Null-model table with |real| rows: sex and age drawn from their empirical
/// PMFs in `real`, every item uniform over the Likert domain.
CategoricalTable random_baseline(const CategoricalTable& real, std::uint64_t seed);

}  // namespace psytab
