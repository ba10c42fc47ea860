#include "psytab/generation.hpp"

#include <atomic>
#include <thread>

#include "psytab/prompting.hpp"
#include "psytab/rng.hpp"

namespace psytab {

namespace {

std::uint64_t derive_patient_seed(std::uint64_t master_seed, std::size_t patient_index) {
    auto rng = make_rng(master_seed, static_cast<std::uint64_t>(patient_index), 0x50455253u);
    return rng();
}

/// Fills log.items in place so a failing patient still keeps its partial
/// transcript. Throws errc::patient_generation_failed on exhausted retries.
void run_patient(PatientLog& log, const DisorderSchema& schema, const GenerationOptions& options,
                 const LlmBackend& backend, const KnowledgeIndex* index) {
    if (options.mode != KbMode::no_kb && (index == nullptr || !index->built()))
        throw Error(errc::index_not_built, "knowledge retrieval requested without a built index");

    ConversationState state;
    state.persona = log.persona;
    state.schema = &schema;

    for (const std::string& item : schema.item_ids) {
        ItemLog il;
        il.item_id = item;

        if (options.mode != KbMode::no_kb) {
            state.knowledge_context =
                index->retrieve(schema.disorder_name + " " + item, options.top_k, options.mode);
            for (const KnowledgeSnippet& snip : state.knowledge_context)
                il.snippet_ids.push_back(snip.id);
        } else {
            state.knowledge_context.clear();
        }

        const std::string prompt = build_prompt(state, item);
        int attempts_left = 1 + std::max(0, options.max_retries);
        for (;;) {
            --attempts_left;
            try {
                std::string reply = backend.complete(prompt);
                il.score = parse_score(reply, schema.likert_domain);
                il.answer_text = std::move(reply);
                break;
            } catch (const Error& e) {
                bool retryable = e.code() == errc::backend_unavailable ||
                                 e.code() == errc::no_score_line ||
                                 e.code() == errc::out_of_domain_score;
                if (!retryable) throw;
                if (attempts_left == 0) {
                    log.items.push_back(std::move(il));
                    throw Error(errc::patient_generation_failed,
                                "item \"" + item + "\": " + e.what());
                }
                ++il.retries;
            }
        }

        state.answered.push_back({item, il.score, il.answer_text});
        log.items.push_back(std::move(il));
    }
    log.ok = true;
}

std::vector<std::string> patient_row(const PatientLog& log, const DisorderSchema& schema) {
    std::vector<std::string> tokens;
    tokens.reserve(schema.column_count());
    for (const std::string& col : schema.demographic_columns)
        tokens.push_back(col == "sex" ? log.persona.sex : log.persona.age);
    for (const ItemLog& il : log.items) tokens.push_back(il.score);
    return tokens;
}

}  // namespace

nlohmann::ordered_json GenerationRun::run_log(const GenerationOptions& options,
                                              const std::string& backend_name,
                                              std::uint64_t master_seed) const {
    nlohmann::ordered_json doc;
    doc["requested"] = requested;
    doc["generated"] = generated;
    doc["kb_mode"] = kb_mode_name(options.mode);
    doc["top_k"] = options.top_k;
    doc["max_retries"] = options.max_retries;
    doc["backend"] = backend_name;
    doc["master_seed"] = master_seed;

    nlohmann::ordered_json patient_array = nlohmann::ordered_json::array();
    for (const PatientLog& log : patients) {
        nlohmann::ordered_json p;
        p["index"] = log.index;
        p["ok"] = log.ok;
        if (!log.ok) p["error"] = log.error;
        p["persona"] = log.persona.to_json();
        nlohmann::ordered_json item_array = nlohmann::ordered_json::array();
        for (const ItemLog& il : log.items) {
            nlohmann::ordered_json j;
            j["item_id"] = il.item_id;
            j["score"] = il.score;
            j["retries"] = il.retries;
            j["snippet_ids"] = il.snippet_ids;
            j["answer_text"] = il.answer_text;
            item_array.push_back(std::move(j));
        }
        p["items"] = std::move(item_array);
        patient_array.push_back(std::move(p));
    }
    doc["patients"] = std::move(patient_array);
    return doc;
}

PatientLog generate_patient(const Persona& persona, const DisorderSchema& schema,
                            const GenerationOptions& options, const LlmBackend& backend,
                            const KnowledgeIndex* index) {
    PatientLog log;
    log.persona = persona;
    run_patient(log, schema, options, backend, index);
    return log;
}

GenerationRun generate_dataset(std::size_t n_patients, const DisorderSchema& schema,
                               const GenerationOptions& options, const LlmBackend& backend,
                               const KnowledgeIndex* index, std::uint64_t master_seed,
                               const std::optional<PersonaConfig>& persona_config) {
    if (n_patients == 0)
        throw Error(errc::invalid_argument, "generate_dataset: n_patients must be >= 1");
    if (options.mode != KbMode::no_kb && (index == nullptr || !index->built()))
        throw Error(errc::index_not_built, "knowledge retrieval requested without a built index");
    schema.validate();

    const PersonaConfig config =
        persona_config ? *persona_config : PersonaConfig::defaults_for(schema);

    GenerationRun run{CategoricalTable(schema), {}, n_patients, 0};
    run.patients.resize(n_patients);

    auto process = [&](std::size_t i) {
        PatientLog& log = run.patients[i];
        log.index = i;
        log.persona = sample_persona(config, derive_patient_seed(master_seed, i));
        try {
            run_patient(log, schema, options, backend, index);
        } catch (const Error& e) {
            log.ok = false;
            log.error = e.what();
        }
    };

    const int workers = std::max(1, options.workers);
    if (workers == 1 || n_patients == 1) {
        for (std::size_t i = 0; i < n_patients; ++i) process(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto drain = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n_patients) return;
                process(i);
            }
        };
        std::vector<std::thread> pool;
        int spawn = std::min<std::size_t>(static_cast<std::size_t>(workers), n_patients);
        pool.reserve(static_cast<std::size_t>(spawn));
        for (int w = 0; w < spawn; ++w) pool.emplace_back(drain);
        for (std::thread& t : pool) t.join();
    }

    for (const PatientLog& log : run.patients) {
        if (!log.ok) continue;
        std::vector<std::string> row = patient_row(log, schema);
        run.table.append_row(row);
        ++run.generated;
    }
    return run;
}

CategoricalTable random_baseline(const CategoricalTable& real, std::uint64_t seed) {
    if (real.empty())
        throw Error(errc::empty_table, "random_baseline needs a non-empty real table");
    const DisorderSchema& schema = real.schema();

    std::vector<EmpiricalPMF> demographic_pmfs;
    for (const std::string& col : schema.demographic_columns)
        demographic_pmfs.push_back(empirical_pmf(real, col));

    auto rng = make_rng(seed, 0x42415345u, 0);
    CategoricalTable out(schema);
    std::vector<std::string> tokens(schema.column_count());
    for (std::size_t row = 0; row < real.row_count(); ++row) {
        std::size_t c = 0;
        for (const EmpiricalPMF& pmf : demographic_pmfs) {
            std::size_t pick = weighted_index(rng, pmf.probabilities, pmf.domain.size());
            tokens[c++] = pmf.domain[pick];
        }
        for (std::size_t j = 0; j < schema.item_ids.size(); ++j) {
            std::size_t pick = uniform_index(rng, schema.likert_domain.size());
            tokens[c++] = schema.likert_domain[pick];
        }
        out.append_row(tokens);
    }
    return out;
}

}  // namespace psytab
