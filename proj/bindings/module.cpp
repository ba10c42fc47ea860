#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "psytab/bootstrap.hpp"
#include "psytab/commands.hpp"
#include "psytab/csv.hpp"
#include "psytab/fidelity.hpp"
#include "psytab/generation.hpp"
#include "psytab/knowledge.hpp"
#include "psytab/persona.hpp"
#include "psytab/privacy.hpp"
#include "psytab/prompting.hpp"
#include "psytab/selection.hpp"
#include "psytab/split.hpp"
#include "psytab/table.hpp"

namespace py = pybind11;
using namespace psytab;

namespace {

py::object json_to_py(const nlohmann::ordered_json& doc) {
    return py::module_::import("json").attr("loads")(doc.dump());
}

GenerationOptions make_options(const std::string& kb_mode, int top_k, int max_retries,
                               int workers) {
    GenerationOptions options;
    options.mode = kb_mode_from_name(kb_mode);
    options.top_k = top_k;
    options.max_retries = max_retries;
    options.workers = workers;
    return options;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "synthetic psychiatric questionnaire tables: generation and evaluation core";

    py::register_exception<Error>(m, "PsytabError");

    py::class_<DisorderSchema>(m, "DisorderSchema")
        .def_static("make", &DisorderSchema::make, py::arg("name"), py::arg("items"))
        .def_static("from_json_file", &DisorderSchema::from_json_file, py::arg("path"))
        .def("save_json", &DisorderSchema::save_json, py::arg("path"))
        .def("validate", &DisorderSchema::validate)
        .def("columns", &DisorderSchema::columns)
        .def_readwrite("disorder_name", &DisorderSchema::disorder_name)
        .def_readwrite("demographic_columns", &DisorderSchema::demographic_columns)
        .def_readwrite("item_ids", &DisorderSchema::item_ids)
        .def_readwrite("likert_domain", &DisorderSchema::likert_domain)
        .def_readwrite("sex_domain", &DisorderSchema::sex_domain)
        .def_readwrite("age_domain", &DisorderSchema::age_domain);

    py::class_<CategoricalTable>(m, "CategoricalTable")
        .def(py::init<DisorderSchema>(), py::arg("schema"))
        .def("row_count", &CategoricalTable::row_count)
        .def("column_count", &CategoricalTable::column_count)
        .def("schema", &CategoricalTable::schema)
        .def("append_row",
             [](CategoricalTable& t, const std::vector<std::string>& tokens) {
                 t.append_row(tokens);
             },
             py::arg("tokens"))
        .def("row_tokens", &CategoricalTable::row_tokens, py::arg("row"))
        .def("column_values",
             [](const CategoricalTable& t, const std::string& column) {
                 return t.column_values(column);
             },
             py::arg("column"));

    m.def("load_table", &load_table, py::arg("path"), py::arg("schema"));
    m.def("save_table", &save_table, py::arg("table"), py::arg("path"));
    m.def("infer_schema", &infer_schema, py::arg("csv_paths"), py::arg("disorder_name"));
    m.def("stratified_split", &stratified_split, py::arg("table"), py::arg("train_fraction"),
          py::arg("stratify_column"), py::arg("seed"));

    m.def("mean_jsd", &mean_jsd, py::arg("real"), py::arg("syn"));
    m.def("cramers_v_bias_corrected",
          [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
              return cramers_v_bias_corrected(a, b);
          },
          py::arg("column_a"), py::arg("column_b"));
    m.def("mae_v", &mae_v, py::arg("real"), py::arg("syn"));
    m.def("energy_distance_sq", &energy_distance_sq, py::arg("real"), py::arg("syn"));
    m.def("fidelity_report",
          [](const CategoricalTable& real, const CategoricalTable& syn) {
              return json_to_py(fidelity_report(real, syn).to_json());
          },
          py::arg("real"), py::arg("syn"));
    m.def("privacy_report",
          [](const CategoricalTable& syn, const CategoricalTable& real,
             const std::vector<std::string>& qi_columns) {
              return json_to_py(privacy_report(syn, real, qi_columns).to_json());
          },
          py::arg("syn"), py::arg("real"), py::arg("qi_columns") = std::vector<std::string>{});
    m.def("exact_overlap", &exact_overlap, py::arg("syn"), py::arg("real"));

    m.def("bootstrap_delta",
          [](const CategoricalTable& real, const CategoricalTable& syn_a,
             const CategoricalTable& syn_b, const std::string& metric, int n_resamples,
             std::uint64_t seed) {
              return json_to_py(bootstrap_delta(real, syn_a, syn_b, metric_from_name(metric),
                                                n_resamples, seed)
                                    .to_json());
          },
          py::arg("real"), py::arg("syn_a"), py::arg("syn_b"), py::arg("metric"),
          py::arg("n_resamples"), py::arg("seed"));
    m.def("metric_ci",
          [](const CategoricalTable& real, const CategoricalTable& syn, const std::string& metric,
             int n_resamples, std::uint64_t seed) {
              return json_to_py(
                  metric_ci(real, syn, metric_from_name(metric), n_resamples, seed).to_json());
          },
          py::arg("real"), py::arg("syn"), py::arg("metric"), py::arg("n_resamples"),
          py::arg("seed"));

    py::class_<GateConfig>(m, "GateConfig")
        .def(py::init<>())
        .def_readwrite("eo_max", &GateConfig::eo_max)
        .def_readwrite("near_share_max", &GateConfig::near_share_max)
        .def_readwrite("q05_ham_min", &GateConfig::q05_ham_min);

    py::class_<CandidateScores>(m, "CandidateScores")
        .def(py::init<>())
        .def_readwrite("jsd", &CandidateScores::jsd)
        .def_readwrite("eo", &CandidateScores::eo)
        .def_readwrite("near_share_le1", &CandidateScores::near_share_le1)
        .def_readwrite("q05_ham", &CandidateScores::q05_ham);

    py::class_<CandidateRecord>(m, "CandidateRecord")
        .def(py::init<>())
        .def_readwrite("candidate_id", &CandidateRecord::candidate_id)
        .def_readwrite("sample_path", &CandidateRecord::sample_path)
        .def_readwrite("scores", &CandidateRecord::scores);

    m.def("score_candidate", &score_candidate, py::arg("candidate_sample"), py::arg("d_train"),
          py::arg("d_tune"));
    m.def("passes_gates", &passes_gates, py::arg("scores"), py::arg("gates"));
    m.def("select",
          [](const std::vector<CandidateRecord>& candidates, const GateConfig& gates) {
              SelectionResult result = select(candidates, gates);
              return py::make_tuple(result.winner.candidate_id,
                                    result.mode == SelectionMode::gated ? "gated" : "fallback");
          },
          py::arg("candidates"), py::arg("gates"));
    m.def("load_manifest", &load_manifest, py::arg("manifest_path"));

    py::class_<Persona>(m, "Persona")
        .def(py::init<>())
        .def_readwrite("sex", &Persona::sex)
        .def_readwrite("age", &Persona::age)
        .def_readwrite("severity_prior", &Persona::severity_prior)
        .def_readwrite("response_style", &Persona::response_style)
        .def_readwrite("symptom_awareness", &Persona::symptom_awareness)
        .def_readwrite("communication_style", &Persona::communication_style)
        .def_readwrite("consistency_level", &Persona::consistency_level)
        .def_readwrite("rng_seed", &Persona::rng_seed)
        .def("to_dict", [](const Persona& p) { return json_to_py(p.to_json()); });

    py::class_<PersonaConfig>(m, "PersonaConfig")
        .def(py::init<>())
        .def_static("defaults_for", &PersonaConfig::defaults_for, py::arg("schema"));

    m.def("sample_persona", &sample_persona, py::arg("config"), py::arg("seed"));

    py::class_<KnowledgeSnippet>(m, "KnowledgeSnippet")
        .def_readonly("id", &KnowledgeSnippet::id)
        .def_property_readonly(
            "source", [](const KnowledgeSnippet& s) { return kb_source_name(s.source); })
        .def_readonly("disorder_tag", &KnowledgeSnippet::disorder_tag)
        .def_readonly("text", &KnowledgeSnippet::text)
        .def_readonly("score", &KnowledgeSnippet::score);

    py::class_<KnowledgeIndex>(m, "KnowledgeIndex")
        .def_static("build_from_manifest", &KnowledgeIndex::build_from_manifest,
                    py::arg("manifest_path"))
        .def("retrieve",
             [](const KnowledgeIndex& index, const std::string& query, int k,
                const std::string& mode) {
                 return index.retrieve(query, k, kb_mode_from_name(mode));
             },
             py::arg("query"), py::arg("k"), py::arg("mode"))
        .def("chunk_count", &KnowledgeIndex::chunk_count)
        .def("query_count", &KnowledgeIndex::query_count);

    m.def("chunk_text", &chunk_text, py::arg("text"), py::arg("max_tokens") = 512,
          py::arg("overlap") = 64);
    m.def("parse_score", &parse_score, py::arg("response"), py::arg("domain"));

    m.def("generate_mock_dataset",
          [](std::size_t n_patients, const DisorderSchema& schema, const std::string& kb_mode,
             const std::string& mock_spec, std::uint64_t master_seed,
             const std::optional<std::filesystem::path>& kb_manifest, int top_k, int max_retries,
             int workers) {
              GenerationOptions options = make_options(kb_mode, top_k, max_retries, workers);
              KnowledgeIndex index;
              const KnowledgeIndex* index_ptr = nullptr;
              if (kb_manifest) {
                  index = KnowledgeIndex::build_from_manifest(*kb_manifest);
                  index_ptr = &index;
              }
              auto backend = make_mock_backend(mock_spec);
              GenerationRun run = generate_dataset(n_patients, schema, options, *backend,
                                                   index_ptr, master_seed);
              return py::make_tuple(
                  run.table, json_to_py(run.run_log(options, backend->name(), master_seed)));
          },
          py::arg("n_patients"), py::arg("schema"), py::arg("kb_mode") = "nokb",
          py::arg("mock_spec") = "severity", py::arg("master_seed") = 0,
          py::arg("kb_manifest") = std::nullopt, py::arg("top_k") = 4,
          py::arg("max_retries") = 2, py::arg("workers") = 1);

    m.def("random_baseline", &random_baseline, py::arg("real"), py::arg("seed"));
}
