#include "psytab/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>

#include "psytab/bootstrap.hpp"
#include "psytab/csv.hpp"
#include "psytab/fidelity.hpp"
#include "psytab/privacy.hpp"
#include "psytab/split.hpp"

namespace psytab {

namespace {

DisorderSchema load_schema_or_infer(const std::filesystem::path& schema_path,
                                    const std::vector<std::filesystem::path>& csv_paths,
                                    const std::string& fallback_name) {
    if (!schema_path.empty()) {
        if (!std::filesystem::exists(schema_path))
            throw Error(errc::invalid_config, "schema file not found: " + schema_path.string());
        return DisorderSchema::from_json_file(schema_path);
    }
    return infer_schema(csv_paths, fallback_name);
}

void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(errc::unreadable_file, "cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

void emit_json(const nlohmann::ordered_json& doc, const std::filesystem::path& json_out,
               std::ostream& out) {
    if (json_out.empty()) {
        out << doc.dump(2) << '\n';
    } else {
        write_json_file(json_out, doc);
    }
}

std::ostream& metric_row(std::ostream& out, const std::string& label, double value) {
    return out << "  " << std::left << std::setw(26) << label << std::right
               << std::fixed << std::setprecision(6) << value << '\n';
}

}  // namespace

int cmd_generate(const GenerateConfig& config, std::ostream& out) {
    if (config.schema_path.empty())
        throw Error(errc::invalid_config, "generate needs a schema file");
    if (!std::filesystem::exists(config.schema_path))
        throw Error(errc::invalid_config,
                    "schema file not found: " + config.schema_path.string());
    if (config.out_dir.empty())
        throw Error(errc::invalid_config, "generate needs an output directory");
    if (config.n_patients == 0)
        throw Error(errc::invalid_config, "n_patients must be >= 1");

    DisorderSchema schema = DisorderSchema::from_json_file(config.schema_path);
    schema.validate();

    PersonaConfig persona_config = PersonaConfig::defaults_for(schema);
    if (!config.persona_overrides.is_null())
        persona_config.apply_overrides(config.persona_overrides);

    KnowledgeIndex index;
    const KnowledgeIndex* index_ptr = nullptr;
    if (config.mode != KbMode::no_kb) {
        if (config.kb_manifest.empty())
            throw Error(errc::invalid_config,
                        "kb mode \"" + std::string(kb_mode_name(config.mode)) +
                            "\" needs a knowledge manifest");
        index = KnowledgeIndex::build_from_manifest(config.kb_manifest);
        index_ptr = &index;
    }

    std::unique_ptr<LlmBackend> backend;
    if (!config.mock_spec.empty()) {
        backend = make_mock_backend(config.mock_spec);
    } else {
        backend = std::make_unique<HttpChatBackend>(config.backend);
    }

    GenerationOptions options;
    options.mode = config.mode;
    options.top_k = config.top_k;
    options.max_retries = config.max_retries;
    options.workers = config.workers;

    GenerationRun run = generate_dataset(config.n_patients, schema, options, *backend, index_ptr,
                                         config.master_seed, persona_config);

    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path csv_path = config.out_dir / "synthetic.csv";
    const std::filesystem::path log_path = config.out_dir / "run_log.json";
    save_table(run.table, csv_path);
    write_json_file(log_path, run.run_log(options, backend->name(), config.master_seed));

    out << "generated " << run.generated << "/" << run.requested << " patients ("
        << schema.disorder_name << ", kb=" << kb_mode_name(config.mode) << ", backend="
        << backend->name() << ")\n";
    out << "wrote " << csv_path.string() << " and " << log_path.string() << '\n';
    if (run.generated < run.requested) {
        out << "warning: " << (run.requested - run.generated)
            << " patients failed and were skipped\n";
        return 5;
    }
    return 0;
}

int cmd_evaluate(const EvaluateConfig& config, std::ostream& out) {
    DisorderSchema schema =
        load_schema_or_infer(config.schema_path, {config.real_path, config.syn_path},
                             config.real_path.stem().string());
    CategoricalTable real = load_table(config.real_path, schema);
    CategoricalTable syn = load_table(config.syn_path, schema);

    FidelityReport fid = fidelity_report(real, syn);
    PrivacyReport priv = privacy_report(syn, real);

    nlohmann::ordered_json doc;
    doc["fidelity"] = fid.to_json();
    doc["privacy"] = priv.to_json();

    out << "evaluation of " << config.syn_path.filename().string() << " against "
        << config.real_path.filename().string() << " (" << syn.row_count() << " vs "
        << real.row_count() << " rows, " << real.column_count() << " columns)\n";
    out << "fidelity\n";
    metric_row(out, "mean_jsd", fid.mean_jsd);
    metric_row(out, "mae_v_error", fid.mae_v_error);
    metric_row(out, "mae_v_complement", fid.mae_v_complement);
    metric_row(out, "energy_distance_sq", fid.energy_distance_sq);
    out << "privacy\n";
    metric_row(out, "exact_overlap", priv.exact_overlap);
    metric_row(out, "nn_q05_normalized", priv.nn_q05_normalized);
    metric_row(out, "nn_q05_hamming", priv.nn_q05_hamming);
    metric_row(out, "near_match_share_le1", priv.near_match_share_le1);
    metric_row(out, "k_map_risk_avg", priv.k_map_risk_avg);

    emit_json(doc, config.json_out, out);
    return 0;
}

int cmd_ablate(const AblateConfig& config, std::ostream& out) {
    auto nokb_it = config.variants.find("nokb");
    if (nokb_it == config.variants.end())
        throw Error(errc::missing_nokb_variant, "ablation needs a \"nokb\" variant");

    std::vector<std::filesystem::path> all_paths{config.real_path};
    for (const auto& [name, path] : config.variants) all_paths.push_back(path);
    DisorderSchema schema = load_schema_or_infer(config.schema_path, all_paths,
                                                 config.real_path.stem().string());

    CategoricalTable real = load_table(config.real_path, schema);
    CategoricalTable nokb = load_table(nokb_it->second, schema);

    static const char* kVariantOrder[] = {"dsm", "icd", "dual"};
    static const FidelityMetric kMetrics[] = {FidelityMetric::jsd, FidelityMetric::mae_v,
                                              FidelityMetric::ed2};

    nlohmann::ordered_json doc;
    doc["baseline"] = "nokb";
    doc["n_resamples"] = config.n_resamples;
    doc["seed"] = config.seed;
    nlohmann::ordered_json deltas;

    out << "paired bootstrap deltas against nokb (positive favors the variant, "
        << config.n_resamples << " resamples)\n";
    for (const char* variant_name : kVariantOrder) {
        auto it = config.variants.find(variant_name);
        if (it == config.variants.end()) continue;
        CategoricalTable variant = load_table(it->second, schema);
        nlohmann::ordered_json per_metric;
        for (FidelityMetric metric : kMetrics) {
            DeltaEstimate d =
                bootstrap_delta(real, nokb, variant, metric, config.n_resamples, config.seed);
            per_metric[metric_name(metric)] = d.to_json();
            out << "  " << std::left << std::setw(6) << variant_name << std::setw(8)
                << metric_name(metric) << std::right << std::fixed << std::setprecision(6)
                << d.point << "  [" << d.ci_low << ", " << d.ci_high << "]\n";
        }
        deltas[variant_name] = std::move(per_metric);
    }
    if (deltas.empty())
        out << "  (no non-nokb variants supplied)\n";
    doc["deltas"] = std::move(deltas);

    emit_json(doc, config.json_out, out);
    return 0;
}

int cmd_select(const SelectConfig& config, std::ostream& out) {
    std::vector<CandidateRecord> candidates = load_manifest(config.manifest_path);
    if (candidates.empty())
        throw Error(errc::empty_candidate_list, "selection manifest lists no candidates");

    std::vector<std::filesystem::path> all_paths{config.real_path};
    for (const CandidateRecord& c : candidates) all_paths.push_back(c.sample_path);
    DisorderSchema schema = load_schema_or_infer(config.schema_path, all_paths,
                                                 config.real_path.stem().string());

    CategoricalTable real = load_table(config.real_path, schema);
    std::optional<std::string> stratify;
    if (std::find(schema.demographic_columns.begin(), schema.demographic_columns.end(), "sex") !=
        schema.demographic_columns.end())
        stratify = "sex";
    auto [d_train, d_tune] =
        stratified_split(real, config.train_fraction, stratify, config.seed);

    for (CandidateRecord& candidate : candidates) {
        CategoricalTable sample = load_table(candidate.sample_path, schema);
        candidate.scores = score_candidate(sample, d_train, d_tune);
    }

    SelectionResult result = select(candidates, config.gates);

    nlohmann::ordered_json doc;
    doc["winner_id"] = result.winner.candidate_id;
    doc["mode"] = result.mode == SelectionMode::gated ? "gated" : "fallback";
    doc["gates"] = {{"eo_max", config.gates.eo_max},
                    {"near_share_max", config.gates.near_share_max},
                    {"q05_ham_min", config.gates.q05_ham_min}};
    doc["train_fraction"] = config.train_fraction;
    doc["seed"] = config.seed;
    nlohmann::ordered_json score_array = nlohmann::ordered_json::array();
    for (const CandidateRecord& c : candidates) {
        nlohmann::ordered_json row;
        row["candidate_id"] = c.candidate_id;
        row["jsd"] = c.scores.jsd;
        row["eo"] = c.scores.eo;
        row["near_share_le1"] = c.scores.near_share_le1;
        row["q05_ham"] = c.scores.q05_ham;
        row["passes_gates"] = passes_gates(c.scores, config.gates);
        score_array.push_back(std::move(row));
    }
    doc["all_scores"] = std::move(score_array);

    out << "selection over " << candidates.size() << " candidates (train " << d_train.row_count()
        << " rows, tune " << d_tune.row_count() << " rows)\n";
    for (const CandidateRecord& c : candidates) {
        out << "  " << std::left << std::setw(24) << c.candidate_id << std::right << std::fixed
            << std::setprecision(6) << " jsd=" << c.scores.jsd << " eo=" << c.scores.eo
            << " near=" << c.scores.near_share_le1 << " q05=" << std::setprecision(2)
            << c.scores.q05_ham
            << (passes_gates(c.scores, config.gates) ? "  [pass]" : "  [gated out]") << '\n';
    }
    out << "winner: " << result.winner.candidate_id << " ("
        << (result.mode == SelectionMode::gated ? "gated" : "fallback") << ")\n";

    emit_json(doc, config.json_out, out);
    return 0;
}

int cmd_baseline(const BaselineConfig& config, std::ostream& out) {
    if (config.out_path.empty())
        throw Error(errc::invalid_config, "baseline needs an output path");
    DisorderSchema schema = load_schema_or_infer(config.schema_path, {config.real_path},
                                                 config.real_path.stem().string());
    CategoricalTable real = load_table(config.real_path, schema);
    CategoricalTable baseline = random_baseline(real, config.seed);
    if (!config.out_path.parent_path().empty())
        std::filesystem::create_directories(config.out_path.parent_path());
    save_table(baseline, config.out_path);
    out << "wrote " << baseline.row_count() << "-row random baseline to "
        << config.out_path.string() << '\n';
    return 0;
}

}  // namespace psytab
