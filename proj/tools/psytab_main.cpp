#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "psytab/commands.hpp"

namespace {

int exit_code_for(const psytab::Error& e) {
    switch (e.category()) {
        case psytab::error_category::config: return 2;
        case psytab::error_category::data: return 3;
        case psytab::error_category::backend: return 4;
    }
    return 1;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw psytab::Error(psytab::errc::unreadable_file, "cannot read config file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw psytab::Error(psytab::errc::invalid_config,
                            "config file is not valid JSON: " + std::string(e.what()));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic psychiatric questionnaire tables: generation, evaluation, "
                 "ablation, and privacy-gated selection"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a synthetic dataset");
    std::string gen_schema, gen_out, gen_kb = "none", gen_manifest, gen_mock_spec;
    std::string gen_config_path, gen_overrides_path;
    std::string gen_endpoint, gen_model = "local-model", gen_api_key_env = "PSYTAB_API_KEY";
    std::uint64_t gen_seed = 0;
    std::size_t gen_n = 10;
    int gen_top_k = 4, gen_retries = 2, gen_workers = 1, gen_max_tokens = 256, gen_timeout = 60;
    double gen_temperature = 0.7;
    bool gen_mock_flag = false;
    gen->add_option("--config", gen_config_path,
                    "JSON config file; explicit flags take precedence");
    gen->add_option("--schema", gen_schema, "disorder schema JSON");
    gen->add_option("--out", gen_out, "output directory");
    gen->add_option("--n", gen_n, "number of patients");
    gen->add_option("--kb", gen_kb, "knowledge mode: none, dsm, icd, dual");
    gen->add_option("--kb-manifest", gen_manifest, "knowledge manifest JSON");
    gen->add_option("--top-k", gen_top_k, "snippets retrieved per item");
    gen->add_option("--max-retries", gen_retries, "re-prompts per item");
    gen->add_option("--workers", gen_workers, "concurrent patients");
    gen->add_option("--seed", gen_seed, "master seed");
    gen->add_flag("--mock", gen_mock_flag, "use the deterministic mock backend");
    gen->add_option("--mock-spec", gen_mock_spec, "mock behavior: severity, cycle, score:N");
    gen->add_option("--endpoint", gen_endpoint, "chat-completions backend URL");
    gen->add_option("--model", gen_model, "backend model name");
    gen->add_option("--temperature", gen_temperature, "sampling temperature");
    gen->add_option("--max-tokens", gen_max_tokens, "completion token cap");
    gen->add_option("--timeout", gen_timeout, "request timeout in seconds");
    gen->add_option("--api-key-env", gen_api_key_env,
                    "environment variable holding the API key");
    gen->add_option("--persona-overrides", gen_overrides_path,
                    "JSON file of persona trait weights");

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "fidelity and privacy report");
    std::string eval_real, eval_syn, eval_schema, eval_json;
    eval->add_option("--real", eval_real, "real table CSV")->required();
    eval->add_option("--syn", eval_syn, "synthetic table CSV")->required();
    eval->add_option("--schema", eval_schema, "disorder schema JSON (default: infer)");
    eval->add_option("--json", eval_json, "write the JSON report here instead of stdout");

    // ablate
    auto* abl = app.add_subcommand("ablate", "paired bootstrap deltas against the nokb variant");
    std::string abl_real, abl_nokb, abl_dsm, abl_icd, abl_dual, abl_schema, abl_json;
    std::uint64_t abl_seed = 0;
    int abl_resamples = 1000;
    abl->add_option("--real", abl_real, "real table CSV")->required();
    abl->add_option("--nokb", abl_nokb, "no-knowledge variant CSV")->required();
    abl->add_option("--dsm", abl_dsm, "DSM-V variant CSV");
    abl->add_option("--icd", abl_icd, "ICD-10 variant CSV");
    abl->add_option("--dual", abl_dual, "dual-source variant CSV");
    abl->add_option("--schema", abl_schema, "disorder schema JSON (default: infer)");
    abl->add_option("--resamples", abl_resamples, "bootstrap resamples");
    abl->add_option("--seed", abl_seed, "bootstrap seed")->required();
    abl->add_option("--json", abl_json, "write the JSON report here instead of stdout");

    // select
    auto* sel = app.add_subcommand("select", "privacy-gated candidate selection");
    std::string sel_real, sel_manifest, sel_schema, sel_json;
    std::uint64_t sel_seed = 0;
    double sel_eo_max = 0.01, sel_near_max = 0.10, sel_q05_min = 1.0, sel_train = 0.7;
    sel->add_option("--real", sel_real, "real table CSV")->required();
    sel->add_option("--manifest", sel_manifest, "candidate manifest JSON")->required();
    sel->add_option("--schema", sel_schema, "disorder schema JSON (default: infer)");
    sel->add_option("--eo-max", sel_eo_max, "exact-overlap gate");
    sel->add_option("--near-max", sel_near_max, "near-match share gate");
    sel->add_option("--q05-min", sel_q05_min, "Hamming q05 gate");
    sel->add_option("--train-fraction", sel_train, "train split fraction");
    sel->add_option("--seed", sel_seed, "split seed")->required();
    sel->add_option("--json", sel_json, "write the JSON report here instead of stdout");

    // baseline
    auto* base = app.add_subcommand("baseline", "random baseline table for a real CSV");
    std::string base_real, base_out, base_schema;
    std::uint64_t base_seed = 0;
    base->add_option("--real", base_real, "real table CSV")->required();
    base->add_option("--out", base_out, "output CSV path")->required();
    base->add_option("--schema", base_schema, "disorder schema JSON (default: infer)");
    base->add_option("--seed", base_seed, "sampling seed")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            nlohmann::json file_cfg;
            if (!gen_config_path.empty()) file_cfg = load_json_file(gen_config_path);
            auto take = [&](const char* flag, const char* key, auto& slot) {
                using T = std::decay_t<decltype(slot)>;
                if (gen->count(flag) == 0 && file_cfg.is_object() && file_cfg.contains(key))
                    slot = file_cfg.at(key).get<T>();
            };
            take("--schema", "schema", gen_schema);
            take("--out", "out", gen_out);
            take("--n", "n_patients", gen_n);
            take("--kb", "kb_mode", gen_kb);
            take("--kb-manifest", "kb_manifest", gen_manifest);
            take("--top-k", "top_k", gen_top_k);
            take("--max-retries", "max_retries", gen_retries);
            take("--workers", "workers", gen_workers);
            take("--mock-spec", "mock", gen_mock_spec);
            take("--endpoint", "endpoint", gen_endpoint);
            take("--model", "model", gen_model);
            take("--temperature", "temperature", gen_temperature);
            take("--max-tokens", "max_tokens", gen_max_tokens);
            take("--timeout", "timeout_seconds", gen_timeout);
            take("--api-key-env", "api_key_env", gen_api_key_env);

            bool seed_given = gen->count("--seed") > 0;
            if (!seed_given && file_cfg.is_object() && file_cfg.contains("master_seed")) {
                gen_seed = file_cfg.at("master_seed").get<std::uint64_t>();
                seed_given = true;
            }
            if (!seed_given)
                throw psytab::Error(psytab::errc::invalid_config,
                                    "a master seed is required (--seed or \"master_seed\")");

            psytab::GenerateConfig config;
            config.schema_path = gen_schema;
            config.out_dir = gen_out;
            config.n_patients = gen_n;
            config.mode = psytab::kb_mode_from_name(gen_kb);
            config.kb_manifest = gen_manifest;
            config.top_k = gen_top_k;
            config.max_retries = gen_retries;
            config.workers = gen_workers;
            config.master_seed = gen_seed;

            bool wants_mock = gen_mock_flag || !gen_mock_spec.empty();
            if (wants_mock && !gen_endpoint.empty())
                throw psytab::Error(psytab::errc::invalid_config,
                                    "--mock and --endpoint are mutually exclusive");
            if (!gen_endpoint.empty()) {
                config.mock_spec.clear();
                config.backend.endpoint = gen_endpoint;
                config.backend.model = gen_model;
                config.backend.temperature = gen_temperature;
                config.backend.max_tokens = gen_max_tokens;
                config.backend.timeout_seconds = gen_timeout;
                config.backend.api_key_env = gen_api_key_env;
            } else {
                config.mock_spec = gen_mock_spec.empty() ? "severity" : gen_mock_spec;
            }

            if (!gen_overrides_path.empty()) {
                config.persona_overrides = load_json_file(gen_overrides_path);
            } else if (file_cfg.is_object() && file_cfg.contains("persona_overrides")) {
                config.persona_overrides = file_cfg.at("persona_overrides");
            }

            return psytab::cmd_generate(config, std::cout);
        }
        if (eval->parsed()) {
            psytab::EvaluateConfig config;
            config.real_path = eval_real;
            config.syn_path = eval_syn;
            config.schema_path = eval_schema;
            config.json_out = eval_json;
            return psytab::cmd_evaluate(config, std::cout);
        }
        if (abl->parsed()) {
            psytab::AblateConfig config;
            config.real_path = abl_real;
            config.variants["nokb"] = abl_nokb;
            if (!abl_dsm.empty()) config.variants["dsm"] = abl_dsm;
            if (!abl_icd.empty()) config.variants["icd"] = abl_icd;
            if (!abl_dual.empty()) config.variants["dual"] = abl_dual;
            config.schema_path = abl_schema;
            config.n_resamples = abl_resamples;
            config.seed = abl_seed;
            config.json_out = abl_json;
            return psytab::cmd_ablate(config, std::cout);
        }
        if (sel->parsed()) {
            psytab::SelectConfig config;
            config.real_path = sel_real;
            config.manifest_path = sel_manifest;
            config.schema_path = sel_schema;
            config.gates.eo_max = sel_eo_max;
            config.gates.near_share_max = sel_near_max;
            config.gates.q05_ham_min = sel_q05_min;
            config.train_fraction = sel_train;
            config.seed = sel_seed;
            config.json_out = sel_json;
            return psytab::cmd_select(config, std::cout);
        }
        if (base->parsed()) {
            psytab::BaselineConfig config;
            config.real_path = base_real;
            config.out_path = base_out;
            config.schema_path = base_schema;
            config.seed = base_seed;
            return psytab::cmd_baseline(config, std::cout);
        }
    } catch (const psytab::Error& e) {
        std::cerr << "error [" << e.code_name() << "]: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
