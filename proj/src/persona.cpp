#include "psytab/persona.hpp"

#include <algorithm>
#include <cmath>

#include "psytab/errors.hpp"
#include "psytab/rng.hpp"

namespace psytab {

namespace {

const std::string& draw_level(std::mt19937_64& rng, const std::vector<std::string>& levels,
                              const std::vector<double>& weights, const char* trait) {
    if (levels.empty())
        throw Error(errc::empty_domain, std::string("persona trait '") + trait + "' has no levels");
    if (!weights.empty() && weights.size() != levels.size())
        throw Error(errc::invalid_config,
                    std::string("weights for trait '") + trait + "' do not match its levels");
    return levels[weighted_index(rng, weights, levels.size())];
}

}  // namespace

PersonaConfig PersonaConfig::defaults_for(const DisorderSchema& schema) {
    PersonaConfig cfg;
    if (schema.has_column("sex")) cfg.sex_levels = schema.sex_domain;
    if (schema.has_column("age")) cfg.age_levels = schema.age_domain;
    if (cfg.age_levels.empty()) cfg.age_levels = DisorderSchema::default_age_domain();
    return cfg;
}

void PersonaConfig::apply_overrides(const nlohmann::json& overrides) {
    if (overrides.is_null()) return;
    if (!overrides.is_object())
        throw Error(errc::invalid_config, "persona overrides must be a JSON object");

    auto apply = [&](const char* key, const std::vector<std::string>& levels,
                     std::vector<double>& weights) {
        if (!overrides.contains(key)) return;
        const auto& spec = overrides.at(key);
        if (!spec.is_object())
            throw Error(errc::invalid_config,
                        std::string("persona override '") + key + "' must be a {level: weight} map");
        weights.assign(levels.size(), 0.0);
        for (const auto& [level, w] : spec.items()) {
            auto it = std::find(levels.begin(), levels.end(), level);
            if (it == levels.end())
                throw Error(errc::invalid_config, std::string("persona override '") + key +
                                                      "' names unknown level '" + level + "'");
            weights[static_cast<std::size_t>(it - levels.begin())] = w.get<double>();
        }
    };
    apply("sex", sex_levels, sex_weights);
    apply("age", age_levels, age_weights);
    apply("severity_prior", severity_levels, severity_weights);
    apply("response_style", response_style_levels, response_style_weights);
    apply("symptom_awareness", symptom_awareness_levels, symptom_awareness_weights);
    apply("communication_style", communication_style_levels, communication_style_weights);
}

Persona sample_persona(const PersonaConfig& config, std::uint64_t seed) {
    auto rng = make_rng(seed, 0x9e3779b9u, 0);
    Persona p;
    p.rng_seed = seed;
    p.sex = draw_level(rng, config.sex_levels, config.sex_weights, "sex");
    p.age = draw_level(rng, config.age_levels, config.age_weights, "age");
    p.severity_prior = draw_level(rng, config.severity_levels, config.severity_weights,
                                  "severity_prior");
    p.response_style = draw_level(rng, config.response_style_levels,
                                  config.response_style_weights, "response_style");
    p.symptom_awareness = draw_level(rng, config.symptom_awareness_levels,
                                     config.symptom_awareness_weights, "symptom_awareness");
    p.communication_style = draw_level(rng, config.communication_style_levels,
                                       config.communication_style_weights, "communication_style");
    // Quantized to two decimals; the value is rendered into prompts and logs.
    p.consistency_level = std::round(canonical(rng) * 100.0) / 100.0;
    return p;
}

nlohmann::ordered_json Persona::to_json() const {
    nlohmann::ordered_json doc;
    doc["sex"] = sex;
    doc["age"] = age;
    doc["severity_prior"] = severity_prior;
    doc["response_style"] = response_style;
    doc["symptom_awareness"] = symptom_awareness;
    doc["communication_style"] = communication_style;
    doc["consistency_level"] = consistency_level;
    doc["rng_seed"] = rng_seed;
    return doc;
}

}  // namespace psytab
