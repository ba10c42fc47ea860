#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "psytab/schema.hpp"

namespace psytab {

/// Demographic and latent response-profile conditioning variables for one
/// synthetic patient.
struct Persona {
    std::string sex;
    std::string age;
    std::string severity_prior;
    std::string response_style;
    std::string symptom_awareness;
    std::string communication_style;
    double consistency_level = 1.0;
    std::uint64_t rng_seed = 0;

    nlohmann::ordered_json to_json() const;
};

/// Sampling distributions for persona traits. Empty weight vectors mean
/// uniform over the levels; weights align with the level lists.
struct PersonaConfig {
    std::vector<std::string> sex_levels{"female", "male"};
    std::vector<double> sex_weights;
    std::vector<std::string> age_levels;
    std::vector<double> age_weights;
    std::vector<std::string> severity_levels{"minimal", "mild", "moderate", "severe"};
    std::vector<double> severity_weights;
    std::vector<std::string> response_style_levels{"understating", "balanced", "dramatizing"};
    std::vector<double> response_style_weights;
    std::vector<std::string> symptom_awareness_levels{"low", "medium", "high"};
    std::vector<double> symptom_awareness_weights;
    std::vector<std::string> communication_style_levels{"terse", "conversational", "detailed"};
    std::vector<double> communication_style_weights;

    /// Levels taken from the schema's sex/age domains, all traits uniform.
    static PersonaConfig defaults_for(const DisorderSchema& schema);

    /// Applies override fields from a JSON object; weights are given as
    /// {level: weight} maps (levels must already exist in the config).
    void apply_overrides(const nlohmann::json& overrides);
};

/// Deterministic for a fixed (config, seed). Throws errc::empty_domain when a
/// trait has no levels.
Persona sample_persona(const PersonaConfig& config, std::uint64_t seed);

}  // namespace psytab
