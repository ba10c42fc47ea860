#include "psytab/selection.hpp"

#include <algorithm>
#include <fstream>

#include "psytab/errors.hpp"
#include "psytab/fidelity.hpp"
#include "psytab/privacy.hpp"

namespace psytab {

CandidateScores score_candidate(const CategoricalTable& candidate_sample,
                                const CategoricalTable& d_train, const CategoricalTable& d_tune) {
    CandidateScores scores;
    scores.jsd = mean_jsd(d_tune, candidate_sample);
    scores.eo = exact_overlap(candidate_sample, d_train);
    scores.near_share_le1 = near_match_share(candidate_sample, d_train, 1);
    const auto nn = nn_distances(candidate_sample, d_train);
    std::vector<double> raw;
    raw.reserve(nn.size());
    for (const auto& d : nn) raw.push_back(static_cast<double>(d.hamming));
    scores.q05_ham = quantile(raw, 0.05);
    return scores;
}

bool passes_gates(const CandidateScores& s, const GateConfig& g) {
    return s.eo <= g.eo_max && s.near_share_le1 <= g.near_share_max && s.q05_ham >= g.q05_ham_min;
}

SelectionResult select(std::span<const CandidateRecord> candidates, const GateConfig& gates) {
    if (candidates.empty())
        throw Error(errc::empty_candidate_list, "select: no candidates");

    auto better_id = [](const CandidateRecord& a, const CandidateRecord& b) {
        return a.candidate_id < b.candidate_id;
    };

    const CandidateRecord* best = nullptr;
    for (const auto& cand : candidates) {
        if (!passes_gates(cand.scores, gates)) continue;
        if (!best || cand.scores.jsd < best->scores.jsd ||
            (cand.scores.jsd == best->scores.jsd && better_id(cand, *best)))
            best = &cand;
    }
    if (best) return {*best, SelectionMode::gated};

    // Lexicographic fallback: min EO, min near-match share, max q05, min JSD.
    auto fallback_less = [&](const CandidateRecord& a, const CandidateRecord& b) {
        if (a.scores.eo != b.scores.eo) return a.scores.eo < b.scores.eo;
        if (a.scores.near_share_le1 != b.scores.near_share_le1)
            return a.scores.near_share_le1 < b.scores.near_share_le1;
        if (a.scores.q05_ham != b.scores.q05_ham) return a.scores.q05_ham > b.scores.q05_ham;
        if (a.scores.jsd != b.scores.jsd) return a.scores.jsd < b.scores.jsd;
        return better_id(a, b);
    };
    for (const auto& cand : candidates)
        if (!best || fallback_less(cand, *best)) best = &cand;
    return {*best, SelectionMode::fallback};
}

std::vector<CandidateRecord> load_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in)
        throw Error(errc::unreadable_file, "cannot open manifest: " + manifest_path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::invalid_manifest, "manifest " + manifest_path.string() + ": " + e.what());
    }
    if (!doc.is_array())
        throw Error(errc::invalid_manifest, "manifest must be a JSON array");

    const auto base = manifest_path.parent_path();
    std::vector<CandidateRecord> out;
    out.reserve(doc.size());
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("candidate_id") || !entry.contains("sample_path"))
            throw Error(errc::invalid_manifest,
                        "manifest entries need candidate_id and sample_path fields");
        CandidateRecord rec;
        rec.candidate_id = entry["candidate_id"].get<std::string>();
        std::filesystem::path sample = entry["sample_path"].get<std::string>();
        rec.sample_path = sample.is_absolute() ? sample : base / sample;
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace psytab
