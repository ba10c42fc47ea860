#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "psytab/csv.hpp"
#include "psytab/fidelity.hpp"
#include "psytab/privacy.hpp"
#include "psytab/selection.hpp"
#include "psytab/split.hpp"

using namespace psytab;
using testutil::expect_error;

namespace {

CandidateRecord candidate(std::string id, double jsd, double eo, double near, double q05) {
    CandidateRecord c;
    c.candidate_id = std::move(id);
    c.scores = CandidateScores{jsd, eo, near, q05};
    return c;
}

}  // namespace

TEST_CASE("gated selection picks the minimum-jsd passer") {
    auto a = candidate("A", 0.10, 0.005, 0.05, 2.0);
    auto b = candidate("B", 0.08, 0.008, 0.04, 1.0);
    std::vector<CandidateRecord> candidates{a, b};
    SelectionResult result = select(candidates, GateConfig{});
    CHECK(result.winner.candidate_id == "B");
    CHECK(result.mode == SelectionMode::gated);
}

TEST_CASE("fallback stage one minimizes exact overlap") {
    auto a = candidate("A", 0.20, 0.02, 0.5, 0.0);
    auto b = candidate("B", 0.10, 0.03, 0.5, 0.0);
    std::vector<CandidateRecord> candidates{a, b};
    SelectionResult result = select(candidates, GateConfig{});
    CHECK(result.winner.candidate_id == "A");
    CHECK(result.mode == SelectionMode::fallback);
}

TEST_CASE("fallback stage three maximizes the hamming quantile") {
    auto a = candidate("A", 0.30, 0.02, 0.5, 3.0);
    auto b = candidate("B", 0.10, 0.02, 0.5, 2.0);
    std::vector<CandidateRecord> candidates{a, b};
    SelectionResult result = select(candidates, GateConfig{});
    CHECK(result.winner.candidate_id == "A");
    CHECK(result.mode == SelectionMode::fallback);
}

TEST_CASE("gate comparisons are exact at the thresholds") {
    GateConfig gates;
    CHECK(passes_gates(CandidateScores{0.5, 0.01, 0.10, 1.0}, gates));
    CHECK(!passes_gates(CandidateScores{0.5, 0.0100001, 0.10, 1.0}, gates));
    CHECK(!passes_gates(CandidateScores{0.5, 0.01, 0.1000001, 1.0}, gates));
    CHECK(!passes_gates(CandidateScores{0.5, 0.01, 0.10, 0.9999999}, gates));
}

TEST_CASE("single gate passer wins regardless of jsd") {
    auto passer = candidate("Z_pass", 0.99, 0.0, 0.0, 5.0);
    auto better_jsd = candidate("A_fail", 0.01, 0.5, 0.5, 0.0);
    std::vector<CandidateRecord> candidates{better_jsd, passer};
    SelectionResult result = select(candidates, GateConfig{});
    CHECK(result.winner.candidate_id == "Z_pass");
    CHECK(result.mode == SelectionMode::gated);
}

TEST_CASE("ties break by candidate id") {
    auto a = candidate("beta", 0.10, 0.0, 0.0, 2.0);
    auto b = candidate("alpha", 0.10, 0.0, 0.0, 2.0);
    std::vector<CandidateRecord> candidates{a, b};
    SelectionResult result = select(candidates, GateConfig{});
    CHECK(result.winner.candidate_id == "alpha");

    SUBCASE("also in fallback") {
        auto c = candidate("zz", 0.10, 0.9, 0.9, 0.0);
        auto d = candidate("aa", 0.10, 0.9, 0.9, 0.0);
        std::vector<CandidateRecord> failing{c, d};
        SelectionResult r = select(failing, GateConfig{});
        CHECK(r.winner.candidate_id == "aa");
        CHECK(r.mode == SelectionMode::fallback);
    }
}

TEST_CASE("selection is invariant to candidate order") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + rng() % 8;
        std::vector<CandidateRecord> candidates;
        for (std::size_t i = 0; i < n; ++i) {
            candidates.push_back(candidate(
                "cand" + std::to_string(i), static_cast<double>(rng() % 100) / 100.0,
                static_cast<double>(rng() % 3) / 100.0, static_cast<double>(rng() % 20) / 100.0,
                static_cast<double>(rng() % 4)));
        }
        SelectionResult first = select(candidates, GateConfig{});
        std::shuffle(candidates.begin(), candidates.end(), rng);
        SelectionResult second = select(candidates, GateConfig{});
        CHECK(first.winner.candidate_id == second.winner.candidate_id);
        CHECK(first.mode == second.mode);
    }
}

TEST_CASE("fallback is lexicographic, later stages cannot override earlier ones") {
    // B is much better at every later stage but strictly worse on EO.
    auto a = candidate("A", 0.90, 0.02, 0.90, 0.0);
    auto b = candidate("B", 0.01, 0.03, 0.00, 9.0);
    std::vector<CandidateRecord> candidates{a, b};
    SelectionResult result = select(candidates, GateConfig{});
    CHECK(result.winner.candidate_id == "A");
}

TEST_CASE("empty candidate list is rejected") {
    std::vector<CandidateRecord> none;
    expect_error(errc::empty_candidate_list, [&] { select(none, GateConfig{}); });
}

TEST_CASE("score_candidate matches direct metric calls") {
    DisorderSchema schema = testutil::toy_schema(2);
    CategoricalTable real(schema);
    std::mt19937_64 rng(50);
    for (int i = 0; i < 40; ++i) {
        real.append_row(std::vector<std::string>{rng() % 2 ? "female" : "male",
                                                 rng() % 2 ? "20" : "30",
                                                 std::to_string(rng() % 5),
                                                 std::to_string(rng() % 5)});
    }
    auto [d_train, d_tune] = stratified_split(real, 0.7, std::string("sex"), 11);
    CategoricalTable candidate_sample(schema);
    for (int i = 0; i < 12; ++i) {
        candidate_sample.append_row(std::vector<std::string>{
            rng() % 2 ? "female" : "male", rng() % 2 ? "20" : "30", std::to_string(rng() % 5),
            std::to_string(rng() % 5)});
    }

    CandidateScores scores = score_candidate(candidate_sample, d_train, d_tune);
    CHECK(scores.jsd == doctest::Approx(mean_jsd(d_tune, candidate_sample)).epsilon(1e-12));
    CHECK(scores.eo == doctest::Approx(exact_overlap(candidate_sample, d_train)).epsilon(1e-12));
    CHECK(scores.near_share_le1 ==
          doctest::Approx(near_match_share(candidate_sample, d_train, 1)).epsilon(1e-12));
    std::vector<double> raw;
    for (const NnDistance& d : nn_distances(candidate_sample, d_train))
        raw.push_back(static_cast<double>(d.hamming));
    CHECK(scores.q05_ham == doctest::Approx(quantile(raw, 0.05)).epsilon(1e-12));
}

TEST_CASE("copying the train half fails the EO gate") {
    DisorderSchema schema = testutil::toy_schema(1);
    CategoricalTable real(schema);
    for (int i = 0; i < 20; ++i) {
        real.append_row(std::vector<std::string>{i % 2 ? "female" : "male",
                                                 i % 4 < 2 ? "20" : "30",
                                                 std::to_string(i % 5)});
    }
    auto [d_train, d_tune] = stratified_split(real, 0.7, std::string("sex"), 3);
    CandidateScores scores = score_candidate(d_train, d_train, d_tune);
    CHECK(scores.eo == doctest::Approx(1.0));
    CHECK(!passes_gates(scores, GateConfig{}));
}

TEST_CASE("manifest loading") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "psytab_manifest_test";
    fs::create_directories(dir);

    DisorderSchema schema = testutil::toy_schema(1);
    auto sample = testutil::make_table(schema, {{"female", "20", "0"}});
    save_table(sample, dir / "cand_a.csv");

    {
        std::ofstream out(dir / "manifest.json");
        out << R"([{"candidate_id": "epochs=50,seed=11", "sample_path": "cand_a.csv"}])";
    }
    auto records = load_manifest(dir / "manifest.json");
    REQUIRE(records.size() == 1);
    CHECK(records[0].candidate_id == "epochs=50,seed=11");
    CHECK(records[0].sample_path == dir / "cand_a.csv");  // resolved against manifest dir

    SUBCASE("malformed manifest") {
        std::ofstream out(dir / "bad.json");
        out << R"({"not": "an array"})";
        out.close();
        expect_error(errc::invalid_manifest, [&] { load_manifest(dir / "bad.json"); });
    }
    SUBCASE("missing file") {
        expect_error(errc::unreadable_file, [&] { load_manifest(dir / "absent.json"); });
    }
    SUBCASE("missing fields") {
        std::ofstream out(dir / "nofield.json");
        out << R"([{"candidate_id": "x"}])";
        out.close();
        expect_error(errc::invalid_manifest, [&] { load_manifest(dir / "nofield.json"); });
    }
}
