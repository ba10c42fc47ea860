#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "psytab/knowledge.hpp"

using namespace psytab;
using testutil::expect_error;

namespace {

namespace fs = std::filesystem;

fs::path fixture_dir() {
    fs::path dir = fs::temp_directory_path() / "psytab_kb_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

std::vector<std::string> tokens_of(const std::string& text) {
    std::vector<std::string> toks;
    std::istringstream in(text);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

}  // namespace

TEST_CASE("paragraphs below the cap stay whole") {
    std::string text = "First paragraph about worry.\n\n"
                       "Second paragraph, two lines\nof the same thought.\n\n"
                       "Third paragraph.\n";
    auto chunks = chunk_text(text);
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0] == "First paragraph about worry.");
    CHECK(chunks[1] == "Second paragraph, two lines\nof the same thought.");
    CHECK(chunks[2] == "Third paragraph.");
}

TEST_CASE("oversized paragraphs become overlapping windows covering every token") {
    std::string big;
    const std::size_t total = 2000;
    for (std::size_t i = 0; i < total; ++i) {
        if (i > 0) big += ' ';
        big += "t" + std::to_string(i);
    }
    auto chunks = chunk_text(big, 512, 64);
    REQUIRE(chunks.size() > 1);

    std::set<std::string> seen;
    std::vector<std::vector<std::string>> windows;
    for (const std::string& chunk : chunks) {
        auto toks = tokens_of(chunk);
        CHECK(toks.size() <= 512);
        windows.push_back(toks);
        for (const std::string& t : toks) seen.insert(t);
    }
    CHECK(seen.size() == total);  // full coverage
    for (std::size_t i = 0; i + 1 < windows.size(); ++i) {
        // stride 448 = 512 - 64: the next window starts 64 tokens before this one ends
        std::vector<std::string> tail(windows[i].end() - 64, windows[i].end());
        std::vector<std::string> head(windows[i + 1].begin(), windows[i + 1].begin() + 64);
        if (i + 2 < windows.size()) CHECK(tail == head);
    }
}

TEST_CASE("chunking argument validation") {
    expect_error(errc::invalid_argument, [] { chunk_text("x", 0, 0); });
    expect_error(errc::invalid_argument, [] { chunk_text("x", 10, 10); });
}

TEST_CASE("index build and retrieval") {
    fs::path dir = fixture_dir();
    write_file(dir / "dsm.txt",
               "Separation anxiety involves excessive distress when away from home.\n\n"
               "Worry about losing attachment figures is persistent and intense.\n\n"
               "Sudden panic episodes can accompany separation in severe cases.\n");
    write_file(dir / "icd.txt",
               "The condition features fear of separation from attachment figures.\n\n"
               "Somatic complaints often appear on school days.\n");

    std::vector<KbFile> files{{dir / "dsm.txt", KbSource::dsm_v, {"separation_anxiety"}},
                              {dir / "icd.txt", KbSource::icd_10, {"separation_anxiety"}}};
    KnowledgeIndex index = KnowledgeIndex::build(files);
    CHECK(index.built());
    CHECK(index.chunk_count() == 5);

    SUBCASE("nokb returns nothing and does not count as a query") {
        std::size_t before = index.query_count();
        CHECK(index.retrieve("anything at all", 3, KbMode::no_kb).empty());
        CHECK(index.query_count() == before);
    }
    SUBCASE("unique term ranks its chunk first") {
        auto hits = index.retrieve("panic", 3, KbMode::dual_kb);
        REQUIRE(!hits.empty());
        CHECK(hits[0].text.find("panic") != std::string::npos);
        CHECK(hits[0].source == KbSource::dsm_v);
        CHECK(hits[0].score > 0.0);
    }
    SUBCASE("single-source modes filter by source") {
        for (const auto& snip : index.retrieve("separation attachment", 10, KbMode::dsm_only))
            CHECK(snip.source == KbSource::dsm_v);
        for (const auto& snip : index.retrieve("separation attachment", 10, KbMode::icd_only))
            CHECK(snip.source == KbSource::icd_10);
    }
    SUBCASE("dual mode equals the merge of per-source rankings") {
        const std::string query = "fear of separation from home";
        auto dual = index.retrieve(query, 4, KbMode::dual_kb);
        auto dsm = index.retrieve(query, 10, KbMode::dsm_only);
        auto icd = index.retrieve(query, 10, KbMode::icd_only);

        std::vector<KnowledgeSnippet> merged;
        merged.insert(merged.end(), dsm.begin(), dsm.end());
        merged.insert(merged.end(), icd.begin(), icd.end());
        std::stable_sort(merged.begin(), merged.end(),
                         [](const KnowledgeSnippet& a, const KnowledgeSnippet& b) {
                             if (a.score != b.score) return a.score > b.score;
                             if (a.source != b.source) return a.source == KbSource::dsm_v;
                             return a.id < b.id;
                         });
        REQUIRE(dual.size() == 4);
        for (std::size_t i = 0; i < dual.size(); ++i) {
            CHECK(dual[i].id == merged[i].id);
            CHECK(dual[i].score == doctest::Approx(merged[i].score).epsilon(1e-12));
        }
    }
    SUBCASE("results sorted by descending score") {
        auto hits = index.retrieve("separation attachment figures", 5, KbMode::dual_kb);
        for (std::size_t i = 0; i + 1 < hits.size(); ++i)
            CHECK(hits[i].score >= hits[i + 1].score);
    }
    SUBCASE("retrieval counts queries") {
        std::size_t before = index.query_count();
        index.retrieve("worry", 1, KbMode::dual_kb);
        index.retrieve("worry", 1, KbMode::dsm_only);
        CHECK(index.query_count() == before + 2);
    }
    SUBCASE("k must be positive") {
        expect_error(errc::invalid_argument,
                     [&] { index.retrieve("worry", 0, KbMode::dual_kb); });
    }
    SUBCASE("snippet ids carry source and ordinal") {
        auto hits = index.retrieve("school days", 1, KbMode::icd_only);
        REQUIRE(!hits.empty());
        CHECK(hits[0].id.rfind("icd-10#", 0) == 0);
        CHECK(hits[0].disorder_tag == "separation_anxiety");
    }
}

TEST_CASE("index build failures") {
    expect_error(errc::empty_corpus, [] { KnowledgeIndex::build({}); });

    fs::path dir = fixture_dir();
    std::vector<KbFile> missing{{dir / "no_such_file.txt", KbSource::dsm_v, {}}};
    expect_error(errc::unreadable_file, [&] { KnowledgeIndex::build(missing); });

    write_file(dir / "blank.txt", "\n   \n\n");
    std::vector<KbFile> blank{{dir / "blank.txt", KbSource::dsm_v, {}}};
    expect_error(errc::empty_corpus, [&] { KnowledgeIndex::build(blank); });
}

TEST_CASE("retrieve on an unbuilt index") {
    KnowledgeIndex index;
    expect_error(errc::index_not_built,
                 [&] { index.retrieve("worry", 3, KbMode::dual_kb); });
    CHECK(index.retrieve("worry", 3, KbMode::no_kb).empty());  // nokb never touches it
}

TEST_CASE("manifest building resolves relative paths") {
    fs::path dir = fixture_dir() / "manifest_case";
    fs::create_directories(dir / "corpus");
    write_file(dir / "corpus" / "a.txt", "Anxiety description paragraph.\n");
    write_file(dir / "corpus" / "b.txt", "Classification paragraph.\n");
    write_file(dir / "kb_manifest.json", R"([
        {"path": "corpus/a.txt", "source": "DSM-V", "disorders": ["separation_anxiety"]},
        {"path": "corpus/b.txt", "source": "ICD-10", "disorders": ["separation_anxiety"]}
    ])");

    KnowledgeIndex index = KnowledgeIndex::build_from_manifest(dir / "kb_manifest.json");
    CHECK(index.chunk_count() == 2);

    SUBCASE("unknown source label") {
        write_file(dir / "bad.json", R"([{"path": "corpus/a.txt", "source": "WHO"}])");
        expect_error(errc::invalid_manifest,
                     [&] { KnowledgeIndex::build_from_manifest(dir / "bad.json"); });
    }
    SUBCASE("not an array") {
        write_file(dir / "obj.json", R"({"path": "corpus/a.txt"})");
        expect_error(errc::invalid_manifest,
                     [&] { KnowledgeIndex::build_from_manifest(dir / "obj.json"); });
    }
}

TEST_CASE("kb mode and source names") {
    CHECK(kb_mode_from_name("none") == KbMode::no_kb);
    CHECK(kb_mode_from_name("nokb") == KbMode::no_kb);
    CHECK(kb_mode_from_name("dsm") == KbMode::dsm_only);
    CHECK(kb_mode_from_name("icd") == KbMode::icd_only);
    CHECK(kb_mode_from_name("dual") == KbMode::dual_kb);
    CHECK(std::string(kb_mode_name(KbMode::dual_kb)) == "dual");
    expect_error(errc::invalid_config, [] { kb_mode_from_name("vector"); });

    CHECK(kb_source_from_name("DSM-V") == KbSource::dsm_v);
    CHECK(kb_source_from_name("icd-10") == KbSource::icd_10);
    expect_error(errc::invalid_manifest, [] { kb_source_from_name("nhs"); });
}
