#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "psytab/errors.hpp"

namespace psytab {

enum class KbSource { dsm_v, icd_10 };
enum class KbMode { no_kb, dsm_only, icd_only, dual_kb };

const char* kb_source_name(KbSource source) noexcept;
const char* kb_mode_name(KbMode mode) noexcept;
KbSource kb_source_from_name(const std::string& name);
KbMode kb_mode_from_name(const std::string& name);

struct KnowledgeSnippet {
    std::string id;  // "<source>#<chunk index>"
    KbSource source = KbSource::dsm_v;
    std::string disorder_tag;
    std::string text;
    double score = 0.0;
};

struct KbFile {
    std::filesystem::path path;
    KbSource source = KbSource::dsm_v;
    std::vector<std::string> disorders;
};

/// Splits text into retrieval chunks: paragraphs (blank-line separated) are
/// kept whole when at most max_tokens whitespace tokens long; longer
/// paragraphs become overlapping windows (stride max_tokens - overlap) that
/// cover every token.
std::vector<std::string> chunk_text(const std::string& text, std::size_t max_tokens = 512,
                                    std::size_t overlap = 64);

/// Lexical BM25 index (k1 = 1.2, b = 0.75) over chunked knowledge files.
class KnowledgeIndex {
public:
    /// Throws errc::empty_corpus when no chunk survives, errc::unreadable_file.
    static KnowledgeIndex build(const std::vector<KbFile>& files);

    /// Manifest: JSON array of {path, source, disorders}; relative paths
    /// resolve against the manifest directory.
    static KnowledgeIndex build_from_manifest(const std::filesystem::path& manifest_path);

    /// Top-k snippets for the query under the given mode. NoKB always returns
    /// an empty list (and does not count as a retrieval); single-source modes
    /// filter to that source; DualKB ranks over the union. Sorted by
    /// descending score, ties broken by (source, chunk index).
    /// Throws errc::index_not_built on a default-constructed index.
    std::vector<KnowledgeSnippet> retrieve(std::string_view query, int k, KbMode mode) const;

    std::size_t chunk_count() const { return chunks_.size(); }
    const KnowledgeSnippet& chunk(std::size_t i) const { return chunks_[i]; }
    bool built() const { return built_; }

    /// Number of scoring retrievals served; lets tests assert that NoKB runs
    /// never touch the index.
    std::size_t query_count() const { return query_count_.load(); }

    KnowledgeIndex() = default;
    KnowledgeIndex(const KnowledgeIndex& other);
    KnowledgeIndex& operator=(const KnowledgeIndex& other);

private:
    struct ChunkStats {
        std::unordered_map<std::string, double> term_freq;
        double length = 0.0;  // term count
    };

    bool built_ = false;
    std::vector<KnowledgeSnippet> chunks_;
    std::vector<ChunkStats> stats_;
    std::unordered_map<std::string, std::size_t> doc_freq_;
    double avg_length_ = 0.0;
    mutable std::atomic<std::size_t> query_count_{0};
};

/// Lowercased alphanumeric terms for BM25 scoring.
std::vector<std::string> bm25_terms(std::string_view text);

}  // namespace psytab
