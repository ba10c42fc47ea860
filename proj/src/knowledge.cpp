#include "psytab/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace psytab {

namespace {

constexpr double kBm25K1 = 1.2;
constexpr double kBm25B = 0.75;

std::string lower_copy(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> whitespace_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

std::vector<std::string> split_paragraphs(const std::string& text) {
    std::vector<std::string> paragraphs;
    std::string current;
    std::istringstream in(text);
    std::string line;
    auto flush = [&] {
        // Keep paragraphs that contain at least one token.
        if (current.find_first_not_of(" \t\r\n") != std::string::npos)
            paragraphs.push_back(current);
        current.clear();
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) {
            flush();
        } else {
            if (!current.empty()) current += '\n';
            current += line;
        }
    }
    flush();
    return paragraphs;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(errc::unreadable_file, "cannot read knowledge file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int source_rank(KbSource s) { return s == KbSource::dsm_v ? 0 : 1; }

std::size_t chunk_ordinal(const KnowledgeSnippet& snip) {
    auto pos = snip.id.rfind('#');
    return pos == std::string::npos ? 0 : std::stoul(snip.id.substr(pos + 1));
}

}  // namespace

const char* kb_source_name(KbSource source) noexcept {
    return source == KbSource::dsm_v ? "dsm-v" : "icd-10";
}

const char* kb_mode_name(KbMode mode) noexcept {
    switch (mode) {
        case KbMode::no_kb: return "nokb";
        case KbMode::dsm_only: return "dsm";
        case KbMode::icd_only: return "icd";
        case KbMode::dual_kb: return "dual";
    }
    return "nokb";
}

KbSource kb_source_from_name(const std::string& name) {
    std::string n = lower_copy(name);
    if (n == "dsm-v" || n == "dsm_v" || n == "dsm5" || n == "dsm-5" || n == "dsm")
        return KbSource::dsm_v;
    if (n == "icd-10" || n == "icd_10" || n == "icd10" || n == "icd")
        return KbSource::icd_10;
    throw Error(errc::invalid_manifest, "unknown knowledge source: " + name);
}

KbMode kb_mode_from_name(const std::string& name) {
    std::string n = lower_copy(name);
    if (n == "nokb" || n == "no_kb" || n == "none") return KbMode::no_kb;
    if (n == "dsm" || n == "dsm_only" || n == "dsmonly") return KbMode::dsm_only;
    if (n == "icd" || n == "icd_only" || n == "icdonly") return KbMode::icd_only;
    if (n == "dual" || n == "dual_kb" || n == "dualkb" || n == "both") return KbMode::dual_kb;
    throw Error(errc::invalid_config, "unknown knowledge mode: " + name);
}

std::vector<std::string> chunk_text(const std::string& text, std::size_t max_tokens,
                                    std::size_t overlap) {
    if (max_tokens == 0 || overlap >= max_tokens)
        throw Error(errc::invalid_argument, "chunk_text: need 0 <= overlap < max_tokens");
    std::vector<std::string> chunks;
    for (const std::string& para : split_paragraphs(text)) {
        std::vector<std::string> tokens = whitespace_tokens(para);
        if (tokens.empty()) continue;
        if (tokens.size() <= max_tokens) {
            chunks.push_back(para);
            continue;
        }
        const std::size_t stride = max_tokens - overlap;
        for (std::size_t start = 0;; start += stride) {
            std::size_t end = std::min(start + max_tokens, tokens.size());
            std::string window = tokens[start];
            for (std::size_t i = start + 1; i < end; ++i) {
                window += ' ';
                window += tokens[i];
            }
            chunks.push_back(std::move(window));
            if (end == tokens.size()) break;
        }
    }
    return chunks;
}

std::vector<std::string> bm25_terms(std::string_view text) {
    std::vector<std::string> terms;
    std::string current;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            current += static_cast<char>(std::tolower(c));
        } else if (!current.empty()) {
            terms.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) terms.push_back(std::move(current));
    return terms;
}

KnowledgeIndex::KnowledgeIndex(const KnowledgeIndex& other)
    : built_(other.built_),
      chunks_(other.chunks_),
      stats_(other.stats_),
      doc_freq_(other.doc_freq_),
      avg_length_(other.avg_length_),
      query_count_(other.query_count_.load()) {}

KnowledgeIndex& KnowledgeIndex::operator=(const KnowledgeIndex& other) {
    if (this != &other) {
        built_ = other.built_;
        chunks_ = other.chunks_;
        stats_ = other.stats_;
        doc_freq_ = other.doc_freq_;
        avg_length_ = other.avg_length_;
        query_count_.store(other.query_count_.load());
    }
    return *this;
}

KnowledgeIndex KnowledgeIndex::build(const std::vector<KbFile>& files) {
    KnowledgeIndex index;
    std::size_t per_source_counter[2] = {0, 0};
    for (const KbFile& file : files) {
        std::string text = read_file(file.path);
        std::string tag;
        for (const std::string& d : file.disorders) {
            if (!tag.empty()) tag += ',';
            tag += d;
        }
        for (std::string& chunk : chunk_text(text)) {
            KnowledgeSnippet snip;
            std::size_t ordinal = per_source_counter[source_rank(file.source)]++;
            snip.id = std::string(kb_source_name(file.source)) + "#" + std::to_string(ordinal);
            snip.source = file.source;
            snip.disorder_tag = tag;
            snip.text = std::move(chunk);
            index.chunks_.push_back(std::move(snip));
        }
    }
    if (index.chunks_.empty())
        throw Error(errc::empty_corpus, "knowledge corpus produced no chunks");

    double total_length = 0.0;
    index.stats_.resize(index.chunks_.size());
    for (std::size_t i = 0; i < index.chunks_.size(); ++i) {
        ChunkStats& st = index.stats_[i];
        std::vector<std::string> terms = bm25_terms(index.chunks_[i].text);
        st.length = static_cast<double>(terms.size());
        total_length += st.length;
        for (std::string& t : terms) st.term_freq[std::move(t)] += 1.0;
        for (const auto& [term, tf] : st.term_freq) index.doc_freq_[term] += 1;
    }
    index.avg_length_ = total_length / static_cast<double>(index.chunks_.size());
    index.built_ = true;
    return index;
}

KnowledgeIndex KnowledgeIndex::build_from_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in)
        throw Error(errc::unreadable_file,
                    "cannot read knowledge manifest: " + manifest_path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::invalid_manifest,
                    "knowledge manifest is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_array())
        throw Error(errc::invalid_manifest, "knowledge manifest must be a JSON array");

    const std::filesystem::path base = manifest_path.parent_path();
    std::vector<KbFile> files;
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("path") || !entry.contains("source"))
            throw Error(errc::invalid_manifest,
                        "manifest entries need \"path\" and \"source\" fields");
        KbFile file;
        std::filesystem::path p = entry.at("path").get<std::string>();
        file.path = p.is_absolute() ? p : base / p;
        file.source = kb_source_from_name(entry.at("source").get<std::string>());
        if (entry.contains("disorders")) {
            if (!entry.at("disorders").is_array())
                throw Error(errc::invalid_manifest, "\"disorders\" must be an array");
            for (const auto& d : entry.at("disorders"))
                file.disorders.push_back(d.get<std::string>());
        }
        files.push_back(std::move(file));
    }
    return build(files);
}

std::vector<KnowledgeSnippet> KnowledgeIndex::retrieve(std::string_view query, int k,
                                                       KbMode mode) const {
    if (mode == KbMode::no_kb) return {};
    if (!built_)
        throw Error(errc::index_not_built, "retrieve called on an unbuilt knowledge index");
    if (k < 1) throw Error(errc::invalid_argument, "retrieve: k must be >= 1");

    query_count_.fetch_add(1);

    std::vector<std::string> terms = bm25_terms(query);
    const double n_docs = static_cast<double>(chunks_.size());

    std::vector<std::size_t> eligible;
    eligible.reserve(chunks_.size());
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        KbSource src = chunks_[i].source;
        if (mode == KbMode::dsm_only && src != KbSource::dsm_v) continue;
        if (mode == KbMode::icd_only && src != KbSource::icd_10) continue;
        eligible.push_back(i);
    }

    std::vector<KnowledgeSnippet> scored;
    scored.reserve(eligible.size());
    for (std::size_t i : eligible) {
        const ChunkStats& st = stats_[i];
        double score = 0.0;
        for (const std::string& term : terms) {
            auto tf_it = st.term_freq.find(term);
            if (tf_it == st.term_freq.end()) continue;
            auto df_it = doc_freq_.find(term);
            double df = df_it == doc_freq_.end() ? 0.0 : static_cast<double>(df_it->second);
            double idf = std::log((n_docs - df + 0.5) / (df + 0.5) + 1.0);
            double tf = tf_it->second;
            double denom = tf + kBm25K1 * (1.0 - kBm25B + kBm25B * st.length / avg_length_);
            score += idf * tf * (kBm25K1 + 1.0) / denom;
        }
        KnowledgeSnippet snip = chunks_[i];
        snip.score = score;
        scored.push_back(std::move(snip));
    }

    std::stable_sort(scored.begin(), scored.end(),
                     [](const KnowledgeSnippet& a, const KnowledgeSnippet& b) {
                         if (a.score != b.score) return a.score > b.score;
                         if (a.source != b.source) return source_rank(a.source) < source_rank(b.source);
                         return chunk_ordinal(a) < chunk_ordinal(b);
                     });
    if (scored.size() > static_cast<std::size_t>(k)) scored.resize(static_cast<std::size_t>(k));
    return scored;
}

}  // namespace psytab
