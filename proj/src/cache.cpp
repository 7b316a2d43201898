#include "hetrag/cache.hpp"

#include "hetrag/errors.hpp"
#include "hetrag/json_io.hpp"
#include "hetrag/text.hpp"

#include <spdlog/spdlog.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace hetrag {

namespace {

constexpr const char* kBm25Magic = "hetrag-bm25";
constexpr const char* kEmbeddingMagic = "hetrag-embedding";

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto tab = line.find('\t', start);
        out.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool header_ok(const std::string& line, const char* magic, const std::string& key, std::vector<std::string>& fields) {
    fields = split_tabs(line);
    return fields.size() >= 3 && fields[0] == magic && fields[1] == std::to_string(kCacheFormatVersion) &&
           fields[2] == key;
}

void write_atomically(const std::filesystem::path& file, const std::string& content) {
    auto tmp = file;
    tmp += ".tmp";
    io::write_text_file(tmp, content);
    std::filesystem::rename(tmp, file);
}

}  // namespace

std::string corpus_key(const std::vector<Document>& docs, const PipelineConfig& config,
                       const PromptTemplates& templates) {
    std::uint64_t h = text::fnv1a("corpus-v" + std::to_string(kCacheFormatVersion));
    for (const auto& d : docs) h = text::fnv1a(io::document_to_json(d).dump(), h);
    h = text::fnv1a(to_string(config.bm25_strategy), h);
    h = text::fnv1a(to_string(config.embedding_strategy), h);
    if (config.summarizer.mode == SummarizerMode::model) {
        h = text::fnv1a("model:" + config.completion_model, h);
        h = text::fnv1a(templates.get(config.summarizer.prompt_name), h);
    } else {
        h = text::fnv1a("template", h);
    }
    return text::hex64(h);
}

std::string chunks_hash(const std::vector<Chunk>& chunks) {
    std::uint64_t h = text::fnv1a("chunks");
    for (const auto& c : chunks) h = text::fnv1a(io::chunk_to_json(c).dump(), h);
    return text::hex64(h);
}

Corpora build_corpora(const std::vector<Document>& docs, const PipelineConfig& config,
                      std::shared_ptr<const CompletionClient> client, const PromptTemplates& templates) {
    if (config.summarizer.mode == SummarizerMode::model && !client) {
        throw ConfigError("the model summarizer needs a completion client");
    }
    Summarizer summarizer(config.summarizer, std::move(client), templates);
    Corpora c;
    c.bm25 = build_corpus(docs, config.bm25_strategy, summarizer);
    c.embedding = build_corpus(docs, config.embedding_strategy, summarizer);
    c.build_tokens = summarizer.tokens_used();
    return c;
}

void save_corpora(const std::filesystem::path& dir, const std::string& key, const Corpora& corpora) {
    std::filesystem::create_directories(dir);
    io::write_chunks_jsonl(dir / "corpus_bm25.jsonl", corpora.bm25);
    io::write_chunks_jsonl(dir / "corpus_embedding.jsonl", corpora.embedding);
    const nlohmann::json meta{{"version", kCacheFormatVersion},
                              {"key", key},
                              {"build_tokens", corpora.build_tokens},
                              {"bm25_hash", chunks_hash(corpora.bm25)},
                              {"embedding_hash", chunks_hash(corpora.embedding)}};
    write_atomically(dir / "corpus_meta.json", meta.dump(2) + "\n");
}

std::optional<Corpora> load_corpora(const std::filesystem::path& dir, const std::string& key) {
    const auto meta_file = dir / "corpus_meta.json";
    if (!std::filesystem::exists(meta_file)) return std::nullopt;
    try {
        const auto meta = io::read_json_file(meta_file);
        if (meta.value("version", 0) != kCacheFormatVersion || meta.value("key", "") != key) return std::nullopt;
        Corpora c;
        c.bm25 = io::read_chunks_jsonl(dir / "corpus_bm25.jsonl");
        c.embedding = io::read_chunks_jsonl(dir / "corpus_embedding.jsonl");
        c.build_tokens = meta.at("build_tokens").get<std::size_t>();
        if (chunks_hash(c.bm25) != meta.at("bm25_hash").get<std::string>() ||
            chunks_hash(c.embedding) != meta.at("embedding_hash").get<std::string>()) {
            spdlog::warn("corpus cache in {} is corrupt; rebuilding", dir.string());
            return std::nullopt;
        }
        return c;
    } catch (const std::exception& e) {
        spdlog::warn("ignoring unreadable corpus cache in {}: {}", dir.string(), e.what());
        return std::nullopt;
    }
}

Corpora load_or_build_corpora(const std::filesystem::path& dir, const std::vector<Document>& docs,
                              const PipelineConfig& config, std::shared_ptr<const CompletionClient> client,
                              const PromptTemplates& templates, bool* from_cache) {
    const auto key = corpus_key(docs, config, templates);
    if (auto cached = load_corpora(dir, key)) {
        if (from_cache) *from_cache = true;
        return *std::move(cached);
    }
    if (from_cache) *from_cache = false;
    Corpora c = build_corpora(docs, config, std::move(client), templates);
    save_corpora(dir, key, c);
    return c;
}

void save_bm25_index(const std::filesystem::path& file, const Bm25Index& index, const std::string& key) {
    std::ostringstream out;
    out << kBm25Magic << '\t' << kCacheFormatVersion << '\t' << key << '\t' << format_double(index.params().k1)
        << '\t' << format_double(index.params().b) << '\n';
    out << "chunks\t" << index.chunk_count() << '\n';
    for (std::size_t i = 0; i < index.chunk_count(); ++i) {
        out << index.chunk_ids()[i] << '\t' << index.doc_ids()[i] << '\t' << index.lengths()[i] << '\n';
    }
    out << "terms\t" << index.postings().size() << '\n';
    for (const auto& [term, postings] : index.postings()) {
        out << term;
        for (const auto& p : postings) out << '\t' << p.chunk << ':' << p.tf;
        out << '\n';
    }
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    write_atomically(file, out.str());
}

std::optional<Bm25Index> load_bm25_index(const std::filesystem::path& file, const std::string& key) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;
    std::string line;
    std::vector<std::string> f;
    if (!std::getline(in, line) || !header_ok(line, kBm25Magic, key, f) || f.size() != 5) return std::nullopt;
    Bm25Params params;
    std::size_t count = 0;
    if (!parse_number(f[3], params.k1) || !parse_number(f[4], params.b)) return std::nullopt;
    if (!std::getline(in, line) || (f = split_tabs(line)).size() != 2 || f[0] != "chunks" ||
        !parse_number(f[1], count)) {
        return std::nullopt;
    }
    std::vector<std::string> chunk_ids, doc_ids;
    std::vector<std::uint32_t> lengths;
    for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t len = 0;
        if (!std::getline(in, line) || (f = split_tabs(line)).size() != 3 || !parse_number(f[2], len)) {
            return std::nullopt;
        }
        chunk_ids.push_back(f[0]);
        doc_ids.push_back(f[1]);
        lengths.push_back(len);
    }
    std::size_t terms = 0;
    if (!std::getline(in, line) || (f = split_tabs(line)).size() != 2 || f[0] != "terms" ||
        !parse_number(f[1], terms)) {
        return std::nullopt;
    }
    std::map<std::string, std::vector<Posting>> postings;
    for (std::size_t t = 0; t < terms; ++t) {
        if (!std::getline(in, line)) return std::nullopt;
        f = split_tabs(line);
        auto& list = postings[f[0]];
        for (std::size_t i = 1; i < f.size(); ++i) {
            const auto colon = f[i].find(':');
            Posting p;
            if (colon == std::string::npos || !parse_number(std::string_view(f[i]).substr(0, colon), p.chunk) ||
                !parse_number(std::string_view(f[i]).substr(colon + 1), p.tf) || p.chunk >= count) {
                return std::nullopt;
            }
            list.push_back(p);
        }
    }
    try {
        return Bm25Index(params, std::move(chunk_ids), std::move(doc_ids), std::move(lengths), std::move(postings));
    } catch (const Error&) {
        return std::nullopt;
    }
}

void save_embedding_index(const std::filesystem::path& file, const EmbeddingIndex& index, const std::string& key) {
    std::ostringstream out;
    out << kEmbeddingMagic << '\t' << kCacheFormatVersion << '\t' << key << '\t' << index.size() << '\t'
        << index.dim() << '\n';
    for (std::size_t i = 0; i < index.size(); ++i) {
        out << index.chunk_ids()[i] << '\t' << index.doc_ids()[i];
        const auto row = index.vectors().row(static_cast<Eigen::Index>(i));
        for (Eigen::Index d = 0; d < index.dim(); ++d) {
            if (row(d) != 0.0) out << '\t' << d << ':' << format_double(row(d));
        }
        out << '\n';
    }
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    write_atomically(file, out.str());
}

std::optional<EmbeddingIndex> load_embedding_index(const std::filesystem::path& file, const std::string& key) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return std::nullopt;
    std::string line;
    std::vector<std::string> f;
    if (!std::getline(in, line) || !header_ok(line, kEmbeddingMagic, key, f) || f.size() != 5) return std::nullopt;
    std::size_t rows = 0;
    Eigen::Index dim = 0;
    if (!parse_number(f[3], rows) || !parse_number(f[4], dim) || dim <= 0) return std::nullopt;
    EmbeddingIndex::Matrix m = EmbeddingIndex::Matrix::Zero(static_cast<Eigen::Index>(rows), dim);
    std::vector<std::string> chunk_ids, doc_ids;
    for (std::size_t i = 0; i < rows; ++i) {
        if (!std::getline(in, line) || (f = split_tabs(line)).size() < 2) return std::nullopt;
        chunk_ids.push_back(f[0]);
        doc_ids.push_back(f[1]);
        for (std::size_t k = 2; k < f.size(); ++k) {
            const auto colon = f[k].find(':');
            Eigen::Index d = 0;
            double v = 0;
            if (colon == std::string::npos || !parse_number(std::string_view(f[k]).substr(0, colon), d) ||
                !parse_number(std::string_view(f[k]).substr(colon + 1), v) || d < 0 || d >= dim) {
                return std::nullopt;
            }
            m(static_cast<Eigen::Index>(i), d) = v;
        }
    }
    try {
        return EmbeddingIndex(std::move(chunk_ids), std::move(doc_ids), std::move(m));
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace hetrag
