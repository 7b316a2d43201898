#include "hetrag/representation.hpp"

#include "hetrag/errors.hpp"
#include "hetrag/text.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace hetrag {

Summarizer::Summarizer(SummarizerSpec spec, std::shared_ptr<const CompletionClient> client,
                       PromptTemplates templates, const TokenCounter& counter)
    : spec_(std::move(spec)), client_(std::move(client)), templates_(std::move(templates)),
      counter_(&counter) {
    if (spec_.mode == SummarizerMode::model && !client_) {
        throw ConfigError("model summarizer requires a completion client");
    }
}

std::string Summarizer::summarize(ChunkKind kind, const HierarchicalTable& table,
                                  std::string aggregated) const {
    if (spec_.mode == SummarizerMode::template_text) return aggregated;
    const std::string prompt = templates_.render(
        spec_.prompt_name, {{"table_title", table.title().value_or(table.table_id())},
                            {"kind", std::string(to_string(kind))},
                            {"summary", aggregated}});
    std::string reply = text::trim(complete_with_retry(*client_, CompletionRequest{prompt, 512, true}));
    tokens_.fetch_add(counter_->count(prompt) + counter_->count(reply));
    if (reply.empty()) {
        spdlog::warn("empty refinement for table {}, keeping aggregated summary", table.table_id());
        return aggregated;
    }
    return reply;
}

namespace {

Chunk table_chunk(const HierarchicalTable& table, ChunkKind kind, std::string text,
                  std::optional<int> level) {
    Chunk c;
    c.kind = kind;
    c.text = std::move(text);
    c.table_id = table.table_id();
    c.level = level;
    return c;
}

std::vector<std::string> joined_labels(const std::vector<HeaderPath>& paths) {
    std::vector<std::string> out;
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(p.joined());
    return out;
}

std::string join_labels(const std::vector<std::string>& a, std::size_t from,
                        const std::vector<std::string>& b) {
    std::vector<std::string> all(a.begin() + static_cast<std::ptrdiff_t>(from), a.end());
    all.insert(all.end(), b.begin(), b.end());
    return text::join(all, kPathSeparator);
}

// Aggregated text for one header node: its path, then every covered cell keyed
// by the rest of its own path plus the full opposite-axis leaf path.
std::string node_summary_text(const HierarchicalTable& table, const HeaderSpan& span) {
    const bool row = span.path.orientation == Orientation::left;
    const auto& own = row ? table.left_leaf_paths() : table.top_leaf_paths();
    const auto& other = row ? table.top_leaf_paths() : table.left_leaf_paths();
    const std::size_t depth = span.path.level();

    std::string out = (row ? "Row " : "Column ") + span.path.joined() + ": ";
    const std::size_t total = span.leaf_count * other.size();
    std::size_t written = 0;
    for (std::size_t a = span.first_leaf; a < span.first_leaf + span.leaf_count; ++a) {
        for (std::size_t b = 0; b < other.size(); ++b) {
            if (written == kMaxSummaryCells) break;
            const Cell& cell = row ? table.at(a, b) : table.at(b, a);
            if (written > 0) out += "; ";
            out += join_labels(own[a].labels, depth, other[b].labels);
            out += '=';
            out += cell.raw;
            ++written;
        }
    }
    if (total > written) {
        out += "; ... (+" + std::to_string(total - written) + " more cells; subtree spans " +
               std::to_string(span.leaf_count) + (row ? " rows x " : " columns x ") +
               std::to_string(other.size()) + (row ? " columns)" : " rows)");
    }
    return out;
}

std::vector<Chunk> rcl_chunks(const HierarchicalTable& table, const Summarizer& summarizer,
                              bool all_levels) {
    std::vector<Chunk> out;
    for (const HeaderTree* tree : {&table.left(), &table.top()}) {
        const auto kind =
            tree->orientation() == Orientation::left ? ChunkKind::row_summary : ChunkKind::col_summary;
        const int max_level = all_levels ? tree->depth() : 1;
        for (int r = 1; r <= max_level; ++r) {
            for (const auto& span : level_spans(*tree, r)) {
                out.push_back(table_chunk(table, kind,
                                          summarizer.summarize(kind, table, node_summary_text(table, span)),
                                          r));
            }
        }
    }
    return out;
}

}  // namespace

Chunk table_level_summary(const HierarchicalTable& table, const Summarizer& summarizer) {
    std::string aggregated;
    if (table.title() && !text::trim(*table.title()).empty()) {
        aggregated = "Table: " + text::trim(*table.title()) + std::string(kPathSeparator);
    }
    aggregated += "columns: " + text::join(joined_labels(table.top_leaf_paths()), kPathSeparator);
    aggregated += std::string(kPathSeparator) + "rows: " +
                  text::join(joined_labels(table.left_leaf_paths()), kPathSeparator);
    return table_chunk(table, ChunkKind::table_summary,
                       summarizer.summarize(ChunkKind::table_summary, table, std::move(aggregated)),
                       std::nullopt);
}

std::vector<Chunk> general_rcl_summary(const HierarchicalTable& table, const Summarizer& summarizer) {
    return rcl_chunks(flatten(table), summarizer, false);
}

std::vector<Chunk> hrcl_summary(const HierarchicalTable& table, const Summarizer& summarizer) {
    return rcl_chunks(table, summarizer, true);
}

// ---- passages -----------------------------------------------------------------------------

namespace {

const std::set<std::string>& abbreviations() {
    static const std::set<std::string> abbrevs = {
        "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "inc", "co", "corp", "ltd", "vs",
        "e.g", "i.e", "u.s", "u.k", "no", "fig", "approx", "est", "dept", "jan", "feb", "mar",
        "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec"};
    return abbrevs;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool ends_with_abbreviation(std::string_view s, std::size_t dot) {
    std::size_t b = dot;
    while (b > 0 && !is_space(s[b - 1])) --b;
    std::string word = text::to_lower(s.substr(b, dot - b));
    while (!word.empty() && (word.front() == '(' || word.front() == '"')) word.erase(word.begin());
    if (word.size() == 1 && std::isalpha(static_cast<unsigned char>(word[0])) != 0) return true;
    return abbreviations().contains(word);
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view passage) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < passage.size(); ++i) {
        const char c = passage[i];
        if (c != '.' && c != '!' && c != '?') continue;
        std::size_t j = i + 1;
        while (j < passage.size() && (passage[j] == '"' || passage[j] == '\'' || passage[j] == ')')) ++j;
        if (j >= passage.size() || !is_space(passage[j])) continue;
        std::size_t k = j;
        while (k < passage.size() && is_space(passage[k])) ++k;
        if (k >= passage.size()) continue;
        const auto next = static_cast<unsigned char>(passage[k]);
        if (std::isupper(next) == 0 && std::isdigit(next) == 0) continue;
        if (c == '.' && ends_with_abbreviation(passage, i)) continue;
        if (auto s = text::trim(passage.substr(start, j - start)); !s.empty()) out.push_back(std::move(s));
        start = k;
        i = k - 1;
    }
    if (auto s = text::trim(passage.substr(start)); !s.empty()) out.push_back(std::move(s));
    return out;
}

std::size_t word_count(std::string_view sentence) {
    std::size_t n = 0;
    std::size_t i = 0;
    while (i < sentence.size()) {
        while (i < sentence.size() && is_space(sentence[i])) ++i;
        bool has_content = false;
        while (i < sentence.size() && !is_space(sentence[i])) {
            if (std::ispunct(static_cast<unsigned char>(sentence[i])) == 0) has_content = true;
            ++i;
        }
        if (has_content) ++n;
    }
    return n;
}

std::vector<Chunk> process_passages(const Document& doc, const CorefResolver& resolver) {
    std::vector<Chunk> out;
    for (const auto& passage : doc.passages) {
        std::string resolved;
        try {
            resolved = resolver.resolve(passage);
        } catch (const std::exception& e) {
            spdlog::warn("coreference resolution failed for {} ({}); using passage as is", doc.doc_id,
                         e.what());
            resolved = passage;
        }
        for (auto& sentence : split_sentences(resolved)) {
            if (word_count(sentence) < kMinSentenceWords) continue;
            Chunk c;
            c.doc_id = doc.doc_id;
            c.kind = ChunkKind::sentence;
            c.text = std::move(sentence);
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<Chunk> build_corpus(const std::vector<Document>& docs, TableStrategy strategy,
                                const Summarizer& summarizer, const CorefResolver& resolver) {
    std::set<std::string> seen;
    for (const auto& d : docs) {
        validate(d);
        if (!seen.insert(d.doc_id).second) throw ValidationError("duplicate doc_id '" + d.doc_id + "'");
    }
    std::vector<Chunk> corpus;
    for (const auto& doc : docs) {
        std::vector<Chunk> chunks = process_passages(doc, resolver);
        for (const auto& table : doc.tables) {
            switch (strategy) {
                case TableStrategy::table_level:
                    chunks.push_back(table_level_summary(table, summarizer));
                    break;
                case TableStrategy::general_rcl: {
                    auto more = general_rcl_summary(table, summarizer);
                    chunks.insert(chunks.end(), more.begin(), more.end());
                    break;
                }
                case TableStrategy::hrcl: {
                    auto more = hrcl_summary(table, summarizer);
                    chunks.insert(chunks.end(), more.begin(), more.end());
                    break;
                }
            }
        }
        int order = 0;
        for (auto& c : chunks) {
            c.doc_id = doc.doc_id;
            c.order = order++;
            c.chunk_id = make_chunk_id(doc.doc_id, c.order);
            corpus.push_back(std::move(c));
        }
    }
    return corpus;
}

}  // namespace hetrag
