// Independent reference implementations used by the unit and acceptance tests.
// Nothing here calls into the library except to convert oracle inputs into
// library types.
#pragma once

#include "hetrag/table.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// ---- header trees ---------------------------------------------------------------

struct TreeSpec {
    std::string label;
    std::vector<TreeSpec> children;
};

using Chain = std::vector<std::string>;

inline void collect_leaves(const TreeSpec& n, Chain& prefix, std::vector<Chain>& out) {
    prefix.push_back(n.label);
    if (n.children.empty()) out.push_back(prefix);
    for (const auto& c : n.children) collect_leaves(c, prefix, out);
    prefix.pop_back();
}

/// Every root-to-leaf chain, left to right.
inline std::vector<Chain> leaf_chains(const std::vector<TreeSpec>& roots) {
    std::vector<Chain> out;
    Chain prefix;
    for (const auto& r : roots) collect_leaves(r, prefix, out);
    return out;
}

inline void collect_level(const TreeSpec& n, int level, int r, Chain& prefix, std::vector<Chain>& out) {
    prefix.push_back(n.label);
    if (level == r) {
        out.push_back(prefix);
    } else {
        for (const auto& c : n.children) collect_level(c, level + 1, r, prefix, out);
    }
    prefix.pop_back();
}

/// Chains ending at a node of level r, DFS order.
inline std::vector<Chain> level_chains(const std::vector<TreeSpec>& roots, int r) {
    std::vector<Chain> out;
    Chain prefix;
    for (const auto& root : roots) collect_level(root, 1, r, prefix, out);
    return out;
}

inline int spec_depth(const TreeSpec& n) {
    int d = 0;
    for (const auto& c : n.children) d = std::max(d, spec_depth(c));
    return d + 1;
}

inline int forest_depth(const std::vector<TreeSpec>& roots) {
    int d = 0;
    for (const auto& r : roots) d = std::max(d, spec_depth(r));
    return d;
}

inline std::size_t spec_nodes(const TreeSpec& n) {
    std::size_t c = 1;
    for (const auto& k : n.children) c += spec_nodes(k);
    return c;
}

inline std::size_t forest_nodes(const std::vector<TreeSpec>& roots) {
    std::size_t c = 0;
    for (const auto& r : roots) c += spec_nodes(r);
    return c;
}

/// Leaves of the subtree whose root chain is `prefix` (or the leaf itself).
inline std::vector<std::size_t> covered_leaves(const std::vector<TreeSpec>& roots, const Chain& prefix) {
    std::vector<std::size_t> out;
    const auto leaves = leaf_chains(roots);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (leaves[i].size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), leaves[i].begin())) {
            out.push_back(i);
        }
    }
    return out;
}

inline hetrag::HeaderNode to_node(const TreeSpec& s) {
    std::vector<hetrag::HeaderNode> kids;
    for (const auto& c : s.children) kids.push_back(to_node(c));
    return hetrag::HeaderNode(s.label, std::move(kids));
}

inline hetrag::HeaderTree to_tree(hetrag::Orientation o, const std::vector<TreeSpec>& roots) {
    std::vector<hetrag::HeaderNode> nodes;
    for (const auto& r : roots) nodes.push_back(to_node(r));
    return hetrag::HeaderTree(o, std::move(nodes));
}

inline hetrag::HeaderPath to_path(hetrag::Orientation o, const Chain& c) { return hetrag::HeaderPath{o, c}; }

inline std::vector<TreeSpec> random_subforest(std::mt19937_64& rng, std::size_t leaves, int depth, int max_depth,
                                              bool flat) {
    static const char* pool[] = {"Total", "2013", "2014", "Q1", "Q2", "Revenue", "Cost", "East", "West", "Net"};
    // at the last allowed level every leaf is its own root
    const bool last = flat || depth >= max_depth;
    const std::size_t k = last ? leaves : std::uniform_int_distribution<std::size_t>(1, leaves)(rng);
    std::vector<std::size_t> parts(k, 1);
    for (std::size_t extra = leaves - k; extra > 0; --extra) {
        ++parts[std::uniform_int_distribution<std::size_t>(0, k - 1)(rng)];
    }
    std::vector<std::string> labels(std::begin(pool), std::end(pool));
    std::shuffle(labels.begin(), labels.end(), rng);
    std::vector<TreeSpec> out;
    for (std::size_t i = 0; i < k; ++i) {
        TreeSpec n{labels[i], {}};
        if (!last && (parts[i] > 1 || std::bernoulli_distribution(0.4)(rng))) {
            n.children = random_subforest(rng, parts[i], depth + 1, max_depth, flat);
        }
        out.push_back(std::move(n));
    }
    return out;
}

/// Random forest with 1..max_leaves leaves and depth at most `max_depth`.
/// Sibling labels are distinct; labels repeat across branches on purpose.
inline std::vector<TreeSpec> random_forest(std::mt19937_64& rng, std::size_t max_leaves, int max_depth,
                                           bool flat = false) {
    const std::size_t leaves = std::uniform_int_distribution<std::size_t>(1, max_leaves)(rng);
    return random_subforest(rng, leaves, 1, max_depth, flat);
}

inline std::string random_cell(std::mt19937_64& rng) {
    switch (std::uniform_int_distribution<int>(0, 7)(rng)) {
        case 0: return "-";
        case 1: return "(" + std::to_string(std::uniform_int_distribution<int>(1, 999)(rng)) + ")";
        case 2: return std::to_string(std::uniform_int_distribution<int>(0, 99)(rng)) + "." +
                       std::to_string(std::uniform_int_distribution<int>(0, 9)(rng)) + "%";
        case 3: return "$" + std::to_string(std::uniform_int_distribution<int>(1, 9)(rng)) + "," +
                       std::to_string(std::uniform_int_distribution<int>(100, 999)(rng));
        default: return std::to_string(std::uniform_int_distribution<int>(0, 5000)(rng));
    }
}

struct RandomTable {
    std::vector<TreeSpec> top;
    std::vector<TreeSpec> left;
    std::vector<std::vector<std::string>> raw;

    [[nodiscard]] hetrag::HierarchicalTable build(const std::string& id, std::optional<std::string> title = {}) const {
        std::vector<std::vector<hetrag::Cell>> cells;
        for (const auto& row : raw) {
            std::vector<hetrag::Cell> r;
            for (const auto& s : row) r.push_back(hetrag::Cell::parse(s));
            cells.push_back(std::move(r));
        }
        return hetrag::HierarchicalTable(id, std::move(title), to_tree(hetrag::Orientation::top, top),
                                         to_tree(hetrag::Orientation::left, left), std::move(cells));
    }
};

/// Up to 6x6 leaves, header depth up to 3.
inline RandomTable random_table(std::mt19937_64& rng, std::size_t max_dim = 6, int max_depth = 3,
                                bool flat = false) {
    RandomTable t;
    t.top = random_forest(rng, max_dim, max_depth, flat);
    t.left = random_forest(rng, max_dim, max_depth, flat);
    const auto rows = leaf_chains(t.left).size();
    const auto cols = leaf_chains(t.top).size();
    t.raw.assign(rows, std::vector<std::string>(cols));
    for (auto& row : t.raw) {
        for (auto& c : row) c = random_cell(rng);
    }
    return t;
}

// ---- BM25 -----------------------------------------------------------------------

inline std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        const auto u = static_cast<unsigned char>(ch);
        if (std::isalnum(u)) {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

struct TextChunk {
    std::string doc_id;
    std::string text;
};

/// Okapi BM25 score of every chunk, recounting the corpus from raw text.
inline std::vector<double> bm25_scores(const std::string& query, const std::vector<TextChunk>& corpus, double k1,
                                       double b) {
    const double n = static_cast<double>(corpus.size());
    std::vector<std::vector<std::string>> toks;
    double total = 0;
    for (const auto& c : corpus) {
        toks.push_back(words(c.text));
        total += static_cast<double>(toks.back().size());
    }
    const double avgdl = total / n;
    auto q = words(query);
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    std::vector<double> scores(corpus.size(), 0.0);
    for (const auto& t : q) {
        double df = 0;
        for (const auto& d : toks) df += std::count(d.begin(), d.end(), t) > 0 ? 1 : 0;
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        for (std::size_t i = 0; i < toks.size(); ++i) {
            const double tf = static_cast<double>(std::count(toks[i].begin(), toks[i].end(), t));
            if (tf == 0) continue;
            const double len = static_cast<double>(toks[i].size());
            scores[i] += idf * tf / (tf + k1 * (1.0 - b + b * len / avgdl));
        }
    }
    return scores;
}

/// Max chunk score per document, positive scores only, score desc then id asc.
inline std::vector<std::pair<std::string, double>> rank_docs(const std::vector<double>& chunk_scores,
                                                             const std::vector<TextChunk>& corpus, std::size_t n) {
    std::map<std::string, double> best;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        auto it = best.find(corpus[i].doc_id);
        if (it == best.end()) {
            best[corpus[i].doc_id] = chunk_scores[i];
        } else {
            it->second = std::max(it->second, chunk_scores[i]);
        }
    }
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [d, s] : best) {
        if (s > 0) out.emplace_back(d, s);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    // scores within a relative 1e-12 of a group's top score are ties, ordered by id
    std::size_t i = 0;
    while (i < out.size()) {
        std::size_t j = i;
        while (j < out.size() && out[j].second >= out[i].second * (1.0 - 1e-12)) ++j;
        std::sort(out.begin() + i, out.begin() + j, [](const auto& a, const auto& b) { return a.first < b.first; });
        i = j;
    }
    if (out.size() > n) out.resize(n);
    return out;
}

// ---- bag-of-words cosine ------------------------------------------------------------

/// Cosine of term-frequency vectors restricted to `vocab` (0 if either is zero).
inline double bow_cosine(const std::string& a, const std::string& b, const std::set<std::string>& vocab) {
    std::map<std::string, double> ta, tb;
    for (const auto& w : words(a)) {
        if (vocab.count(w)) ta[w] += 1;
    }
    for (const auto& w : words(b)) {
        if (vocab.count(w)) tb[w] += 1;
    }
    double dot = 0, na = 0, nb = 0;
    for (const auto& [w, v] : ta) {
        na += v * v;
        if (auto it = tb.find(w); it != tb.end()) dot += v * it->second;
    }
    for (const auto& [w, v] : tb) nb += v * v;
    if (na == 0 || nb == 0) return 0.0;
    return dot / std::sqrt(na * nb);
}

inline std::set<std::string> vocabulary(const std::vector<TextChunk>& corpus) {
    std::set<std::string> v;
    for (const auto& c : corpus) {
        for (const auto& w : words(c.text)) v.insert(w);
    }
    return v;
}

// ---- ensemble merge -----------------------------------------------------------

/// Union ordered by best rank; ties go to the embedding list, then doc id.
inline std::vector<std::string> merge(const std::vector<std::string>& bm25, const std::vector<std::string>& emb) {
    struct Entry {
        std::size_t rank;
        int list;  // 0 embedding, 1 bm25
        std::string id;
    };
    std::map<std::string, Entry> best;
    auto offer = [&](const std::vector<std::string>& ids, int list) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            Entry e{i + 1, list, ids[i]};
            auto it = best.find(ids[i]);
            if (it == best.end() || std::tie(e.rank, e.list) < std::tie(it->second.rank, it->second.list)) {
                best[ids[i]] = e;
            }
        }
    };
    offer(emb, 0);
    offer(bm25, 1);
    std::vector<Entry> all;
    for (const auto& [id, e] : best) all.push_back(e);
    std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.rank, a.list, a.id) < std::tie(b.rank, b.list, b.id);
    });
    std::vector<std::string> out;
    for (const auto& e : all) out.push_back(e.id);
    return out;
}

// ---- formulas -------------------------------------------------------------------

struct RandomExpr {
    std::string text;
    mpq_class value;
};

inline std::string decimal_text(long long units, int places) {
    std::string s = std::to_string(std::llabs(units));
    if (places > 0) {
        while (static_cast<int>(s.size()) <= places) s.insert(s.begin(), '0');
        s.insert(s.end() - places, '.');
    }
    return (units < 0 ? "-" : "") + s;
}

/// Well-formed expression over decimal literals in [-1e4, 1e4], depth <= max_depth,
/// with its exact rational value. Divisors are never zero.
inline RandomExpr random_expression(std::mt19937_64& rng, int max_depth) {
    auto literal = [&]() {
        const int places = std::uniform_int_distribution<int>(0, 3)(rng);
        long long scale = 1;
        for (int i = 0; i < places; ++i) scale *= 10;
        long long units = std::uniform_int_distribution<long long>(-10000 * scale, 10000 * scale)(rng);
        RandomExpr e{decimal_text(units, places), mpq_class(static_cast<long>(units), static_cast<long>(scale))};
        e.value.canonicalize();
        if (units < 0) e.text = "(" + e.text + ")";
        return e;
    };
    if (max_depth <= 1 || std::bernoulli_distribution(0.25)(rng)) return literal();
    RandomExpr l = random_expression(rng, max_depth - 1);
    RandomExpr r = random_expression(rng, max_depth - 1);
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
        case 0: return {"(" + l.text + " + " + r.text + ")", l.value + r.value};
        case 1: return {"(" + l.text + " - " + r.text + ")", l.value - r.value};
        case 2: return {"(" + l.text + " * " + r.text + ")", l.value * r.value};
        case 3:
            if (r.value == 0) return {"(" + l.text + " + " + r.text + ")", l.value + r.value};
            return {"(" + l.text + " / " + r.text + ")", l.value / r.value};
        default: return {"-(" + l.text + ")", -l.value};
    }
}

inline bool agrees_relative(double got, const mpq_class& want, double tol) {
    const double w = want.get_d();
    if (w == 0) return std::abs(got) <= tol;
    return std::abs(got - w) <= tol * std::abs(w);
}

}  // namespace oracle
