#include "hetrag/errors.hpp"
#include "hetrag/rerank.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

using namespace hetrag;

namespace {

Chunk chunk(const std::string& doc, int order, std::string text) {
    Chunk c;
    c.doc_id = doc;
    c.order = order;
    c.chunk_id = make_chunk_id(doc, order);
    c.text = std::move(text);
    return c;
}

// Scores chunks from a fixed table keyed by chunk id.
ChunkScorer table_scorer(std::map<std::string, double> scores) {
    return [scores = std::move(scores)](std::string_view, const Chunk& c) { return scores.at(c.chunk_id); };
}

RankedDocs ensemble(const std::vector<std::string>& ids) {
    RankedDocs r;
    for (std::size_t i = 0; i < ids.size(); ++i) r.docs.push_back({ids[i], 1.0 / static_cast<double>(i + 1)});
    return r;
}

std::vector<FilteredDocument> filtered(const std::vector<std::string>& ids) {
    std::vector<FilteredDocument> out;
    for (const auto& id : ids) out.push_back({id, {chunk(id, 0, "content of " + id)}});
    return out;
}

class FailingClient final : public CompletionClient {
public:
    std::string complete(const CompletionRequest&) const override { throw ClientError("down", true); }
};

}  // namespace

TEST(SelectTop, FiveChunksOfTenTokensBudget34) {
    CandidateDoc d{"d", {}};
    std::map<std::string, double> scores;
    for (int i = 0; i < 5; ++i) {
        d.chunks.push_back(chunk("d", i, std::string(40, 'a' + static_cast<char>(i))));
        scores[d.chunks.back().chunk_id] = 1.0 - 0.1 * i;
    }
    const auto sel = select_top("q", {d}, TokenBudget{34}, table_scorer(scores));
    EXPECT_EQ(sel.theta, 3u);
    EXPECT_EQ(sel.total_tokens, 30u);
    EXPECT_EQ(sel.selected, (std::vector<std::string>{"d#00000", "d#00001", "d#00002"}));
}

TEST(SelectTop, EverythingFitsInALargeBudget) {
    CandidateDoc a{"a", {chunk("a", 0, "one"), chunk("a", 1, "two two")}};
    CandidateDoc b{"b", {chunk("b", 0, "three")}};
    const auto sel = select_top("q", {a, b}, TokenBudget{1000},
                                table_scorer({{"a#00000", 0.1}, {"a#00001", 0.9}, {"b#00000", 0.5}}));
    EXPECT_EQ(sel.theta, 3u);
    EXPECT_EQ(sel.selected, (std::vector<std::string>{"a#00001", "b#00000", "a#00000"}));
}

TEST(SelectTop, TiesBreakByChunkId) {
    CandidateDoc b{"b", {chunk("b", 0, "x")}};
    CandidateDoc a{"a", {chunk("a", 0, "y")}};
    const auto sel = select_top("q", {b, a}, TokenBudget{10}, table_scorer({{"a#00000", 0.5}, {"b#00000", 0.5}}));
    EXPECT_EQ(sel.selected, (std::vector<std::string>{"a#00000", "b#00000"}));
}

TEST(SelectTop, EmptySelectionWhenFirstChunkDoesNotFit) {
    CandidateDoc d{"d", {chunk("d", 0, std::string(100, 'x'))}};
    EXPECT_THROW((void)select_top("q", {d}, TokenBudget{10}, table_scorer({{"d#00000", 1.0}})), EmptySelectionError);
    EXPECT_EQ(select_top("q", {}, TokenBudget{10}, table_scorer({})).theta, 0u);
}

TEST(SelectTopProperty, MaximalPrefixMatchesLinearScan) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<CandidateDoc> docs;
        std::map<std::string, double> scores;
        struct Item {
            double s;
            std::string id;
            std::size_t tokens;
        };
        std::vector<Item> items;
        const int nd = std::uniform_int_distribution<int>(1, 6)(rng);
        for (int d = 0; d < nd; ++d) {
            CandidateDoc doc{"doc" + std::to_string(d), {}};
            const int nc = std::uniform_int_distribution<int>(1, 8)(rng);
            for (int c = 0; c < nc; ++c) {
                const auto len = std::uniform_int_distribution<std::size_t>(1, 120)(rng);
                doc.chunks.push_back(chunk(doc.doc_id, c, std::string(len, 'w')));
                const double s = std::uniform_int_distribution<int>(0, 5)(rng) / 5.0;
                scores[doc.chunks.back().chunk_id] = s;
                items.push_back({s, doc.chunks.back().chunk_id, (len + 3) / 4});
            }
            docs.push_back(std::move(doc));
        }
        std::sort(items.begin(), items.end(),
                  [](const Item& a, const Item& b) { return a.s != b.s ? a.s > b.s : a.id < b.id; });
        const auto budget = std::uniform_int_distribution<std::size_t>(0, 200)(rng);
        std::size_t theta = 0, sum = 0;
        while (theta < items.size() && sum + items[theta].tokens <= budget) sum += items[theta++].tokens;

        if (theta == 0) {
            EXPECT_THROW((void)select_top("q", docs, TokenBudget{budget}, table_scorer(scores)), EmptySelectionError);
            continue;
        }
        const auto sel = select_top("q", docs, TokenBudget{budget}, table_scorer(scores));
        ASSERT_EQ(sel.theta, theta);
        EXPECT_EQ(sel.total_tokens, sum);
        EXPECT_LE(sel.total_tokens, budget);
        if (theta < items.size()) {
            EXPECT_GT(sum + items[theta].tokens, budget);
        }
        for (std::size_t i = 0; i < theta; ++i) EXPECT_EQ(sel.selected[i], items[i].id);
    }
}

TEST(Recombine, Examples) {
    CandidateDoc d{"d", {chunk("d", 0, "a"), chunk("d", 1, "b"), chunk("d", 2, "c")}};
    EXPECT_EQ(recombine(ChunkSelection{{"d#00002", "d#00000", "d#00001"}, 3, 3}, d).chunks, d.chunks);
    EXPECT_TRUE(recombine(ChunkSelection{{"x#00000"}, 1, 1}, d).chunks.empty());
    const auto r = recombine(ChunkSelection{{"d#00002", "x#00000", "d#00000"}, 3, 3}, d);
    ASSERT_EQ(r.chunks.size(), 2u);
    EXPECT_EQ(r.chunks[0].order, 0);
    EXPECT_EQ(r.chunks[1].order, 2);
    EXPECT_EQ(r.doc_id, "d");
}

TEST(RecombineProperty, KeepsOnlySelectedChunksInDocumentOrder) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        CandidateDoc d{"d", {}};
        const int n = std::uniform_int_distribution<int>(0, 12)(rng);
        for (int i = 0; i < n; ++i) d.chunks.push_back(chunk("d", i, "t"));
        std::shuffle(d.chunks.begin(), d.chunks.end(), rng);
        ChunkSelection sel;
        std::set<std::string> chosen;
        for (const auto& c : d.chunks) {
            if (rng() % 2 == 0) {
                sel.selected.push_back(c.chunk_id);
                chosen.insert(c.chunk_id);
            }
        }
        sel.selected.push_back("other#00000");
        std::shuffle(sel.selected.begin(), sel.selected.end(), rng);
        const auto r = recombine(sel, d);
        ASSERT_EQ(r.chunks.size(), chosen.size());
        for (std::size_t i = 0; i < r.chunks.size(); ++i) {
            EXPECT_TRUE(chosen.contains(r.chunks[i].chunk_id));
            if (i > 0) {
                EXPECT_LT(r.chunks[i - 1].order, r.chunks[i].order);
            }
        }
    }
}

TEST(ParseRerankIds, SanitizesAndDedupes) {
    const std::vector<std::string> known{"D2", "D7", "D9"};
    EXPECT_EQ(parse_rerank_ids("D7, D2, D9", known), (std::vector<std::string>{"D7", "D2", "D9"}));
    EXPECT_EQ(parse_rerank_ids("[D9] then d2 then D9 and D12", known), (std::vector<std::string>{"D9"}));
    EXPECT_EQ(parse_rerank_ids("1. D2\n2. `D7`.", known), (std::vector<std::string>{"D2", "D7"}));
    EXPECT_TRUE(parse_rerank_ids("The first document is best.", known).empty());
}

TEST(LlmRerank, ScriptedOrderThenRemainingCandidates) {
    const auto order = ensemble({"D1", "D2", "D7", "D9", "D4"});
    MockCompletionClient mock(std::vector<MockRule>{{{"most relevant"}, "D7, D2, D9"}});
    const auto out = llm_rerank("which?", filtered(order.ids()), mock, order);
    EXPECT_EQ(out.ranking.ids(), (std::vector<std::string>{"D7", "D2", "D9", "D1", "D4"}));
    EXPECT_EQ(out.chosen, "D7");
    EXPECT_FALSE(out.fallback_used);
    EXPECT_EQ(out.issue, RerankIssue::none);
    EXPECT_EQ(out.ranking.source, RankSource::reranked);
    EXPECT_EQ(out.raw_model_text, "D7, D2, D9");
    EXPECT_GT(out.prompt_tokens, 0u);
    EXPECT_EQ(out.output_tokens, count_tokens("D7, D2, D9"));
}

TEST(LlmRerank, ProseFallsBackToEnsembleOrder) {
    const auto order = ensemble({"D1", "D2", "D3"});
    MockCompletionClient mock(std::vector<MockRule>{{{"most relevant"}, "I think the second one is probably right."}});
    const auto out = llm_rerank("which?", filtered(order.ids()), mock, order);
    EXPECT_EQ(out.ranking.ids(), order.ids());
    EXPECT_TRUE(out.fallback_used);
    EXPECT_EQ(out.issue, RerankIssue::rerank_parse);
    EXPECT_EQ(out.chosen, "D1");
}

TEST(LlmRerank, UnknownIdIsDropped) {
    const auto order = ensemble({"D1", "D2", "D3"});
    MockCompletionClient mock(std::vector<MockRule>{{{"most relevant"}, "D3, D99"}});
    const auto out = llm_rerank("which?", filtered(order.ids()), mock, order);
    EXPECT_EQ(out.ranking.ids(), (std::vector<std::string>{"D3", "D1", "D2"}));
    EXPECT_FALSE(out.fallback_used);
}

TEST(LlmRerank, ClientFailureFallsBack) {
    const auto order = ensemble({"D1", "D2"});
    const auto out = llm_rerank("which?", filtered(order.ids()), FailingClient{}, order);
    EXPECT_EQ(out.issue, RerankIssue::client_error);
    EXPECT_TRUE(out.fallback_used);
    EXPECT_EQ(out.ranking.ids(), order.ids());
}

TEST(LlmRerankProperty, OutputIsPermutationOfCandidates) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> ids;
        const int n = std::uniform_int_distribution<int>(1, 10)(rng);
        for (int i = 0; i < n; ++i) ids.push_back("D" + std::to_string(i));
        std::string reply;
        for (int i = 0; i < 6; ++i) reply += "D" + std::to_string(std::uniform_int_distribution<int>(0, 14)(rng)) + ", ";
        MockCompletionClient mock(std::vector<MockRule>{{{"most relevant"}, reply}});
        const auto out = llm_rerank("q", filtered(ids), mock, ensemble(ids));
        auto got = out.ranking.ids();
        std::sort(got.begin(), got.end());
        auto want = ids;
        std::sort(want.begin(), want.end());
        EXPECT_EQ(got, want);
    }
}

TEST(RerankPrompt, ListsNonEmptyDocumentsWithIds) {
    std::vector<FilteredDocument> docs{{"alpha", {chunk("alpha", 0, "Alpha text")}}, {"beta", {}}};
    const auto prompt = build_rerank_prompt("What is alpha?", docs);
    EXPECT_NE(prompt.find("What is alpha?"), std::string::npos);
    EXPECT_NE(prompt.find("id: alpha"), std::string::npos);
    EXPECT_NE(prompt.find("Alpha text"), std::string::npos);
    EXPECT_EQ(prompt.find("id: beta"), std::string::npos);
}
