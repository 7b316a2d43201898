#include "hetrag/bm25.hpp"
#include "hetrag/embedding_index.hpp"
#include "hetrag/errors.hpp"
#include "hetrag/ranking.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
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

std::vector<oracle::TextChunk> as_text(const std::vector<Chunk>& chunks) {
    std::vector<oracle::TextChunk> out;
    for (const auto& c : chunks) out.push_back({c.doc_id, c.text});
    return out;
}

const std::vector<std::string> kPool{"electric", "sales", "revenue", "2013", "2014", "tesla", "growth",
                                     "q1", "q2", "city", "austin", "total", "buy", "margin", "cost"};

std::vector<Chunk> random_corpus(std::mt19937_64& rng, std::size_t max_chunks, std::size_t docs) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, max_chunks)(rng);
    std::vector<Chunk> out;
    std::map<std::string, int> order;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string doc = "d" + std::to_string(std::uniform_int_distribution<std::size_t>(0, docs - 1)(rng));
        std::string text;
        const int len = std::uniform_int_distribution<int>(1, 12)(rng);
        for (int w = 0; w < len; ++w) {
            text += kPool[std::uniform_int_distribution<std::size_t>(0, kPool.size() - 1)(rng)];
            text += w % 3 == 2 ? ", " : " ";
        }
        out.push_back(chunk(doc, order[doc]++, text));
    }
    return out;
}

std::string random_query(std::mt19937_64& rng) {
    std::string q;
    const int len = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < len; ++i) q += kPool[std::uniform_int_distribution<std::size_t>(0, kPool.size() - 1)(rng)] + " ";
    return q + "unknownterm";
}

RankedDocs ranked(const std::vector<std::string>& ids, RankSource s) {
    RankedDocs r;
    r.source = s;
    for (std::size_t i = 0; i < ids.size(); ++i) r.docs.push_back({ids[i], 1.0 / static_cast<double>(i + 1)});
    return r;
}

std::vector<std::string> id_range(const std::string& prefix, int from, int to) {
    std::vector<std::string> out;
    for (int i = from; i < to; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

}  // namespace

TEST(Bm25, AbsentTermGivesEmptyResult) {
    const auto idx = bm25_build({chunk("a", 0, "electric sales"), chunk("b", 0, "revenue growth")});
    EXPECT_TRUE(bm25_retrieve("zeppelin", idx, 10).empty());
}

TEST(Bm25, SingleDocument) {
    const auto idx = bm25_build({chunk("only", 0, "electric sales in 2014")});
    const auto r = bm25_retrieve("2014 sales", idx, 5);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r.docs[0].doc_id, "only");
    EXPECT_EQ(r.source, RankSource::bm25);
}

TEST(Bm25, ToyCorpusMatchesBruteForce) {
    const std::vector<Chunk> corpus{chunk("d1", 0, "Electric sales grew in 2014 and electric revenue followed."),
                                    chunk("d2", 0, "Sales of gasoline cars fell."),
                                    chunk("d3", 0, "The company opened a plant in Austin.")};
    const auto idx = bm25_build(corpus, 1.2, 0.75);
    const auto want = oracle::bm25_scores("electric sales", as_text(corpus), 1.2, 0.75);
    const auto got = idx.score_chunks("electric sales");
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-9);
    const auto r = bm25_retrieve("electric sales", idx, 3);
    EXPECT_EQ(r.ids(), (std::vector<std::string>{"d1", "d2"}));
    EXPECT_GT(r.docs[0].score, r.docs[1].score);
}

TEST(Bm25, RepeatedQueryTermsCountOnce) {
    const auto idx = bm25_build({chunk("a", 0, "sales sales up"), chunk("b", 0, "down")});
    EXPECT_EQ(idx.score_chunks("sales"), idx.score_chunks("sales Sales SALES"));
}

TEST(Bm25, IndexStatistics) {
    const auto idx = bm25_build({chunk("a", 0, "x y x"), chunk("b", 0, "y z")});
    EXPECT_EQ(idx.chunk_count(), 2u);
    EXPECT_DOUBLE_EQ(idx.average_length(), 2.5);
    EXPECT_EQ(idx.df("x"), 1u);
    EXPECT_EQ(idx.df("y"), 2u);
    EXPECT_EQ(idx.tf("x", 0), 2u);
    EXPECT_EQ(idx.tf("x", 1), 0u);
    EXPECT_NEAR(idx.idf("x"), std::log(1.0 + 1.5 / 1.5), 1e-12);
}

TEST(Bm25, RejectsBadInput) {
    EXPECT_THROW((void)bm25_build({}), ValidationError);
    EXPECT_THROW((void)bm25_build({chunk("a", 0, "x")}, 0.0, 0.75), ValidationError);
    EXPECT_THROW((void)bm25_build({chunk("a", 0, "x")}, 1.2, 1.5), ValidationError);
}

TEST(Bm25Property, AgreesWithBruteForceOnRandomCorpora) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const auto corpus = random_corpus(rng, 50, 12);
        const auto q = random_query(rng);
        const auto idx = bm25_build(corpus);
        const auto want_chunks = oracle::bm25_scores(q, as_text(corpus), 1.2, 0.75);
        const auto got_chunks = idx.score_chunks(q);
        for (std::size_t i = 0; i < corpus.size(); ++i) ASSERT_NEAR(got_chunks[i], want_chunks[i], 1e-9);

        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 15)(rng);
        const auto want = oracle::rank_docs(want_chunks, as_text(corpus), n);
        const auto got = bm25_retrieve(q, idx, n);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            EXPECT_EQ(got.docs[i].doc_id, want[i].first);
            EXPECT_NEAR(got.docs[i].score, want[i].second, 1e-9);
        }
    }
}

TEST(Embedding, IdenticalTextRanksFirstWithScoreOne) {
    const std::vector<Chunk> corpus{chunk("a", 0, "tesla electric sales 2014"), chunk("b", 0, "austin city hall"),
                                    chunk("b", 1, "electric city")};
    std::vector<std::string> texts;
    for (const auto& c : corpus) texts.push_back(c.text);
    const BowEmbedder emb(Vocabulary::from_texts(texts));
    const auto idx = EmbeddingIndex::build(corpus, emb);
    EXPECT_EQ(idx.dim(), emb.dim());
    const auto r = embed_retrieve("austin city hall", idx, 5, emb);
    ASSERT_FALSE(r.empty());
    EXPECT_EQ(r.docs[0].doc_id, "b");
    EXPECT_NEAR(r.docs[0].score, 1.0, 1e-12);
    EXPECT_EQ(r.source, RankSource::embedding);
    EXPECT_TRUE(embed_retrieve("zeppelin", idx, 5, emb).empty());
}

TEST(Embedding, DimensionMismatchIsConfigError) {
    const std::vector<Chunk> corpus{chunk("a", 0, "x y")};
    const BowEmbedder small(Vocabulary({"x", "y"}));
    const BowEmbedder big(Vocabulary({"x", "y", "z"}));
    const auto idx = EmbeddingIndex::build(corpus, small);
    EXPECT_THROW((void)embed_retrieve("x", idx, 1, big), ConfigError);
    EXPECT_THROW((void)idx.similarities(Eigen::VectorXd::Ones(5)), ConfigError);
}

TEST(Embedding, RowLookup) {
    const std::vector<Chunk> corpus{chunk("a", 0, "x"), chunk("a", 1, "y")};
    const auto idx = EmbeddingIndex::build(corpus, BowEmbedder(Vocabulary({"x", "y"})));
    EXPECT_EQ(idx.row_of("a#00001"), 1u);
    EXPECT_FALSE(idx.row_of("nope"));
}

TEST(EmbeddingProperty, AgreesWithExhaustiveCosine) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const auto corpus = random_corpus(rng, 200, 25);
        const auto vocab_set = oracle::vocabulary(as_text(corpus));
        const BowEmbedder emb(Vocabulary(std::vector<std::string>(vocab_set.begin(), vocab_set.end())));
        const auto idx = EmbeddingIndex::build(corpus, emb);
        const auto q = random_query(rng);
        std::vector<double> cos;
        for (const auto& c : corpus) cos.push_back(oracle::bow_cosine(q, c.text, vocab_set));
        const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
        const auto want = oracle::rank_docs(cos, as_text(corpus), m);
        const auto got = embed_retrieve(q, idx, m, emb);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < want.size(); ++i) {
            EXPECT_EQ(got.docs[i].doc_id, want[i].first);
            EXPECT_NEAR(got.docs[i].score, want[i].second, 1e-9);
        }
    }
}

TEST(RankDocuments, ScoresOneUlpApartAreTies) {
    const double s = 0.49074772881118184;
    const std::vector<double> scores{std::nextafter(s, 1.0), s, s, std::nextafter(s, 0.0), 0.4};
    const std::vector<std::string> docs{"doc_16", "doc_01", "doc_05", "doc_03", "doc_02"};
    const auto r = rank_documents(scores, docs, 4, RankSource::embedding);
    EXPECT_EQ(r.ids(), (std::vector<std::string>{"doc_01", "doc_03", "doc_05", "doc_16"}));
}

TEST(RankDocuments, MaxOverChunksAndTieByDocId) {
    const std::vector<double> scores{0.5, 2.0, 2.0, 0.0, 1.0};
    const std::vector<std::string> docs{"b", "b", "a", "c", "d"};
    const auto r = rank_documents(scores, docs, 10, RankSource::bm25);
    EXPECT_EQ(r.ids(), (std::vector<std::string>{"a", "b", "d"}));
    EXPECT_EQ(r.docs[1].score, 2.0);
    EXPECT_EQ(r.rank_of("d"), 3u);
    EXPECT_EQ(r.rank_of("c"), 0u);
    EXPECT_EQ(rank_documents(scores, docs, 1, RankSource::bm25).ids(), (std::vector<std::string>{"a"}));
}

TEST(Merge, SizeExamples) {
    EXPECT_EQ(ensemble_merge(ranked({"a", "b"}, RankSource::bm25), ranked({"c", "d", "e"}, RankSource::embedding)).size(),
              5u);
    const std::vector<std::string> four{"a", "b", "c", "d"};
    EXPECT_EQ(ensemble_merge(ranked(four, RankSource::bm25), ranked(four, RankSource::embedding)).size(), 4u);
    auto bm = id_range("x", 0, 39);
    bm.push_back("shared");
    auto em = id_range("y", 0, 59);
    em.insert(em.begin(), "shared");
    EXPECT_EQ(ensemble_merge(ranked(bm, RankSource::bm25), ranked(em, RankSource::embedding)).size(), 99u);
}

TEST(Merge, OrderAndScores) {
    const auto m = ensemble_merge(ranked({"b1", "shared", "b3"}, RankSource::bm25),
                                  ranked({"e1", "e2", "shared"}, RankSource::embedding));
    EXPECT_EQ(m.ids(), (std::vector<std::string>{"e1", "b1", "e2", "shared", "b3"}));
    EXPECT_EQ(m.source, RankSource::merged);
    EXPECT_DOUBLE_EQ(m.docs[0].score, 1.0);
    EXPECT_DOUBLE_EQ(m.docs[3].score, 0.5);
    EXPECT_DOUBLE_EQ(m.docs[4].score, 1.0 / 3.0);
}

TEST(MergeProperty, UnionOracleAndMonotoneSize) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<std::string> universe = id_range("d", 0, 30);
        std::shuffle(universe.begin(), universe.end(), rng);
        const auto nb = std::uniform_int_distribution<std::size_t>(0, 20)(rng);
        const std::vector<std::string> bm(universe.begin(), universe.begin() + static_cast<std::ptrdiff_t>(nb));
        std::shuffle(universe.begin(), universe.end(), rng);
        const auto ne = std::uniform_int_distribution<std::size_t>(0, 20)(rng);
        const std::vector<std::string> em(universe.begin(), universe.begin() + static_cast<std::ptrdiff_t>(ne));

        const auto merged = ensemble_merge(ranked(bm, RankSource::bm25), ranked(em, RankSource::embedding));
        const auto ids = merged.ids();
        EXPECT_EQ(ids, oracle::merge(bm, em));
        std::set<std::string> uni(bm.begin(), bm.end());
        uni.insert(em.begin(), em.end());
        EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()), uni);
        EXPECT_EQ(merged.size(), uni.size());

        if (nb > 0) {
            const std::vector<std::string> shorter(bm.begin(), bm.end() - 1);
            EXPECT_LE(ensemble_merge(ranked(shorter, RankSource::bm25), ranked(em, RankSource::embedding)).size(),
                      merged.size());
        }
        for (std::size_t i = 1; i < merged.size(); ++i) EXPECT_GE(merged.docs[i - 1].score, merged.docs[i].score);
    }
}
