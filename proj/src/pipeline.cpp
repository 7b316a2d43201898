#include "hetrag/pipeline.hpp"

#include "hetrag/errors.hpp"
#include "hetrag/http_clients.hpp"
#include "hetrag/json_io.hpp"
#include "hetrag/metrics.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

namespace hetrag {

std::string_view to_string(FailureReason r) {
    switch (r) {
        case FailureReason::none: return "none";
        case FailureReason::retrieval_empty: return "retrieval_empty";
        case FailureReason::rerank_parse: return "rerank_parse";
        case FailureReason::reasoning_parse: return "reasoning_parse";
        case FailureReason::client_error: return "client_error";
    }
    return "none";
}

Engine::Engine(PipelineConfig config, std::set<std::string> doc_ids, Corpora corpora,
               std::shared_ptr<const CompletionClient> completion, std::shared_ptr<const Embedder> embedder,
               PromptTemplates templates, std::optional<Bm25Index> bm25, std::optional<EmbeddingIndex> embedding)
    : config_(std::move(config)),
      doc_ids_(std::move(doc_ids)),
      corpora_(std::move(corpora)),
      completion_(std::move(completion)),
      embedder_(std::move(embedder)),
      templates_(std::move(templates)),
      bm25_(bm25 ? *std::move(bm25) : bm25_build(corpora_.bm25, config_.bm25.k1, config_.bm25.b)),
      embedding_(embedding ? *std::move(embedding) : EmbeddingIndex::build(corpora_.embedding, *embedder_)) {
    if (!completion_) throw ConfigError("engine needs a completion client");
    if (!embedder_) throw ConfigError("engine needs an embedder");
    if (embedding_.size() != corpora_.embedding.size()) {
        throw ConfigError("embedding index does not match the embedding corpus");
    }
    for (std::size_t i = 0; i < corpora_.embedding.size(); ++i) {
        embedding_chunks_by_doc_[corpora_.embedding[i].doc_id].push_back(i);
    }
}

RankedDocs Engine::ensemble(std::string_view question, std::size_t n, std::size_t m) const {
    RankedDocs bm25{{}, RankSource::bm25};
    RankedDocs emb{{}, RankSource::embedding};
    if (n > 0) bm25 = bm25_retrieve(question, bm25_, n);
    if (m > 0) emb = embed_retrieve(question, embedding_, m, *embedder_);
    return ensemble_merge(bm25, emb);
}

void Engine::check_questions(const std::vector<QAPair>& qa) const {
    for (const auto& q : qa) {
        if (!doc_ids_.contains(q.gold_doc_id)) {
            throw ValidationError("question " + q.question_id + ": gold document '" + q.gold_doc_id +
                                  "' was not ingested");
        }
    }
}

QuestionRecord Engine::answer(const QAPair& qa) const {
    const auto start = std::chrono::steady_clock::now();
    QuestionRecord rec;
    rec.qa = qa;
    auto finish = [&]() -> QuestionRecord {
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return std::move(rec);
    };
    auto fail = [&](FailureReason reason, std::string detail) -> QuestionRecord {
        rec.failure = reason;
        rec.failure_detail = std::move(detail);
        rec.exact_match = false;
        return finish();
    };

    try {
        rec.merged = ensemble(qa.question);
    } catch (const ClientError& e) {
        return fail(FailureReason::client_error, e.what());
    }
    if (rec.merged.empty()) return fail(FailureReason::retrieval_empty, "no document scored above zero");

    auto chunks_of = [&](const std::string& doc_id) {
        std::vector<Chunk> out;
        if (auto it = embedding_chunks_by_doc_.find(doc_id); it != embedding_chunks_by_doc_.end()) {
            for (auto i : it->second) out.push_back(corpora_.embedding[i]);
        }
        return out;
    };

    // Stage two: budgeted chunk selection, then the model reranker.
    RerankOutcome outcome;
    try {
        const Eigen::VectorXd sims = embedding_.similarities(embedder_->embed(qa.question));
        std::vector<CandidateDoc> candidates;
        for (const auto& d : rec.merged.docs) candidates.push_back(CandidateDoc{d.doc_id, chunks_of(d.doc_id)});
        const ChunkScorer scorer = [&](std::string_view, const Chunk& c) {
            const auto row = embedding_.row_of(c.chunk_id);
            return row ? sims(static_cast<Eigen::Index>(*row)) : 0.0;
        };
        std::vector<FilteredDocument> filtered;
        try {
            const auto selection = select_top(qa.question, candidates, config_.rerank_budget, scorer);
            rec.theta = selection.theta;
            for (const auto& c : candidates) filtered.push_back(recombine(selection, c));
            outcome = llm_rerank(qa.question, filtered, *completion_, rec.merged, templates_,
                                 default_token_counter(), config_.max_retries);
        } catch (const EmptySelectionError& e) {
            spdlog::warn("question {}: {}; keeping ensemble order", qa.question_id, e.what());
            outcome = fallback_outcome(rec.merged, RerankIssue::none);
        }
    } catch (const ClientError& e) {
        return fail(FailureReason::client_error, e.what());
    }
    rec.ranking = outcome.ranking;
    rec.chosen_doc = outcome.chosen;
    rec.rerank_fallback = outcome.fallback_used;
    rec.rerank_issue = outcome.issue;
    rec.rerank_output = outcome.raw_model_text;
    rec.rerank_tokens = outcome.prompt_tokens + outcome.output_tokens;

    // Stage three: RECAP over the chosen document, with one re-prompt on a parse failure.
    const FilteredDocument chosen{rec.chosen_doc, chunks_of(rec.chosen_doc)};
    const std::string prompt = build_recap_prompt(qa.question, chosen, templates_);
    std::string last_error;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const std::string p = attempt == 0 ? prompt : prompt + "\n\n" + templates_.get("recap_retry");
        std::string reply;
        try {
            reply = complete_with_retry(*completion_, CompletionRequest{p, 1024, true}, config_.max_retries);
        } catch (const ClientError& e) {
            rec.reasoning_tokens += count_tokens(p);
            return fail(FailureReason::client_error, e.what());
        }
        rec.reasoning_tokens += count_tokens(p) + count_tokens(reply);
        rec.recap_outputs.push_back(reply);
        try {
            RecapTrace trace = parse_recap_output(reply);
            finalize_trace(trace, config_.agreement_tolerance);
            rec.answer = trace.selected_answer;
            rec.trace = std::move(trace);
            break;
        } catch (const ParseError& e) {
            last_error = e.what();
        }
    }
    if (!rec.trace) return fail(FailureReason::reasoning_parse, last_error);
    rec.exact_match = exact_match(rec.answer, qa.gold_answer);
    return finish();
}

std::shared_ptr<const CompletionClient> make_completion_client(const PipelineConfig& config) {
    if (config.completion == CompletionBackend::http) {
        return std::make_shared<HttpCompletionClient>(HttpEndpoint::from_env(config.completion_model));
    }
    try {
        return std::make_shared<MockCompletionClient>(io::load_mock_script(config.mock_script));
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("mock script: ") + e.what());
    }
}

std::shared_ptr<const Embedder> make_embedder(const PipelineConfig& config, const Corpora& corpora) {
    if (config.embedder == EmbedderBackend::http) {
        return std::make_shared<HttpEmbedder>(HttpEndpoint::from_env(config.embedding_model));
    }
    std::vector<std::string> texts;
    texts.reserve(corpora.embedding.size());
    for (const auto& c : corpora.embedding) texts.push_back(c.text);
    return std::make_shared<BowEmbedder>(Vocabulary::from_texts(texts));
}

PromptTemplates load_templates(const PipelineConfig& config) {
    return config.templates_dir ? PromptTemplates::load(*config.templates_dir) : PromptTemplates{};
}

Engine open_engine(const PipelineConfig& config, EngineBuildInfo* info) {
    config.validate();
    const auto docs = io::load_documents(config.docs_dir);
    if (docs.empty()) throw ValidationError("no documents found in " + config.docs_dir.string());
    std::set<std::string> ids;
    for (const auto& d : docs) ids.insert(d.doc_id);

    const auto templates = load_templates(config);
    auto completion = make_completion_client(config);
    EngineBuildInfo local;
    Corpora corpora = load_or_build_corpora(config.cache_dir, docs, config, completion, templates,
                                            &local.corpora_from_cache);
    auto embedder = make_embedder(config, corpora);

    const auto bm25_key = chunks_hash(corpora.bm25) + "-" + std::to_string(config.bm25.k1) + "-" +
                          std::to_string(config.bm25.b);
    auto bm25 = load_bm25_index(config.cache_dir / "bm25.idx", bm25_key);
    local.bm25_from_cache = bm25.has_value();
    if (!bm25) {
        bm25 = bm25_build(corpora.bm25, config.bm25.k1, config.bm25.b);
        save_bm25_index(config.cache_dir / "bm25.idx", *bm25, bm25_key);
    }

    const auto emb_key = chunks_hash(corpora.embedding) + "-" + embedder->id();
    auto emb = load_embedding_index(config.cache_dir / "embedding.idx", emb_key);
    local.embedding_from_cache = emb.has_value();
    if (!emb) {
        emb = EmbeddingIndex::build(corpora.embedding, *embedder);
        save_embedding_index(config.cache_dir / "embedding.idx", *emb, emb_key);
    }
    if (info) *info = local;
    return Engine(config, std::move(ids), std::move(corpora), std::move(completion), std::move(embedder),
                  templates, std::move(bm25), std::move(emb));
}

Aggregates compute_aggregates(const std::vector<QuestionRecord>& records, const std::vector<std::size_t>& k_list,
                              std::size_t corpus_build_tokens) {
    if (records.empty()) throw MetricError("no question records to aggregate");
    Aggregates a;
    a.questions = records.size();
    const double n = static_cast<double>(records.size());

    std::vector<HitRecord> hits;
    std::size_t matched = 0, contained = 0, gen_tokens = 0;
    std::vector<double> seconds;
    std::map<std::string, std::size_t> failures;
    for (auto r : {FailureReason::retrieval_empty, FailureReason::rerank_parse, FailureReason::reasoning_parse,
                   FailureReason::client_error}) {
        failures[std::string(to_string(r))] = 0;
    }
    for (const auto& r : records) {
        hits.push_back(HitRecord{r.ranking.ids(), r.qa.gold_doc_id});
        matched += r.exact_match ? 1 : 0;
        contained += r.gold_contained() ? 1 : 0;
        gen_tokens += r.generation_tokens();
        seconds.push_back(r.seconds);
        if (r.failure != FailureReason::none) ++failures[std::string(to_string(r.failure))];
        if (r.failure == FailureReason::none && r.rerank_issue == RerankIssue::rerank_parse) {
            ++failures["rerank_parse"];
        }
    }
    for (auto k : k_list) a.hit_at_k.emplace_back(k, hit_at_k(hits, k));
    a.exact_match = static_cast<double>(matched) / n;
    a.gold_containment = static_cast<double>(contained) / n;
    a.corpus_build_tokens = corpus_build_tokens;
    a.mean_preprocessing_tokens = static_cast<double>(corpus_build_tokens) / n;
    a.mean_generation_tokens = static_cast<double>(gen_tokens) / n;
    double total = 0;
    for (double s : seconds) total += s;
    a.mean_seconds = total / n;
    std::sort(seconds.begin(), seconds.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * n));
    a.p95_seconds = seconds[std::max<std::size_t>(rank, 1) - 1];
    a.failures.assign(failures.begin(), failures.end());
    return a;
}

ExperimentReport run_pipeline(const Engine& engine, const std::vector<QAPair>& qa) {
    engine.check_questions(qa);
    ExperimentReport report;
    report.config = engine.config();
    report.records.resize(qa.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < qa.size(); i = next++) {
            report.records[i] = engine.answer(qa[i]);
        }
    };
    const std::size_t workers = std::min<std::size_t>(std::max<std::size_t>(engine.config().workers, 1),
                                                      std::max<std::size_t>(qa.size(), 1));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    std::sort(report.records.begin(), report.records.end(),
              [](const QuestionRecord& a, const QuestionRecord& b) { return a.qa.question_id < b.qa.question_id; });
    if (!report.records.empty()) {
        report.aggregates =
            compute_aggregates(report.records, engine.config().k_list, engine.corpora().build_tokens);
    }
    return report;
}

std::vector<QAPair> select_split(const std::vector<QAPair>& qa, const std::optional<std::string>& split) {
    if (!split || *split == "all") return qa;
    const Split s = split_from_string(*split);
    std::vector<QAPair> out;
    std::copy_if(qa.begin(), qa.end(), std::back_inserter(out), [&](const QAPair& q) { return q.split == s; });
    return out;
}

std::vector<GridRow> grid_search(const Engine& engine, const std::vector<QAPair>& qa,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& combos) {
    if (combos.empty()) throw ValidationError("grid search needs at least one (n, m) combination");
    if (qa.empty()) throw ValidationError("grid search needs at least one question");
    engine.check_questions(qa);
    std::vector<GridRow> rows;
    for (const auto& [n, m] : combos) {
        std::size_t total_k = 0, contained = 0;
        for (const auto& q : qa) {
            const auto merged = engine.ensemble(q.question, n, m);
            total_k += merged.size();
            contained += merged.rank_of(q.gold_doc_id) > 0 ? 1 : 0;
        }
        const double count = static_cast<double>(qa.size());
        rows.push_back(GridRow{n, m, static_cast<double>(total_k) / count, static_cast<double>(contained) / count});
    }
    return rows;
}

}  // namespace hetrag
