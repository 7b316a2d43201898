#include "hetrag/report.hpp"

#include "hetrag/errors.hpp"
#include "hetrag/json_io.hpp"

#include <cstdio>
#include <set>
#include <sstream>

namespace hetrag {

using nlohmann::json;

namespace {

json ranked_to_json(const RankedDocs& r) {
    json out = json::array();
    for (const auto& d : r.docs) out.push_back(json{{"doc_id", d.doc_id}, {"score", d.score}});
    return out;
}

RankedDocs ranked_from_json(const json& j, RankSource source) {
    RankedDocs r{{}, source};
    for (const auto& d : j) r.docs.push_back(ScoredDoc{d.at("doc_id").get<std::string>(), d.at("score").get<double>()});
    return r;
}

FailureReason failure_from_string(const std::string& s) {
    for (auto r : {FailureReason::none, FailureReason::retrieval_empty, FailureReason::rerank_parse,
                   FailureReason::reasoning_parse, FailureReason::client_error}) {
        if (to_string(r) == s) return r;
    }
    throw ValidationError("unknown failure reason '" + s + "'");
}

RerankIssue issue_from_string(const std::string& s) {
    for (auto r : {RerankIssue::none, RerankIssue::rerank_parse, RerankIssue::client_error}) {
        if (to_string(r) == s) return r;
    }
    throw ValidationError("unknown rerank issue '" + s + "'");
}

std::string fixed(double v, int places) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, v);
    return buf;
}

json config_echo(const PipelineConfig& c) {
    json j = config_to_json(c);
    // Output locations vary between runs of the same experiment.
    j.erase("run_dir");
    j.erase("cache_dir");
    return j;
}

}  // namespace

json trace_to_json(const RecapTrace& t) {
    return json{{"restatement", t.restatement},
                {"question_type", std::string(to_string(t.question_type))},
                {"evidence", t.evidence},
                {"formula", t.formula ? json(*t.formula) : json(nullptr)},
                {"llm_answer", t.llm_answer},
                {"calc_answer", t.calc_answer ? json(t.calc_answer->to_string()) : json(nullptr)},
                {"calc_error", t.calc_error ? json(*t.calc_error) : json(nullptr)},
                {"selected_answer", t.selected_answer},
                {"selection_reason", std::string(to_string(t.selection_reason))}};
}

json record_to_json(const QuestionRecord& r) {
    return json{{"question_id", r.qa.question_id},
                {"question", r.qa.question},
                {"split", std::string(to_string(r.qa.split))},
                {"gold_doc_id", r.qa.gold_doc_id},
                {"gold_answer", r.qa.gold_answer},
                {"merged", ranked_to_json(r.merged)},
                {"ranking", ranked_to_json(r.ranking)},
                {"chosen_doc", r.chosen_doc},
                {"theta", r.theta},
                {"rerank_fallback", r.rerank_fallback},
                {"rerank_issue", std::string(to_string(r.rerank_issue))},
                {"answer", r.answer},
                {"exact_match", r.exact_match},
                {"trace", r.trace ? trace_to_json(*r.trace) : json(nullptr)},
                {"rerank_tokens", r.rerank_tokens},
                {"reasoning_tokens", r.reasoning_tokens},
                {"generation_tokens", r.generation_tokens()},
                {"failure", std::string(to_string(r.failure))},
                {"failure_detail", r.failure_detail},
                {"seconds", r.seconds}};
}

json aggregates_to_json(const Aggregates& a) {
    json hits = json::object();
    json k_list = json::array();
    for (const auto& [k, v] : a.hit_at_k) {
        hits[std::to_string(k)] = v;
        k_list.push_back(k);
    }
    json failures = json::object();
    for (const auto& [name, count] : a.failures) failures[name] = count;
    return json{{"questions", a.questions},
                {"k_list", std::move(k_list)},
                {"hit_at_k", std::move(hits)},
                {"exact_match", a.exact_match},
                {"gold_containment", a.gold_containment},
                {"corpus_build_tokens", a.corpus_build_tokens},
                {"mean_preprocessing_tokens", a.mean_preprocessing_tokens},
                {"mean_generation_tokens", a.mean_generation_tokens},
                {"mean_seconds", a.mean_seconds},
                {"p95_seconds", a.p95_seconds},
                {"failures", std::move(failures)}};
}

Aggregates aggregates_from_json(const json& j) {
    Aggregates a;
    a.questions = j.at("questions").get<std::size_t>();
    for (const auto& k : j.at("k_list")) {
        const auto kk = k.get<std::size_t>();
        a.hit_at_k.emplace_back(kk, j.at("hit_at_k").at(std::to_string(kk)).get<double>());
    }
    a.exact_match = j.at("exact_match").get<double>();
    a.gold_containment = j.at("gold_containment").get<double>();
    a.corpus_build_tokens = j.at("corpus_build_tokens").get<std::size_t>();
    a.mean_preprocessing_tokens = j.at("mean_preprocessing_tokens").get<double>();
    a.mean_generation_tokens = j.at("mean_generation_tokens").get<double>();
    a.mean_seconds = j.at("mean_seconds").get<double>();
    a.p95_seconds = j.at("p95_seconds").get<double>();
    for (const auto& [name, count] : j.at("failures").items()) a.failures.emplace_back(name, count.get<std::size_t>());
    return a;
}

json report_to_json(const ExperimentReport& report) {
    json questions = json::array();
    for (const auto& r : report.records) questions.push_back(record_to_json(r));
    return json{{"config", config_echo(report.config)},
                {"aggregates", report.records.empty() ? json(nullptr) : aggregates_to_json(report.aggregates)},
                {"questions", std::move(questions)}};
}

std::vector<QuestionRecord> records_from_json(const json& report) {
    std::vector<QuestionRecord> out;
    for (const auto& q : report.at("questions")) {
        QuestionRecord r;
        r.qa.question_id = q.at("question_id").get<std::string>();
        r.qa.question = q.at("question").get<std::string>();
        r.qa.split = split_from_string(q.at("split").get<std::string>());
        r.qa.gold_doc_id = q.at("gold_doc_id").get<std::string>();
        r.qa.gold_answer = q.at("gold_answer").get<std::string>();
        r.merged = ranked_from_json(q.at("merged"), RankSource::merged);
        r.ranking = ranked_from_json(q.at("ranking"), RankSource::reranked);
        r.chosen_doc = q.at("chosen_doc").get<std::string>();
        r.theta = q.at("theta").get<std::size_t>();
        r.rerank_fallback = q.at("rerank_fallback").get<bool>();
        r.rerank_issue = issue_from_string(q.at("rerank_issue").get<std::string>());
        r.answer = q.at("answer").get<std::string>();
        r.exact_match = q.at("exact_match").get<bool>();
        r.rerank_tokens = q.at("rerank_tokens").get<std::size_t>();
        r.reasoning_tokens = q.at("reasoning_tokens").get<std::size_t>();
        r.failure = failure_from_string(q.at("failure").get<std::string>());
        r.failure_detail = q.at("failure_detail").get<std::string>();
        r.seconds = q.at("seconds").get<double>();
        out.push_back(std::move(r));
    }
    return out;
}

Aggregates recompute_aggregates(const json& report) {
    const auto& agg = report.at("aggregates");
    std::vector<std::size_t> k_list;
    for (const auto& k : agg.at("k_list")) k_list.push_back(k.get<std::size_t>());
    return compute_aggregates(records_from_json(report), k_list, agg.at("corpus_build_tokens").get<std::size_t>());
}

json strip_timing(const json& j) {
    if (j.is_object()) {
        json out = json::object();
        for (const auto& [key, value] : j.items()) {
            bool timing = false;
            for (const char* f : kTimingFields) timing = timing || key == f;
            if (!timing) out[key] = strip_timing(value);
        }
        return out;
    }
    if (j.is_array()) {
        json out = json::array();
        for (const auto& v : j) out.push_back(strip_timing(v));
        return out;
    }
    return j;
}

std::string format_report_table(const ExperimentReport& report) {
    std::ostringstream out;
    const auto& a = report.aggregates;
    out << "questions                  " << report.records.size() << "\n";
    if (report.records.empty()) return out.str();
    for (const auto& [k, v] : a.hit_at_k) {
        std::string label = "HiT@" + std::to_string(k);
        label.resize(27, ' ');
        out << label << fixed(100 * v, 2) << "%\n";
    }
    out << "EM                         " << fixed(100 * a.exact_match, 2) << "%\n";
    out << "gold containment           " << fixed(100 * a.gold_containment, 2) << "%\n";
    out << "corpus build tokens        " << a.corpus_build_tokens << "\n";
    out << "preprocessing tokens/q     " << fixed(a.mean_preprocessing_tokens, 1) << "\n";
    out << "generation tokens/q        " << fixed(a.mean_generation_tokens, 1) << "\n";
    out << "seconds/q (mean, p95)      " << fixed(a.mean_seconds, 4) << ", " << fixed(a.p95_seconds, 4) << "\n";
    for (const auto& [name, count] : a.failures) {
        std::string label = "failed: " + name;
        label.resize(27, ' ');
        out << label << count << "\n";
    }
    out << "\nquestion_id        hit@1  em  chosen             answer\n";
    for (const auto& r : report.records) {
        std::string id = r.qa.question_id;
        std::string chosen = r.chosen_doc;
        id.resize(std::max<std::size_t>(id.size() + 1, 19), ' ');
        chosen.resize(std::max<std::size_t>(chosen.size() + 1, 19), ' ');
        const bool hit = !r.ranking.empty() && r.ranking.docs.front().doc_id == r.qa.gold_doc_id;
        out << id << (hit ? "yes    " : "no     ") << (r.exact_match ? "yes " : "no  ") << chosen
            << (r.failure == FailureReason::none ? r.answer : "[" + std::string(to_string(r.failure)) + "]")
            << "\n";
    }
    return out.str();
}

void write_report(const std::filesystem::path& dir, const ExperimentReport& report) {
    std::filesystem::create_directories(dir);
    io::write_text_file(dir / "report.json", report_to_json(report).dump(2) + "\n");
    io::write_text_file(dir / "report.txt", format_report_table(report));
    std::string traces;
    for (const auto& r : report.records) {
        traces += json{{"question_id", r.qa.question_id},
                       {"rerank_output", r.rerank_output},
                       {"recap_outputs", r.recap_outputs},
                       {"trace", r.trace ? trace_to_json(*r.trace) : json(nullptr)}}
                      .dump();
        traces += '\n';
    }
    io::write_text_file(dir / "traces.jsonl", traces);
}

json grid_to_json(const std::vector<GridRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back(json{{"n", r.n}, {"m", r.m}, {"mean_k", r.mean_k}, {"containment", r.containment}});
    }
    return out;
}

std::string format_grid_table(const std::vector<GridRow>& rows) {
    std::ostringstream out;
    out << "   n    m   mean k   HiT rate\n";
    for (const auto& r : rows) {
        char line[96];
        std::snprintf(line, sizeof line, "%4zu %4zu %8.2f %10.4f\n", r.n, r.m, r.mean_k, r.containment);
        out << line;
    }
    return out.str();
}

}  // namespace hetrag
