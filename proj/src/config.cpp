#include "hetrag/config.hpp"

#include "hetrag/errors.hpp"

#include <fstream>

namespace hetrag {

namespace {

using nlohmann::json;

const json& section(const json& j, const char* name) {
    static const json empty = json::object();
    if (!j.contains(name)) return empty;
    const json& s = j.at(name);
    if (!s.is_object()) throw ConfigError(std::string("config section '") + name + "' must be an object");
    return s;
}

template <typename T>
T get_or(const json& s, const char* key, T fallback) {
    if (!s.contains(key) || s.at(key).is_null()) return fallback;
    try {
        return s.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

std::size_t get_count(const json& s, const char* key, std::size_t fallback) {
    if (!s.contains(key)) return fallback;
    const json& v = s.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(std::string("config key '") + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const json& s, const char* key,
                              const std::filesystem::path& fallback = {}) {
    if (!s.contains(key)) return fallback;
    std::filesystem::path p(get_or<std::string>(s, key, ""));
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return (base / p).lexically_normal();
}

TableStrategy strategy(const json& s, const char* key, TableStrategy fallback) {
    if (!s.contains(key)) return fallback;
    try {
        return table_strategy_from_string(get_or<std::string>(s, key, ""));
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

void PipelineConfig::validate() const {
    if (n < 1) throw ConfigError("retrieval.n must be at least 1");
    if (m < 1) throw ConfigError("retrieval.m must be at least 1");
    if (!(bm25.k1 > 0)) throw ConfigError("retrieval.bm25_k1 must be positive");
    if (!(bm25.b >= 0 && bm25.b <= 1)) throw ConfigError("retrieval.bm25_b must lie in [0, 1]");
    if (rerank_budget.max_tokens == 0) throw ConfigError("rerank.max_input_tokens must be positive");
    if (!(agreement_tolerance >= 0)) throw ConfigError("reasoning.agreement_tolerance must be non-negative");
    if (max_retries < 0) throw ConfigError("clients.max_retries must be non-negative");
    if (k_list.empty()) throw ConfigError("eval.k_list must not be empty");
    for (auto k : k_list) {
        if (k < 1) throw ConfigError("eval.k_list entries must be at least 1");
    }
    if (workers < 1) throw ConfigError("eval.workers must be at least 1");
    if (completion == CompletionBackend::mock && mock_script.empty()) {
        throw ConfigError("clients.mock_script is required for the mock completion client");
    }
}

PipelineConfig config_from_json(const json& j, const std::filesystem::path& base) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    PipelineConfig c;
    c.docs_dir = resolve(base, j, "docs_dir");
    c.qa_file = resolve(base, j, "qa_file");
    c.cache_dir = resolve(base, j, "cache_dir", base.empty() ? "cache" : base / "cache");
    c.run_dir = resolve(base, j, "run_dir", base.empty() ? "runs" : base / "runs");
    if (j.contains("templates_dir")) c.templates_dir = resolve(base, j, "templates_dir");

    const json& r = section(j, "retrieval");
    c.n = get_count(r, "n", c.n);
    c.m = get_count(r, "m", c.m);
    c.bm25.k1 = get_or(r, "bm25_k1", c.bm25.k1);
    c.bm25.b = get_or(r, "bm25_b", c.bm25.b);

    const json& corpus = section(j, "corpus");
    c.bm25_strategy = strategy(corpus, "bm25_strategy", c.bm25_strategy);
    c.embedding_strategy = strategy(corpus, "embedding_strategy", c.embedding_strategy);
    const auto mode = get_or<std::string>(corpus, "summarizer", "template");
    if (mode == "template") {
        c.summarizer.mode = SummarizerMode::template_text;
    } else if (mode == "model") {
        c.summarizer.mode = SummarizerMode::model;
    } else {
        throw ConfigError("corpus.summarizer must be 'template' or 'model'");
    }
    c.summarizer.prompt_name = get_or(corpus, "summarizer_prompt", c.summarizer.prompt_name);

    c.rerank_budget.max_tokens = get_count(section(j, "rerank"), "max_input_tokens", c.rerank_budget.max_tokens);
    c.agreement_tolerance = get_or(section(j, "reasoning"), "agreement_tolerance", c.agreement_tolerance);

    const json& cl = section(j, "clients");
    const auto completion = get_or<std::string>(cl, "completion", "mock");
    if (completion == "mock") {
        c.completion = CompletionBackend::mock;
    } else if (completion == "http") {
        c.completion = CompletionBackend::http;
    } else {
        throw ConfigError("clients.completion must be 'mock' or 'http'");
    }
    c.mock_script = resolve(base, cl, "mock_script");
    c.completion_model = get_or(cl, "completion_model", c.completion_model);
    const auto embedder = get_or<std::string>(cl, "embedder", "bow");
    if (embedder == "bow") {
        c.embedder = EmbedderBackend::bow;
    } else if (embedder == "http") {
        c.embedder = EmbedderBackend::http;
    } else {
        throw ConfigError("clients.embedder must be 'bow' or 'http'");
    }
    c.embedding_model = get_or(cl, "embedding_model", c.embedding_model);
    c.max_retries = get_or(cl, "max_retries", c.max_retries);

    const json& ev = section(j, "eval");
    if (ev.contains("k_list")) {
        const json& ks = ev.at("k_list");
        if (!ks.is_array()) throw ConfigError("eval.k_list must be an array");
        c.k_list.clear();
        for (const auto& k : ks) {
            if (!k.is_number_integer() || k.get<long long>() < 1) {
                throw ConfigError("eval.k_list entries must be integers >= 1");
            }
            c.k_list.push_back(k.get<std::size_t>());
        }
    }
    c.workers = get_count(ev, "workers", c.workers);
    if (ev.contains("split") && !ev.at("split").is_null()) c.split = get_or<std::string>(ev, "split", "");

    c.validate();
    return c;
}

json config_to_json(const PipelineConfig& c) {
    json out{{"docs_dir", c.docs_dir.string()},
             {"qa_file", c.qa_file.string()},
             {"cache_dir", c.cache_dir.string()},
             {"run_dir", c.run_dir.string()},
             {"retrieval", {{"n", c.n}, {"m", c.m}, {"bm25_k1", c.bm25.k1}, {"bm25_b", c.bm25.b}}},
             {"corpus",
              {{"bm25_strategy", std::string(to_string(c.bm25_strategy))},
               {"embedding_strategy", std::string(to_string(c.embedding_strategy))},
               {"summarizer", c.summarizer.mode == SummarizerMode::model ? "model" : "template"},
               {"summarizer_prompt", c.summarizer.prompt_name}}},
             {"rerank", {{"max_input_tokens", c.rerank_budget.max_tokens}}},
             {"reasoning", {{"agreement_tolerance", c.agreement_tolerance}}},
             {"clients",
              {{"completion", c.completion == CompletionBackend::mock ? "mock" : "http"},
               {"mock_script", c.mock_script.string()},
               {"completion_model", c.completion_model},
               {"embedder", c.embedder == EmbedderBackend::bow ? "bow" : "http"},
               {"embedding_model", c.embedding_model},
               {"max_retries", c.max_retries}}},
             {"eval", {{"k_list", c.k_list}, {"workers", c.workers}}}};
    if (c.templates_dir) out["templates_dir"] = c.templates_dir->string();
    if (c.split) out["eval"]["split"] = *c.split;
    return out;
}

PipelineConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot open config " + file.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
    const auto base = std::filesystem::absolute(file).parent_path();
    return config_from_json(j, base);
}

}  // namespace hetrag
