// Command-line front end: ingest, index, retrieve, answer, eval, grid.

#include "hetrag/errors.hpp"
#include "hetrag/json_io.hpp"
#include "hetrag/pipeline.hpp"
#include "hetrag/report.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <iostream>

namespace {

using namespace hetrag;

std::pair<std::size_t, std::size_t> parse_combo(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw ValidationError("combo must look like N,M: " + s);
    try {
        std::size_t used = 0;
        const auto n = std::stoul(s.substr(0, comma), &used);
        if (used != comma) throw std::invalid_argument(s);
        const auto rest = s.substr(comma + 1);
        const auto m = std::stoul(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(s);
        return {n, m};
    } catch (const std::logic_error&) {
        throw ValidationError("combo must look like N,M: " + s);
    }
}

void print_ranked(const RankedDocs& r) {
    for (std::size_t i = 0; i < r.docs.size(); ++i) {
        std::cout << (i + 1) << '\t' << r.docs[i].doc_id << '\t' << r.docs[i].score << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Retrieval and reasoning over documents with hierarchical tables"};
    app.require_subcommand(1);
    std::string config_path = "config.json";
    std::string log_level = "warn";
    app.add_option("-c,--config", config_path, "JSON config file")->capture_default_str();
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")->capture_default_str();

    auto* ingest = app.add_subcommand("ingest", "Validate documents and questions, build the corpus cache");
    auto* index = app.add_subcommand("index", "Build the BM25 and embedding indices");

    auto* retrieve = app.add_subcommand("retrieve", "Print the merged candidate documents for a question");
    std::string question;
    std::optional<std::size_t> n_opt, m_opt;
    retrieve->add_option("question", question)->required();
    retrieve->add_option("-n", n_opt, "BM25 depth (0 disables)");
    retrieve->add_option("-m", m_opt, "embedding depth (0 disables)");

    auto* answer = app.add_subcommand("answer", "Answer one question and print the trace");
    answer->add_option("question", question)->required();

    auto* eval = app.add_subcommand("eval", "Run the QA set and write a report");
    std::string out_dir;
    std::optional<std::string> split;
    eval->add_option("--out", out_dir, "report directory (default: run_dir from the config)");
    eval->add_option("--split", split, "train|dev|test|all");

    auto* grid = app.add_subcommand("grid", "Sweep (n, m) over the ensemble stage");
    std::vector<std::string> combos;
    std::string grid_out;
    grid->add_option("--combo", combos, "N,M pair; repeatable")->take_all();
    grid->add_option("--out", grid_out, "write grid.json and grid.txt into this directory");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::from_str(log_level));
    spdlog::set_default_logger(spdlog::default_logger());

    try {
        PipelineConfig config = load_config(config_path);
        if (*ingest) {
            const auto docs = io::load_documents(config.docs_dir);
            const auto qa = io::load_qa(config.qa_file);
            const auto templates = load_templates(config);
            bool cached = false;
            const auto corpora = load_or_build_corpora(config.cache_dir, docs, config, make_completion_client(config),
                                                       templates, &cached);
            std::set<std::string> ids;
            for (const auto& d : docs) ids.insert(d.doc_id);
            for (const auto& q : qa) {
                if (!ids.contains(q.gold_doc_id)) {
                    throw ValidationError("question " + q.question_id + ": unknown gold document " + q.gold_doc_id);
                }
            }
            std::cout << "documents        " << docs.size() << "\n"
                      << "questions        " << qa.size() << "\n"
                      << "bm25 chunks      " << corpora.bm25.size() << "\n"
                      << "embedding chunks " << corpora.embedding.size() << "\n"
                      << "build tokens     " << corpora.build_tokens << "\n"
                      << "cache            " << (cached ? "reused" : "rebuilt") << " (" << config.cache_dir.string()
                      << ")\n";
            return 0;
        }

        EngineBuildInfo info;
        const Engine engine = open_engine(config, &info);
        if (*index) {
            std::cout << "bm25 index       " << engine.bm25_index().chunk_count() << " chunks, "
                      << engine.bm25_index().postings().size() << " terms ("
                      << (info.bm25_from_cache ? "reused" : "rebuilt") << ")\n"
                      << "embedding index  " << engine.embedding_index().size() << " x "
                      << engine.embedding_index().dim() << " (" << (info.embedding_from_cache ? "reused" : "rebuilt")
                      << ")\n";
        } else if (*retrieve) {
            print_ranked(engine.ensemble(question, n_opt.value_or(config.n), m_opt.value_or(config.m)));
        } else if (*answer) {
            QAPair qa{"cli", question, "", "", Split::test};
            const auto rec = engine.answer(qa);
            nlohmann::json j = record_to_json(rec);
            for (const char* key : {"gold_doc_id", "gold_answer", "exact_match", "split"}) j.erase(key);
            std::cout << j.dump(2) << "\n";
        } else if (*eval) {
            if (split) config.split = split;
            const auto qa = select_split(io::load_qa(config.qa_file), config.split);
            const auto report = run_pipeline(engine, qa);
            const std::filesystem::path dir = out_dir.empty() ? config.run_dir : std::filesystem::path(out_dir);
            write_report(dir, report);
            std::cout << format_report_table(report) << "\nreport written to " << (dir / "report.json").string()
                      << "\n";
        } else if (*grid) {
            std::vector<std::pair<std::size_t, std::size_t>> parsed;
            for (const auto& c : combos) parsed.push_back(parse_combo(c));
            if (parsed.empty()) parsed = {{70, 30}, {60, 40}, {50, 50}, {40, 60}, {30, 70}};
            const auto qa = select_split(io::load_qa(config.qa_file), config.split);
            const auto rows = grid_search(engine, qa, parsed);
            const auto table = format_grid_table(rows);
            if (!grid_out.empty()) {
                io::write_text_file(std::filesystem::path(grid_out) / "grid.json", grid_to_json(rows).dump(2) + "\n");
                io::write_text_file(std::filesystem::path(grid_out) / "grid.txt", table);
            }
            std::cout << table;
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
