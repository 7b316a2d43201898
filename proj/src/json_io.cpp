#include "hetrag/json_io.hpp"

#include "hetrag/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace hetrag {

std::string_view to_string(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::dev: return "dev";
        case Split::test: return "test";
    }
    return "test";
}

Split split_from_string(std::string_view s) {
    if (s == "train") return Split::train;
    if (s == "dev") return Split::dev;
    if (s == "test") return Split::test;
    throw ValidationError("unknown split '" + std::string(s) + "'");
}

}  // namespace hetrag

namespace hetrag::io {

namespace {

const json& field(const json& j, const char* name, const std::string& where) {
    if (!j.is_object() || !j.contains(name)) {
        throw ValidationError(where + ": missing field '" + name + "'");
    }
    return j.at(name);
}

std::string string_field(const json& j, const char* name, const std::string& where) {
    const json& v = field(j, name, where);
    if (!v.is_string()) throw ValidationError(where + ": field '" + name + "' must be a string");
    return v.get<std::string>();
}

void check_identifier(const std::string& id, const std::string& where) {
    if (id.empty()) throw ValidationError(where + ": empty identifier");
    if (std::any_of(id.begin(), id.end(), [](char c) { return static_cast<unsigned char>(c) < 0x20; })) {
        throw ValidationError(where + ": identifier contains control characters");
    }
}

HeaderNode node_from_json(const json& j, const std::string& where) {
    std::vector<HeaderNode> children;
    if (j.contains("children")) {
        const json& c = j.at("children");
        if (!c.is_array()) throw ValidationError(where + ": 'children' must be an array");
        for (const auto& child : c) children.push_back(node_from_json(child, where));
    }
    return HeaderNode(string_field(j, "label", where), std::move(children));
}

HeaderTree tree_from_json(const json& j, Orientation o, const std::string& where) {
    if (!j.is_array()) throw ValidationError(where + ": header list must be an array");
    std::vector<HeaderNode> roots;
    for (const auto& n : j) roots.push_back(node_from_json(n, where));
    return HeaderTree(o, std::move(roots));
}

json node_to_json(const HeaderNode& n) {
    json children = json::array();
    for (const auto& c : n.children()) children.push_back(node_to_json(c));
    return json{{"label", n.label()}, {"children", std::move(children)}};
}

}  // namespace

HierarchicalTable table_from_json(const json& j) {
    const std::string id = string_field(j, "table_id", "table");
    check_identifier(id, "table");
    const std::string where = "table " + id;
    std::optional<std::string> title;
    if (j.contains("title") && !j.at("title").is_null()) title = string_field(j, "title", where);
    const json& data = field(j, "data", where);
    if (!data.is_array()) throw ValidationError(where + ": 'data' must be an array of rows");
    std::vector<std::vector<Cell>> grid;
    for (const auto& row : data) {
        if (!row.is_array()) throw ValidationError(where + ": every data row must be an array");
        std::vector<Cell> cells;
        for (const auto& v : row) {
            if (v.is_string()) {
                cells.push_back(Cell::parse(v.get<std::string>()));
            } else if (v.is_number()) {
                cells.push_back(Cell::parse(v.dump()));
            } else if (v.is_null()) {
                cells.push_back(Cell::parse(""));
            } else {
                throw ValidationError(where + ": data cells must be strings");
            }
        }
        grid.push_back(std::move(cells));
    }
    try {
        return HierarchicalTable(id, std::move(title), tree_from_json(field(j, "top", where), Orientation::top, where),
                                 tree_from_json(field(j, "left", where), Orientation::left, where),
                                 std::move(grid));
    } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

json table_to_json(const HierarchicalTable& t) {
    json top = json::array();
    for (const auto& n : t.top().roots()) top.push_back(node_to_json(n));
    json left = json::array();
    for (const auto& n : t.left().roots()) left.push_back(node_to_json(n));
    json data = json::array();
    for (const auto& row : t.data()) {
        json r = json::array();
        for (const auto& c : row) r.push_back(c.raw);
        data.push_back(std::move(r));
    }
    json out{{"table_id", t.table_id()}, {"top", std::move(top)}, {"left", std::move(left)}, {"data", std::move(data)}};
    if (t.title()) out["title"] = *t.title();
    return out;
}

Document document_from_json(const json& j) {
    Document doc;
    doc.doc_id = string_field(j, "doc_id", "document");
    check_identifier(doc.doc_id, "document");
    const std::string where = "document " + doc.doc_id;
    if (j.contains("passages")) {
        const json& p = j.at("passages");
        if (!p.is_array()) throw ValidationError(where + ": 'passages' must be an array");
        for (const auto& s : p) {
            if (!s.is_string()) throw ValidationError(where + ": passages must be strings");
            doc.passages.push_back(s.get<std::string>());
        }
    }
    if (j.contains("tables")) {
        const json& t = j.at("tables");
        if (!t.is_array()) throw ValidationError(where + ": 'tables' must be an array");
        std::set<std::string> ids;
        for (const auto& tj : t) {
            doc.tables.push_back(table_from_json(tj));
            if (!ids.insert(doc.tables.back().table_id()).second) {
                throw ValidationError(where + ": duplicate table_id '" + doc.tables.back().table_id() + "'");
            }
        }
    }
    validate(doc);
    return doc;
}

json document_to_json(const Document& doc) {
    json tables = json::array();
    for (const auto& t : doc.tables) tables.push_back(table_to_json(t));
    return json{{"doc_id", doc.doc_id}, {"passages", doc.passages}, {"tables", std::move(tables)}};
}

json read_json_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + file.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(file.string() + ": " + e.what());
    }
}

std::string read_text_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + file.string());
    out << content;
}

std::vector<Document> load_documents(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw ValidationError("document directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Document> docs;
    std::set<std::string> ids;
    for (const auto& f : files) {
        try {
            docs.push_back(document_from_json(read_json_file(f)));
        } catch (const ValidationError& e) {
            throw ValidationError(f.filename().string() + ": " + e.what());
        }
        if (!ids.insert(docs.back().doc_id).second) {
            throw ValidationError(f.filename().string() + ": duplicate doc_id '" + docs.back().doc_id + "'");
        }
    }
    return docs;
}

QAPair qa_from_json(const json& j) {
    QAPair qa;
    qa.question_id = string_field(j, "question_id", "qa record");
    check_identifier(qa.question_id, "qa record");
    const std::string where = "question " + qa.question_id;
    qa.question = string_field(j, "question", where);
    qa.gold_doc_id = string_field(j, "gold_doc_id", where);
    qa.gold_answer = string_field(j, "gold_answer", where);
    qa.split = split_from_string(j.contains("split") ? string_field(j, "split", where) : "test");
    if (qa.question.empty()) throw ValidationError(where + ": empty question");
    return qa;
}

std::vector<QAPair> load_qa(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + file.string());
    std::vector<QAPair> out;
    std::set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(qa_from_json(json::parse(line)));
        } catch (const json::parse_error& e) {
            throw ValidationError(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!ids.insert(out.back().question_id).second) {
            throw ValidationError(file.string() + ":" + std::to_string(line_no) + ": duplicate question_id");
        }
    }
    return out;
}

json chunk_to_json(const Chunk& c) {
    return json{{"chunk_id", c.chunk_id},
                {"doc_id", c.doc_id},
                {"text", c.text},
                {"kind", std::string(to_string(c.kind))},
                {"table_id", c.table_id ? json(*c.table_id) : json(nullptr)},
                {"level", c.level ? json(*c.level) : json(nullptr)},
                {"order", c.order}};
}

Chunk chunk_from_json(const json& j) {
    Chunk c;
    c.chunk_id = string_field(j, "chunk_id", "chunk");
    const std::string where = "chunk " + c.chunk_id;
    c.doc_id = string_field(j, "doc_id", where);
    c.text = string_field(j, "text", where);
    c.kind = chunk_kind_from_string(string_field(j, "kind", where));
    if (const json& t = field(j, "table_id", where); !t.is_null()) c.table_id = t.get<std::string>();
    if (const json& l = field(j, "level", where); !l.is_null()) c.level = l.get<int>();
    c.order = field(j, "order", where).get<int>();
    return c;
}

void write_chunks_jsonl(const std::filesystem::path& file, const std::vector<Chunk>& chunks) {
    std::string out;
    for (const auto& c : chunks) {
        out += chunk_to_json(c).dump();
        out += '\n';
    }
    write_text_file(file, out);
}

std::vector<Chunk> read_chunks_jsonl(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + file.string());
    std::vector<Chunk> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            out.push_back(chunk_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw ValidationError(file.string() + ": " + e.what());
        }
    }
    return out;
}

std::vector<MockRule> mock_script_from_json(const json& j) {
    if (!j.is_array()) throw ValidationError("mock script must be an array of {match, response}");
    std::vector<MockRule> rules;
    for (const auto& r : j) {
        MockRule rule;
        const json& m = field(r, "match", "mock rule");
        if (m.is_string()) {
            rule.all_of.push_back(m.get<std::string>());
        } else if (m.is_array()) {
            for (const auto& s : m) rule.all_of.push_back(s.get<std::string>());
        } else {
            throw ValidationError("mock rule: 'match' must be a string or array of strings");
        }
        rule.response = string_field(r, "response", "mock rule");
        rules.push_back(std::move(rule));
    }
    return rules;
}

std::vector<MockRule> load_mock_script(const std::filesystem::path& file) {
    return mock_script_from_json(read_json_file(file));
}

}  // namespace hetrag::io
