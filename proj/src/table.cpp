#include "hetrag/table.hpp"

#include "hetrag/errors.hpp"
#include "hetrag/text.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace hetrag {

std::string_view to_string(Orientation o) { return o == Orientation::top ? "top" : "left"; }

// ---- HeaderNode / HeaderTree ------------------------------------------------

HeaderNode::HeaderNode(std::string label, std::vector<HeaderNode> children)
    : label_(text::trim(label)), children_(std::move(children)) {
    if (label_.empty()) throw ValidationError("header label is empty");
}

void HeaderNode::assign_levels(int level) {
    level_ = level;
    for (auto& child : children_) child.assign_levels(level + 1);
}

std::size_t HeaderNode::node_count() const {
    std::size_t n = 1;
    for (const auto& c : children_) n += c.node_count();
    return n;
}

std::size_t HeaderNode::leaf_count() const {
    if (children_.empty()) return 1;
    std::size_t n = 0;
    for (const auto& c : children_) n += c.leaf_count();
    return n;
}

int HeaderNode::depth() const {
    int d = 0;
    for (const auto& c : children_) d = std::max(d, c.depth());
    return d + 1;
}

HeaderTree::HeaderTree(Orientation orientation, std::vector<HeaderNode> roots)
    : orientation_(orientation), roots_(std::move(roots)) {
    if (roots_.empty()) {
        throw ValidationError(std::string(to_string(orientation_)) + " header tree has no nodes");
    }
    depth_ = 0;
    for (auto& root : roots_) {
        root.assign_levels(1);
        depth_ = std::max(depth_, root.depth());
    }
}

std::size_t HeaderTree::leaf_count() const {
    std::size_t n = 0;
    for (const auto& r : roots_) n += r.leaf_count();
    return n;
}

std::size_t HeaderTree::node_count() const {
    std::size_t n = 0;
    for (const auto& r : roots_) n += r.node_count();
    return n;
}

std::string HeaderPath::joined() const { return text::join(labels, kPathSeparator); }

// ---- paths ----------------------------------------------------------------------

namespace {

struct SpanCollector {
    Orientation orientation;
    int level;  // 0 = collect leaves
    std::vector<HeaderSpan> out;
    std::vector<std::string> stack;
    std::size_t next_leaf = 0;

    void visit(const HeaderNode& node) {
        stack.push_back(node.label());
        const std::size_t first = next_leaf;
        const bool wanted = level == 0 ? node.is_leaf() : node.level() == level;
        std::size_t slot = out.size();
        if (wanted) out.push_back(HeaderSpan{HeaderPath{orientation, stack}, first, 0, node.is_leaf()});
        if (node.is_leaf()) {
            ++next_leaf;
        } else {
            for (const auto& child : node.children()) visit(child);
        }
        if (wanted) out[slot].leaf_count = next_leaf - first;
        stack.pop_back();
    }
};

std::vector<HeaderSpan> collect(const HeaderTree& tree, int level) {
    SpanCollector c{tree.orientation(), level, {}, {}, 0};
    for (const auto& root : tree.roots()) c.visit(root);
    return std::move(c.out);
}

std::vector<HeaderPath> paths_of(std::vector<HeaderSpan> spans) {
    std::vector<HeaderPath> out;
    out.reserve(spans.size());
    for (auto& s : spans) out.push_back(std::move(s.path));
    return out;
}

}  // namespace

std::vector<HeaderPath> leaf_paths(const HeaderTree& tree) { return paths_of(collect(tree, 0)); }

std::vector<HeaderSpan> level_spans(const HeaderTree& tree, int r) {
    if (r < 1 || r > tree.depth()) {
        throw std::out_of_range("level " + std::to_string(r) + " outside [1, " +
                                std::to_string(tree.depth()) + "]");
    }
    return collect(tree, r);
}

std::vector<HeaderPath> prefix_paths(const HeaderTree& tree, int r) {
    return paths_of(level_spans(tree, r));
}

// ---- cells --------------------------------------------------------------------------

namespace {

bool is_placeholder(const std::string& s) {
    static const std::array<std::string_view, 7> placeholders = {"", "-", "--", "n/a", "na", "\xE2\x80\x93",
                                                                 "\xE2\x80\x94"};
    const std::string lower = text::to_lower(s);
    return std::find(placeholders.begin(), placeholders.end(), lower) != placeholders.end();
}

bool erase_all(std::string& s, std::string_view what) {
    bool found = false;
    for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what)) {
        s.erase(pos, what.size());
        found = true;
    }
    return found;
}

}  // namespace

std::optional<NumericValue> parse_numeric(std::string_view raw) {
    std::string s = text::trim(raw);
    if (is_placeholder(s)) return std::nullopt;

    std::vector<std::string> units;
    bool negative = false;
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        negative = true;
        s = text::trim(std::string_view(s).substr(1, s.size() - 2));
    }
    static constexpr std::array<std::string_view, 4> currencies = {"$", "\xE2\x82\xAC", "\xC2\xA3",
                                                                   "\xC2\xA5"};
    for (auto cur : currencies) {
        if (erase_all(s, cur)) units.emplace_back(cur);
    }
    s = text::trim(s);
    if (!s.empty() && s.back() == '%') {
        s.pop_back();
        units.emplace_back("%");
    }
    static constexpr std::array<std::string_view, 3> scale_words = {"million", "billion", "thousand"};
    const std::string lower = text::to_lower(s);
    for (auto word : scale_words) {
        if (lower.size() > word.size() && lower.ends_with(word)) {
            s.resize(s.size() - word.size());
            units.emplace_back(word);
            break;
        }
    }
    erase_all(s, ",");
    s = text::trim(s);
    auto value = Decimal::parse(s);
    if (!value) return std::nullopt;
    if (negative) value = -*value;
    NumericValue out{*value, std::nullopt};
    if (!units.empty()) out.unit_hint = text::join(units, " ");
    return out;
}

Cell Cell::parse(std::string raw) {
    Cell cell;
    if (auto v = parse_numeric(raw)) {
        cell.numeric = v->value;
        cell.unit_hint = v->unit_hint;
    }
    cell.raw = std::move(raw);
    return cell;
}

// ---- table -------------------------------------------------------------------------

HierarchicalTable::HierarchicalTable(std::string table_id, std::optional<std::string> title,
                                     HeaderTree top, HeaderTree left,
                                     std::vector<std::vector<Cell>> data)
    : table_id_(std::move(table_id)),
      title_(std::move(title)),
      top_(std::move(top)),
      left_(std::move(left)),
      data_(std::move(data)) {
    if (table_id_.empty()) throw ValidationError("table_id is empty");
    if (top_.orientation() != Orientation::top || left_.orientation() != Orientation::left) {
        throw ValidationError("table " + table_id_ + ": header tree orientation mismatch");
    }
    top_leaves_ = leaf_paths(top_);
    left_leaves_ = leaf_paths(left_);
    if (data_.size() != left_leaves_.size()) {
        throw ValidationError("table " + table_id_ + ": " + std::to_string(data_.size()) +
                              " data rows but " + std::to_string(left_leaves_.size()) +
                              " left leaf headers");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (data_[i].size() != top_leaves_.size()) {
            throw ValidationError("table " + table_id_ + ": row " + std::to_string(i) + " has " +
                                  std::to_string(data_[i].size()) + " cells, expected " +
                                  std::to_string(top_leaves_.size()));
        }
    }
}

const Cell& locate_cell(const HierarchicalTable& table, const HeaderPath& left_path,
                        const HeaderPath& top_path) {
    auto index_of = [&](const std::vector<HeaderPath>& leaves, const HeaderPath& p) {
        auto it = std::find_if(leaves.begin(), leaves.end(),
                               [&](const HeaderPath& l) { return l.labels == p.labels; });
        if (it == leaves.end()) {
            throw LookupError("table " + table.table_id() + ": no " +
                              std::string(to_string(p.orientation)) + " leaf path \"" + p.joined() +
                              "\"");
        }
        return static_cast<std::size_t>(it - leaves.begin());
    };
    const std::size_t i = index_of(table.left_leaf_paths(), left_path);
    const std::size_t j = index_of(table.top_leaf_paths(), top_path);
    return table.at(i, j);
}

HierarchicalTable flatten(const HierarchicalTable& table) {
    auto flat = [](const std::vector<HeaderPath>& leaves, Orientation o) {
        std::vector<HeaderNode> roots;
        roots.reserve(leaves.size());
        for (const auto& p : leaves) roots.emplace_back(p.joined());
        return HeaderTree(o, std::move(roots));
    };
    return HierarchicalTable(table.table_id(), table.title(),
                             flat(table.top_leaf_paths(), Orientation::top),
                             flat(table.left_leaf_paths(), Orientation::left), table.data());
}

}  // namespace hetrag
