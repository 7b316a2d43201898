#pragma once

#include "hetrag/decimal.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hetrag {

/// Separator between header labels in flattened labels and summary text.
inline constexpr std::string_view kPathSeparator = " | ";

enum class Orientation { top, left };

[[nodiscard]] std::string_view to_string(Orientation o);

/// One header label with its nested sub-headers. Levels are assigned by the
/// owning HeaderTree (roots are level 1).
class HeaderNode {
public:
    explicit HeaderNode(std::string label, std::vector<HeaderNode> children = {});

    [[nodiscard]] const std::string& label() const { return label_; }
    [[nodiscard]] const std::vector<HeaderNode>& children() const { return children_; }
    [[nodiscard]] int level() const { return level_; }
    [[nodiscard]] bool is_leaf() const { return children_.empty(); }

    [[nodiscard]] std::size_t node_count() const;
    [[nodiscard]] std::size_t leaf_count() const;
    [[nodiscard]] int depth() const;

private:
    friend class HeaderTree;
    void assign_levels(int level);

    std::string label_;
    std::vector<HeaderNode> children_;
    int level_ = 1;
};

class HeaderTree {
public:
    HeaderTree(Orientation orientation, std::vector<HeaderNode> roots);

    [[nodiscard]] Orientation orientation() const { return orientation_; }
    [[nodiscard]] const std::vector<HeaderNode>& roots() const { return roots_; }
    /// Maximum level over all nodes (R_t or R_l).
    [[nodiscard]] int depth() const { return depth_; }
    [[nodiscard]] std::size_t leaf_count() const;
    [[nodiscard]] std::size_t node_count() const;

private:
    Orientation orientation_;
    std::vector<HeaderNode> roots_;
    int depth_ = 1;
};

/// Root-to-node label chain. A full-depth path addresses one data row/column;
/// a truncated one addresses a header node at level labels.size().
struct HeaderPath {
    Orientation orientation = Orientation::left;
    std::vector<std::string> labels;

    [[nodiscard]] std::size_t level() const { return labels.size(); }
    [[nodiscard]] std::string joined() const;

    friend bool operator==(const HeaderPath&, const HeaderPath&) = default;
};

/// A header node at some level together with the contiguous range of leaf
/// indices (DFS order) underneath it.
struct HeaderSpan {
    HeaderPath path;
    std::size_t first_leaf = 0;
    std::size_t leaf_count = 0;
    bool is_leaf = false;
};

struct NumericValue {
    Decimal value;
    std::optional<std::string> unit_hint;
};

/// Financial-table number reading: strips thousands separators and currency
/// symbols, takes a trailing "%" or scale word as unit hint (value unscaled),
/// reads "(123)" as -123. Placeholders ("", "-", "N/A") yield nullopt.
[[nodiscard]] std::optional<NumericValue> parse_numeric(std::string_view raw);

struct Cell {
    std::string raw;
    std::optional<Decimal> numeric;
    std::optional<std::string> unit_hint;

    [[nodiscard]] static Cell parse(std::string raw);
    friend bool operator==(const Cell&, const Cell&) = default;
};

/// T = {H_t, H_l, d}. Grid is m x n with m = left leaves, n = top leaves.
class HierarchicalTable {
public:
    HierarchicalTable(std::string table_id, std::optional<std::string> title, HeaderTree top,
                      HeaderTree left, std::vector<std::vector<Cell>> data);

    [[nodiscard]] const std::string& table_id() const { return table_id_; }
    [[nodiscard]] const std::optional<std::string>& title() const { return title_; }
    [[nodiscard]] const HeaderTree& top() const { return top_; }
    [[nodiscard]] const HeaderTree& left() const { return left_; }
    [[nodiscard]] const std::vector<std::vector<Cell>>& data() const { return data_; }
    [[nodiscard]] std::size_t rows() const { return data_.size(); }
    [[nodiscard]] std::size_t cols() const { return top_leaves_.size(); }
    [[nodiscard]] const Cell& at(std::size_t i, std::size_t j) const { return data_.at(i).at(j); }

    [[nodiscard]] const std::vector<HeaderPath>& top_leaf_paths() const { return top_leaves_; }
    [[nodiscard]] const std::vector<HeaderPath>& left_leaf_paths() const { return left_leaves_; }

private:
    std::string table_id_;
    std::optional<std::string> title_;
    HeaderTree top_;
    HeaderTree left_;
    std::vector<std::vector<Cell>> data_;
    std::vector<HeaderPath> top_leaves_;
    std::vector<HeaderPath> left_leaves_;
};

/// One path per leaf, left-to-right depth-first.
[[nodiscard]] std::vector<HeaderPath> leaf_paths(const HeaderTree& tree);

/// One truncated path per node at level r, DFS order. Throws std::out_of_range
/// unless 1 <= r <= depth.
[[nodiscard]] std::vector<HeaderPath> prefix_paths(const HeaderTree& tree, int r);

/// Nodes at level r with the leaf ranges they cover.
[[nodiscard]] std::vector<HeaderSpan> level_spans(const HeaderTree& tree, int r);

/// d_ij for the given full-depth leaf paths. Throws LookupError naming the missing path.
[[nodiscard]] const Cell& locate_cell(const HierarchicalTable& table, const HeaderPath& left_path,
                                      const HeaderPath& top_path);

/// Depth-1 copy whose labels are the joined leaf paths.
[[nodiscard]] HierarchicalTable flatten(const HierarchicalTable& table);

}  // namespace hetrag
