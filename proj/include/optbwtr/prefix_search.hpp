#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optbwtr/extract.hpp"

namespace optbwtr {

/// Separates dictionary strings in the concatenated text. Reserved, like the
/// sentinel.
inline constexpr symbol_t kTerminator = 1;

/// d >= 1 non-empty strings free of the sentinel and terminator bytes.
class Dictionary {
public:
    /// Throws ReservedByteError (offset into the concatenation of the raw
    /// strings) or std::invalid_argument for empty input.
    explicit Dictionary(std::vector<std::string> strings);
    /// One string per line; a single trailing newline is ignored and CRLF
    /// endings are not stripped.
    static Dictionary from_lines(std::string_view content);

    idx_t size() const noexcept { return strings_.size(); }
    /// 1-based.
    const std::string& at(idx_t i) const { return strings_[i - 1]; }
    const std::vector<std::string>& strings() const noexcept { return strings_; }

    /// T_1 term T_2 term ... T_d term sentinel.
    Text concatenate() const;

private:
    std::vector<std::string> strings_;
};

/// Compact trie whose edge labels are bookmarks into the concatenated text.
/// Node 0 is the root; leaves are numbered left to right.
class CompactTrie {
public:
    struct Node {
        idx_t edge_mark = 0;      // bookmark index of the incoming edge label (0 at root)
        pos_t edge_length = 0;    // incoming label length
        symbol_t first = 0;       // first symbol of the incoming label
        idx_t child_begin = 0;    // range into children(), sorted by first symbol
        idx_t child_count = 0;
        idx_t leftmost_leaf = 0;
        idx_t rightmost_leaf = 0;
        idx_t leaf_count = 0;     // dictionary strings in the subtree

        friend bool operator==(const Node&, const Node&) = default;
    };
    struct Leaf {
        idx_t node = 0;
        idx_t string_begin = 0;   // range into leaf_strings(); >1 entry for duplicates
        idx_t string_end = 0;
        idx_t next = 0;           // next leaf to the right; leaf count when last

        friend bool operator==(const Leaf&, const Leaf&) = default;
    };

    CompactTrie() = default;
    static CompactTrie build(const Dictionary& dict);
    static CompactTrie from_parts(idx_t dictionary_size, std::vector<Node> nodes, std::vector<idx_t> children,
                                  std::vector<Leaf> leaves, std::vector<idx_t> leaf_strings, ExtractIndex labels);

    idx_t dictionary_size() const noexcept { return d_; }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<idx_t>& children() const noexcept { return children_; }
    const std::vector<Leaf>& leaves() const noexcept { return leaves_; }
    const std::vector<idx_t>& leaf_strings() const noexcept { return leaf_strings_; }
    const ExtractIndex& labels() const noexcept { return labels_; }

    /// Child of `node` whose label starts with c, if any.
    std::optional<idx_t> child(idx_t node, symbol_t c) const;
    /// Full label of the edge entering `node`, streamed from the bookmarks.
    std::string edge_label(idx_t node) const;

    /// Highest node whose string has P as a prefix. Extracted characters are
    /// counted in stats->char_lookups. Throws ReservedByteError on reserved
    /// bytes in P.
    std::optional<idx_t> locus(std::string_view pattern, QueryStats* stats = nullptr) const;
    /// 1-based indexes of the strings with prefix P, ascending.
    std::vector<idx_t> prefix_locate(std::string_view pattern, QueryStats* stats = nullptr) const;
    idx_t prefix_count(std::string_view pattern, QueryStats* stats = nullptr) const;

    friend bool operator==(const CompactTrie&, const CompactTrie&) = default;

private:
    idx_t d_ = 0;
    std::vector<Node> nodes_;
    std::vector<idx_t> children_;
    std::vector<Leaf> leaves_;
    std::vector<idx_t> leaf_strings_;
    ExtractIndex labels_;
};

}  // namespace optbwtr
