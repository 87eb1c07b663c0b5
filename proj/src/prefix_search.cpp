#include "optbwtr/prefix_search.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace optbwtr {

namespace {

void check_pattern(std::string_view pattern) {
    for (std::size_t k = 0; k < pattern.size(); ++k) {
        const auto c = static_cast<symbol_t>(pattern[k]);
        if (c == kSentinel || c == kTerminator) throw ReservedByteError(k, c);
    }
}

}  // namespace

Dictionary::Dictionary(std::vector<std::string> strings) : strings_(std::move(strings)) {
    if (strings_.empty()) throw std::invalid_argument("dictionary is empty");
    std::size_t offset = 0;
    for (const std::string& s : strings_) {
        if (s.empty()) throw std::invalid_argument("dictionary strings must be non-empty");
        for (std::size_t k = 0; k < s.size(); ++k) {
            const auto c = static_cast<symbol_t>(s[k]);
            if (c == kSentinel || c == kTerminator) throw ReservedByteError(offset + k, c);
        }
        offset += s.size() + 1;
    }
}

Dictionary Dictionary::from_lines(std::string_view content) {
    std::vector<std::string> lines;
    std::size_t begin = 0;
    while (begin < content.size()) {
        std::size_t end = content.find('\n', begin);
        if (end == std::string_view::npos) end = content.size();
        lines.emplace_back(content.substr(begin, end - begin));
        begin = end + 1;
    }
    return Dictionary(std::move(lines));
}

Text Dictionary::concatenate() const {
    std::vector<symbol_t> bytes;
    for (const std::string& s : strings_) {
        bytes.insert(bytes.end(), s.begin(), s.end());
        bytes.push_back(kTerminator);
    }
    bytes.push_back(kSentinel);
    return Text::from_terminated(std::move(bytes));
}

namespace {

struct BuildNode {
    pos_t depth = 0;
    idx_t representative = 0;  // 0-based string passing through this node
    std::vector<std::size_t> children;
    std::vector<idx_t> strings;  // leaf only: 0-based dictionary indexes
};

}  // namespace

CompactTrie CompactTrie::build(const Dictionary& dict) {
    const idx_t d = dict.size();
    std::vector<std::string> keys;
    keys.reserve(d);
    for (const std::string& s : dict.strings()) keys.push_back(s + static_cast<char>(kTerminator));
    std::vector<pos_t> text_offset(d);  // 1-based start of each string in the concatenation
    pos_t offset = 1;
    for (idx_t i = 0; i < d; ++i) {
        text_offset[i] = offset;
        offset += keys[i].size();
    }

    std::vector<idx_t> order(d);
    std::iota(order.begin(), order.end(), idx_t{0});
    std::stable_sort(order.begin(), order.end(), [&](idx_t a, idx_t b) {
        return std::lexicographical_compare(keys[a].begin(), keys[a].end(), keys[b].begin(), keys[b].end(),
                                            [](char x, char y) {
                                                return static_cast<symbol_t>(x) < static_cast<symbol_t>(y);
                                            });
    });

    // Sorted insertion with a rightmost-path stack.
    std::vector<BuildNode> pool(1);
    std::vector<std::size_t> stack{0};
    for (std::size_t k = 0; k < order.size(); ++k) {
        const idx_t s = order[k];
        if (k > 0 && keys[s] == keys[order[k - 1]]) {
            pool[stack.back()].strings.push_back(s);
            continue;
        }
        pos_t lcp = 0;
        if (k > 0) {
            const std::string& prev = keys[order[k - 1]];
            while (lcp < prev.size() && lcp < keys[s].size() && prev[lcp] == keys[s][lcp]) ++lcp;
        }
        std::size_t last = SIZE_MAX;
        while (pool[stack.back()].depth > lcp) {
            last = stack.back();
            stack.pop_back();
        }
        if (pool[stack.back()].depth < lcp) {
            const std::size_t parent = stack.back();
            const std::size_t mid = pool.size();
            pool.push_back(BuildNode{lcp, s, {last}, {}});
            pool[parent].children.back() = mid;
            stack.push_back(mid);
        }
        const std::size_t leaf = pool.size();
        pool.push_back(BuildNode{keys[s].size(), s, {}, {s}});
        pool[stack.back()].children.push_back(leaf);
        stack.push_back(leaf);
    }

    // Preorder renumbering; pool children are already in symbol order.
    std::vector<std::size_t> preorder;
    std::vector<idx_t> rank(pool.size());
    {
        std::vector<std::size_t> dfs{0};
        while (!dfs.empty()) {
            const std::size_t b = dfs.back();
            dfs.pop_back();
            rank[b] = preorder.size();
            preorder.push_back(b);
            for (auto it = pool[b].children.rbegin(); it != pool[b].children.rend(); ++it) dfs.push_back(*it);
        }
    }

    CompactTrie trie;
    trie.d_ = d;
    const std::size_t count = preorder.size();
    std::vector<Node> nodes(count);
    std::vector<pos_t> edge_start(count, 0);  // text position of each node's label
    for (idx_t id = 0; id < count; ++id) {
        const BuildNode& bn = pool[preorder[id]];
        Node& node = nodes[id];
        node.child_begin = trie.children_.size();
        node.child_count = bn.children.size();
        for (std::size_t c : bn.children) {
            const BuildNode& child = pool[c];
            Node& cn = nodes[rank[c]];
            cn.edge_length = child.depth - bn.depth;
            cn.first = static_cast<symbol_t>(keys[child.representative][bn.depth]);
            edge_start[rank[c]] = text_offset[child.representative] + bn.depth;
            trie.children_.push_back(rank[c]);
        }
        if (id != 0 && bn.children.empty()) {
            Leaf leaf;
            leaf.node = id;
            leaf.string_begin = trie.leaf_strings_.size();
            std::vector<idx_t> strs = bn.strings;
            std::sort(strs.begin(), strs.end());
            for (idx_t s : strs) trie.leaf_strings_.push_back(s + 1);
            leaf.string_end = trie.leaf_strings_.size();
            node.leftmost_leaf = node.rightmost_leaf = trie.leaves_.size();
            node.leaf_count = strs.size();
            trie.leaves_.push_back(leaf);
        }
    }

    for (idx_t k = 0; k < trie.leaves_.size(); ++k) trie.leaves_[k].next = k + 1;
    for (idx_t id = count; id-- > 0;) {
        Node& node = nodes[id];
        if (node.child_count == 0) continue;
        const Node& first = nodes[trie.children_[node.child_begin]];
        const Node& last = nodes[trie.children_[node.child_begin + node.child_count - 1]];
        node.leftmost_leaf = first.leftmost_leaf;
        node.rightmost_leaf = last.rightmost_leaf;
        node.leaf_count = 0;
        for (idx_t c = 0; c < node.child_count; ++c) {
            node.leaf_count += nodes[trie.children_[node.child_begin + c]].leaf_count;
        }
    }

    // One bookmark per edge label start.
    std::vector<pos_t> marks(edge_start.begin() + 1, edge_start.end());
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    for (idx_t id = 1; id < count; ++id) {
        nodes[id].edge_mark =
            static_cast<idx_t>(std::lower_bound(marks.begin(), marks.end(), edge_start[id]) - marks.begin()) + 1;
    }
    trie.nodes_ = std::move(nodes);
    trie.labels_ = ExtractIndex::build(rlbwt_of_text(dict.concatenate()), marks);
    return trie;
}

CompactTrie CompactTrie::from_parts(idx_t dictionary_size, std::vector<Node> nodes, std::vector<idx_t> children,
                                    std::vector<Leaf> leaves, std::vector<idx_t> leaf_strings,
                                    ExtractIndex labels) {
    if (nodes.empty()) throw std::invalid_argument("trie has no root");
    for (idx_t id = 0; id < nodes.size(); ++id) {
        const Node& node = nodes[id];
        if (node.child_begin + node.child_count > children.size()) {
            throw std::invalid_argument("trie child range out of bounds");
        }
        for (idx_t c = 0; c < node.child_count; ++c) {
            const idx_t child = children[node.child_begin + c];
            if (child <= id || child >= nodes.size()) throw std::invalid_argument("trie child id invalid");
        }
        if (id != 0) {
            if (node.edge_mark < 1 || node.edge_mark > labels.mark_count() || node.edge_length < 1 ||
                node.edge_length > labels.max_length(node.edge_mark)) {
                throw std::invalid_argument("trie edge label out of range");
            }
        }
        if (node.leaf_count > 0 &&
            (node.leftmost_leaf > node.rightmost_leaf || node.rightmost_leaf >= leaves.size())) {
            throw std::invalid_argument("trie leaf range invalid");
        }
    }
    for (const Leaf& leaf : leaves) {
        if (leaf.node >= nodes.size() || leaf.string_begin > leaf.string_end ||
            leaf.string_end > leaf_strings.size() || leaf.next > leaves.size()) {
            throw std::invalid_argument("trie leaf invalid");
        }
    }
    for (idx_t s : leaf_strings) {
        if (s < 1 || s > dictionary_size) throw std::invalid_argument("trie leaf string index invalid");
    }
    CompactTrie trie;
    trie.d_ = dictionary_size;
    trie.nodes_ = std::move(nodes);
    trie.children_ = std::move(children);
    trie.leaves_ = std::move(leaves);
    trie.leaf_strings_ = std::move(leaf_strings);
    trie.labels_ = std::move(labels);
    return trie;
}

std::optional<idx_t> CompactTrie::child(idx_t node, symbol_t c) const {
    const Node& parent = nodes_[node];
    auto begin = children_.begin() + static_cast<std::ptrdiff_t>(parent.child_begin);
    auto end = begin + static_cast<std::ptrdiff_t>(parent.child_count);
    auto it = std::lower_bound(begin, end, c, [&](idx_t id, symbol_t v) { return nodes_[id].first < v; });
    if (it == end || nodes_[*it].first != c) return std::nullopt;
    return *it;
}

std::string CompactTrie::edge_label(idx_t node) const {
    if (node == 0) return {};
    return labels_.extract(nodes_[node].edge_mark, nodes_[node].edge_length);
}

std::optional<idx_t> CompactTrie::locus(std::string_view pattern, QueryStats* stats) const {
    check_pattern(pattern);
    idx_t node = 0;
    std::size_t matched = 0;
    while (matched < pattern.size()) {
        const auto next = child(node, static_cast<symbol_t>(pattern[matched]));
        if (!next) return std::nullopt;
        const Node& edge = nodes_[*next];
        const pos_t take = std::min<pos_t>(edge.edge_length, pattern.size() - matched);
        ExtractCursor cursor = labels_.cursor(edge.edge_mark, take);
        while (!cursor.done()) {
            if (cursor.next(stats) != static_cast<symbol_t>(pattern[matched])) return std::nullopt;
            ++matched;
        }
        node = *next;
    }
    return node;
}

std::vector<idx_t> CompactTrie::prefix_locate(std::string_view pattern, QueryStats* stats) const {
    std::vector<idx_t> out;
    const auto node = locus(pattern, stats);
    if (!node || nodes_[*node].leaf_count == 0) return out;
    const Node& v = nodes_[*node];
    out.reserve(v.leaf_count);
    for (idx_t leaf = v.leftmost_leaf;; leaf = leaves_[leaf].next) {
        const Leaf& lf = leaves_[leaf];
        out.insert(out.end(), leaf_strings_.begin() + static_cast<std::ptrdiff_t>(lf.string_begin),
                   leaf_strings_.begin() + static_cast<std::ptrdiff_t>(lf.string_end));
        if (leaf == v.rightmost_leaf) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

idx_t CompactTrie::prefix_count(std::string_view pattern, QueryStats* stats) const {
    const auto node = locus(pattern, stats);
    return node ? nodes_[*node].leaf_count : 0;
}

}  // namespace optbwtr
