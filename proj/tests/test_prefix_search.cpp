#include <doctest.h>

#include <random>

#include "optbwtr/prefix_search.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace optbwtr;

namespace {

const std::string kTerm(1, '\x01');

// Label strings from the root down to every leaf, left to right.
std::vector<std::string> leaf_paths(const CompactTrie& trie) {
    std::vector<std::string> out;
    std::vector<std::pair<idx_t, std::string>> stack{{0, ""}};
    while (!stack.empty()) {
        auto [node, path] = stack.back();
        stack.pop_back();
        const auto& nd = trie.nodes()[node];
        if (nd.child_count == 0) out.push_back(path);
        for (idx_t c = nd.child_count; c-- > 0;) {
            const idx_t child = trie.children()[nd.child_begin + c];
            stack.emplace_back(child, path + trie.edge_label(child));
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("prefix_search") {

TEST_CASE("dictionary validation") {
    CHECK_THROWS_AS(Dictionary({}), std::invalid_argument);
    CHECK_THROWS_AS(Dictionary({"a", ""}), std::invalid_argument);
    try {
        Dictionary({"ab", std::string("c\x01", 2)});
        FAIL("expected ReservedByteError");
    } catch (const ReservedByteError& e) {
        CHECK(e.offset() == 4);
        CHECK(e.value() == 1);
    }
    CHECK_THROWS_AS(Dictionary({std::string("a\0", 2)}), ReservedByteError);

    const Dictionary d = Dictionary::from_lines("ab\nac\n");
    CHECK(d.size() == 2);
    CHECK(d.at(2) == "ac");
    CHECK(d.concatenate().body() == "ab" + kTerm + "ac" + kTerm);
    CHECK_THROWS_AS(Dictionary::from_lines("ab\n\nac"), std::invalid_argument);
    CHECK_THROWS_AS(Dictionary::from_lines(""), std::invalid_argument);
}

TEST_CASE("single string") {
    const CompactTrie trie = CompactTrie::build(Dictionary({"abc"}));
    REQUIRE(trie.nodes().size() == 2);
    CHECK(trie.nodes()[0].child_count == 1);
    CHECK(trie.nodes()[1].edge_length == 4);
    CHECK(trie.edge_label(1) == "abc" + kTerm);
    CHECK(trie.leaves().size() == 1);
    CHECK(trie.prefix_locate("ab") == std::vector<idx_t>{1});
    CHECK(trie.prefix_count("abcd") == 0);
}

TEST_CASE("two strings sharing a prefix") {
    const CompactTrie trie = CompactTrie::build(Dictionary({"ab", "ac"}));
    REQUIRE(trie.nodes().size() == 4);
    CHECK(trie.nodes()[0].child_count == 1);
    CHECK(trie.edge_label(1) == "a");
    CHECK(trie.nodes()[1].child_count == 2);
    CHECK(trie.edge_label(2) == "b" + kTerm);
    CHECK(trie.edge_label(3) == "c" + kTerm);
    CHECK(trie.nodes()[1].leaf_count == 2);
    CHECK(trie.nodes()[2].leaf_count == 1);
    CHECK(trie.nodes()[3].leaf_count == 1);

    CHECK(trie.prefix_locate("a") == std::vector<idx_t>{1, 2});
    CHECK(trie.prefix_count("a") == 2);
    CHECK(trie.prefix_locate("") == std::vector<idx_t>{1, 2});
    CHECK(trie.prefix_count("") == 2);
    CHECK(trie.prefix_locate("ac") == std::vector<idx_t>{2});
    CHECK(trie.prefix_locate("abc").empty());
    CHECK(trie.prefix_locate("b").empty());
    CHECK_THROWS_AS((void)trie.prefix_count(std::string("a\x01", 2)), ReservedByteError);
    CHECK_THROWS_AS((void)trie.prefix_count(std::string("a\0", 2)), ReservedByteError);
}

TEST_CASE("duplicates and nested strings") {
    const CompactTrie trie = CompactTrie::build(Dictionary({"ab", "a", "ab", "abc"}));
    CHECK(trie.prefix_locate("a") == std::vector<idx_t>{1, 2, 3, 4});
    CHECK(trie.prefix_locate("ab") == std::vector<idx_t>{1, 3, 4});
    CHECK(trie.prefix_count("abc") == 1);
    CHECK(trie.leaves().size() == 3);
}

TEST_CASE("random dictionaries") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<std::size_t> count(1, 100);
        const auto strings = testgen::random_dictionary(rng, count(rng), 50, 1 + trial % 4);
        const CompactTrie trie = CompactTrie::build(Dictionary(strings));
        INFO("trial " << trial);

        // Every leaf path spells one distinct terminated string, in sorted order.
        std::vector<std::string> expected;
        for (const auto& s : strings) expected.push_back(s + kTerm);
        std::sort(expected.begin(), expected.end());
        expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
        CHECK(leaf_paths(trie) == expected);
        CHECK(trie.nodes()[0].leaf_count == strings.size());

        std::vector<std::string> queries{""};
        for (int q = 0; q < 40; ++q) {
            const auto& s = strings[rng() % strings.size()];
            queries.push_back(s.substr(0, rng() % (s.size() + 2)));
            queries.push_back(testgen::random_text(rng, rng() % 6, 1 + trial % 4));
        }
        for (const auto& p : queries) {
            QueryStats stats;
            const auto got = trie.prefix_locate(p, &stats);
            const auto want = oracle::naive_prefix_matches(strings, p);
            CHECK(std::vector<std::uint64_t>(got.begin(), got.end()) == want);
            CHECK(trie.prefix_count(p) == want.size());
            CHECK(stats.char_lookups <= p.size());
        }
    }
}

}  // TEST_SUITE
