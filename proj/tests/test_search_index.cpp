#include <doctest.h>

#include <random>

#include "optbwtr/search_index.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace optbwtr;

namespace {

std::vector<symbol_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

const std::string kLFirst = std::string("bba") + '\0' + "a";

// Sample-text index with B(I_LF) input starts forced to (1, 4, 7, 13, 14).
OptBwtrIndex forced_block_index() {
    const OptBwtrIndex base = OptBwtrIndex::build(Text::from_raw(testgen::kSampleText));
    const auto o = oracle::oracle_build(std::string(testgen::kSampleText) + '\0');
    LfPhiTables tables = base.tables();
    DisjointIntervalSequence lf{{{1, 10}, {4, 13}, {7, 2}, {13, 1}, {14, 8}}, 15};
    tables.move_lf = MoveStructure::from_balanced(lf);
    std::vector<pos_t> sa_plus;
    std::vector<idx_t> sa_plus_index;
    for (const auto& pq : lf.pairs) {
        sa_plus.push_back(o.sa[pq.p]);
        sa_plus_index.push_back(tables.move_sa.interval_of(o.sa[pq.p]));
    }
    return OptBwtrIndex::from_parts(base.rlbwt(), tables, RankSelect(bytes_of(kLFirst)), sa_plus, sa_plus_index);
}

}  // namespace

TEST_SUITE("search_index") {

TEST_CASE("rank and select on L_first") {
    const RankSelect rs(bytes_of(kLFirst));
    CHECK(rs.rank('a', 5) == 2);
    CHECK(rs.rank('b', 0) == 0);
    CHECK(rs.rank('z', 5) == 0);
    CHECK(rs.select('a', 1) == idx_t{3});
    CHECK(rs.select('a', 2) == idx_t{5});
    CHECK_FALSE(rs.select('a', 3).has_value());
    CHECK_FALSE(rs.select('z', 1).has_value());
    CHECK_THROWS_AS((void)rs.rank('a', 6), std::out_of_range);
}

TEST_CASE("rank and select on random strings") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::string s = testgen::random_text(rng, 100, 4);
        const RankSelect rs(bytes_of(s));
        for (char c : std::string("abcde")) {
            for (idx_t i = 0; i <= s.size(); ++i) {
                CHECK(rs.rank(static_cast<symbol_t>(c), i) == oracle::naive_rank(s, c, i));
            }
            for (idx_t i = 1; i <= s.size() + 1; ++i) {
                const auto sel = rs.select(static_cast<symbol_t>(c), i);
                CHECK(sel == oracle::naive_select(s, c, i));
                if (sel) CHECK(rs.rank(static_cast<symbol_t>(c), *sel) == i);
            }
        }
    }
}

TEST_CASE("forced-block toehold") {
    const OptBwtrIndex idx = forced_block_index();
    CHECK(std::ranges::equal(idx.rank_select().string(), bytes_of(kLFirst)));
    const auto o = oracle::oracle_build(std::string(testgen::kSampleText) + '\0');
    const BalancedSaInterval bsi{3, 14, o.sa[3], 1, 5, idx.tables().move_sa.interval_of(o.sa[3])};
    const auto t = idx.toehold(bsi, 'a');
    REQUIRE(t.has_value());
    CHECK(t->i_hat == 3);
    CHECK(t->j_hat == 5);
    CHECK(t->b_hat == 7);
    CHECK(t->e_hat == 14);
    CHECK(t->sa_b_hat == o.sa[7]);
}

TEST_CASE("sample text count and bsr step") {
    const OptBwtrIndex idx = OptBwtrIndex::build(Text::from_raw(testgen::kSampleText));
    const auto empty = idx.empty_pattern_interval();
    CHECK(empty == BalancedSaInterval{1, 15, 15, 1, idx.tables().move_lf.size(), idx.tables().move_sa.size()});

    const auto ab = idx.find("ab");
    REQUIRE(ab.has_value());
    CHECK(ab->b == 5);
    CHECK(ab->e == 9);
    const auto t = idx.toehold(*ab, 'b');
    REQUIRE(t.has_value());
    CHECK(t->b_hat == 5);
    CHECK(t->e_hat == 6);
    const auto bab = idx.bsr_query(*ab, 'b');
    REQUIRE(bab.has_value());
    CHECK(bab->b == 14);
    CHECK(bab->e == 15);
    CHECK(*bab == *idx.find("bab"));

    CHECK(idx.count("ab") == 5);
    CHECK(idx.count("bab") == 2);
    CHECK(idx.count("zz") == 0);
    CHECK(idx.count("") == 15);
    auto loc = idx.locate("bab");
    std::sort(loc.begin(), loc.end());
    CHECK(loc == std::vector<pos_t>{4, 12});
    CHECK(idx.locate(testgen::kSampleText) == std::vector<pos_t>{1});
    CHECK(idx.locate("zz").empty());
    CHECK_FALSE(idx.bsr_query(empty, kSentinel).has_value());
}

TEST_CASE("l_first matches L at every block start") {
    const OptBwtrIndex idx = OptBwtrIndex::build(Text::from_raw(testgen::kSampleText));
    const auto& lf = idx.tables().move_lf;
    for (idx_t t = 1; t <= lf.size(); ++t) CHECK(idx.rank_select().at(t) == idx.rlbwt().char_at(lf.input_start(t)));
}

TEST_CASE("single sentinel") {
    const OptBwtrIndex idx = OptBwtrIndex::build(Text::from_raw(""));
    CHECK(idx.empty_pattern_interval() == BalancedSaInterval{1, 1, 1, 1, 1, 1});
    CHECK(idx.count("") == 1);
    CHECK(idx.count("a") == 0);
    CHECK(idx.locate("") == std::vector<pos_t>{1});
}

TEST_CASE("from_parts rejects inconsistent parts") {
    const OptBwtrIndex idx = OptBwtrIndex::build(Text::from_raw(testgen::kSampleText));
    std::vector<pos_t> sa_plus(idx.sa_plus().begin(), idx.sa_plus().end());
    std::vector<idx_t> sa_index(idx.sa_plus_index().begin(), idx.sa_plus_index().end());
    CHECK(OptBwtrIndex::from_parts(idx.rlbwt(), idx.tables(), idx.rank_select(), sa_plus, sa_index) == idx);
    sa_plus[0] = 99;
    CHECK_THROWS_AS(OptBwtrIndex::from_parts(idx.rlbwt(), idx.tables(), idx.rank_select(), sa_plus, sa_index),
                    std::invalid_argument);
    CHECK_THROWS_AS(OptBwtrIndex::from_parts(idx.rlbwt(), idx.tables(), RankSelect(bytes_of("aaaa")),
                                             {idx.sa_plus().begin(), idx.sa_plus().end()}, sa_index),
                    std::invalid_argument);
}

TEST_CASE("random texts against the oracle") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 120; ++trial) {
        std::uniform_int_distribution<std::size_t> len(0, 400);
        const unsigned sigma = trial % 3 == 0 ? 2 : (trial % 3 == 1 ? 4 : 26);
        const std::string body = trial % 2 ? testgen::random_text(rng, len(rng), sigma)
                                           : testgen::repetitive_text(rng, len(rng), sigma);
        const std::string text = body + '\0';
        const auto o = oracle::oracle_build(text);
        const OptBwtrIndex idx = OptBwtrIndex::build(Text::from_raw(body));
        INFO("trial " << trial);

        const auto& lf = idx.tables().move_lf;
        for (idx_t x = 1; x <= lf.size(); ++x) CHECK(idx.sa_plus()[x - 1] == o.sa[lf.input_start(x)]);

        QueryStats stats;
        for (const std::string& p : testgen::random_patterns(rng, body, sigma, 40, 8)) {
            const auto expected = oracle::oracle_occurrences(text, p);
            const auto bsi = idx.find(p, &stats);
            const auto iv = oracle::oracle_sa_interval(o, p);
            REQUIRE(bsi.has_value() == iv.has_value());
            if (bsi) {
                CHECK(bsi->b == iv->first);
                CHECK(bsi->e == iv->second);
                CHECK(bsi->sa_b == o.sa[bsi->b]);
                CHECK(lf.contains(bsi->i, bsi->b));
                CHECK(lf.contains(bsi->j, bsi->e));
                CHECK(idx.tables().move_sa.contains(bsi->v, bsi->sa_b));
            }
            CHECK(idx.count(p) == expected.size());
            auto loc = idx.locate(p, &stats);
            std::vector<pos_t> in_sa_order;
            if (iv) {
                for (pos_t i = iv->first; i <= iv->second; ++i) in_sa_order.push_back(o.sa[i]);
            }
            CHECK(loc == in_sa_order);
            std::sort(loc.begin(), loc.end());
            CHECK(loc == expected);
        }
        CHECK(stats.max_scan <= 4);
    }
}

}  // TEST_SUITE
