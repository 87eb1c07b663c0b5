#include "optbwtr/search_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace optbwtr {

RankSelect::RankSelect(std::vector<symbol_t> s) : s_(std::move(s)) {
    gamma_.fill(kAbsent);
    std::array<bool, 256> seen{};
    for (symbol_t c : s_) seen[c] = true;
    for (int c = 0; c < 256; ++c) {
        if (!seen[c]) continue;
        gamma_[c] = static_cast<std::int16_t>(alphabet_.size());
        alphabet_.push_back(static_cast<symbol_t>(c));
    }
    occ_.resize(alphabet_.size());
    for (idx_t t = 1; t <= s_.size(); ++t) occ_[gamma_[s_[t - 1]]].push_back(t);
}

RankSelect::RankSelect(std::vector<symbol_t> s, std::vector<std::vector<idx_t>> occurrences)
    : RankSelect(std::move(s)) {
    if (occurrences != occ_) throw std::invalid_argument("rank-select occurrence arrays do not match string");
}

idx_t RankSelect::rank(symbol_t c, idx_t i, QueryStats* stats) const {
    if (stats != nullptr) ++stats->rank_calls;
    if (i > size()) throw std::out_of_range("rank: prefix longer than string");
    if (gamma_[c] == kAbsent) return 0;
    const auto& h = occ_[gamma_[c]];
    return static_cast<idx_t>(std::upper_bound(h.begin(), h.end(), i) - h.begin());
}

std::optional<idx_t> RankSelect::select(symbol_t c, idx_t i, QueryStats* stats) const {
    if (stats != nullptr) ++stats->select_calls;
    if (i == 0 || gamma_[c] == kAbsent) return std::nullopt;
    const auto& h = occ_[gamma_[c]];
    if (i > h.size()) return std::nullopt;
    return h[i - 1];
}

namespace {

// L_first[t] = L[p_t] for every B(I_LF) input start p_t.
std::vector<symbol_t> first_characters(const Rlbwt& rlbwt, const MoveStructure& move_lf) {
    std::vector<symbol_t> out;
    out.reserve(move_lf.size());
    idx_t run = 1;
    for (idx_t t = 1; t <= move_lf.size(); ++t) {
        const pos_t start = move_lf.input_start(t);
        while (run < rlbwt.r() && rlbwt.run_start(run + 1) <= start) ++run;
        out.push_back(rlbwt.run(run).ch);
    }
    return out;
}

// SA+[x] = SA[p_x] = n - mu(x), where LF_mu(x)(1) = p_x.
std::vector<pos_t> sample_interval_starts(const MoveStructure& move_lf) {
    const pos_t n = move_lf.n();
    std::vector<pos_t> sa_plus(move_lf.size(), 0);
    pos_t pos = 1;
    idx_t x = 1;
    for (pos_t step = 0; step < n; ++step) {
        if (pos == move_lf.input_start(x)) sa_plus[x - 1] = n - step;
        if (step + 1 < n) {
            const MoveResult next = move_lf.move(pos, x);
            pos = next.image;
            x = next.interval;
        }
    }
    return sa_plus;
}

}  // namespace

OptBwtrIndex OptBwtrIndex::build(const Text& text) { return build(rlbwt_of_text(text)); }

OptBwtrIndex OptBwtrIndex::build(const Rlbwt& rlbwt) {
    OptBwtrIndex index;
    index.rlbwt_ = rlbwt;
    index.tables_ = build_lf_phi_tables(rlbwt);
    index.rank_select_ = RankSelect(first_characters(rlbwt, index.tables_.move_lf));
    index.sa_plus_ = sample_interval_starts(index.tables_.move_lf);
    index.sa_plus_index_.reserve(index.sa_plus_.size());
    for (pos_t s : index.sa_plus_) index.sa_plus_index_.push_back(index.tables_.move_sa.interval_of(s));
    return index;
}

OptBwtrIndex OptBwtrIndex::from_parts(Rlbwt rlbwt, LfPhiTables tables, RankSelect rank_select,
                                      std::vector<pos_t> sa_plus, std::vector<idx_t> sa_plus_index) {
    const pos_t n = rlbwt.n();
    const idx_t k = tables.move_lf.size();
    if (tables.move_lf.n() != n || tables.move_sa.n() != n || tables.move_fl.n() != n) {
        throw std::invalid_argument("index parts disagree on n");
    }
    if (rank_select.size() != k || sa_plus.size() != k || sa_plus_index.size() != k) {
        throw std::invalid_argument("index parts disagree on |B(I_LF)|");
    }
    if (!std::ranges::equal(rank_select.string(), first_characters(rlbwt, tables.move_lf))) {
        throw std::invalid_argument("L_first does not match the RLBWT");
    }
    for (idx_t x = 1; x <= k; ++x) {
        const pos_t s = sa_plus[x - 1];
        if (s < 1 || s > n || !tables.move_sa.contains(sa_plus_index[x - 1], s)) {
            throw std::invalid_argument("SA+ entry out of range or mis-indexed");
        }
    }
    OptBwtrIndex index;
    index.rlbwt_ = std::move(rlbwt);
    index.tables_ = std::move(tables);
    index.rank_select_ = std::move(rank_select);
    index.sa_plus_ = std::move(sa_plus);
    index.sa_plus_index_ = std::move(sa_plus_index);
    return index;
}

BalancedSaInterval OptBwtrIndex::empty_pattern_interval() const {
    return {1, n(), n(), 1, tables_.move_lf.size(), tables_.move_sa.size()};
}

std::optional<ToeholdResult> OptBwtrIndex::toehold(const BalancedSaInterval& bsi, symbol_t c,
                                                   QueryStats* stats) const {
    // Rank over the prefix ending at i - 1 so that an occurrence at i itself
    // counts; the same prefix feeds the select for i_hat.
    const idx_t before = rank_select_.rank(c, bsi.i - 1, stats);
    const idx_t through = rank_select_.rank(c, bsi.j, stats);
    if (through == before) return std::nullopt;

    ToeholdResult t{};
    t.i_hat = *rank_select_.select(c, before + 1, stats);
    t.j_hat = *rank_select_.select(c, through, stats);
    if (rank_select_.at(bsi.i) == c) {
        t.b_hat = bsi.b;
        t.v_hat = bsi.v;
        t.sa_b_hat = bsi.sa_b;
    } else {
        t.b_hat = tables_.move_lf.input_start(t.i_hat);
        t.v_hat = sa_plus_index_[t.i_hat - 1];
        t.sa_b_hat = sa_plus_[t.i_hat - 1];
    }
    t.e_hat = rank_select_.at(bsi.j) == c ? bsi.e : tables_.move_lf.input_start(t.j_hat + 1) - 1;
    return t;
}

std::optional<BalancedSaInterval> OptBwtrIndex::bsr_query(const BalancedSaInterval& bsi, symbol_t c,
                                                          QueryStats* stats) const {
    if (c == kSentinel) return std::nullopt;
    const auto t = toehold(bsi, c, stats);
    if (!t) return std::nullopt;
    const MoveResult begin = tables_.lf(t->b_hat, t->i_hat, stats);
    const MoveResult end = tables_.lf(t->e_hat, t->j_hat, stats);
    // c is not the sentinel, so the suffix at b_hat does not start at 1.
    const idx_t v = tables_.predecessor_interval(t->sa_b_hat, t->v_hat, stats);
    return BalancedSaInterval{begin.image, end.image, t->sa_b_hat - 1, begin.interval, end.interval, v};
}

std::optional<BalancedSaInterval> OptBwtrIndex::find(std::string_view pattern, QueryStats* stats) const {
    BalancedSaInterval bsi = empty_pattern_interval();
    for (auto it = pattern.rbegin(); it != pattern.rend(); ++it) {
        auto next = bsr_query(bsi, static_cast<symbol_t>(*it), stats);
        if (!next) return std::nullopt;
        bsi = *next;
    }
    return bsi;
}

pos_t OptBwtrIndex::count(std::string_view pattern, QueryStats* stats) const {
    const auto bsi = find(pattern, stats);
    return bsi ? bsi->width() : 0;
}

std::vector<pos_t> OptBwtrIndex::locate(std::string_view pattern, QueryStats* stats) const {
    const auto bsi = find(pattern, stats);
    std::vector<pos_t> out;
    if (!bsi) return out;
    out.reserve(bsi->width());
    pos_t s = bsi->sa_b;
    idx_t v = bsi->v;
    out.push_back(s);
    for (pos_t k = bsi->b; k < bsi->e; ++k) {
        const MoveResult next = tables_.phi_inv(s, v, stats);
        s = next.image;
        v = next.interval;
        out.push_back(s);
    }
    return out;
}

}  // namespace optbwtr
