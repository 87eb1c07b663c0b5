#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "optbwtr/lf_phi.hpp"
#include "optbwtr/rlbwt.hpp"

namespace optbwtr {

/// Rank/select over a short string (L_first). Select reads the per-symbol
/// occurrence arrays directly; rank binary-searches them.
class RankSelect {
public:
    RankSelect() = default;
    explicit RankSelect(std::vector<symbol_t> s);
    /// Rehydrates stored occurrence arrays; validates them against `s`.
    RankSelect(std::vector<symbol_t> s, std::vector<std::vector<idx_t>> occurrences);

    idx_t size() const noexcept { return s_.size(); }
    /// 1-based.
    symbol_t at(idx_t t) const { return s_[t - 1]; }
    std::span<const symbol_t> string() const noexcept { return s_; }
    /// Distinct symbols in increasing order, and their occurrence arrays.
    std::span<const symbol_t> alphabet() const noexcept { return alphabet_; }
    std::span<const std::vector<idx_t>> occurrences() const noexcept { return occ_; }

    /// Occurrences of c in s[1..i]; 0 for unseen c. i in [0, size()].
    idx_t rank(symbol_t c, idx_t i, QueryStats* stats = nullptr) const;
    /// Position of the i-th c, or nullopt if c occurs fewer than i times.
    std::optional<idx_t> select(symbol_t c, idx_t i, QueryStats* stats = nullptr) const;

    friend bool operator==(const RankSelect& a, const RankSelect& b) {
        return a.s_ == b.s_ && a.occ_ == b.occ_;
    }

private:
    static constexpr std::int16_t kAbsent = -1;

    std::vector<symbol_t> s_;
    std::vector<symbol_t> alphabet_;
    std::vector<std::vector<idx_t>> occ_;
    std::array<std::int16_t, 256> gamma_{};
};

/// (b, e, SA[b], i, j, v): sa-interval of P with the B(I_LF) intervals
/// containing b and e and the B(I_SA) interval containing SA[b].
struct BalancedSaInterval {
    pos_t b;
    pos_t e;
    pos_t sa_b;
    idx_t i;
    idx_t j;
    idx_t v;

    pos_t width() const noexcept { return e - b + 1; }
    friend bool operator==(const BalancedSaInterval&, const BalancedSaInterval&) = default;
};

/// Values produced by the toehold step of a BSR query (exposed for tests).
struct ToeholdResult {
    idx_t i_hat;
    idx_t j_hat;
    pos_t b_hat;
    pos_t e_hat;
    idx_t v_hat;
    pos_t sa_b_hat;
};

/// Count/locate index: F(I_LF), F(I_SA), R(L_first), SA+ and SA+_index.
class OptBwtrIndex {
public:
    OptBwtrIndex() = default;

    static OptBwtrIndex build(const Text& text);
    static OptBwtrIndex build(const Rlbwt& rlbwt);
    /// Reassembles stored components; checks sizes and containment.
    static OptBwtrIndex from_parts(Rlbwt rlbwt, LfPhiTables tables, RankSelect rank_select,
                                   std::vector<pos_t> sa_plus, std::vector<idx_t> sa_plus_index);

    pos_t n() const noexcept { return rlbwt_.n(); }
    idx_t r() const noexcept { return rlbwt_.r(); }
    const Rlbwt& rlbwt() const noexcept { return rlbwt_; }
    const LfPhiTables& tables() const noexcept { return tables_; }
    const RankSelect& rank_select() const noexcept { return rank_select_; }
    std::span<const pos_t> sa_plus() const noexcept { return sa_plus_; }
    std::span<const idx_t> sa_plus_index() const noexcept { return sa_plus_index_; }

    BalancedSaInterval empty_pattern_interval() const;

    /// The first three steps of a BSR query; nullopt when c does not occur
    /// in L[b..e].
    std::optional<ToeholdResult> toehold(const BalancedSaInterval& bsi, symbol_t c,
                                         QueryStats* stats = nullptr) const;
    /// Balanced sa-interval of cP from that of P, or nullopt if cP does not
    /// occur. The sentinel is never a valid c.
    std::optional<BalancedSaInterval> bsr_query(const BalancedSaInterval& bsi, symbol_t c,
                                                QueryStats* stats = nullptr) const;

    /// Balanced sa-interval of P, or nullopt if P does not occur.
    std::optional<BalancedSaInterval> find(std::string_view pattern, QueryStats* stats = nullptr) const;
    /// Occurrences of P in the text (sentinel excluded). Empty P counts n.
    pos_t count(std::string_view pattern, QueryStats* stats = nullptr) const;
    /// Starting positions of P in SA order (the phi^-1 chain order).
    std::vector<pos_t> locate(std::string_view pattern, QueryStats* stats = nullptr) const;

    friend bool operator==(const OptBwtrIndex&, const OptBwtrIndex&) = default;

private:
    Rlbwt rlbwt_;
    LfPhiTables tables_;
    RankSelect rank_select_;
    std::vector<pos_t> sa_plus_;
    std::vector<idx_t> sa_plus_index_;
};

}  // namespace optbwtr
