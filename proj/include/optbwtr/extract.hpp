#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "optbwtr/lf_phi.hpp"
#include "optbwtr/rlbwt.hpp"

namespace optbwtr {

/// Extract length outside [1, n - i_j + 1].
class ExtractRangeError : public std::out_of_range {
public:
    ExtractRangeError(pos_t requested, pos_t max_length);
    pos_t max_length() const noexcept { return max_length_; }

private:
    pos_t max_length_;
};

struct Bookmark {
    pos_t h;   // position with SA[h] = i_j
    idx_t v;   // B(I_FL) input interval containing h

    friend bool operator==(const Bookmark&, const Bookmark&) = default;
};

class ExtractIndex;

/// Streams T[i_j], T[i_j + 1], ... one FL move query per character.
class ExtractCursor {
public:
    ExtractCursor(const ExtractIndex& index, Bookmark start, pos_t remaining);

    bool done() const noexcept { return remaining_ == 0; }
    pos_t remaining() const noexcept { return remaining_; }
    /// Emits the current character and advances; the move query is skipped
    /// after the last permitted character.
    symbol_t next(QueryStats* stats = nullptr);

private:
    const ExtractIndex* index_;
    pos_t pos_;
    idx_t interval_;
    pos_t remaining_;
};

/// Bookmarking structure: L_FL, F(I_FL), V and G over b marked positions.
class ExtractIndex {
public:
    ExtractIndex() = default;

    /// `marks` strictly increasing within [1, n]; throws std::invalid_argument.
    static ExtractIndex build(const Rlbwt& rlbwt, const LfPhiTables& tables, std::span<const pos_t> marks);
    /// Builds I_FL and F(I_FL) directly from the RLBWT.
    static ExtractIndex build(const Rlbwt& rlbwt, std::span<const pos_t> marks);
    static ExtractIndex from_parts(std::vector<symbol_t> l_fl, MoveStructure move_fl, std::vector<idx_t> v_map,
                                   std::vector<Bookmark> g, std::vector<pos_t> marks);

    pos_t n() const noexcept { return move_fl_.n(); }
    idx_t mark_count() const noexcept { return marks_.size(); }
    std::span<const pos_t> marks() const noexcept { return marks_; }
    std::span<const symbol_t> l_fl() const noexcept { return l_fl_; }
    const MoveStructure& move_fl() const noexcept { return move_fl_; }
    std::span<const idx_t> v_map() const noexcept { return v_map_; }
    std::span<const Bookmark> bookmarks() const noexcept { return g_; }

    /// Longest extract permitted from mark j (1-based).
    pos_t max_length(idx_t j) const;
    /// F[i] for a position i inside B(I_FL) interval y.
    symbol_t f_char(idx_t y) const { return l_fl_[v_map_[y - 1] - 1]; }

    ExtractCursor cursor(idx_t j, pos_t d) const;
    /// T[i_j .. i_j + d - 1]. Throws std::out_of_range for a bad j and
    /// ExtractRangeError for a bad d.
    std::string extract(idx_t j, pos_t d, QueryStats* stats = nullptr) const;
    /// Mark index for a marked text position, or 0 if the position is not marked.
    idx_t mark_index_of(pos_t position) const;

    friend bool operator==(const ExtractIndex&, const ExtractIndex&) = default;

private:
    std::vector<symbol_t> l_fl_;
    MoveStructure move_fl_;
    std::vector<idx_t> v_map_;
    std::vector<Bookmark> g_;
    std::vector<pos_t> marks_;
};

/// T recovered from its RLBWT in left-to-right order (includes the sentinel).
Text decompress(const Rlbwt& rlbwt, QueryStats* stats = nullptr);

}  // namespace optbwtr
