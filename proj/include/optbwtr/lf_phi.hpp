#pragma once

#include <vector>

#include "optbwtr/move_structure.hpp"
#include "optbwtr/rlbwt.hpp"

namespace optbwtr {

/// I_LF = (l_1, LF(l_1)), ..., (l_r, LF(l_r)), computed from run characters
/// and lengths alone. If `delta` is given it receives the run order by
/// LF(l_i) (1-based run indexes).
DisjointIntervalSequence build_i_lf(const Rlbwt& rlbwt, std::vector<idx_t>* delta = nullptr);

/// I_SA = (u_1, phi^-1(u_1)), ..., (u_r, phi^-1(u_r)) via an n-step LF walk
/// from position 1 (the sentinel suffix) over `move_lf`.
DisjointIntervalSequence build_i_sa(const Rlbwt& rlbwt, const MoveStructure& move_lf);

/// I_FL: the pairs of I_LF swapped and re-sorted by their new first element.
DisjointIntervalSequence build_i_fl(const DisjointIntervalSequence& i_lf);

/// F(I_LF), F(I_SA) and F(I_FL) for one RLBWT.
struct LfPhiTables {
    MoveStructure move_lf;
    MoveStructure move_sa;
    MoveStructure move_fl;
    std::vector<idx_t> delta;  // runs ordered by LF(l_i)
    std::vector<pos_t> u;      // sorted end-of-run sa-values

    pos_t n() const noexcept { return move_lf.n(); }

    /// (LF(i), interval of LF(i)) given x, the B(I_LF) interval containing i.
    MoveResult lf(pos_t i, idx_t x, QueryStats* stats = nullptr) const {
        return move_lf.move(i, x, stats);
    }
    /// (phi^-1(s), interval) given v, the B(I_SA) interval containing s.
    /// phi^-1(SA[n]) wraps to SA[1] = n.
    MoveResult phi_inv(pos_t s, idx_t v, QueryStats* stats = nullptr) const {
        return move_sa.move(s, v, stats);
    }
    /// (FL(i), interval) given y, the B(I_FL) interval containing i.
    MoveResult fl(pos_t i, idx_t y, QueryStats* stats = nullptr) const {
        return move_fl.move(i, y, stats);
    }
    /// B(I_SA) interval containing s - 1, given v containing s. s >= 2.
    idx_t predecessor_interval(pos_t s, idx_t v, QueryStats* stats = nullptr) const;

    friend bool operator==(const LfPhiTables&, const LfPhiTables&) = default;
};

LfPhiTables build_lf_phi_tables(const Rlbwt& rlbwt);

}  // namespace optbwtr
