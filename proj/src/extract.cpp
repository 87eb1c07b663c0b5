#include "optbwtr/extract.hpp"

#include <algorithm>
#include <numeric>

namespace optbwtr {

ExtractRangeError::ExtractRangeError(pos_t requested, pos_t max_length)
    : std::out_of_range("extract length " + std::to_string(requested) + " outside [1, " +
                        std::to_string(max_length) + "]"),
      max_length_(max_length) {}

ExtractCursor::ExtractCursor(const ExtractIndex& index, Bookmark start, pos_t remaining)
    : index_(&index), pos_(start.h), interval_(start.v), remaining_(remaining) {}

symbol_t ExtractCursor::next(QueryStats* stats) {
    const symbol_t c = index_->f_char(interval_);
    if (stats != nullptr) ++stats->char_lookups;
    if (--remaining_ > 0) {
        const MoveResult step = index_->move_fl().move(pos_, interval_, stats);
        pos_ = step.image;
        interval_ = step.interval;
    }
    return c;
}

namespace {

void check_marks(std::span<const pos_t> marks, pos_t n) {
    for (std::size_t k = 0; k < marks.size(); ++k) {
        if (marks[k] < 1 || marks[k] > n) throw std::invalid_argument("mark outside [1, n]");
        if (k > 0 && marks[k] <= marks[k - 1]) throw std::invalid_argument("marks must strictly increase");
    }
}

// V[j]: index of the I_FL input interval holding the j-th B(I_FL) start.
std::vector<idx_t> coarse_intervals(const MoveStructure& move_fl, std::span<const pos_t> fl_starts) {
    std::vector<idx_t> v_map;
    v_map.reserve(move_fl.size());
    idx_t coarse = 1;
    for (idx_t j = 1; j <= move_fl.size(); ++j) {
        const pos_t start = move_fl.input_start(j);
        while (coarse < fl_starts.size() && fl_starts[coarse] <= start) ++coarse;
        v_map.push_back(coarse);
    }
    return v_map;
}

// G[j] = (FL_{i_j}(1), interval): FL_x(1) holds sa-value x.
std::vector<Bookmark> walk_bookmarks(const MoveStructure& move_fl, std::span<const pos_t> marks) {
    std::vector<Bookmark> g;
    g.reserve(marks.size());
    pos_t pos = 1;
    idx_t y = 1;
    std::size_t next = 0;
    for (pos_t x = 1; x <= move_fl.n() && next < marks.size(); ++x) {
        const MoveResult step = move_fl.move(pos, y);
        pos = step.image;
        y = step.interval;
        if (marks[next] == x) {
            g.push_back({pos, y});
            ++next;
        }
    }
    return g;
}

ExtractIndex assemble(const Rlbwt& rlbwt, std::span<const idx_t> delta, MoveStructure move_fl,
                      std::span<const pos_t> marks) {
    std::vector<symbol_t> l_fl;
    std::vector<pos_t> fl_starts;
    l_fl.reserve(delta.size());
    fl_starts.reserve(delta.size());
    pos_t start = 1;
    for (idx_t run : delta) {
        l_fl.push_back(rlbwt.run(run).ch);
        fl_starts.push_back(start);
        start += rlbwt.run_length(run);
    }
    std::vector<idx_t> v_map = coarse_intervals(move_fl, fl_starts);
    std::vector<Bookmark> g = walk_bookmarks(move_fl, marks);
    return ExtractIndex::from_parts(std::move(l_fl), std::move(move_fl), std::move(v_map), std::move(g),
                                    std::vector<pos_t>(marks.begin(), marks.end()));
}

}  // namespace

ExtractIndex ExtractIndex::build(const Rlbwt& rlbwt, const LfPhiTables& tables, std::span<const pos_t> marks) {
    check_marks(marks, rlbwt.n());
    return assemble(rlbwt, tables.delta, tables.move_fl, marks);
}

ExtractIndex ExtractIndex::build(const Rlbwt& rlbwt, std::span<const pos_t> marks) {
    check_marks(marks, rlbwt.n());
    std::vector<idx_t> delta;
    const DisjointIntervalSequence i_lf = build_i_lf(rlbwt, &delta);
    return assemble(rlbwt, delta, MoveStructure::build(build_i_fl(i_lf)), marks);
}

ExtractIndex ExtractIndex::from_parts(std::vector<symbol_t> l_fl, MoveStructure move_fl, std::vector<idx_t> v_map,
                                      std::vector<Bookmark> g, std::vector<pos_t> marks) {
    if (v_map.size() != move_fl.size()) throw std::invalid_argument("V size differs from |B(I_FL)|");
    for (idx_t v : v_map) {
        if (v < 1 || v > l_fl.size()) throw std::invalid_argument("V entry out of range");
    }
    if (g.size() != marks.size()) throw std::invalid_argument("G size differs from mark count");
    check_marks(marks, move_fl.n());
    for (const Bookmark& bm : g) {
        if (!move_fl.contains(bm.v, bm.h)) throw std::invalid_argument("G entry interval mismatch");
    }
    ExtractIndex ei;
    ei.l_fl_ = std::move(l_fl);
    ei.move_fl_ = std::move(move_fl);
    ei.v_map_ = std::move(v_map);
    ei.g_ = std::move(g);
    ei.marks_ = std::move(marks);
    return ei;
}

pos_t ExtractIndex::max_length(idx_t j) const {
    if (j < 1 || j > mark_count()) throw std::out_of_range("mark index out of range");
    return n() - marks_[j - 1] + 1;
}

ExtractCursor ExtractIndex::cursor(idx_t j, pos_t d) const {
    const pos_t limit = max_length(j);
    if (d < 1 || d > limit) throw ExtractRangeError(d, limit);
    return ExtractCursor(*this, g_[j - 1], d);
}

std::string ExtractIndex::extract(idx_t j, pos_t d, QueryStats* stats) const {
    ExtractCursor cur = cursor(j, d);
    std::string out;
    out.reserve(d);
    while (!cur.done()) out.push_back(static_cast<char>(cur.next(stats)));
    return out;
}

idx_t ExtractIndex::mark_index_of(pos_t position) const {
    auto it = std::lower_bound(marks_.begin(), marks_.end(), position);
    if (it == marks_.end() || *it != position) return 0;
    return static_cast<idx_t>(it - marks_.begin()) + 1;
}

Text decompress(const Rlbwt& rlbwt, QueryStats* stats) {
    const pos_t first[] = {1};
    const ExtractIndex ei = ExtractIndex::build(rlbwt, first);
    const std::string t = ei.extract(1, rlbwt.n(), stats);
    return Text::from_terminated(std::vector<symbol_t>(t.begin(), t.end()));
}

}  // namespace optbwtr
