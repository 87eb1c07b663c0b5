#include "optbwtr/lf_phi.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace optbwtr {

DisjointIntervalSequence build_i_lf(const Rlbwt& rlbwt, std::vector<idx_t>* delta) {
    const idx_t r = rlbwt.r();
    // LF(l_i) < LF(l_j) iff L[l_i] < L[l_j], or equal characters and i < j.
    std::vector<idx_t> order(r);
    std::iota(order.begin(), order.end(), idx_t{1});
    std::stable_sort(order.begin(), order.end(),
                     [&](idx_t a, idx_t b) { return rlbwt.run(a).ch < rlbwt.run(b).ch; });

    DisjointIntervalSequence seq;
    seq.n = rlbwt.n();
    seq.pairs.resize(r);
    pos_t next = 1;
    for (idx_t x : order) {
        seq.pairs[x - 1] = {rlbwt.run_start(x), next};
        next += rlbwt.run_length(x);
    }
    if (delta != nullptr) *delta = std::move(order);
    return seq;
}

namespace {

// For each B(I_LF) input interval: does it begin a run / end a run of L.
struct RunBoundaryFlags {
    std::vector<bool> starts_run;
    std::vector<bool> ends_run;
};

RunBoundaryFlags run_boundaries(const Rlbwt& rlbwt, const MoveStructure& move_lf) {
    const idx_t k = move_lf.size();
    RunBoundaryFlags flags{std::vector<bool>(k, false), std::vector<bool>(k, false)};
    idx_t run = 1;
    for (idx_t x = 1; x <= k; ++x) {
        const pos_t start = move_lf.input_start(x);
        const pos_t end = move_lf.input_start(x + 1) - 1;
        while (run < rlbwt.r() && rlbwt.run_start(run + 1) <= start) ++run;
        flags.starts_run[x - 1] = rlbwt.run_start(run) == start;
        flags.ends_run[x - 1] = rlbwt.run_end(run) == end;
    }
    return flags;
}

struct WalkRecord {
    pos_t step;      // number of LF applications from position 1
    pos_t position;  // LF_step(1)
};

}  // namespace

DisjointIntervalSequence build_i_sa(const Rlbwt& rlbwt, const MoveStructure& move_lf) {
    const pos_t n = rlbwt.n();
    const idx_t r = rlbwt.r();
    if (move_lf.n() != n) throw std::invalid_argument("build_i_sa: move structure / rlbwt size mismatch");
    const RunBoundaryFlags flags = run_boundaries(rlbwt, move_lf);

    // SA[LF_t(1)] = n - t. U collects run ends, U' run starts.
    std::vector<WalkRecord> ends, starts;
    ends.reserve(r);
    starts.reserve(r);
    pos_t pos = 1;
    idx_t x = 1;
    for (pos_t t = 0; t < n; ++t) {
        if (pos == move_lf.input_start(x) && flags.starts_run[x - 1]) starts.push_back({t, pos});
        if (pos == move_lf.input_start(x + 1) - 1 && flags.ends_run[x - 1]) ends.push_back({t, pos});
        if (t + 1 < n) {
            const MoveResult next = move_lf.move(pos, x);
            pos = next.image;
            x = next.interval;
        }
    }
    if (ends.size() != r || starts.size() != r) {
        throw std::logic_error("build_i_sa: LF walk did not visit every run boundary once");
    }

    auto by_position = [](const WalkRecord& a, const WalkRecord& b) { return a.position < b.position; };
    std::sort(ends.begin(), ends.end(), by_position);
    std::sort(starts.begin(), starts.end(), by_position);

    // The end of run k is followed in SA order by the start of run k + 1;
    // the end of the last run (position n) wraps to position 1.
    DisjointIntervalSequence seq;
    seq.n = n;
    seq.pairs.reserve(r);
    for (idx_t k = 0; k < r; ++k) {
        const WalkRecord& successor = starts[(k + 1) % r];
        seq.pairs.push_back({n - ends[k].step, n - successor.step});
    }
    std::sort(seq.pairs.begin(), seq.pairs.end(),
              [](const IntervalPair& a, const IntervalPair& b) { return a.p < b.p; });
    return seq;
}

DisjointIntervalSequence build_i_fl(const DisjointIntervalSequence& i_lf) {
    DisjointIntervalSequence seq;
    seq.n = i_lf.n;
    seq.pairs.reserve(i_lf.size());
    for (const auto& pr : i_lf.pairs) seq.pairs.push_back({pr.q, pr.p});
    std::sort(seq.pairs.begin(), seq.pairs.end(),
              [](const IntervalPair& a, const IntervalPair& b) { return a.p < b.p; });
    return seq;
}

idx_t LfPhiTables::predecessor_interval(pos_t s, idx_t v, QueryStats* stats) const {
    if (s < 2) throw std::invalid_argument("predecessor_interval: sa-value 1 has no predecessor");
    assert(move_sa.contains(v, s));
    if (stats != nullptr) ++stats->predecessor_calls;
    return move_sa.input_start(v) != s ? v : v - 1;
}

LfPhiTables build_lf_phi_tables(const Rlbwt& rlbwt) {
    LfPhiTables tables;
    const DisjointIntervalSequence i_lf = build_i_lf(rlbwt, &tables.delta);
    tables.move_lf = MoveStructure::build(i_lf);
    const DisjointIntervalSequence i_sa = build_i_sa(rlbwt, tables.move_lf);
    tables.u.reserve(i_sa.size());
    for (const auto& pr : i_sa.pairs) tables.u.push_back(pr.p);
    tables.move_sa = MoveStructure::build(i_sa);
    tables.move_fl = MoveStructure::build(build_i_fl(i_lf));
    return tables;
}

}  // namespace optbwtr
