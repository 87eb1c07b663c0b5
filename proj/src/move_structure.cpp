#include "optbwtr/move_structure.hpp"

#include <algorithm>
#include <cassert>
#include <iterator>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace optbwtr {

namespace {

constexpr idx_t kMaxFanIn = 3;

// Position in `pairs` of the first pair with p >= value.
std::size_t lower_input(const std::vector<IntervalPair>& pairs, pos_t value) {
    auto it = std::lower_bound(pairs.begin(), pairs.end(), value,
                               [](const IntervalPair& a, pos_t v) { return a.p < v; });
    return static_cast<std::size_t>(it - pairs.begin());
}

}  // namespace

std::optional<SequenceViolation> validate(const DisjointIntervalSequence& seq) {
    if (seq.pairs.empty() || seq.n == 0) {
        return SequenceViolation{SequenceCondition::kEmpty, 0, "sequence is empty"};
    }
    if (seq.pairs.front().p != 1) {
        return SequenceViolation{SequenceCondition::kInputStartsAtOne, 1, "p_1 must be 1"};
    }
    for (idx_t i = 2; i <= seq.size(); ++i) {
        if (seq.pair(i).p <= seq.pair(i - 1).p) {
            return SequenceViolation{SequenceCondition::kInputIncreasing, i,
                                     "input starts must strictly increase"};
        }
    }
    if (seq.pairs.back().p > seq.n) {
        return SequenceViolation{SequenceCondition::kInputIncreasing, seq.size(),
                                 "input start exceeds n"};
    }

    std::vector<idx_t> order(seq.size());
    std::iota(order.begin(), order.end(), idx_t{1});
    std::stable_sort(order.begin(), order.end(),
                     [&](idx_t a, idx_t b) { return seq.pair(a).q < seq.pair(b).q; });
    if (seq.pair(order.front()).q != 1) {
        return SequenceViolation{SequenceCondition::kOutputStartsAtOne, order.front(),
                                 "smallest output start must be 1"};
    }
    for (std::size_t k = 1; k < order.size(); ++k) {
        const idx_t prev = order[k - 1];
        if (seq.pair(order[k]).q != seq.pair(prev).q + seq.length(prev)) {
            return SequenceViolation{SequenceCondition::kOutputContiguous, order[k],
                                     "output intervals overlap or leave a gap"};
        }
    }
    return std::nullopt;
}

idx_t input_interval_of(const DisjointIntervalSequence& seq, pos_t i) {
    if (i < 1 || i > seq.n) throw std::out_of_range("position outside [1, n]");
    auto it = std::upper_bound(seq.pairs.begin(), seq.pairs.end(), i,
                               [](pos_t v, const IntervalPair& a) { return v < a.p; });
    return static_cast<idx_t>(it - seq.pairs.begin());
}

pos_t evaluate_bijection(const DisjointIntervalSequence& seq, pos_t i) {
    const IntervalPair& pr = seq.pair(input_interval_of(seq, i));
    return pr.q + (i - pr.p);
}

idx_t fan_in(const DisjointIntervalSequence& seq, idx_t j) {
    if (j < 1 || j > seq.size()) throw std::out_of_range("output interval index out of range");
    const pos_t lo = seq.pair(j).q;
    const pos_t hi = lo + seq.length(j);  // exclusive
    return lower_input(seq.pairs, hi) - lower_input(seq.pairs, lo);
}

bool is_out_balanced(const DisjointIntervalSequence& seq) {
    for (idx_t j = 1; j <= seq.size(); ++j) {
        if (fan_in(seq, j) > kMaxFanIn) return false;
    }
    return true;
}

std::optional<DisjointIntervalSequence> split_once(const DisjointIntervalSequence& seq) {
    for (idx_t j = 1; j <= seq.size(); ++j) {
        if (fan_in(seq, j) <= kMaxFanIn) continue;
        const IntervalPair pj = seq.pair(j);
        // Largest d with exactly two input starts in [q_j, q_j + d - 1]: the
        // third start at or after q_j bounds it.
        const std::size_t first = lower_input(seq.pairs, pj.q);
        const pos_t d = seq.pairs[first + 2].p - pj.q;
        DisjointIntervalSequence out = seq;
        out.pairs.insert(out.pairs.begin() + static_cast<std::ptrdiff_t>(j),
                         IntervalPair{pj.p + d, pj.q + d});
        return out;
    }
    return std::nullopt;
}

DisjointIntervalSequence balance(const DisjointIntervalSequence& seq, BalanceTrace* trace) {
    const pos_t n = seq.n;
    std::map<pos_t, pos_t> by_input;   // p -> q
    std::map<pos_t, pos_t> by_output;  // q -> p
    std::set<pos_t> heavy;             // p of pairs with fan-in >= 4
    for (const auto& pr : seq.pairs) {
        by_input.emplace(pr.p, pr.q);
        by_output.emplace(pr.q, pr.p);
    }

    auto length_of = [&](std::map<pos_t, pos_t>::const_iterator it) {
        auto next = std::next(it);
        return (next == by_input.end() ? n + 1 : next->first) - it->first;
    };
    auto is_heavy = [&](pos_t p) {
        auto it = by_input.find(p);
        const pos_t lo = it->second;
        const pos_t hi = lo + length_of(it);
        idx_t count = 0;
        for (auto s = by_input.lower_bound(lo); s != by_input.end() && s->first < hi; ++s) {
            if (++count > kMaxFanIn) return true;
        }
        return false;
    };
    auto refresh = [&](pos_t p) {
        if (is_heavy(p)) {
            heavy.insert(p);
        } else {
            heavy.erase(p);
        }
    };

    for (const auto& pr : seq.pairs) refresh(pr.p);

    idx_t splits = 0;
    while (!heavy.empty()) {
        const pos_t p = *heavy.begin();
        const pos_t q = by_input.at(p);
        auto third = std::next(by_input.lower_bound(q), 2);
        const pos_t d = third->first - q;

        by_input.emplace(p + d, q + d);
        by_output.emplace(q + d, p + d);
        ++splits;

        refresh(p);
        refresh(p + d);
        // The output interval that now receives the new input start p + d.
        auto host = std::prev(by_output.upper_bound(p + d));
        refresh(host->second);
    }

    if (trace != nullptr) trace->splits = splits;
    DisjointIntervalSequence out;
    out.n = n;
    out.pairs.reserve(by_input.size());
    for (const auto& [p, q] : by_input) out.pairs.push_back({p, q});
    return out;
}

MoveResult move(const DisjointIntervalSequence& seq, pos_t i, idx_t x) {
    if (x < 1 || x > seq.size() || i < seq.input_start(x) || i >= seq.input_start(x + 1)) {
        throw std::out_of_range("move: interval index does not contain the position");
    }
    const pos_t image = seq.pair(x).q + (i - seq.pair(x).p);
    return {image, input_interval_of(seq, image)};
}

MoveStructure MoveStructure::build(const DisjointIntervalSequence& seq) {
    if (auto violation = validate(seq)) throw std::invalid_argument(violation->message);
    return from_balanced(balance(seq));
}

MoveStructure MoveStructure::from_balanced(DisjointIntervalSequence balanced) {
    if (auto violation = validate(balanced)) throw std::invalid_argument(violation->message);
    if (!is_out_balanced(balanced)) throw std::invalid_argument("sequence is not out-balanced");
    MoveStructure ms;
    ms.d_index_.reserve(balanced.size());
    for (const auto& pr : balanced.pairs) ms.d_index_.push_back(input_interval_of(balanced, pr.q));
    ms.seq_ = std::move(balanced);
    return ms;
}

MoveStructure MoveStructure::from_parts(DisjointIntervalSequence balanced, std::vector<idx_t> d_index) {
    MoveStructure ms = from_balanced(std::move(balanced));
    if (ms.d_index_ != d_index) throw std::invalid_argument("D_index does not match D_pair");
    return ms;
}

MoveResult MoveStructure::move(pos_t i, idx_t x, QueryStats* stats) const {
    assert(contains(x, i) && "move: interval index does not contain the position");
    const IntervalPair& pr = seq_.pairs[x - 1];
    const pos_t image = pr.q + (i - pr.p);
    const idx_t start = d_index_[x - 1];
    idx_t y = start;
    while (input_start(y + 1) <= image) ++y;
    if (stats != nullptr) stats->record_scan(y - start + 1);
    return {image, y};
}

}  // namespace optbwtr
