#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "optbwtr/types.hpp"

namespace optbwtr {

struct IntervalPair {
    pos_t p;  // input interval start
    pos_t q;  // output interval start

    friend bool operator==(const IntervalPair&, const IntervalPair&) = default;
};

/// (p_1, q_1), ..., (p_k, q_k) over the domain [1, n]. The i-th input
/// interval [p_i, p_i + d_i - 1] maps onto the output interval
/// [q_i, q_i + d_i - 1], where d_i = p_{i+1} - p_i and p_{k+1} = n + 1.
struct DisjointIntervalSequence {
    std::vector<IntervalPair> pairs;
    pos_t n = 0;

    idx_t size() const noexcept { return pairs.size(); }
    /// 1-based pair access.
    const IntervalPair& pair(idx_t i) const { return pairs[i - 1]; }
    pos_t input_start(idx_t i) const { return i <= size() ? pairs[i - 1].p : n + 1; }
    pos_t length(idx_t i) const { return input_start(i + 1) - input_start(i); }

    friend bool operator==(const DisjointIntervalSequence&, const DisjointIntervalSequence&) = default;
};

enum class SequenceCondition {
    kEmpty,               // no pairs, or n = 0
    kInputStartsAtOne,    // p_1 = 1
    kInputIncreasing,     // p strictly increasing, p_k <= n
    kOutputStartsAtOne,   // smallest q is 1
    kOutputContiguous,    // sorted outputs tile [1, n] without gaps or overlaps
};

struct SequenceViolation {
    SequenceCondition condition;
    idx_t index;  // 1-based pair index where the violation was detected
    std::string message;
};

/// Checks the disjoint-interval-sequence conditions; reports the first one
/// that fails.
std::optional<SequenceViolation> validate(const DisjointIntervalSequence& seq);

/// Index of the input interval containing i (binary search). i in [1, n].
idx_t input_interval_of(const DisjointIntervalSequence& seq, pos_t i);

/// f_I(i), with the containing interval found by binary search.
pos_t evaluate_bijection(const DisjointIntervalSequence& seq, pos_t i);

/// Number of input starts p_i inside the output interval of pair j (1-based).
idx_t fan_in(const DisjointIntervalSequence& seq, idx_t j);

/// Every output interval has fan-in at most 3.
bool is_out_balanced(const DisjointIntervalSequence& seq);

/// One split step on the literal definition: split the pair with the
/// smallest index whose output interval has at least four incoming edges.
/// Returns nullopt when the sequence is already out-balanced. O(k).
std::optional<DisjointIntervalSequence> split_once(const DisjointIntervalSequence& seq);

struct BalanceTrace {
    idx_t splits = 0;
};

/// B(I): the out-balanced sequence representing the same bijection, with at
/// most 2k pairs. Ordered-map implementation, O(k log k).
DisjointIntervalSequence balance(const DisjointIntervalSequence& seq, BalanceTrace* trace = nullptr);

struct MoveResult {
    pos_t image;
    idx_t interval;

    friend bool operator==(const MoveResult&, const MoveResult&) = default;
};

/// Move(I, i, x) on any valid sequence: the image of i and the input
/// interval containing it, found by binary search. x must contain i.
MoveResult move(const DisjointIntervalSequence& seq, pos_t i, idx_t x);

/// Move data structure over B(I): D_pair plus D_index, answering move
/// queries with a bounded forward scan.
class MoveStructure {
public:
    MoveStructure() = default;

    /// Balances `seq` and fills D_pair / D_index.
    static MoveStructure build(const DisjointIntervalSequence& seq);
    /// Wraps a sequence that is already out-balanced. Throws
    /// std::invalid_argument if it is not a valid, balanced sequence.
    static MoveStructure from_balanced(DisjointIntervalSequence balanced);
    /// Rehydrates stored arrays; validates them (used by deserialization).
    static MoveStructure from_parts(DisjointIntervalSequence balanced, std::vector<idx_t> d_index);

    pos_t n() const noexcept { return seq_.n; }
    idx_t size() const noexcept { return seq_.size(); }
    const DisjointIntervalSequence& sequence() const noexcept { return seq_; }
    std::span<const idx_t> d_index() const noexcept { return d_index_; }

    pos_t input_start(idx_t x) const { return seq_.input_start(x); }
    pos_t output_start(idx_t x) const { return seq_.pairs[x - 1].q; }
    bool contains(idx_t x, pos_t i) const {
        return x >= 1 && x <= size() && input_start(x) <= i && i < input_start(x + 1);
    }

    /// (i', x') with i' = q_x + (i - p_x). `x` must be the input interval
    /// containing i; checked by assert only.
    MoveResult move(pos_t i, idx_t x, QueryStats* stats = nullptr) const;

    /// Binary search for the input interval containing i.
    idx_t interval_of(pos_t i) const { return input_interval_of(seq_, i); }
    pos_t evaluate(pos_t i) const { return evaluate_bijection(seq_, i); }

    friend bool operator==(const MoveStructure&, const MoveStructure&) = default;

private:
    DisjointIntervalSequence seq_;
    std::vector<idx_t> d_index_;
};

}  // namespace optbwtr
