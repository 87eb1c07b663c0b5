#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "optbwtr/types.hpp"

namespace optbwtr {

/// Raised when input bytes collide with a reserved symbol (the sentinel, or
/// the dictionary terminator in prefix mode). `offset` is 0-based into the raw
/// input.
class ReservedByteError : public std::invalid_argument {
public:
    ReservedByteError(std::size_t offset, symbol_t value);

    std::size_t offset() const noexcept { return offset_; }
    symbol_t value() const noexcept { return value_; }

private:
    std::size_t offset_;
    symbol_t value_;
};

/// A text over bytes ending with the unique sentinel 0.
class Text {
public:
    /// Appends the sentinel to `raw`. Throws ReservedByteError on a 0 byte.
    static Text from_raw(std::string_view raw);
    /// Takes a sequence that already ends with the sentinel.
    static Text from_terminated(std::vector<symbol_t> bytes);

    pos_t n() const noexcept { return bytes_.size(); }
    std::size_t sigma() const noexcept { return sigma_; }
    /// 1-based access.
    symbol_t at(pos_t i) const { return bytes_[i - 1]; }
    std::span<const symbol_t> bytes() const noexcept { return bytes_; }
    /// The text without its sentinel.
    std::string body() const;

    friend bool operator==(const Text&, const Text&) = default;

private:
    explicit Text(std::vector<symbol_t> bytes);

    std::vector<symbol_t> bytes_;
    std::size_t sigma_ = 0;
};

struct SuffixArray {
    std::vector<pos_t> values;  // values[i - 1] = SA[i]

    pos_t at(pos_t i) const { return values[i - 1]; }
    pos_t size() const noexcept { return values.size(); }
};

/// Prefix doubling with counting-sort passes, O(n log n).
SuffixArray build_suffix_array(const Text& text);

/// L[i] = T[SA[i] - 1], wrapping to T[n] when SA[i] = 1.
std::vector<symbol_t> bwt_from_sa(const Text& text, const SuffixArray& sa);

struct Run {
    symbol_t ch;
    pos_t start;

    friend bool operator==(const Run&, const Run&) = default;
};

/// Run-length encoded BWT as r pairs (run character, run start).
class Rlbwt {
public:
    Rlbwt() = default;
    /// Validates maximality, increasing starts and the single length-1
    /// sentinel run; throws std::invalid_argument on violation.
    Rlbwt(std::vector<Run> runs, pos_t n);

    pos_t n() const noexcept { return n_; }
    idx_t r() const noexcept { return runs_.size(); }
    /// 1-based run access.
    const Run& run(idx_t x) const { return runs_[x - 1]; }
    pos_t run_start(idx_t x) const { return runs_[x - 1].start; }
    pos_t run_end(idx_t x) const { return x < r() ? runs_[x].start - 1 : n_; }
    pos_t run_length(idx_t x) const { return run_end(x) - run_start(x) + 1; }
    std::span<const Run> runs() const noexcept { return runs_; }

    /// Index x with l_x <= i < l_{x+1}. Throws std::out_of_range.
    idx_t run_of_position(pos_t i) const;
    /// L[i], 1-based.
    symbol_t char_at(pos_t i) const { return run(run_of_position(i)).ch; }

    std::vector<symbol_t> decode() const;

    friend bool operator==(const Rlbwt&, const Rlbwt&) = default;

private:
    std::vector<Run> runs_;
    pos_t n_ = 0;
};

/// Maximal-run encoding of any byte sequence; no BWT invariants implied.
std::vector<Run> encode_runs(std::span<const symbol_t> s);
std::vector<symbol_t> decode_runs(std::span<const Run> runs, pos_t n);

/// encode_runs followed by the Rlbwt invariant checks.
Rlbwt rlbwt_encode(std::span<const symbol_t> bwt);

/// Text -> SA -> BWT -> RLBWT.
Rlbwt rlbwt_of_text(const Text& text);

}  // namespace optbwtr
