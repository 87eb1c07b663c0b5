#pragma once

#include <cstddef>
#include <cstdint>

namespace optbwtr {

// Text positions, sa-values and interval indexes are 1-based in every public
// contract. Vectors are 0-based internally.
using pos_t = std::uint64_t;
using idx_t = std::uint64_t;
using symbol_t = std::uint8_t;

inline constexpr symbol_t kSentinel = 0;

// Operation counters threaded through queries as an optional out-parameter.
// Indexes stay immutable; each caller owns its own counters.
struct QueryStats {
    std::uint64_t move_queries = 0;
    std::uint64_t scanned_intervals = 0;  // summed over all move queries
    std::uint64_t max_scan = 0;           // worst single move query
    std::uint64_t rank_calls = 0;
    std::uint64_t select_calls = 0;
    std::uint64_t predecessor_calls = 0;
    std::uint64_t char_lookups = 0;

    void record_scan(std::uint64_t examined) {
        ++move_queries;
        scanned_intervals += examined;
        if (examined > max_scan) max_scan = examined;
    }
};

}  // namespace optbwtr
