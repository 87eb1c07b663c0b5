#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "optbwtr/extract.hpp"
#include "optbwtr/prefix_search.hpp"
#include "optbwtr/search_index.hpp"

namespace optbwtr {

inline constexpr std::uint32_t kFormatVersion = 1;

enum IndexFlag : std::uint32_t {
    kFlagSearch = 1u << 0,
    kFlagExtract = 1u << 1,
    kFlagPrefix = 1u << 2,
};

/// Section identifiers, written in ascending order.
enum class SectionId : std::uint32_t {
    kRlbwt = 1,
    kMoveLf = 2,
    kMoveSa = 3,
    kMoveFl = 4,
    kLfAux = 5,
    kLFirst = 6,
    kSaPlus = 7,
    kExtract = 8,
    kTrie = 9,
};

/// Everything an index file can hold. The RLBWT is always present.
struct IndexBundle {
    Rlbwt rlbwt;
    std::optional<OptBwtrIndex> search;
    std::optional<ExtractIndex> extract;
    std::optional<CompactTrie> prefix;

    std::uint32_t flags() const noexcept;
    friend bool operator==(const IndexBundle&, const IndexBundle&) = default;
};

class LoadError : public std::runtime_error {
public:
    enum class Kind { kBadMagic, kUnsupportedVersion, kTruncatedSection, kChecksumMismatch, kMalformed };

    LoadError(Kind kind, const std::string& what);
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

const char* to_string(LoadError::Kind kind) noexcept;

std::vector<std::uint8_t> serialize(const IndexBundle& bundle);
/// Throws LoadError.
IndexBundle deserialize(std::span<const std::uint8_t> bytes);

/// Returns the number of bytes written; throws std::ios_base::failure if the
/// stream fails.
std::uint64_t save(const IndexBundle& bundle, std::ostream& out);
IndexBundle load(std::istream& in);

}  // namespace optbwtr
