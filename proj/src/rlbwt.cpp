#include "optbwtr/rlbwt.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace optbwtr {

ReservedByteError::ReservedByteError(std::size_t offset, symbol_t value)
    : std::invalid_argument("reserved byte " + std::to_string(value) + " at offset " +
                            std::to_string(offset)),
      offset_(offset),
      value_(value) {}

Text::Text(std::vector<symbol_t> bytes) : bytes_(std::move(bytes)) {
    std::array<bool, 256> seen{};
    for (symbol_t c : bytes_) seen[c] = true;
    sigma_ = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
}

Text Text::from_raw(std::string_view raw) {
    std::vector<symbol_t> bytes;
    bytes.reserve(raw.size() + 1);
    for (std::size_t k = 0; k < raw.size(); ++k) {
        auto c = static_cast<symbol_t>(raw[k]);
        if (c == kSentinel) throw ReservedByteError(k, c);
        bytes.push_back(c);
    }
    bytes.push_back(kSentinel);
    return Text(std::move(bytes));
}

Text Text::from_terminated(std::vector<symbol_t> bytes) {
    if (bytes.empty() || bytes.back() != kSentinel) {
        throw std::invalid_argument("text must end with the sentinel");
    }
    for (std::size_t k = 0; k + 1 < bytes.size(); ++k) {
        if (bytes[k] == kSentinel) throw ReservedByteError(k, kSentinel);
    }
    return Text(std::move(bytes));
}

std::string Text::body() const {
    return std::string(bytes_.begin(), bytes_.end() - 1);
}

namespace {

// Sorts cyclic rotations; equals suffix order because the sentinel is unique
// and smallest.
template <typename I>
std::vector<pos_t> sort_rotations(std::span<const symbol_t> s) {
    const std::size_t n = s.size();
    std::vector<I> p(n), c(n), pn(n), cn(n);
    std::vector<I> cnt(std::max<std::size_t>(n, 256) + 1, 0);

    for (std::size_t i = 0; i < n; ++i) ++cnt[s[i]];
    for (std::size_t k = 1; k < 256; ++k) cnt[k] += cnt[k - 1];
    for (std::size_t i = n; i-- > 0;) p[--cnt[s[i]]] = static_cast<I>(i);
    c[p[0]] = 0;
    std::size_t classes = 1;
    for (std::size_t i = 1; i < n; ++i) {
        if (s[p[i]] != s[p[i - 1]]) ++classes;
        c[p[i]] = static_cast<I>(classes - 1);
    }

    for (std::size_t h = 1; h < n && classes < n; h <<= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            pn[i] = static_cast<I>((p[i] + n - h) % n);
        }
        std::fill(cnt.begin(), cnt.begin() + classes, 0);
        for (std::size_t i = 0; i < n; ++i) ++cnt[c[pn[i]]];
        for (std::size_t k = 1; k < classes; ++k) cnt[k] += cnt[k - 1];
        for (std::size_t i = n; i-- > 0;) p[--cnt[c[pn[i]]]] = pn[i];

        cn[p[0]] = 0;
        classes = 1;
        for (std::size_t i = 1; i < n; ++i) {
            const I a = p[i], b = p[i - 1];
            if (c[a] != c[b] || c[(a + h) % n] != c[(b + h) % n]) ++classes;
            cn[a] = static_cast<I>(classes - 1);
        }
        c.swap(cn);
    }

    std::vector<pos_t> sa(n);
    for (std::size_t i = 0; i < n; ++i) sa[i] = static_cast<pos_t>(p[i]) + 1;
    return sa;
}

}  // namespace

SuffixArray build_suffix_array(const Text& text) {
    if (text.n() < std::numeric_limits<std::uint32_t>::max()) {
        return SuffixArray{sort_rotations<std::uint32_t>(text.bytes())};
    }
    return SuffixArray{sort_rotations<std::uint64_t>(text.bytes())};
}

std::vector<symbol_t> bwt_from_sa(const Text& text, const SuffixArray& sa) {
    std::vector<symbol_t> bwt(text.n());
    for (pos_t i = 1; i <= text.n(); ++i) {
        const pos_t s = sa.at(i);
        bwt[i - 1] = text.at(s == 1 ? text.n() : s - 1);
    }
    return bwt;
}

Rlbwt::Rlbwt(std::vector<Run> runs, pos_t n) : runs_(std::move(runs)), n_(n) {
    if (runs_.empty() || n_ == 0) throw std::invalid_argument("rlbwt: no runs");
    if (runs_.front().start != 1) throw std::invalid_argument("rlbwt: first run must start at 1");
    std::size_t sentinels = 0;
    for (std::size_t k = 0; k < runs_.size(); ++k) {
        if (runs_[k].start > n_) throw std::invalid_argument("rlbwt: run start beyond n");
        if (k > 0) {
            if (runs_[k].start <= runs_[k - 1].start) {
                throw std::invalid_argument("rlbwt: run starts must increase");
            }
            if (runs_[k].ch == runs_[k - 1].ch) {
                throw std::invalid_argument("rlbwt: adjacent runs share a character");
            }
        }
        if (runs_[k].ch == kSentinel) {
            ++sentinels;
            if (run_length(k + 1) != 1) throw std::invalid_argument("rlbwt: sentinel run longer than 1");
        }
    }
    if (sentinels != 1) throw std::invalid_argument("rlbwt: exactly one sentinel run required");
}

idx_t Rlbwt::run_of_position(pos_t i) const {
    if (i < 1 || i > n_) throw std::out_of_range("rlbwt: position out of range");
    auto it = std::upper_bound(runs_.begin(), runs_.end(), i,
                               [](pos_t v, const Run& run) { return v < run.start; });
    return static_cast<idx_t>(it - runs_.begin());
}

std::vector<symbol_t> Rlbwt::decode() const { return decode_runs(runs_, n_); }

std::vector<Run> encode_runs(std::span<const symbol_t> s) {
    std::vector<Run> runs;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k == 0 || s[k] != s[k - 1]) runs.push_back({s[k], static_cast<pos_t>(k + 1)});
    }
    return runs;
}

std::vector<symbol_t> decode_runs(std::span<const Run> runs, pos_t n) {
    std::vector<symbol_t> out;
    out.reserve(n);
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const pos_t end = k + 1 < runs.size() ? runs[k + 1].start : n + 1;
        out.insert(out.end(), end - runs[k].start, runs[k].ch);
    }
    return out;
}

Rlbwt rlbwt_encode(std::span<const symbol_t> bwt) {
    if (bwt.empty()) throw std::invalid_argument("rlbwt_encode: empty input");
    return Rlbwt(encode_runs(bwt), bwt.size());
}

Rlbwt rlbwt_of_text(const Text& text) {
    const SuffixArray sa = build_suffix_array(text);
    return rlbwt_encode(bwt_from_sa(text, sa));
}

}  // namespace optbwtr
