#include "optbwtr/serialization.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <istream>
#include <iterator>
#include <ostream>
#include <string>

namespace optbwtr {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'O', 'B', 'T', 'R'};
constexpr std::size_t kHeaderSize = 4 + 4 + 4 + 8 + 8 + 4;
constexpr std::size_t kSectionHeaderSize = 4 + 8;
constexpr std::size_t kTrailerSize = 4;

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed large buffers in chunks.
    constexpr std::size_t kChunk = 1u << 30;
    for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
        const std::size_t len = std::min(kChunk, bytes.size() - off);
        crc = crc32(crc, bytes.data() + off, static_cast<uInt>(len));
    }
    return static_cast<std::uint32_t>(crc);
}

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int k = 0; k < 4; ++k) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
    }
    void u64(std::uint64_t v) {
        for (int k = 0; k < 8; ++k) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
    }
    void u64_array(std::span<const std::uint64_t> values) {
        u64(values.size());
        for (std::uint64_t v : values) u64(v);
    }
    void bytes(std::span<const std::uint8_t> values) {
        u64(values.size());
        buf_.insert(buf_.end(), values.begin(), values.end());
    }
    void append(std::span<const std::uint8_t> raw) { buf_.insert(buf_.end(), raw.begin(), raw.end()); }

    std::vector<std::uint8_t>& buffer() noexcept { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
    bool done() const noexcept { return pos_ == bytes_.size(); }

    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * k);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * k);
        return v;
    }
    std::vector<std::uint64_t> u64_array() {
        const std::uint64_t count = u64();
        if (count > remaining() / 8) overrun();
        std::vector<std::uint64_t> out(count);
        for (auto& v : out) v = u64();
        return out;
    }
    std::vector<std::uint8_t> bytes() {
        const std::uint64_t count = u64();
        if (count > remaining()) overrun();
        std::vector<std::uint8_t> out(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                      bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + count));
        pos_ += count;
        return out;
    }
    /// Element count for a record array, bounded by the bytes left.
    std::uint64_t count(std::size_t record_size) {
        const std::uint64_t c = u64();
        if (c > remaining() / record_size) overrun();
        return c;
    }

private:
    void need(std::size_t len) const {
        if (len > remaining()) overrun();
    }
    [[noreturn]] static void overrun() {
        throw LoadError(LoadError::Kind::kMalformed, "section payload overruns its declared length");
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

// ---- encoders ----

void put_rlbwt(Writer& w, const Rlbwt& rlbwt) {
    w.u64(rlbwt.n());
    w.u64(rlbwt.r());
    for (const Run& run : rlbwt.runs()) {
        w.u8(run.ch);
        w.u64(run.start);
    }
}

void put_move(Writer& w, const MoveStructure& ms) {
    w.u64(ms.n());
    w.u64(ms.size());
    for (const IntervalPair& pq : ms.sequence().pairs) {
        w.u64(pq.p);
        w.u64(pq.q);
    }
    for (idx_t x : ms.d_index()) w.u64(x);
}

void put_extract(Writer& w, const ExtractIndex& ei) {
    w.bytes(ei.l_fl());
    put_move(w, ei.move_fl());
    w.u64_array(ei.v_map());
    w.u64_array(ei.marks());
    for (const Bookmark& bm : ei.bookmarks()) {
        w.u64(bm.h);
        w.u64(bm.v);
    }
}

void put_trie(Writer& w, const CompactTrie& trie) {
    w.u64(trie.dictionary_size());
    w.u64(trie.nodes().size());
    for (const CompactTrie::Node& node : trie.nodes()) {
        w.u64(node.edge_mark);
        w.u64(node.edge_length);
        w.u8(node.first);
        w.u64(node.child_begin);
        w.u64(node.child_count);
        w.u64(node.leftmost_leaf);
        w.u64(node.rightmost_leaf);
        w.u64(node.leaf_count);
    }
    w.u64_array(trie.children());
    w.u64(trie.leaves().size());
    for (const CompactTrie::Leaf& leaf : trie.leaves()) {
        w.u64(leaf.node);
        w.u64(leaf.string_begin);
        w.u64(leaf.string_end);
        w.u64(leaf.next);
    }
    w.u64_array(trie.leaf_strings());
    put_extract(w, trie.labels());
}

template <typename Fn>
void section(Writer& w, SectionId id, Fn&& body) {
    Writer inner;
    body(inner);
    w.u32(static_cast<std::uint32_t>(id));
    w.u64(inner.buffer().size());
    w.append(inner.buffer());
}

// ---- decoders ----

Rlbwt get_rlbwt(Reader& rd) {
    const pos_t n = rd.u64();
    const idx_t r = rd.count(9);
    std::vector<Run> runs(r);
    for (Run& run : runs) {
        run.ch = rd.u8();
        run.start = rd.u64();
    }
    return Rlbwt(std::move(runs), n);
}

MoveStructure get_move(Reader& rd) {
    DisjointIntervalSequence seq;
    seq.n = rd.u64();
    const idx_t k = rd.count(24);
    seq.pairs.resize(k);
    for (IntervalPair& pq : seq.pairs) {
        pq.p = rd.u64();
        pq.q = rd.u64();
    }
    std::vector<idx_t> d_index(k);
    for (idx_t& x : d_index) x = rd.u64();
    return MoveStructure::from_parts(std::move(seq), std::move(d_index));
}

ExtractIndex get_extract(Reader& rd) {
    std::vector<symbol_t> l_fl = rd.bytes();
    MoveStructure move_fl = get_move(rd);
    std::vector<idx_t> v_map = rd.u64_array();
    std::vector<pos_t> marks = rd.u64_array();
    if (marks.size() > rd.remaining() / 16) {
        throw LoadError(LoadError::Kind::kMalformed, "bookmark table overruns its section");
    }
    std::vector<Bookmark> g(marks.size());
    for (Bookmark& bm : g) {
        bm.h = rd.u64();
        bm.v = rd.u64();
    }
    return ExtractIndex::from_parts(std::move(l_fl), std::move(move_fl), std::move(v_map), std::move(g),
                                    std::move(marks));
}

CompactTrie get_trie(Reader& rd) {
    const idx_t d = rd.u64();
    std::vector<CompactTrie::Node> nodes(rd.count(57));
    for (CompactTrie::Node& node : nodes) {
        node.edge_mark = rd.u64();
        node.edge_length = rd.u64();
        node.first = rd.u8();
        node.child_begin = rd.u64();
        node.child_count = rd.u64();
        node.leftmost_leaf = rd.u64();
        node.rightmost_leaf = rd.u64();
        node.leaf_count = rd.u64();
    }
    std::vector<idx_t> children = rd.u64_array();
    std::vector<CompactTrie::Leaf> leaves(rd.count(32));
    for (CompactTrie::Leaf& leaf : leaves) {
        leaf.node = rd.u64();
        leaf.string_begin = rd.u64();
        leaf.string_end = rd.u64();
        leaf.next = rd.u64();
    }
    std::vector<idx_t> leaf_strings = rd.u64_array();
    ExtractIndex labels = get_extract(rd);
    return CompactTrie::from_parts(d, std::move(nodes), std::move(children), std::move(leaves),
                                   std::move(leaf_strings), std::move(labels));
}

struct RawSection {
    SectionId id;
    std::span<const std::uint8_t> payload;
};

[[noreturn]] void malformed(const std::string& what) { throw LoadError(LoadError::Kind::kMalformed, what); }

}  // namespace

std::uint32_t IndexBundle::flags() const noexcept {
    std::uint32_t f = 0;
    if (search) f |= kFlagSearch;
    if (extract) f |= kFlagExtract;
    if (prefix) f |= kFlagPrefix;
    return f;
}

LoadError::LoadError(Kind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

const char* to_string(LoadError::Kind kind) noexcept {
    switch (kind) {
        case LoadError::Kind::kBadMagic: return "BadMagic";
        case LoadError::Kind::kUnsupportedVersion: return "UnsupportedVersion";
        case LoadError::Kind::kTruncatedSection: return "TruncatedSection";
        case LoadError::Kind::kChecksumMismatch: return "ChecksumMismatch";
        case LoadError::Kind::kMalformed: return "Malformed";
    }
    return "Unknown";
}

std::vector<std::uint8_t> serialize(const IndexBundle& bundle) {
    Writer w;
    std::uint32_t sections = 1;
    if (bundle.search) sections += 6;
    if (bundle.extract) sections += 1;
    if (bundle.prefix) sections += 1;

    w.append(kMagic);
    w.u32(kFormatVersion);
    w.u32(bundle.flags());
    w.u64(bundle.rlbwt.n());
    w.u64(bundle.rlbwt.r());
    w.u32(sections);

    section(w, SectionId::kRlbwt, [&](Writer& s) { put_rlbwt(s, bundle.rlbwt); });
    if (bundle.search) {
        const OptBwtrIndex& idx = *bundle.search;
        const LfPhiTables& t = idx.tables();
        section(w, SectionId::kMoveLf, [&](Writer& s) { put_move(s, t.move_lf); });
        section(w, SectionId::kMoveSa, [&](Writer& s) { put_move(s, t.move_sa); });
        section(w, SectionId::kMoveFl, [&](Writer& s) { put_move(s, t.move_fl); });
        section(w, SectionId::kLfAux, [&](Writer& s) {
            s.u64_array(t.delta);
            s.u64_array(t.u);
        });
        section(w, SectionId::kLFirst, [&](Writer& s) {
            const RankSelect& rs = idx.rank_select();
            s.bytes(rs.string());
            s.u64(rs.alphabet().size());
            for (std::size_t k = 0; k < rs.alphabet().size(); ++k) {
                s.u8(rs.alphabet()[k]);
                s.u64_array(rs.occurrences()[k]);
            }
        });
        section(w, SectionId::kSaPlus, [&](Writer& s) {
            s.u64_array(idx.sa_plus());
            s.u64_array(idx.sa_plus_index());
        });
    }
    if (bundle.extract) section(w, SectionId::kExtract, [&](Writer& s) { put_extract(s, *bundle.extract); });
    if (bundle.prefix) section(w, SectionId::kTrie, [&](Writer& s) { put_trie(s, *bundle.prefix); });

    w.u32(crc32_of(w.buffer()));
    return std::move(w.buffer());
}

IndexBundle deserialize(std::span<const std::uint8_t> bytes) {
    using Kind = LoadError::Kind;
    if (bytes.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
        throw LoadError(Kind::kBadMagic, "missing OBTR magic");
    }
    if (bytes.size() < kHeaderSize) throw LoadError(Kind::kTruncatedSection, "file ends inside the header");
    Reader header(bytes.subspan(4, kHeaderSize - 4));
    const std::uint32_t version = header.u32();
    if (version != kFormatVersion) {
        throw LoadError(Kind::kUnsupportedVersion, "format version " + std::to_string(version));
    }
    const std::uint32_t flags = header.u32();
    const std::uint64_t n = header.u64();
    const std::uint64_t r = header.u64();
    const std::uint32_t section_count = header.u32();

    // Walk the section table before trusting any payload.
    std::vector<RawSection> sections;
    std::size_t pos = kHeaderSize;
    for (std::uint32_t k = 0; k < section_count; ++k) {
        if (bytes.size() - pos < kSectionHeaderSize) {
            throw LoadError(Kind::kTruncatedSection, "file ends inside section header " + std::to_string(k + 1));
        }
        Reader sh(bytes.subspan(pos, kSectionHeaderSize));
        const std::uint32_t id = sh.u32();
        const std::uint64_t len = sh.u64();
        pos += kSectionHeaderSize;
        if (len > bytes.size() - pos) {
            throw LoadError(Kind::kTruncatedSection, "section " + std::to_string(id) + " declares " +
                                                         std::to_string(len) + " bytes, " +
                                                         std::to_string(bytes.size() - pos) + " remain");
        }
        sections.push_back({static_cast<SectionId>(id), bytes.subspan(pos, len)});
        pos += len;
    }
    if (bytes.size() - pos < kTrailerSize) throw LoadError(Kind::kTruncatedSection, "file ends before checksum");
    if (bytes.size() - pos > kTrailerSize) malformed("trailing bytes after checksum");
    const std::uint32_t stored = Reader(bytes.subspan(pos)).u32();
    if (stored != crc32_of(bytes.first(pos))) throw LoadError(Kind::kChecksumMismatch, "CRC-32 does not match");

    if ((flags & ~(kFlagSearch | kFlagExtract | kFlagPrefix)) != 0) malformed("unknown flag bits");
    std::vector<SectionId> expected{SectionId::kRlbwt};
    if (flags & kFlagSearch) {
        for (SectionId id : {SectionId::kMoveLf, SectionId::kMoveSa, SectionId::kMoveFl, SectionId::kLfAux,
                             SectionId::kLFirst, SectionId::kSaPlus}) {
            expected.push_back(id);
        }
    }
    if (flags & kFlagExtract) expected.push_back(SectionId::kExtract);
    if (flags & kFlagPrefix) expected.push_back(SectionId::kTrie);
    if (sections.size() != expected.size()) malformed("section count does not match flags");
    for (std::size_t k = 0; k < expected.size(); ++k) {
        if (sections[k].id != expected[k]) malformed("unexpected section " + std::to_string(k + 1));
    }

    try {
        std::size_t next = 0;
        auto open = [&]() { return Reader(sections[next++].payload); };
        auto close = [](const Reader& rd) {
            if (!rd.done()) malformed("section has unread bytes");
        };

        IndexBundle bundle;
        {
            Reader rd = open();
            bundle.rlbwt = get_rlbwt(rd);
            close(rd);
        }
        if (bundle.rlbwt.n() != n || bundle.rlbwt.r() != r) malformed("header n/r disagree with runs");

        if (flags & kFlagSearch) {
            LfPhiTables t;
            Reader lf = open();
            t.move_lf = get_move(lf);
            close(lf);
            Reader sa = open();
            t.move_sa = get_move(sa);
            close(sa);
            Reader fl = open();
            t.move_fl = get_move(fl);
            close(fl);
            Reader aux = open();
            t.delta = aux.u64_array();
            t.u = aux.u64_array();
            close(aux);
            if (t.delta.size() != r || t.u.size() != r) malformed("delta/u size differs from r");

            Reader lfirst = open();
            std::vector<symbol_t> s = lfirst.bytes();
            const std::uint64_t sigma = lfirst.count(9);
            std::vector<std::vector<idx_t>> occ;
            std::vector<symbol_t> alphabet;
            for (std::uint64_t k = 0; k < sigma; ++k) {
                alphabet.push_back(lfirst.u8());
                occ.push_back(lfirst.u64_array());
            }
            close(lfirst);
            RankSelect rs(std::move(s), std::move(occ));
            if (!std::ranges::equal(rs.alphabet(), alphabet)) malformed("L_first alphabet mismatch");

            Reader sp = open();
            std::vector<pos_t> sa_plus = sp.u64_array();
            std::vector<idx_t> sa_plus_index = sp.u64_array();
            close(sp);
            bundle.search = OptBwtrIndex::from_parts(bundle.rlbwt, std::move(t), std::move(rs),
                                                     std::move(sa_plus), std::move(sa_plus_index));
        }
        if (flags & kFlagExtract) {
            Reader rd = open();
            bundle.extract = get_extract(rd);
            close(rd);
            if (bundle.extract->n() != n) malformed("extract tables disagree on n");
        }
        if (flags & kFlagPrefix) {
            Reader rd = open();
            bundle.prefix = get_trie(rd);
            close(rd);
        }
        return bundle;
    } catch (const LoadError&) {
        throw;
    } catch (const std::logic_error& e) {
        malformed(e.what());
    }
}

std::uint64_t save(const IndexBundle& bundle, std::ostream& out) {
    const std::vector<std::uint8_t> bytes = serialize(bundle);
    out.exceptions(std::ios::badbit | std::ios::failbit);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    return bytes.size();
}

IndexBundle load(std::istream& in) {
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw std::ios_base::failure("index read failed");
    return deserialize(bytes);
}

}  // namespace optbwtr
