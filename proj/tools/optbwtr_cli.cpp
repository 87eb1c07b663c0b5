// optbwtr: build an index file from a text or dictionary and query it.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "optbwtr/serialization.hpp"

using namespace optbwtr;
using json = nlohmann::json;

namespace {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kReservedByte = 2,
    kIoError = 3,
    kMissingSection = 4,
    kExtractRange = 5,
    kCorruptIndex = 6,
};

struct CliError {
    int code;
    std::string message;
};

enum class Format { kPlain, kJson };

// "\xNN" and "\\" escapes; everything else is taken literally.
std::string unescape(const std::string& s) {
    std::string out;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] != '\\') {
            out.push_back(s[k]);
            continue;
        }
        if (k + 1 < s.size() && s[k + 1] == '\\') {
            out.push_back('\\');
            ++k;
            continue;
        }
        if (k + 3 < s.size() && s[k + 1] == 'x' && std::isxdigit(static_cast<unsigned char>(s[k + 2])) &&
            std::isxdigit(static_cast<unsigned char>(s[k + 3]))) {
            out.push_back(static_cast<char>(std::stoi(s.substr(k + 2, 2), nullptr, 16)));
            k += 3;
            continue;
        }
        throw CliError{kUsage, "bad escape in pattern at offset " + std::to_string(k) + " (use \\xNN or \\\\)"};
    }
    return out;
}

// Printable ASCII kept as is, other bytes as \xNN.
std::string escape(std::string_view s) {
    std::string out;
    char buf[5];
    for (char ch : s) {
        const auto c = static_cast<unsigned char>(ch);
        if (c == '\\') {
            out += "\\\\";
        } else if (c >= 0x20 && c < 0x7f) {
            out.push_back(ch);
        } else {
            std::snprintf(buf, sizeof buf, "\\x%02x", c);
            out += buf;
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{kIoError, "cannot open " + path};
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw CliError{kIoError, "read failed: " + path};
    return data;
}

IndexBundle read_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError{kIoError, "cannot open index " + path};
    try {
        return load(in);
    } catch (const LoadError& e) {
        throw CliError{kCorruptIndex, path + ": " + e.what()};
    } catch (const std::ios_base::failure& e) {
        throw CliError{kIoError, path + ": " + e.what()};
    }
}

std::vector<pos_t> parse_marks(const std::string& list) {
    std::vector<pos_t> marks;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            marks.push_back(v);
        } catch (const std::logic_error&) {
            throw CliError{kUsage, "bad mark '" + item + "'"};
        }
    }
    std::sort(marks.begin(), marks.end());
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
    return marks;
}

void emit(Format fmt, const json& j, const std::string& plain) {
    if (fmt == Format::kJson) {
        std::cout << j.dump() << '\n';
    } else {
        std::cout << plain;
    }
}

const OptBwtrIndex& need_search(const IndexBundle& b) {
    if (!b.search) throw CliError{kMissingSection, "index has no search section"};
    return *b.search;
}

// ---- commands ----

struct BuildArgs {
    std::string input;
    std::string output;
    std::string marks = "1";
    bool dictionary = false;
    bool no_search = false;
};

int cmd_build(const BuildArgs& a, Format fmt) {
    const std::string raw = read_file(a.input);
    IndexBundle b;
    std::optional<Dictionary> dict;
    try {
        if (a.dictionary) {
            dict.emplace(Dictionary::from_lines(raw));
            b.rlbwt = rlbwt_of_text(dict->concatenate());
        } else {
            b.rlbwt = rlbwt_of_text(Text::from_raw(raw));
        }
    } catch (const ReservedByteError& e) {
        throw CliError{kReservedByte, "reserved byte " + std::to_string(e.value()) + " at offset " +
                                          std::to_string(e.offset())};
    } catch (const std::invalid_argument& e) {
        throw CliError{kUsage, e.what()};
    }

    const std::vector<pos_t> marks = parse_marks(a.marks);
    for (pos_t m : marks) {
        if (m < 1 || m > b.rlbwt.n()) {
            throw CliError{kExtractRange, "mark " + std::to_string(m) + " outside [1, " +
                                              std::to_string(b.rlbwt.n()) + "]"};
        }
    }
    LfPhiTables tables;
    if (!a.no_search) {
        b.search = OptBwtrIndex::build(b.rlbwt);
        tables = b.search->tables();
    } else if (!marks.empty()) {
        tables = build_lf_phi_tables(b.rlbwt);
    }
    if (!marks.empty()) b.extract = ExtractIndex::build(b.rlbwt, tables, marks);
    if (dict) b.prefix = CompactTrie::build(*dict);

    std::ofstream out(a.output, std::ios::binary);
    if (!out) throw CliError{kIoError, "cannot create " + a.output};
    std::uint64_t written = 0;
    try {
        written = save(b, out);
    } catch (const std::ios_base::failure& e) {
        throw CliError{kIoError, "write failed: " + a.output};
    }

    const idx_t lf = b.search ? b.search->tables().move_lf.size() : 0;
    const idx_t sa = b.search ? b.search->tables().move_sa.size() : 0;
    json j{{"n", b.rlbwt.n()}, {"r", b.rlbwt.r()}, {"lf_intervals", lf}, {"sa_intervals", sa},
           {"bytes", written}};
    std::ostringstream plain;
    plain << "n=" << b.rlbwt.n() << " r=" << b.rlbwt.r() << " lf_intervals=" << lf << " sa_intervals=" << sa
          << " bytes=" << written << '\n';
    emit(fmt, j, plain.str());
    return kOk;
}

int cmd_count(const std::string& index, const std::vector<std::string>& patterns, Format fmt) {
    const IndexBundle b = read_index(index);
    const OptBwtrIndex& idx = need_search(b);
    for (const std::string& raw : patterns) {
        const std::string p = unescape(raw);
        const pos_t c = idx.count(p);
        emit(fmt, json{{"pattern", escape(p)}, {"count", c}}, std::to_string(c) + '\n');
    }
    return kOk;
}

int cmd_locate(const std::string& index, const std::vector<std::string>& patterns, bool sa_order, Format fmt) {
    const IndexBundle b = read_index(index);
    const OptBwtrIndex& idx = need_search(b);
    for (const std::string& raw : patterns) {
        const std::string p = unescape(raw);
        std::vector<pos_t> pos = idx.locate(p);
        if (!sa_order) std::sort(pos.begin(), pos.end());
        std::string plain;
        for (pos_t x : pos) plain += std::to_string(x) + '\n';
        emit(fmt, json{{"pattern", escape(p)}, {"count", pos.size()}, {"positions", pos}}, plain);
    }
    return kOk;
}

int cmd_extract(const std::string& index, std::optional<idx_t> mark_index, std::optional<pos_t> mark_position,
                pos_t length, Format fmt) {
    const IndexBundle b = read_index(index);
    if (!b.extract) throw CliError{kMissingSection, "index has no extract section"};
    const ExtractIndex& ei = *b.extract;
    idx_t j = 0;
    if (mark_index) {
        j = *mark_index;
        if (j < 1 || j > ei.mark_count()) {
            throw CliError{kExtractRange, "mark index " + std::to_string(j) + " outside [1, " +
                                              std::to_string(ei.mark_count()) + "]"};
        }
    } else {
        j = ei.mark_index_of(*mark_position);
        if (j == 0) throw CliError{kExtractRange, "position " + std::to_string(*mark_position) + " is not marked"};
    }
    const pos_t limit = ei.max_length(j);
    if (length < 1 || length > limit) {
        throw CliError{kExtractRange, "length " + std::to_string(length) + " exceeds max " + std::to_string(limit)};
    }
    const std::string s = ei.extract(j, length);
    if (fmt == Format::kJson) {
        emit(fmt,
             json{{"mark", j}, {"position", ei.marks()[j - 1]}, {"length", length}, {"text", escape(s)}}, "");
    } else {
        std::cout.write(s.data(), static_cast<std::streamsize>(s.size()));
    }
    return kOk;
}

int cmd_decompress(const std::string& index, Format fmt) {
    const IndexBundle b = read_index(index);
    const std::string body = decompress(b.rlbwt).body();
    if (fmt == Format::kJson) {
        emit(fmt, json{{"n", b.rlbwt.n()}, {"text", escape(body)}}, "");
    } else {
        std::cout.write(body.data(), static_cast<std::streamsize>(body.size()));
    }
    return kOk;
}

int cmd_prefix(const std::string& index, const std::vector<std::string>& patterns, bool count_only, Format fmt) {
    const IndexBundle b = read_index(index);
    if (!b.prefix) throw CliError{kMissingSection, "index has no prefix section"};
    for (const std::string& raw : patterns) {
        const std::string p = unescape(raw);
        std::vector<idx_t> lines;
        try {
            lines = b.prefix->prefix_locate(p);
        } catch (const ReservedByteError& e) {
            throw CliError{kReservedByte, "reserved byte in pattern at offset " + std::to_string(e.offset())};
        }
        if (count_only) {
            emit(fmt, json{{"pattern", escape(p)}, {"count", lines.size()}}, std::to_string(lines.size()) + '\n');
        } else {
            std::string plain;
            for (idx_t x : lines) plain += std::to_string(x) + '\n';
            emit(fmt, json{{"pattern", escape(p)}, {"count", lines.size()}, {"lines", lines}}, plain);
        }
    }
    return kOk;
}

int cmd_stats(const std::string& index, Format fmt) {
    const IndexBundle b = read_index(index);
    json j{{"n", b.rlbwt.n()}, {"r", b.rlbwt.r()}, {"flags", b.flags()}};
    if (b.search) {
        const LfPhiTables& t = b.search->tables();
        j["lf_intervals"] = t.move_lf.size();
        j["sa_intervals"] = t.move_sa.size();
        j["fl_intervals"] = t.move_fl.size();
    }
    if (b.extract) j["marks"] = b.extract->mark_count();
    if (b.prefix) {
        j["dictionary_size"] = b.prefix->dictionary_size();
        j["trie_nodes"] = b.prefix->nodes().size();
        j["label_marks"] = b.prefix->labels().mark_count();
    }
    std::string plain;
    for (const auto& [key, value] : j.items()) plain += key + '=' + value.dump() + '\n';
    emit(fmt, j, plain);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    CLI::App app{"Run-length BWT index: build, count, locate, extract, decompress, prefix search"};
    app.require_subcommand(1);

    std::string format = "plain";
    app.add_option("--format", format, "Output format: plain or json (one object per line)")
        ->check(CLI::IsMember({"plain", "json"}));
    app.fallthrough();

    BuildArgs build;
    auto* sub_build = app.add_subcommand("build", "Build an index file");
    sub_build->add_option("input", build.input, "Text file (or dictionary with --dictionary)")->required();
    sub_build->add_option("-o,--output", build.output, "Index file to write")->required();
    sub_build->add_option("--marks", build.marks, "Comma-separated extract marks (1-based); empty for none")
        ->capture_default_str();
    sub_build->add_flag("--dictionary", build.dictionary, "Input is a newline-delimited dictionary");
    sub_build->add_flag("--no-search", build.no_search, "Omit the count/locate section");

    std::string index;
    std::vector<std::string> patterns;
    bool sa_order = false;
    bool count_only = false;
    std::optional<idx_t> mark_index;
    std::optional<pos_t> mark_position;
    pos_t length = 0;

    auto* sub_count = app.add_subcommand("count", "Count pattern occurrences");
    sub_count->add_option("index", index)->required();
    sub_count->add_option("patterns", patterns, "Patterns (\\xNN escapes)")->required();

    auto* sub_locate = app.add_subcommand("locate", "List occurrence positions");
    sub_locate->add_option("index", index)->required();
    sub_locate->add_option("patterns", patterns, "Patterns (\\xNN escapes)")->required();
    sub_locate->add_flag("--sa-order", sa_order, "Keep suffix-array order instead of sorting");

    auto* sub_extract = app.add_subcommand("extract", "Print a substring starting at a marked position");
    sub_extract->add_option("index", index)->required();
    auto* opt_mi = sub_extract->add_option("--mark-index", mark_index, "1-based mark index");
    auto* opt_mp = sub_extract->add_option("--mark-position", mark_position, "Marked text position");
    opt_mi->excludes(opt_mp);
    sub_extract->add_option("-l,--length", length, "Number of bytes")->required();

    auto* sub_decompress = app.add_subcommand("decompress", "Print the original text");
    sub_decompress->add_option("index", index)->required();

    auto* sub_prefix = app.add_subcommand("prefix", "Dictionary lines starting with a pattern");
    sub_prefix->add_option("index", index)->required();
    sub_prefix->add_option("patterns", patterns, "Patterns (\\xNN escapes)")->required();
    sub_prefix->add_flag("--count", count_only, "Print only the number of matching lines");

    auto* sub_stats = app.add_subcommand("stats", "Describe an index file");
    sub_stats->add_option("index", index)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (sub_extract->parsed() && !mark_index && !mark_position) {
        std::cerr << "extract: one of --mark-index or --mark-position is required\n";
        return kUsage;
    }

    const Format fmt = format == "json" ? Format::kJson : Format::kPlain;
    try {
        if (sub_build->parsed()) return cmd_build(build, fmt);
        if (sub_count->parsed()) return cmd_count(index, patterns, fmt);
        if (sub_locate->parsed()) return cmd_locate(index, patterns, sa_order, fmt);
        if (sub_extract->parsed()) return cmd_extract(index, mark_index, mark_position, length, fmt);
        if (sub_decompress->parsed()) return cmd_decompress(index, fmt);
        if (sub_prefix->parsed()) return cmd_prefix(index, patterns, count_only, fmt);
        if (sub_stats->parsed()) return cmd_stats(index, fmt);
    } catch (const CliError& e) {
        std::cout.flush();
        std::cerr << "error: " << e.message << '\n';
        return e.code;
    }
    return kUsage;
}
