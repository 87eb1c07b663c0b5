#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "support/generators.hpp"

#ifndef OPTBWTR_CLI
#error "OPTBWTR_CLI must name the CLI binary"
#endif

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

class Sandbox {
public:
    Sandbox() {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("optbwtr_cli_" + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    ~Sandbox() { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& bytes) const {
        std::ofstream(path(name), std::ios::binary) << bytes;
        return path(name);
    }
    std::string read(const std::string& name) const {
        std::ifstream in(path(name), std::ios::binary);
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    Result run(const std::string& args) const {
        const std::string out = path("stdout");
        const std::string cmd = std::string(OPTBWTR_CLI) + " " + args + " > " + out + " 2> " + path("stderr");
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read("stdout")};
    }

private:
    fs::path dir_;
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

}  // namespace

TEST_CASE("sample text build and queries") {
    Sandbox sb;
    const auto text = sb.write("f1.txt", testgen::kSampleText);
    const auto idx = sb.path("f1.idx");

    const Result built = sb.run("build " + text + " -o " + idx);
    REQUIRE(built.code == 0);
    CHECK(built.out.find("n=15 r=4 ") == 0);

    CHECK(sb.run("count " + idx + " ab").out == "5\n");
    CHECK(sb.run("count " + idx + " bab").out == "2\n");
    CHECK(sb.run("locate " + idx + " bab").out == "4\n12\n");
    CHECK(sb.run("locate " + idx + " bab --sa-order").out == "12\n4\n");

    const Result absent = sb.run("count " + idx + " zz");
    CHECK(absent.code == 0);
    CHECK(absent.out == "0\n");
    const Result none = sb.run("locate " + idx + " zz");
    CHECK(none.code == 0);
    CHECK(none.out.empty());

    CHECK(sb.run("extract " + idx + " --mark-index 1 -l 14").out == testgen::kSampleText);
    CHECK(sb.run("extract " + idx + " --mark-position 1 -l 1").out == "b");
    CHECK(sb.run("decompress " + idx).out == testgen::kSampleText);
}

TEST_CASE("json lines") {
    Sandbox sb;
    const auto idx = sb.path("f1.idx");
    REQUIRE(sb.run("build " + sb.write("f1.txt", testgen::kSampleText) + " -o " + idx).code == 0);
    CHECK(sb.run("--format json count " + idx + " ab bab").out ==
          "{\"count\":5,\"pattern\":\"ab\"}\n{\"count\":2,\"pattern\":\"bab\"}\n");
    CHECK(sb.run("locate " + idx + " bab --format json").out ==
          "{\"count\":2,\"pattern\":\"bab\",\"positions\":[4,12]}\n");
    const Result stats = sb.run("stats " + idx + " --format json");
    CHECK(stats.out.find("\"r\":4") != std::string::npos);
}

TEST_CASE("hex escapes") {
    Sandbox sb;
    const auto idx = sb.path("bin.idx");
    REQUIRE(sb.run("build " + sb.write("bin", std::string("\x01\xff\x01\xff", 4)) + " -o " + idx).code == 0);
    CHECK(sb.run("count " + idx + " " + quote("\\x01\\xff")).out == "2\n");
    CHECK(sb.run("count " + idx + " " + quote("\\x00")).out == "0\n");
    CHECK(sb.run("count " + idx + " " + quote("\\q")).code == 1);
}

TEST_CASE("extract errors") {
    Sandbox sb;
    const auto idx = sb.path("f1.idx");
    REQUIRE(sb.run("build " + sb.write("f1.txt", testgen::kSampleText) + " -o " + idx + " --marks 1,5").code == 0);
    CHECK(sb.run("extract " + idx + " --mark-index 2 -l 10").out == "abaabaabab");
    CHECK(sb.run("extract " + idx + " --mark-index 2 -l 12").code == 5);
    CHECK(sb.read("stderr").find("max 11") != std::string::npos);
    CHECK(sb.run("extract " + idx + " --mark-index 3 -l 1").code == 5);
    CHECK(sb.run("extract " + idx + " --mark-position 2 -l 1").code == 5);
    CHECK(sb.run("extract " + idx).code == 1);

    const auto bare = sb.path("bare.idx");
    REQUIRE(sb.run("build " + sb.path("f1.txt") + " -o " + bare + " --marks ''").code == 0);
    CHECK(sb.run("extract " + bare + " --mark-index 1 -l 1").code == 4);
}

TEST_CASE("empty input") {
    Sandbox sb;
    const auto idx = sb.path("e.idx");
    const Result built = sb.run("build " + sb.write("empty", "") + " -o " + idx);
    REQUIRE(built.code == 0);
    CHECK(built.out.find("n=1 r=1 ") == 0);
    const Result dec = sb.run("decompress " + idx);
    CHECK(dec.code == 0);
    CHECK(dec.out.empty());
}

TEST_CASE("round trip of a binary file") {
    Sandbox sb;
    std::mt19937_64 rng(61);
    std::string bytes;
    for (int k = 0; k < 5000; ++k) bytes.push_back(static_cast<char>(1 + rng() % 255));
    const auto idx = sb.path("b.idx");
    REQUIRE(sb.run("build " + sb.write("b", bytes) + " -o " + idx).code == 0);
    CHECK(sb.run("decompress " + idx).out == bytes);
}

TEST_CASE("repetitive megabyte") {
    Sandbox sb;
    std::mt19937_64 rng(67);
    const std::string block = testgen::random_text(rng, 1000, 26);
    std::string text;
    for (int k = 0; k < 1000; ++k) text += block;
    const auto idx = sb.path("rep.idx");
    const Result built = sb.run("build " + sb.write("rep", text) + " -o " + idx + " --format json");
    REQUIRE(built.code == 0);
    const auto r_at = built.out.find("\"r\":");
    REQUIRE(r_at != std::string::npos);
    const unsigned long r = std::stoul(built.out.substr(r_at + 4));
    CHECK(r < text.size() / 100);
    CHECK(sb.run("count " + idx + " " + block.substr(10, 20)).out == "1000\n");
}

TEST_CASE("reserved bytes and missing sections") {
    Sandbox sb;
    const Result zero = sb.run("build " + sb.write("z", std::string("ab\0c", 4)) + " -o " + sb.path("z.idx"));
    CHECK(zero.code == 2);
    CHECK(sb.read("stderr").find("offset 2") != std::string::npos);

    const Result term = sb.run("build --dictionary " + sb.write("d", std::string("ab\nc\x01\n", 6)) + " -o " +
                               sb.path("d.idx"));
    CHECK(term.code == 2);

    const auto idx = sb.path("f1.idx");
    REQUIRE(sb.run("build " + sb.write("f1.txt", testgen::kSampleText) + " -o " + idx).code == 0);
    CHECK(sb.run("prefix " + idx + " a").code == 4);

    const auto nosearch = sb.path("ns.idx");
    REQUIRE(sb.run("build " + sb.path("f1.txt") + " -o " + nosearch + " --no-search").code == 0);
    CHECK(sb.run("count " + nosearch + " a").code == 4);
    CHECK(sb.run("decompress " + nosearch).out == testgen::kSampleText);
}

TEST_CASE("dictionary prefix queries") {
    Sandbox sb;
    const auto idx = sb.path("d.idx");
    REQUIRE(sb.run("build --dictionary " + sb.write("d", "ab\nac\n") + " -o " + idx).code == 0);
    CHECK(sb.run("prefix " + idx + " a").out == "1\n2\n");
    CHECK(sb.run("prefix " + idx + " ac").out == "2\n");
    CHECK(sb.run("prefix " + idx + " ''").out == "1\n2\n");
    CHECK(sb.run("prefix " + idx + " a --count").out == "2\n");
    const Result absent = sb.run("prefix " + idx + " zz");
    CHECK(absent.code == 0);
    CHECK(absent.out.empty());
    CHECK(sb.run("prefix " + idx + " " + quote("a\\x01")).code == 2);
}

TEST_CASE("io and corruption errors") {
    Sandbox sb;
    CHECK(sb.run("build " + sb.path("missing") + " -o " + sb.path("x.idx")).code == 3);
    CHECK(sb.run("count " + sb.path("missing.idx") + " a").code == 3);
    CHECK(sb.run("build " + sb.write("t", "abc") + " -o " + sb.path("no/such/dir/x.idx")).code == 3);

    const auto idx = sb.path("f1.idx");
    REQUIRE(sb.run("build " + sb.write("f1.txt", testgen::kSampleText) + " -o " + idx).code == 0);
    std::string bytes = sb.read("f1.idx");
    bytes[bytes.size() - 6] ^= 0x40;
    CHECK(sb.run("count " + sb.write("bad.idx", bytes) + " a").code == 6);
    CHECK(sb.read("stderr").find("ChecksumMismatch") != std::string::npos);
    CHECK(sb.run("count " + sb.write("cut.idx", bytes.substr(0, 100)) + " a").code == 6);
    CHECK(sb.read("stderr").find("TruncatedSection") != std::string::npos);
    CHECK(sb.run("count " + sb.write("junk.idx", "hello") + " a").code == 6);
    CHECK(sb.read("stderr").find("BadMagic") != std::string::npos);

    CHECK(sb.run("").code == 1);
    CHECK(sb.run("frobnicate").code == 1);
    CHECK(sb.run("--help").code == 0);
}
