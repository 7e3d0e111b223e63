#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "padiq/padic.hpp"

namespace {

std::string cli_path;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = cli_path + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string extract(const std::string& doc, const std::string& key) {
    auto pos = doc.find("\"" + key + "\": ");
    REQUIRE(pos != std::string::npos);
    pos += key.size() + 4;
    if (doc[pos] == '"') {
        auto end = doc.find('"', pos + 1);
        return doc.substr(pos + 1, end - pos - 1);
    }
    auto end = doc.find_first_of(",\n}", pos);
    return doc.substr(pos, end - pos);
}

}  // namespace

TEST_CASE("norm and ord") {
    auto r = run_cli("norm -p 5 25");
    CHECK(r.exit_code == 0);
    CHECK(extract(r.out, "status") == "ok");
    CHECK(extract(r.out, "norm") == "1/25");
    CHECK(extract(run_cli("norm -p inf -- -3/2").out, "norm") == "3/2");
    auto o = run_cli("ord -p 7 50/49");
    CHECK(o.exit_code == 0);
    CHECK(extract(o.out, "ord") == "-2");
}

TEST_CASE("radius and eval") {
    auto r = run_cli("radius --family binomial:1/2 -p 7");
    CHECK(r.exit_code == 0);
    CHECK(extract(r.out, "kind") == "exact");
    CHECK(extract(r.out, "exponent") == "0");
    auto e = run_cli("eval --family binomial:1/2 -x 7 --place 7 --prec 8");
    CHECK(e.exit_code == 0);
    // the digit string parses back to a p-adic value that squares to 8
    padiq::PadicNumber y = padiq::parse_padic(extract(e.out, "value"));
    CHECK(padiq::agree(padiq::pow(y, 2), padiq::from_rational(padiq::Prime(7), 8, 8)));
    auto a = run_cli("eval --family binomial:2 -x 1/2 --place inf");
    CHECK(extract(a.out, "value") == "9/4");
}

TEST_CASE("points") {
    auto r = run_cli("points -p 5 --height 7");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"-5/6\"") != std::string::npos);
    CHECK(r.out.find("\"5/7\"") != std::string::npos);
    CHECK(r.out.find("\"0\"") != std::string::npos);
}

TEST_CASE("verify-thm47") {
    auto r = run_cli("verify-thm47 -p 7 -N 2 -u 6 -v 1 --prec 10");
    CHECK(r.exit_code == 0);
    CHECK(extract(r.out, "hensel_agrees") == "true");
    CHECK(extract(r.out, "relation") == "equals -u/v");
}

TEST_CASE("verify-sumform") {
    auto r = run_cli("verify-sumform --gamma 2 --delta 2 --q 1 -N 2 -x 1/2 --place 5 --depth 12");
    CHECK(r.exit_code == 0);
    CHECK(extract(r.out, "identity_exact") == "true");
    CHECK(extract(r.out, "sum") == "-2/17");  // -(2!)^1 / (1 + (2!)^4)
}

TEST_CASE("adele-check") {
    std::string path = "/tmp/padiq_test_adele.txt";
    {
        std::ofstream f(path);
        f << "{inf: 0, 3: " << padiq::to_string(padiq::from_rational(padiq::Prime(3), 3, 8))
          << ", default: 0}\n";
    }
    auto r = run_cli("adele-check --input " + path + " --apply binomial:2 --idele --prec 8");
    CHECK(r.exit_code == 0);
    CHECK(extract(r.out, "is_idele") == "true");  // applied adele: real 1, default 1, unit at 3
    auto plain = run_cli("adele-check --input " + path + " --idele");
    CHECK(extract(plain.out, "is_idele") == "false");  // raw adele has real component 0
    std::remove(path.c_str());
}

TEST_CASE("exit codes") {
    CHECK(run_cli("norm -p 6 25").exit_code == 2);        // 6 is not prime
    CHECK(run_cli("norm -p 5").exit_code == 2);           // missing argument
    CHECK(run_cli("bogus-subcommand").exit_code == 2);
    CHECK(run_cli("eval --family binomial:1/2 -x 1 --place 7 --prec 8").exit_code == 1);
    CHECK(run_cli("verify-thm47 -p 7 -N 2 -u 1 -v 3 --prec 8").exit_code == 1);
}

TEST_CASE("determinism") {
    auto a = run_cli("eval --family phi:1,0,1,1,2 -x 1 --place 5 --prec 10");
    auto b = run_cli("eval --family phi:1,0,1,1,2 -x 1 --place 5 --prec 10");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

int impl(int argc, char** argv) {
    doctest::Context ctx;
    // last argument: path to the CLI binary under test
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-cli>\n");
        return 1;
    }
    cli_path = argv[argc - 1];
    ctx.applyCommandLine(argc - 1, argv);
    return ctx.run();
}

int main(int argc, char** argv) { return impl(argc, argv); }
