#include "normlab/commands.hpp"
#include "normlab/config.hpp"
#include "normlab/error.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace normlab;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    Scratch() {
        path = fs::temp_directory_path() / ("normlab-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~Scratch() { fs::remove_all(path); }
    fs::path path;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(std::string_view cmd, const std::string& ini, const fs::path& out) {
    std::ostringstream log;
    return run_command(cmd, parse_config(ini), out, log);
}

}  // namespace

TEST_CASE("config parsing") {
    const auto c = parse_config(R"(
function = x^2.5 + x^2
base = 7
mode = integers
workers = 3

[discrepancy]
ell = 2
n_grid = 1e4, 100000

[expsum]
p_grid = 1000
j = 1,2
nu = 1
gamma = 0.05
)");
    CHECK(c.base == 7);
    CHECK(c.mode == SourceMode::Integers);
    CHECK(c.workers == 3);
    CHECK(c.n_grid == std::vector<std::uint64_t>{10000, 100000});
    CHECK(c.j_values == std::vector<int>{1, 2});
    CHECK(*c.gamma == 0.05);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config("base = 1"), ConfigError);
    CHECK_THROWS_AS(parse_config("colour = red"), ConfigError);
    CHECK_THROWS_AS(parse_config("function = x^^2"), ConfigError);
    CHECK_THROWS_AS(parse_config("[generate]\nformat = pdf"), ConfigError);
    CHECK_THROWS_AS(parse_config("[discrepancy]\nn_grid = 10, ten"), ConfigError);
    CHECK_THROWS_AS(parse_config("[nothing]\na = 1"), ConfigError);
    CHECK_THROWS_AS(parse_config("function = x\n[expsum]\np_grid = 100"), ConfigError);
    CHECK_THROWS_AS(parse_config("start_bits = 32"), ConfigError);
    CHECK_THROWS_AS(parse_config("[sumdigits]\ncentral_blocks = 1a"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/normlab.ini"), ConfigError);
}

TEST_CASE("canonical form and hash") {
    const auto a = parse_config("base = 10\nfunction = x^1.5\n[discrepancy]\nn_grid = 1e3");
    const auto b = parse_config("function=x^1.5\n\n[discrepancy]\nn_grid = 1000\n");
    CHECK(a.serialize() == b.serialize());
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    CHECK(parse_config(a.serialize()).serialize() == a.serialize());
    auto c = a;
    c.workers = 8;
    CHECK(c.hash() == a.hash());
    c.base = 3;
    CHECK(c.hash() != a.hash());
}

TEST_CASE("environment overrides the precision cap") {
    auto c = parse_config("max_bits = 2048");
    setenv("NORMLAB_MAX_BITS", "512", 1);
    c.apply_environment();
    CHECK(c.policy.max_bits == 512);
    setenv("NORMLAB_MAX_BITS", "16", 1);
    CHECK_THROWS_AS(c.apply_environment(), ConfigError);
    unsetenv("NORMLAB_MAX_BITS");
}

TEST_CASE("generate writes prefixes and boundaries") {
    Scratch s;
    CHECK(run("generate", "function = x\nmode = integers\n[generate]\ndigits = 12\nformat = text", s.path) == 0);
    CHECK(slurp(s.path / "digits.txt") == "123456789101\n");
    CHECK(slurp(s.path / "boundaries.csv").rfind("index,offset,source\n0,0,1\n", 0) == 0);

    Scratch empty;
    CHECK(run("generate", "function = x\n[generate]\ndigits = 0", empty.path) == 0);
    CHECK(slurp(empty.path / "digits.bin").empty());

    Scratch table;
    CHECK(run("generate", "[generate]\ndigits = 8\ntable_P = 10", table.path) == 0);
    CHECK(slurp(table.path / "digits.bin") == std::string("\x02\x05\x01\x01\x01\x08\x03\x06", 8));
    CHECK(slurp(table.path / "table.csv") == "p,digits\n2,02\n3,05\n5,11\n7,18\n");
}

TEST_CASE("generate is repeatable") {
    Scratch a, b;
    const std::string ini = "function = sqrt2*x^1.2\nbase = 3\n[generate]\ndigits = 30000";
    CHECK(run("generate", ini, a.path) == 0);
    CHECK(run("generate", ini + "\n", b.path) == 0);
    CHECK(slurp(a.path / "digits.bin") == slurp(b.path / "digits.bin"));
}

TEST_CASE("discrepancy command") {
    Scratch s;
    CHECK(run("discrepancy", "function = x\nmode = integers\n[discrepancy]\nell = 1\nn_grid = 10", s.path) == 0);
    CHECK(slurp(s.path / "discrepancy.csv") == "N,R,RlogN\n10,0.10000000000000001,0.23025850929940456\n");

    Scratch big;
    CHECK(run("discrepancy", "[discrepancy]\nell = 7\nn_grid = 100", big.path) == 2);
    CHECK_FALSE(fs::exists(big.path / "discrepancy.csv"));
}

TEST_CASE("sumdigits command") {
    Scratch s;
    CHECK(run("sumdigits", "function = x\n[sumdigits]\np_grid = 13", s.path) == 0);
    const std::string csv = slurp(s.path / "sumdigits.csv");
    CHECK(csv.rfind("P,sum,main,residual,normalized\n13,23,", 0) == 0);

    Scratch none;
    CHECK(run("sumdigits", "[sumdigits]\ncentral_blocks = 7", none.path) == 0);
    CHECK(slurp(none.path / "sumdigits.csv") == "P,sum,main,residual,normalized\n");
    CHECK(slurp(none.path / "central_7.csv") == "P,sum,main,residual,normalized\n");
}

TEST_CASE("expsum command") {
    Scratch s;
    CHECK(run("expsum", "[expsum]\np_grid = 10, 1000\nj = 1, 4\nnu = 1, 2\nsweep = true\nblock = 7\nnu_max = 20\n"
                        "dump_coefficients = true",
              s.path) == 0);
    std::istringstream csv(slurp(s.path / "expsum.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "P,j,nu,range,re,im,abs,normalized");
    std::getline(csv, line);
    CHECK(line.rfind("10,1,1,least_significant,0.138094180166896", 0) == 0);
    int rows = 1;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 8);
    CHECK(fs::exists(s.path / "sweep.csv"));
    CHECK(fs::exists(s.path / "coefficients.csv"));

    Scratch bad;
    CHECK(run("expsum", "[expsum]\np_grid = 1000\nj = 1\nnu = 1\ngamma = 0.3", bad.path) == 2);
}

TEST_CASE("ambiguous values exit with 3") {
    Scratch s;
    CHECK(run("generate",
              "function = 1000000000000000000000000000000*x^1.5\nstart_bits = 64\nmax_bits = 64\n"
              "[generate]\ndigits = 10",
              s.path) == 3);
}

TEST_CASE("verify reports a corrupted smoothing width") {
    Scratch s;
    std::ostringstream log;
    const auto c = parse_config("[verify]\nscale = quick\ninject_fault = sandwich_delta");
    CHECK(run_verify(c, s.path, log, true) == false);
    const std::string report = slurp(s.path / "report.json");
    CHECK(report.find("\"failed\": [\n    \"smoothing_exactness\"\n  ]") != std::string::npos);
    CHECK(report.find(c.hash()) != std::string::npos);
    CHECK(log.str().find("FAILED criterion 6 (smoothing_exactness)") != std::string::npos);
}
