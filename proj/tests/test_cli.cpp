#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "cirmax/inversion.hpp"
#include "cirmax/mc.hpp"
#include "cirmax/types.hpp"

using namespace cirmax;
using nlohmann::json;

namespace {

struct CliResult {
    int code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CIRMAX_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> ls;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) ls.push_back(l);
    return ls;
}

const char* kCir = "--alpha 1 --beta 1 --sigma 1 --x0 0.5 --t 1";

} // namespace

TEST_CASE("tail values round-trip the library bit for bit") {
    const auto r = run_cli(std::string("tail ") + kCir + " --z 3 --method bromwich,eigen");
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "method,value");
    CHECK(ls[1].substr(0, 9) == "bromwich,");
    CHECK(ls[2].substr(0, 6) == "eigen,");
    const CirParams p{1, 1, 1, 0.5, 1, 3};
    CHECK(std::strtod(ls[1].c_str() + 9, nullptr) ==
          cir_running_max_cdf(p, CdfMethod::bromwich));
    CHECK(std::strtod(ls[2].c_str() + 6, nullptr) ==
          cir_running_max_cdf(p, CdfMethod::eigen));
}

TEST_CASE("zeros come out as a csv table") {
    const auto r = run_cli("zeros --b 1 --x 30 --count 5");
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 6);
    CHECK(ls[0] == "k,s_k,residual");
    const double s0 = std::strtod(ls[1].c_str() + 2, nullptr);
    CHECK(s0 > 0);
    CHECK(s0 < 1e-10);
}

TEST_CASE("asymp emits schema-tagged json") {
    const auto r =
        run_cli("asymp --lambda 1 --b 1 --x 80 --y 1 --format json");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("schema").get<int>() == 1);
    REQUIRE(j.contains("results"));
    REQUIRE(j.at("results").is_array());
    REQUIRE(j.at("results").size() == 2);
    CHECK(j.at("results")[0].at("mode").get<std::string>() == "small_y");
    CHECK(j.at("results")[1].at("mode").get<std::string>() == "fixed_y");
}

TEST_CASE("mc json reproduces the library estimate") {
    const auto r = run_cli(std::string("mc ") + kCir +
                           " --z 2 --paths 500 --steps 64 --seed 3 --format json");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("schema").get<int>() == 1);
    SimConfig cfg;
    cfg.n_paths = 500;
    cfg.n_steps = 64;
    cfg.seed = 3;
    cfg.scheme = McScheme::exact_transition;
    const auto want = mc_running_max_tail({1, 1, 1, 0.5, 1, 2}, cfg);
    CHECK(j.at("estimate").at("p_hat").get<double>() == want.p_hat);
    CHECK(j.at("estimate").at("n_hits").get<int64_t>() == want.n_hits);
}

TEST_CASE("usage problems exit with code 2") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("zeros --b 1").code == 2);
    CHECK(run_cli(std::string("tail ") + kCir + " --z 3 --method sorcery").code == 2);
}

TEST_CASE("positivity verification drives the exit code") {
    CHECK(run_cli("verify-positivity --a 1 --b 1 --depth 10").code == 0);
    CHECK(run_cli("verify-positivity --a 1/2 --b 1 --depth 10").code == 1);
}

TEST_CASE("comparison grid layout") {
    const auto r = run_cli(std::string("compare ") + kCir + " --z-grid 2,3 --skip-mc");
    REQUIRE(r.code == 0);
    const auto ls = lines_of(r.out);
    REQUIRE(ls.size() == 3);
    CHECK(ls[0].rfind("z,p_bromwich,p_eigen,p_asymp,p_mc,stderr", 0) == 0);
    CHECK(ls[1].substr(0, 2) == "2,");
    CHECK(ls[2].substr(0, 2) == "3,");
}

TEST_CASE("output lands in the requested file") {
    const std::string path = "/tmp/cirmax_cli_test_out.csv";
    std::remove(path.c_str());
    const auto r = run_cli("zeros --b 1 --x 20 --count 2 --out " + path);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "k,s_k,residual");
    std::remove(path.c_str());
}

TEST_CASE("conjecture scan succeeds at a benign point") {
    const auto r = run_cli("scan-conjecture --u0 0.7 --b 1 --x 8 --y 2 --v-max 3 --v-count 16");
    CHECK(r.code == 0);
}
