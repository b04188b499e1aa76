// Process-level checks of the command line tool.  The binary path arrives in
// the TAUBERIAN_CLI environment variable (set by the test harness).

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("TAUBERIAN_CLI");
    REQUIRE(p != nullptr);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + cli_path() + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return (status >> 8) & 0xff;  // POSIX wait status -> exit code
}

std::map<std::string, std::string> slurp_dir(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream is(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        out[entry.path().filename().string()] = ss.str();
    }
    return out;
}

fs::path fresh_dir(const std::string& leaf) {
    fs::path d = fs::temp_directory_path() / leaf;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(run_cli("") == 1);                    // subcommand required
    CHECK(run_cli("frobnicate") == 1);          // unknown subcommand
    CHECK(run_cli("run") == 1);                 // missing experiment name
    CHECK(run_cli("run bogus") == 1);           // unknown experiment
    CHECK(run_cli("run means --export-graph /tmp/g.txt") == 1);
    CHECK(run_cli("run means --dump-trajectories") == 1);
    CHECK(run_cli("run discrete --graph /nonexistent/g.txt") == 1);
}

TEST_CASE("help and list exit cleanly") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("list") == 0);
}

TEST_CASE("experiments succeed and reports are reproducible") {
    const fs::path a = fresh_dir("tauberian_cli_a");
    const fs::path b = fresh_dir("tauberian_cli_b");
    CHECK(run_cli("run means --out " + a.string()) == 0);
    CHECK(run_cli("run means --out " + b.string()) == 0);

    auto fa = slurp_dir(a);
    auto fb = slurp_dir(b);
    CHECK(fa.size() >= 2);
    CHECK(fa == fb);
    for (const auto& [name, body] : fa) {
        INFO(name);
        CHECK(body.rfind("# report,", 0) == 0);
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("graph export round trips through the parser") {
    const fs::path d = fresh_dir("tauberian_cli_g");
    const fs::path g = d / "twocycle.txt";
    CHECK(run_cli("run discrete --preset twocycle --export-graph " + g.string()) == 0);
    REQUIRE(fs::exists(g));
    std::ifstream is(g);
    std::ostringstream ss;
    ss << is.rdbuf();
    CHECK(ss.str() == "0 1 1\n1 0 0\n");

    // a graph written by the tool is accepted back as input
    CHECK(run_cli("run discrete --graph " + g.string()) == 0);
    fs::remove_all(d);
}
