#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef VISCORE_CLI_PATH
#error "VISCORE_CLI_PATH must point at the CLI binary"
#endif
#ifndef VISCORE_FIXTURE_DIR
#error "VISCORE_FIXTURE_DIR must point at the fixture files"
#endif

namespace {

std::string fixture(const std::string& name) {
    return std::string(VISCORE_FIXTURE_DIR) + "/" + name;
}

int run(const std::string& args) {
    std::string cmd = std::string(VISCORE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("components --config /nonexistent.json --out /tmp/cli_x") == 2);
    CHECK(run("verify bogus-suite --seed 1") == 2);
    CHECK(run("verify emptiness") == 2);  // stochastic commands need a seed
    CHECK(run("hmeasure --point 0,0,2 --selector all") == 2);  // outside the ball
    CHECK(run("components --config " + fixture("octagon.json") + " --res 1") == 2);
    CHECK(run("limitset --config " + fixture("cyclic_north.json") +
              " --out /tmp/cli_elem") == 2);  // elementary group
}

TEST_CASE("limit set export") {
    CHECK(run("limitset --config " + fixture("octagon.json") +
              " --depth 3 --out /tmp/cli_ls") == 0);
    std::ifstream csv("/tmp/cli_ls.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "x,y,z");
    size_t rows = 0;
    double x, y, z;
    char c1, c2;
    std::string line;
    while (std::getline(csv, line)) {
        std::istringstream ls(line);
        ls >> x >> c1 >> y >> c2 >> z;
        CHECK(std::abs(x * x + y * y + z * z - 1.0) < 1e-6);
        CHECK(std::abs(z) < 1e-6);  // the invariant circle
        ++rows;
    }
    CHECK(rows > 100);
    CHECK(slurp("/tmp/cli_ls.ppm").substr(0, 2) == "P6");

    SUBCASE("depth zero warns but succeeds with an empty file") {
        CHECK(run("limitset --config " + fixture("octagon.json") +
                  " --depth 0 --out /tmp/cli_l0") == 0);
        CHECK(slurp("/tmp/cli_l0.csv") == "x,y,z\n");
    }
}

TEST_CASE("component chart export") {
    CHECK(run("components --config " + fixture("octagon.json") +
              " --depth 4 --dilation 0.5 --out /tmp/cli_cc") == 0);
    std::string json = slurp("/tmp/cli_cc.json");
    CHECK(json.find("\"component_count\": 2") != std::string::npos);
    CHECK(json.find("\"jordan\": \"yes\"") != std::string::npos);

    CHECK(run("components --config " + fixture("schottky.json") +
              " --depth 6 --dilation 1.5 --out /tmp/cli_cs") == 0);
    CHECK(slurp("/tmp/cli_cs.json").find("\"component_count\": 1") != std::string::npos);
}

TEST_CASE("hmeasure selectors") {
    CHECK(run("hmeasure --point 0.1,0,0 --selector all --method kernel") == 0);
    CHECK(run("hmeasure --point 0,0,0 --selector cap:0,0,1,1.5707963 --method both "
              "--samples 20000 --seed 5") == 0);
    CHECK(run("hmeasure --point 0,0,0 --selector nonsense") == 2);
}

TEST_CASE("slice determinism is byte exact") {
    std::string base = "slice --config " + fixture("schottky.json") +
                       " --depth 5 --res 16 --pixels 33 --window 0.9 --seed 3 --out ";
    CHECK(run(base + "/tmp/cli_s1") == 0);
    CHECK(run(base + "/tmp/cli_s2") == 0);
    std::string p1 = slurp("/tmp/cli_s1.ppm"), p2 = slurp("/tmp/cli_s2.ppm");
    REQUIRE(!p1.empty());
    CHECK(p1 == p2);
    CHECK(slurp("/tmp/cli_s1.csv") == slurp("/tmp/cli_s2.csv"));
    std::string head = slurp("/tmp/cli_s1.csv").substr(0, 44);
    CHECK(head == "x,y,z,state,visual_margin,convex_margin\n0.0");
}

TEST_CASE("verify runs a fast suite end to end") {
    CHECK(run("verify emptiness --seed 7 --out /tmp/cli_v1.json") == 0);
    std::string rep = slurp("/tmp/cli_v1.json");
    CHECK(rep.find("\"suite\": \"emptiness\"") != std::string::npos);
    CHECK(rep.find("\"exit_code\": 0") != std::string::npos);
}

TEST_CASE("fixture files reload into the certified groups") {
    // loading re-derives the ping-pong certificate; a bad file would throw
    CHECK(run("components --config " + fixture("freecomb.json") +
              " --depth 3 --out /tmp/cli_fc") == 0);
    // the corrupted fixture opts out of certification but still loads
    CHECK(run("components --config " + fixture("freecomb_corrupt.json") +
              " --depth 3 --out /tmp/cli_fx") == 0);
}
