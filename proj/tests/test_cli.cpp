#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "orbitforge/cli.hpp"
#include "orbitforge/io.hpp"
#include "../src/cli/experiments.hpp"

using namespace orbitforge;
using namespace orbitforge::cli;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

bool near(Scalar a, Scalar b) { return std::abs(a - b) < 1e-15; }

}  // namespace

TEST_CASE("parse_complex accepts the documented forms") {
    CHECK(near(parse_complex("1.5-0.5i"), {1.5, -0.5}));
    CHECK(near(parse_complex("2i"), {0, 2}));
    CHECK(near(parse_complex("-i"), {0, -1}));
    CHECK(near(parse_complex("i"), {0, 1}));
    CHECK(near(parse_complex("3"), {3, 0}));
    CHECK(near(parse_complex("-3"), {-3, 0}));
    CHECK(near(parse_complex("1e-3+2e2i"), {1e-3, 200}));
    CHECK(near(parse_complex("-2.5e+1-1e-2i"), {-25, -0.01}));
    CHECK_THROWS_AS(parse_complex(""), UsageError);
    CHECK_THROWS_AS(parse_complex("abc"), UsageError);
    CHECK_THROWS_AS(parse_complex("1+2"), UsageError);
    CHECK(parse_point("inf").is_infinity());
    auto list = parse_point_list("1,inf,-2i");
    REQUIRE(list.size() == 3);
    CHECK(list[1].is_infinity());
    CHECK(near(list[2].affine_value(), {0, -2}));
    CHECK(parse_rule("ea") == UpdateRule::EhrlichAberth);
    CHECK(parse_schedule("gauss-seidel") == Schedule::GaussSeidel);
    CHECK_THROWS_AS(parse_rule("newton"), UsageError);
}

TEST_CASE("JSON output keeps full precision and encodes non-finite values") {
    Json j = {{"x", to_json(0.1)}, {"inf", to_json(std::numeric_limits<Real>::infinity())}, {"z", to_json(Scalar{1.0 / 3, -2})}};
    const std::string text = dump_json(j);
    CHECK(text.find("0.10000000000000001") != std::string::npos);
    CHECK(text.find("\"inf\"") != std::string::npos);
    CHECK(text.find("[0.33333333333333331, -2]") != std::string::npos);
    auto back = Json::parse(text);
    CHECK(back["x"].get<Real>() == 0.1);
}

TEST_CASE("CSV trace schema") {
    OrbitTrace trace;
    trace.record(Configuration({ProjectivePoint::affine({1, 2}), ProjectivePoint::infinity()}));
    std::ostringstream csv;
    write_trace_csv(csv, trace);
    const std::string text = csv.str();
    CHECK(text.rfind("iteration,z1_re,z1_im,z1_mod,z1_inverted,z2_re,z2_im,z2_mod,z2_inverted\n", 0) == 0);
    CHECK(text.find("0,1,2,2.2360679774997898,1,inf,0,inf,1\n") != std::string::npos);
}

TEST_CASE("root-find example and exit codes") {
    auto ok = run({"root-find", "--rule", "ws", "--schedule", "jacobi", "--roots", "1,-1", "--init", "2,-1"});
    CHECK(ok.code == 0);
    auto report = Json::parse(ok.out);
    CHECK(report["result"]["status"] == "Converged");
    CHECK(report["result"]["iterations"].get<int>() <= 2);

    auto coeffs = run({"root-find", "--coeffs", "2,0,-2"});
    CHECK(coeffs.code == 0);
    CHECK(Json::parse(coeffs.out)["polynomial"]["degree"] == 2);

    CHECK(run({"root-find", "--rule", "ws"}).code == 2);
    CHECK(run({"root-find", "--roots", "1,-1", "--rule", "newton"}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({"paper", "no-such-experiment"}).code == 2);
    CHECK(run({"--help"}).code == 0);

    auto stuck = run({"root-find", "--rule", "ws", "--roots", "1,-1", "--init", "0.5,0.5"});
    CHECK(stuck.code == 1);
    CHECK(Json::parse(stuck.out)["result"]["status"] == "Indeterminate");
    CHECK(run({"iterate", "--rule", "ws", "--roots", "1,-1", "--init", "0.5,0.5"}).code == 1);
}

TEST_CASE("iterate, jacobian, cycles and embed-check subcommands") {
    auto it = run({"iterate", "--rule", "ea", "--roots", "1,-1,4,-4", "--init", "2,-2,0,inf", "--max-iter", "2"});
    CHECK(it.code == 0);
    CHECK(Json::parse(it.out)["trace"]["status"] == "MaxIterations");

    auto jac = run({"jacobian", "--rule", "ea", "--roots", "1,-1,4,-4", "--at", "2,-2,0,inf"});
    CHECK(jac.code == 0);
    auto jj = Json::parse(jac.out);
    CHECK(jj["charts"][3] == "inverted");
    CHECK(jj["image_charts"][2] == "inverted");

    auto cyc = run({"cycles", "--roots", "1,-1,4,-4"});
    CHECK(cyc.code == 0);
    auto cj = Json::parse(cyc.out);
    CHECK(cj["count"] == 24);
    CHECK(cj["distinct"] == 24);
    CHECK(run({"cycles", "--roots", "1,-1,4"}).code == 2);

    auto emb = run({"embed-check", "--rule", "ea", "--roots", "1,-1,4", "--at", "0.5,2i,-3", "--extra", "7,-6"});
    CHECK(emb.code == 0);
    CHECK(Json::parse(emb.out)["passed"] == true);
}

TEST_CASE("paper experiments are deterministic and honor ORBITFORGE_SEED") {
    auto a = run({"paper", "gsw-cycles", "--json"});
    auto b = run({"paper", "gsw-cycles", "--json"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(Json::parse(a.out)["result"]["solutions"].size() == 18);

    unsetenv("ORBITFORGE_SEED");
    CHECK(effective_seed(11) == 11);
    auto plain = Json::parse(run({"paper", "trace-law", "--json", "--seed", "11", "--polys", "2"}).out);
    CHECK(plain["seed"] == 11);
    setenv("ORBITFORGE_SEED", "12345", 1);
    CHECK(effective_seed(11) == 12345);
    auto over = Json::parse(run({"paper", "trace-law", "--json", "--seed", "11", "--polys", "2"}).out);
    unsetenv("ORBITFORGE_SEED");
    CHECK(over["seed"] == 12345);
    CHECK(over["passed"] == true);
    CHECK(random_roots(11, 0, 4) != random_roots(12345, 0, 4));
}

TEST_CASE("paper writes JSON and CSV files from a manifest") {
    const auto dir = std::filesystem::temp_directory_path() / "orbitforge_cli_test";
    std::filesystem::create_directories(dir);
    const auto manifest = dir / "manifest.json";
    {
        std::ofstream f(manifest);
        f << Json{{"name", "ea-divergence"},
                  {"parameters", {{"degree", 4}}},
                  {"seed", 3},
                  {"outputs", {{"json", (dir / "r.json").string()}, {"csv", (dir / "r.csv").string()}}}}
                 .dump();
    }
    auto r = run({"paper", "--manifest", manifest.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS ea-divergence") != std::string::npos);
    std::ifstream json(dir / "r.json"), csv(dir / "r.csv");
    REQUIRE(json);
    REQUIRE(csv);
    auto j = Json::parse(json);
    CHECK(j["experiment"] == "ea-divergence");
    CHECK(j["passed"] == true);
    std::string header;
    std::getline(csv, header);
    CHECK(header.rfind("iteration,z1_re", 0) == 0);
    std::filesystem::remove_all(dir);
}
