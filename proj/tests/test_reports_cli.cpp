#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "yamabe/cli.hpp"
#include "yamabe/manifold_catalog.hpp"
#include "yamabe/reports.hpp"

using namespace yamabe;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_path(const std::string& name) { return "/tmp/yamabe_test_" + name; }

} // namespace

TEST_CASE("report skeleton carries version and config; fmt is canonical") {
    nlohmann::ordered_json cfg{{"dim", 7}};
    const auto j = reports::report_base(cfg);
    CHECK(j.contains("version"));
    CHECK(j["config"]["dim"] == 7);
    CHECK(reports::fmt(0.1) == reports::fmt(0.1));
    CHECK(reports::fmt(1.0) == "1");
}

TEST_CASE("CLI reports are byte-identical across reruns") {
    const std::string out1 = tmp_path("sweep1.json"), csv1 = tmp_path("sweep1.csv");
    const std::string out2 = tmp_path("sweep2.json"), csv2 = tmp_path("sweep2.csv");
    const std::vector<std::string> base = {"sweep-interaction", "--dim", "7",    "--k",
                                           "2",                 "--ell", "2",    "--eps-min",
                                           "1e-5",              "--eps-max", "1e-3",
                                           "--points-per-decade", "4"};
    auto args1 = base;
    args1.insert(args1.end(), {"--out", out1, "--out-csv", csv1});
    auto args2 = base;
    args2.insert(args2.end(), {"--out", out2, "--out-csv", csv2});
    CHECK(cli::run(args1) == 0);
    CHECK(cli::run(args2) == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(csv1) == slurp(csv2));
    // CSV schema
    std::istringstream csv(slurp(csv1));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "eps,ratio,value_mantissa,value_log10,model_value");
    std::remove(out1.c_str());
    std::remove(out2.c_str());
    std::remove(csv1.c_str());
    std::remove(csv2.c_str());
}

TEST_CASE("CLI constants and schedule round trip through files") {
    const std::string out = tmp_path("constants.json");
    CHECK(cli::run({"constants", "--dim", "7", "--out", out}) == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["constants"]["dim"] == 7);
    CHECK(j["constants"]["b_consistent"] == true);
    CHECK(j["constants"]["kn_pow"].get<double>() ==
          doctest::Approx(64343.757902225117).epsilon(1e-9));
    std::remove(out.c_str());

    const std::string sout = tmp_path("schedule.json");
    CHECK(cli::run({"schedule", "--dim", "7", "--k", "3", "--out", sout}) == 0);
    const auto sj = nlohmann::json::parse(slurp(sout));
    CHECK(sj["schedule"]["theta"][2] == "50");
    std::remove(sout.c_str());
}

TEST_CASE("CLI invalid configurations exit with code 2") {
    CHECK(cli::run({"maximize", "--dim", "7", "--k", "2"}) == 2);          // no weyl source
    CHECK(cli::run({"sweep-interaction", "--dim", "7", "--k", "2", "--d", "1.0"}) == 2);
    CHECK(cli::run({"weyl", "--manifold", "no_such_manifold"}) == 2);
    CHECK(cli::run({"symmetry", "--manifold", "s7", "--map", "bogus"}) == 2);
    CHECK(cli::run({"accept", "--profile", "bogus"}) == 2);
    CHECK(cli::run({"definitely-not-a-subcommand"}) == 2);
}

TEST_CASE("CLI energy-check and maximize succeed end to end") {
    const std::string out = tmp_path("energy.json");
    CHECK(cli::run({"energy-check", "--dim", "7", "--k", "2", "--eps", "1e-5", "--r0", "4",
                    "--out", out}) == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["rel_diff"].get<double>() <= 0.10);
    std::remove(out.c_str());

    const std::string mout = tmp_path("maximize.json");
    CHECK(cli::run({"maximize", "--dim", "7", "--k", "3", "--weyl-sq", "1.0", "--out",
                    mout}) == 0);
    const auto mj = nlohmann::json::parse(slurp(mout));
    CHECK(mj["hessian"]["negdef"] == true);
    std::remove(mout.c_str());
}

TEST_CASE("catalog file loading matches the built-in catalog") {
    const std::string path = tmp_path("catalog.json");
    reports::write_text_file(path, catalog::builtin_catalog().dump(2) + "\n");
    const auto m = catalog::load_from_catalog(path, "s2xs5");
    CHECK(m.chart.dim == 7);
    CHECK(m.samples == 20);
    CHECK_THROWS_AS(catalog::load_from_catalog(path, "nope"), ConfigInvalidError);
    std::remove(path.c_str());

    // the shipped data/manifolds.json stays in sync with the built-in catalog
    std::ifstream shipped(std::string(YAMABE_SOURCE_DIR) + "/data/manifolds.json");
    REQUIRE(shipped.good());
    nlohmann::json file_j;
    shipped >> file_j;
    CHECK(file_j == nlohmann::json(catalog::builtin_catalog()));
}

TEST_CASE("CLI weyl and symmetry oracles run from the built-in catalog") {
    const std::string wout = tmp_path("weyl.json");
    CHECK(cli::run({"weyl", "--manifold", "s2xs2", "--samples", "4", "--out", wout}) == 0);
    const auto wj = nlohmann::json::parse(slurp(wout));
    CHECK(wj["is_flat_candidate"] == false);
    CHECK(wj["max_weyl_sq"].get<double>() > 1e-3);
    std::remove(wout.c_str());

    const std::string sout = tmp_path("sym.json");
    CHECK(cli::run({"symmetry", "--manifold", "s1xs6", "--out", sout}) == 0);
    const auto sj = nlohmann::json::parse(slurp(sout));
    CHECK(sj["pass"] == true);
    std::remove(sout.c_str());
}
