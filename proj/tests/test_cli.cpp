#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwalk/cli.hpp"

using namespace qwalk;

namespace {

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("qwalk2c");
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string temp_path(const std::string& tag) {
    return "cli_test_" + tag;
}

} // namespace

TEST_CASE("angle expressions parse") {
    CHECK(parse_beta_expression("pi/4") == doctest::Approx(pi / 4.0).epsilon(1e-15));
    CHECK(parse_beta_expression("3*pi/8") ==
          doctest::Approx(3.0 * pi / 8.0).epsilon(1e-15));
    CHECK(parse_beta_expression("pi") == doctest::Approx(pi).epsilon(1e-15));
    CHECK(parse_beta_expression("0.7") == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(parse_beta_expression(" 0.25*pi ") ==
          doctest::Approx(pi / 4.0).epsilon(1e-15));
    CHECK_THROWS_AS(parse_beta_expression(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_beta_expression("pie"), std::invalid_argument);
    CHECK_THROWS_AS(parse_beta_expression("2 pi"), std::invalid_argument);
    CHECK_THROWS_AS(parse_beta_expression("pi/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_beta_expression("pi/x"), std::invalid_argument);
}

TEST_CASE("state components parse") {
    const Vector4c a = parse_alpha_components("1,0,0,0");
    CHECK(a(0) == complexd(1.0, 0.0));
    CHECK(a(3) == complexd(0.0, 0.0));

    const Vector4c b = parse_alpha_components("0.5,0.5i,-0.5,0.3-0.4i");
    CHECK(b(0) == complexd(0.5, 0.0));
    CHECK(b(1) == complexd(0.0, 0.5));
    CHECK(b(2) == complexd(-0.5, 0.0));
    CHECK(b(3) == complexd(0.3, -0.4));

    const Vector4c c = parse_alpha_components("i,-i,1e-2i,0.1+1e-3i");
    CHECK(c(0) == complexd(0.0, 1.0));
    CHECK(c(1) == complexd(0.0, -1.0));
    CHECK(c(2) == complexd(0.0, 1e-2));
    CHECK(c(3) == complexd(0.1, 1e-3));

    CHECK_THROWS_AS(parse_alpha_components("1,0,0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_alpha_components("1,0,0,zz"), std::invalid_argument);
    CHECK_THROWS_AS(parse_alpha_components(""), std::invalid_argument);
}

TEST_CASE("csv artifacts parse back") {
    const CsvArtifact art =
        parse_csv_artifact("# a=1\n# b=two\nx,y\n1,2\n3,4\n");
    CHECK(art.meta.at("a") == "1");
    CHECK(art.meta.at("b") == "two");
    REQUIRE(art.columns.size() == 2);
    CHECK(art.columns[1] == "y");
    REQUIRE(art.rows.size() == 2);
    CHECK(art.rows[1][0] == "3");
}

TEST_CASE("simulate artifact carries the settled origin probability") {
    const std::string path = temp_path("sim.csv");
    CHECK(run({"simulate", "--preset", "bell", "--t", "1000", "--out", path}) ==
          exit_ok);
    const CsvArtifact art = parse_csv_artifact(slurp(path));
    CHECK(art.meta.at("command") == "simulate");
    CHECK(art.meta.at("t") == "1000");
    CHECK(std::stod(art.meta.at("norm_residual")) < 1e-10);
    REQUIRE(art.columns.size() == 6);
    bool found = false;
    for (const auto& row : art.rows) {
        if (row[0] == "0") {
            found = true;
            CHECK(std::abs(std::stod(row[1]) - 0.171562432105) < 1e-9);
        }
    }
    CHECK(found);
    CHECK(art.rows.size() == 2001);
    std::remove(path.c_str());
}

TEST_CASE("simulate at t = 0 emits the single occupied site") {
    const std::string path = temp_path("sim0.csv");
    CHECK(run({"simulate", "--preset", "bell", "--t", "0", "--out", path}) ==
          exit_ok);
    const CsvArtifact art = parse_csv_artifact(slurp(path));
    REQUIRE(art.rows.size() == 1);
    CHECK(art.rows[0][0] == "0");
    CHECK(std::stod(art.rows[0][1]) == doctest::Approx(1.0).epsilon(1e-12));
    std::remove(path.c_str());
}

TEST_CASE("density artifact: headers and distribution endpoints") {
    const std::string path = temp_path("den.csv");
    CHECK(run({"density", "--preset", "bell", "--out", path}) == exit_ok);
    const CsvArtifact art = parse_csv_artifact(slurp(path));
    CHECK(std::abs(std::stod(art.meta.at("c00")) - (std::sqrt(2.0) - 1.0)) < 1e-9);
    CHECK(std::abs(std::stod(art.meta.at("c2")) - 2.0) < 1e-9);
    REQUIRE(!art.rows.empty());
    CHECK(std::stod(art.rows.front()[2]) < 1e-6);
    CHECK(std::stod(art.rows.back()[2]) >= 1.0 - 1e-6);
    CHECK(art.rows.size() == 201);

    const std::string path2 = temp_path("den2.csv");
    CHECK(run({"density", "--preset", "nonloc", "--out", path2}) == exit_ok);
    const CsvArtifact art2 = parse_csv_artifact(slurp(path2));
    CHECK(std::abs(std::stod(art2.meta.at("c00"))) < 1e-12);
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("stationary artifact: geometric rows") {
    const std::string path = temp_path("sta.csv");
    CHECK(run({"stationary", "--preset", "bell", "--window", "6", "--out", path}) ==
          exit_ok);
    const CsvArtifact art = parse_csv_artifact(slurp(path));
    const double r = std::stod(art.meta.at("ratio"));
    CHECK(std::abs(r - 0.02943725152285943) < 1e-12);
    REQUIRE(art.rows.size() == 13);
    // rows run x = -6 .. 6; successive ratios on the right tail equal r
    for (std::size_t i = 8; i + 1 < art.rows.size(); ++i) {
        const double ratio = std::stod(art.rows[i + 1][1]) / std::stod(art.rows[i][1]);
        CHECK(std::abs(ratio - r) < 1e-12);
    }

    const std::string path2 = temp_path("sta2.csv");
    CHECK(run({"stationary", "--preset", "nonloc", "--window", "2", "--out", path2}) ==
          exit_ok);
    const CsvArtifact art2 = parse_csv_artifact(slurp(path2));
    for (const auto& row : art2.rows) {
        CHECK(std::abs(std::stod(row[1])) < 1e-12);
    }
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("exit codes for bad configuration") {
    CHECK(run({"simulate", "--alpha", "1,1,0,0"}) == exit_config_error);
    CHECK(run({"simulate", "--alpha", "1,0,0,0", "--preset", "bell"}) ==
          exit_config_error);
    CHECK(run({"density", "--beta", "2.0"}) == exit_config_error);
    CHECK(run({"density", "--beta", "0"}) == exit_config_error);
    CHECK(run({"verify", "--tol", "-1"}) == exit_config_error);
    CHECK(run({"stationary", "--preset", "unknown"}) == exit_config_error);
    CHECK(run({"simulate", "--out", "/nonexistent_dir/x.csv"}) == exit_io_error);
}

TEST_CASE("slightly off-norm states are renormalized") {
    const std::string path = temp_path("norm.csv");
    CHECK(run({"simulate", "--alpha", "0.7071,0,0,0.7071", "--t", "2", "--out",
               path}) == exit_ok);
    const CsvArtifact art = parse_csv_artifact(slurp(path));
    CHECK(std::stod(art.meta.at("norm_residual")) < 1e-12);
    std::remove(path.c_str());
}

TEST_CASE("verification command writes a report and returns success") {
    const std::string path = temp_path("report.json");
    CHECK(run({"verify", "--samples", "0", "--seed", "3", "--out", path}) ==
          exit_ok);
    const nlohmann::json doc = nlohmann::json::parse(slurp(path));
    CHECK(doc.at("meta").at("samples").get<long>() == 0);
    CHECK(!doc.at("checks").empty());
    for (const auto& check : doc.at("checks")) {
        CHECK(check.at("pass").get<bool>());
    }
    std::remove(path.c_str());
}

TEST_CASE("sweep artifact: closed forms over the grid") {
    const std::string path = temp_path("sweep.csv");
    CHECK(run({"sweep", "--beta-min", "0.2", "--beta-max", "1.4", "--beta-steps",
               "7", "--out", path}) == exit_ok);
    const CsvArtifact art = parse_csv_artifact(slurp(path));
    REQUIRE(art.rows.size() == 14);
    double previous_r = 2.0;
    for (std::size_t i = 0; i < art.rows.size(); ++i) {
        CHECK(std::stod(art.rows[i][2]) >= 0.0);  // c00
        if (i % 2 == 0) {
            const double r = std::stod(art.rows[i][4]);
            CHECK(r < previous_r);
            previous_r = r;
        }
        CHECK(art.rows[i][1] == (i % 2 == 0 ? "bell" : "nonloc"));
    }
    std::remove(path.c_str());
}

TEST_CASE("artifacts are byte-identical across runs and worker counts") {
    const std::string a = temp_path("det_a.csv");
    const std::string b = temp_path("det_b.csv");
    CHECK(run({"sweep", "--beta-min", "0.3", "--beta-max", "1.2", "--beta-steps",
               "5", "--jobs", "1", "--out", a}) == exit_ok);
    CHECK(run({"sweep", "--beta-min", "0.3", "--beta-max", "1.2", "--beta-steps",
               "5", "--jobs", "4", "--out", b}) == exit_ok);
    CHECK(slurp(a) == slurp(b));

    const std::string c = temp_path("det_c.csv");
    const std::string d = temp_path("det_d.csv");
    CHECK(run({"simulate", "--preset", "nonloc", "--t", "64", "--out", c}) ==
          exit_ok);
    CHECK(run({"simulate", "--preset", "nonloc", "--t", "64", "--out", d}) ==
          exit_ok);
    const std::string text = slurp(c);
    CHECK(text == slurp(d));
    CHECK(text.find('\r') == std::string::npos);
    std::remove(a.c_str());
    std::remove(b.c_str());
    std::remove(c.c_str());
    std::remove(d.c_str());
}

TEST_CASE("csv and json artifacts carry the same numbers") {
    const std::string pc = temp_path("fmt.csv");
    const std::string pj = temp_path("fmt.json");
    CHECK(run({"stationary", "--preset", "bell", "--window", "4", "--out", pc}) ==
          exit_ok);
    CHECK(run({"stationary", "--preset", "bell", "--window", "4", "--format",
               "json", "--out", pj}) == exit_ok);
    const CsvArtifact csv = parse_csv_artifact(slurp(pc));
    const nlohmann::json json = nlohmann::json::parse(slurp(pj));
    CHECK(json.at("meta").at("p0").get<double>() ==
          std::stod(csv.meta.at("p0")));
    REQUIRE(json.at("rows").size() == csv.rows.size());
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        CHECK(json.at("rows")[i].at("x").get<long>() == std::stol(csv.rows[i][0]));
        CHECK(json.at("rows")[i].at("p").get<double>() == std::stod(csv.rows[i][1]));
    }
    std::remove(pc.c_str());
    std::remove(pj.c_str());
}

TEST_CASE("numbers print at twelve significant digits") {
    CHECK(format_significant(0.1715628752538097) == "0.171562875254");
    CHECK(format_significant(4.0) == "4");
    CHECK(format_significant(-0.0) == "0");
    CHECK(format_significant(1e-15) == "1e-15");
    // parse back loses nothing visible at this precision
    const double v = 0.02943725152285943;
    CHECK(std::abs(std::stod(format_significant(v)) - v) < 1e-11 * v);
}
