#include "cli.hpp"

#include "arsel/errors.hpp"
#include "arsel/selection.hpp"
#include "arsel/simulation.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace arsel;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<json> records(const std::string& text, const std::string& table) {
    std::vector<json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (j.at("table") == table) out.push_back(std::move(j));
    }
    return out;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "arsel_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::filesystem::path write_file(const std::string& name, const std::string& content) {
    const auto path = scratch(name);
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("input parsing", "[cli]") {
    std::istringstream in("x\n# comment\n\n1.5\n-2\n3e1\n");
    const TimeSeries s = cli::read_series(in);
    REQUIRE(s.size() == 3);
    CHECK(s[3] == 30.0);

    std::istringstream bad("1\nfoo\n");
    CHECK_THROWS_AS(cli::read_series(bad), InvalidArgument);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(cli::read_series(empty), InvalidArgument);

    CHECK(cli::parse_number_list("0.9, -0.81,0.91") == std::vector<double>{0.9, -0.81, 0.91});
    CHECK_THROWS_AS(cli::parse_number_list("1,x"), InvalidArgument);

    std::istringstream model("levels = 1.5, -0.5\nsigma2 = 2\n");
    const auto m = cli::read_model(model);
    CHECK(m.levels == std::vector<double>{1.5, -0.5});
    CHECK(m.sigma2 == 2.0);
    std::istringstream unknown("levels = 1\ncolour = red\n");
    CHECK_THROWS_AS(cli::read_model(unknown), InvalidArgument);
}

TEST_CASE("theory subcommand", "[cli]") {
    const auto r = invoke({"theory", "--levels", "0.9,-0.81,0.91", "--h", "3", "--K", "5", "--format", "jsonl"});
    REQUIRE(r.code == 0);
    const auto model = records(r.out, "model");
    REQUIRE(model.size() == 1);
    CHECK(model[0]["p_h"] == 2);
    CHECK(model[0]["p_1"] == 3);
    const auto best = records(r.out, "best");
    REQUIRE(best.size() == 1);
    CHECK(best[0]["combination"] == "(2,2)");
    CHECK(best[0]["method"] == "direct");
    const auto losses = records(r.out, "losses");
    REQUIRE(losses.size() == 5);
    CHECK(losses[0]["loss_direct"] == "inf");

    const auto file = write_file("m17.model", "# M17\nlevels = 0.9, -0.81, 0.91\n");
    const auto text = invoke({"theory", "--model", file.string(), "--h", "3", "--K", "5"});
    CHECK(text.code == 0);
    CHECK(text.out.find("(2,2)") != std::string::npos);

    const auto dgp = invoke({"theory", "--dgp", "X", "--format", "jsonl"});
    REQUIRE(dgp.code == 0);
    CHECK(records(dgp.out, "best")[0]["combination"] == "(2,1)");
}

TEST_CASE("generate, select and forecast", "[cli]") {
    const auto path = scratch("dgp1.csv");
    const auto g = invoke({"generate", "--dgp", "I", "--n", "1000", "--seed", "4", "--out", path.string()});
    REQUIRE(g.code == 0);

    const TimeSeries direct = generate(dgp_spec(DgpId::I), 1000, 4);
    CHECK(cli::read_series_file(path.string()).values()[999] == direct.values()[999]);

    const auto s = invoke({"select", "--input", path.string(), "--h", "2", "--K", "10", "--format", "jsonl"});
    REQUIRE(s.code == 0);
    const auto sel = records(s.out, "selection");
    REQUIRE(sel.size() == 1);
    const auto expect = procedure_II(direct, 2, 10, PenaltyWeight::procedure_b());
    CHECK(sel[0]["k"] == expect.choice.order);
    CHECK(sel[0]["method"] == to_string(expect.choice.method));
    CHECK(sel[0]["procedure"] == "II");
    CHECK(sel[0]["m_1"].is_null());
    CHECK(records(s.out, "candidates").size() == 30);

    const auto both = invoke({"select", "--input", path.string(), "--h", "2", "--procedure", "both", "--cn", "C",
                              "--format", "jsonl"});
    REQUIRE(both.code == 0);
    const auto rows = records(both.out, "selection");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0]["m_1"] == 20);
    CHECK(rows[1]["penalty"] == "C");

    const auto f = invoke({"forecast", "--input", path.string(), "--k", "2", "--h", "2", "--format", "jsonl"});
    REQUIRE(f.code == 0);
    CHECK(records(f.out, "forecast").size() == 2);
}

TEST_CASE("simulate subcommand", "[cli]") {
    const std::vector<std::string> args{"simulate", "--dgp", "I,VII", "--n", "300", "--reps", "10",
                                        "--seed", "5", "--format", "csv"};
    const auto a = invoke(args);
    REQUIRE(a.code == 0);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    const auto b = invoke(threaded);
    CHECK(a.out == b.out);
    auto other = args;
    other[8] = "6";
    CHECK(invoke(other).out != a.out);

    const auto sizes = invoke({"simulate", "--dgp", "I", "--n", "300,400", "--cn", "B", "--reps", "3", "--format", "jsonl"});
    REQUIRE(sizes.code == 0);
    CHECK(sizes.out.find("\"n\":400") != std::string::npos);

    const auto m = invoke({"simulate", "--mspe", "--dgp", "X", "--n", "200", "--reps", "50", "--k", "2", "--method",
                           "plug-in", "--format", "jsonl"});
    REQUIRE(m.code == 0);
    CHECK(m.out.find("scaled_excess") != std::string::npos);
}

TEST_CASE("error reporting", "[cli]") {
    SECTION("series too short for K") {
        const auto path = write_file("short.csv", "1\n2\n3\n4\n5\n");
        const auto r = invoke({"select", "--input", path.string(), "--h", "2", "--K", "10"});
        CHECK(r.code == 2);
        const json e = json::parse(r.err);
        CHECK(e["error"] == "SeriesTooShort");
        CHECK(e["exit_code"] == 2);
        CHECK(r.out.empty());
    }
    SECTION("unparseable input") {
        const auto path = write_file("bad.csv", "1\n2\nthree\n");
        const auto r = invoke({"select", "--input", path.string()});
        CHECK(r.code == 2);
        CHECK(json::parse(r.err)["message"].get<std::string>().find("line 3") != std::string::npos);
    }
    SECTION("bad options") {
        CHECK(invoke({"select"}).code == 2);
        CHECK(invoke({"frobnicate"}).code == 2);
        CHECK(invoke({"theory", "--levels", "0.5", "--kind", "unit-root"}).code == 2);
        CHECK(invoke({"simulate", "--dgp", "XII"}).code == 2);
        CHECK(invoke({"select", "--input", "x.csv", "--cn", "B", "--cn-multiplier", "2"}).code == 2);
        CHECK(invoke({"theory", "--levels", "1", "--format", "xml"}).code == 2);
    }
    SECTION("numerical failure") {
        std::string zeros;
        for (int i = 0; i < 100; ++i) zeros += "0\n";
        const auto path = write_file("zeros.csv", zeros);
        const auto r = invoke({"forecast", "--input", path.string(), "--k", "2"});
        CHECK(r.code == 3);
        CHECK(json::parse(r.err)["error"] == "SingularDesign");
    }
    SECTION("help") {
        const auto r = invoke({"--help"});
        CHECK(r.code == 0);
        CHECK(r.out.find("select") != std::string::npos);
    }
}
