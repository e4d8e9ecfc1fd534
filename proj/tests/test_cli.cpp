#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("fracspec_cli_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

// Runs the CLI with stdout and stderr captured under `dir`; returns the exit status.
int cli(const std::string& args, const fs::path& dir, const std::string& env = "") {
    const std::string cmd = env + " " + quoted(FRACSPEC_CLI_PATH) + " " + args + " >" + quoted(dir / "stdout.txt") +
                            " 2>" + quoted(dir / "stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path config(const std::string& name) { return fs::path(FRACSPEC_SOURCE_DIR) / "configs" / name; }

fs::path write_json(const fs::path& p, const json& j) {
    std::ofstream(p) << j.dump(2);
    return p;
}

json small_sequence_config() {
    return json::parse(R"({
      "kind": "SEQUENCE_ANALYSIS",
      "name": "power law",
      "params": {"sequence": {"formula": {"type": "POWER", "exponent": 1.0, "cap": 20000}}, "alphas": [1.0]}
    })");
}

}  // namespace

TEST_CASE("cli: run writes a report and CSV series") {
    TempDir tmp;
    const fs::path out = tmp.path / "out";
    REQUIRE(cli("run --config " + quoted(config("cantor_ifs.json")) + " --out-dir " + quoted(out), tmp.path) == 0);
    const json report = json::parse(slurp(out / "report.json"));
    CHECK(report.at("format") == "fracspec-report/1");
    CHECK(report.at("kind") == "IFS_CLASSICAL");
    CHECK(report.at("results").is_array());
    CHECK_FALSE(report.at("results").empty());
    for (const auto& s : report.at("series")) {
        const std::string csv = slurp(out / s.at("file").get<std::string>());
        const std::string header = csv.substr(0, csv.find('\n'));
        std::string cols;
        for (const auto& c : s.at("columns")) cols += (cols.empty() ? "" : ",") + c.get<std::string>();
        CHECK(header == cols);
    }
    // the written paths are listed unless --quiet
    CHECK(slurp(tmp.path / "stdout.txt").find("report.json") != std::string::npos);
    REQUIRE(cli("run --quiet --config " + quoted(config("cantor_ifs.json")) + " --out-dir " + quoted(out), tmp.path) == 0);
    CHECK(slurp(tmp.path / "stdout.txt").empty());
}

TEST_CASE("cli: numbers are written with 17 significant digits") {
    TempDir tmp;
    auto cfg = write_json(tmp.path / "seq.json", small_sequence_config());
    REQUIRE(cli("run --quiet --config " + quoted(cfg) + " --out-dir " + quoted(tmp.path / "out"), tmp.path) == 0);
    const std::string csv = slurp(tmp.path / "out" / "sequence.csv");
    CHECK(csv.rfind("n,mu_n\n1,1\n2,0.5\n3,0.33333333333333331\n", 0) == 0);
}

TEST_CASE("cli: validation errors exit with 2 and name the path") {
    TempDir tmp;
    CHECK(cli("run --config " + quoted(config("bad_ratio.json")) + " --out-dir " + quoted(tmp.path / "out"), tmp.path) == 2);
    CHECK(slurp(tmp.path / "stderr.txt").find("$.params.ifs.maps[0].ratio") != std::string::npos);
    CHECK_FALSE(fs::exists(tmp.path / "out" / "report.json"));

    std::ofstream(tmp.path / "broken.json") << "{\"kind\": \"SEQUENCE_ANALYSIS\", ";
    CHECK(cli("run --config " + quoted(tmp.path / "broken.json"), tmp.path) == 2);

    json unknown = small_sequence_config();
    unknown["params"]["colour"] = "blue";
    CHECK(cli("run --config " + quoted(write_json(tmp.path / "u.json", unknown)), tmp.path) == 2);

    CHECK(cli("run", tmp.path) == 2);
    CHECK(cli("frobnicate", tmp.path) == 2);
    CHECK(cli("run --config " + quoted(tmp.path / "missing.json"), tmp.path) == 2);
}

TEST_CASE("cli: numeric preconditions exit with 3") {
    TempDir tmp;
    json cfg = json::parse(slurp(config("cantor_gap.json")));
    cfg["params"]["gap_target"] = 2000;
    cfg["params"]["zeta_s"] = json::array({0.5});
    CHECK(cli("run --config " + quoted(write_json(tmp.path / "below.json", cfg)) + " --out-dir " + quoted(tmp.path / "o"),
              tmp.path) == 3);
    CHECK(slurp(tmp.path / "stderr.txt").find("S_BELOW_DIMENSION") != std::string::npos);

    // overlapping images are well-formed input but leave no gap list
    json overlap = json::parse(slurp(config("cantor_ifs.json")));
    overlap["params"]["ifs"]["maps"] = json::parse(R"([{"ratio": 0.6, "translation": [0.0]}, {"ratio": 0.6, "translation": [0.4]}])");
    CHECK(cli("run --config " + quoted(write_json(tmp.path / "c.json", overlap)) + " --out-dir " + quoted(tmp.path / "o"),
              tmp.path) == 3);
    CHECK(slurp(tmp.path / "stderr.txt").find("OVERLAPPING_IMAGES") != std::string::npos);
}

TEST_CASE("cli: budgets are checked before running") {
    TempDir tmp;
    CHECK(cli("run --word-budget 10 --config " + quoted(config("cantor_ifs.json")) + " --out-dir " + quoted(tmp.path / "o"),
              tmp.path) == 2);
    CHECK(slurp(tmp.path / "stderr.txt").find("$.params.depth") != std::string::npos);
}

TEST_CASE("cli: schema is valid JSON") {
    TempDir tmp;
    REQUIRE(cli("schema", tmp.path) == 0);
    const json schema = json::parse(slurp(tmp.path / "stdout.txt"));
    CHECK(schema.is_object());
    CHECK_FALSE(schema.empty());
}

TEST_CASE("cli: replays are identical apart from wall time") {
    TempDir tmp;
    const fs::path a = tmp.path / "a", b = tmp.path / "b";
    REQUIRE(cli("run --quiet --config " + quoted(config("cantor_pair.json")) + " --out-dir " + quoted(a), tmp.path) == 0);
    REQUIRE(cli("run --quiet --config " + quoted(config("cantor_pair.json")) + " --out-dir " + quoted(b), tmp.path) == 0);
    json ra = json::parse(slurp(a / "report.json")), rb = json::parse(slurp(b / "report.json"));
    ra["metadata"].erase("wall_time_seconds");
    rb["metadata"].erase("wall_time_seconds");
    CHECK(ra == rb);
    for (const auto& s : ra.at("series")) {
        const auto file = s.at("file").get<std::string>();
        CAPTURE(file);
        CHECK(slurp(a / file) == slurp(b / file));
    }

    REQUIRE(cli("compare --quiet " + quoted(a / "report.json") + " " + quoted(b / "report.json") + " --out-dir " +
                    quoted(tmp.path),
                tmp.path) == 0);
    const json cmp = json::parse(slurp(tmp.path / "compare.json"));
    CHECK(cmp.at("config_identical") == true);
    CHECK(cmp.at("significant") == 0);
}

TEST_CASE("cli: forced scalar kernels give the same report") {
    TempDir tmp;
    const fs::path a = tmp.path / "default", b = tmp.path / "scalar";
    REQUIRE(cli("run --quiet --config " + quoted(config("harmonic.json")) + " --out-dir " + quoted(a), tmp.path) == 0);
    REQUIRE(cli("run --quiet --config " + quoted(config("harmonic.json")) + " --out-dir " + quoted(b), tmp.path,
                "FRACSPEC_FORCE_SCALAR=1") == 0);
    REQUIRE(cli("compare " + quoted(a / "report.json") + " " + quoted(b / "report.json") + " --out-dir " + quoted(tmp.path),
                tmp.path) == 0);
    CHECK(json::parse(slurp(tmp.path / "compare.json")).at("significant") == 0);
}

TEST_CASE("cli: comparing different kinds is refused") {
    TempDir tmp;
    const fs::path a = tmp.path / "a", b = tmp.path / "b";
    REQUIRE(cli("run --quiet --config " + quoted(config("cantor_ifs.json")) + " --out-dir " + quoted(a), tmp.path) == 0);
    REQUIRE(cli("run --quiet --config " + quoted(config("harmonic.json")) + " --out-dir " + quoted(b), tmp.path) == 0);
    CHECK(cli("compare " + quoted(a / "report.json") + " " + quoted(b / "report.json"), tmp.path) == 2);
    CHECK(slurp(tmp.path / "stderr.txt").find("KIND_MISMATCH") != std::string::npos);
}
