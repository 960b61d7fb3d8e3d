// Integration tests driving the CLI binary end to end.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

const std::string kBin = CAMPANA_CLI_BIN;
const std::string kModels = CAMPANA_MODELS_DIR;
const std::string kData = CAMPANA_TEST_DATA_DIR;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / "campana_cli_test";
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RunResult run(const std::string& args) {
    static int counter = 0;
    const fs::path out = fs::temp_directory_path() / ("campana_cli_out_" + std::to_string(counter));
    const fs::path err = fs::temp_directory_path() / ("campana_cli_err_" + std::to_string(counter));
    ++counter;
    const std::string cmd = kBin + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out);
    r.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return r;
}

}  // namespace

TEST_CASE("classify: Campana, NonCampana, boundary, and exit codes") {
    auto r = run("classify --model " + kModels + "/p1_halves.toml --point 8,9");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("class: Campana") != std::string::npos);

    r = run("classify --model " + kModels + "/p1_halves.toml --point 2,3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("NonCampana") != std::string::npos);
    CHECK(r.out.find("witness prime 2") != std::string::npos);

    r = run("classify --model " + kModels + "/p1_halves.toml --point 0,1");
    CHECK(r.exit_code == 3);

    r = run("classify --model " + kModels + "/p1_halves.toml --point 8,9 --json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["class"] == "Campana");
    CHECK(j["witness"].is_null());
    CHECK(j["support"].size() == 2);

    // raw representatives are normalized before classification
    r = run("classify --model " + kModels + "/p1_halves.toml --point -16,-18 --json");
    CHECK(nlohmann::json::parse(r.out)["point"] == nlohmann::json::parse(R"(["8","9"])"));
}

TEST_CASE("classify config errors exit 2") {
    CHECK(run("classify --model /nope.toml --point 1,2").exit_code == 2);
    CHECK(run("classify --model " + kModels + "/p1_halves.toml --point 1,2,3").exit_code == 2);
    CHECK(run("classify --model " + kModels + "/p1_halves.toml").exit_code == 2);
    CHECK(run("bogus-subcommand").exit_code == 2);
    // epsilon overrides must be fraction strings
    CHECK(run("classify --model " + kModels + "/p1_halves.toml --point 8,9 --set-eps 0.5,0.5")
              .exit_code == 2);
}

TEST_CASE("enumerate writes deterministic reports") {
    TempDir tmp;
    const std::string base1 = (tmp.path / "a").string();
    const std::string base2 = (tmp.path / "b").string();

    auto r = run("enumerate --model " + kModels + "/p1_halves.toml -B 200 --threads 1 --out " +
                 base1);
    CHECK(r.exit_code == 0);
    r = run("enumerate --model " + kModels + "/p1_halves.toml -B 200 --threads 3 --out " + base2);
    CHECK(r.exit_code == 0);

    CHECK(slurp(base1 + ".csv") == slurp(base2 + ".csv"));
    CHECK(slurp(base1 + ".json") == slurp(base2 + ".json"));
    CHECK(fs::exists(base1 + ".meta.json"));

    const auto j = nlohmann::json::parse(slurp(base1 + ".json"));
    CHECK(j["bigness_margin"] == "-1");
    CHECK(j["height_bound"] == 200);

    CHECK(run("enumerate --model " + kModels + "/p1_halves.toml -B 0").exit_code == 2);
}

TEST_CASE("enumerate boundary flag changes emission only") {
    TempDir tmp;
    const std::string base = (tmp.path / "c").string();
    auto r = run("enumerate --model " + kModels +
                 "/p1_halves.toml -B 50 --include-boundary --out " + base);
    CHECK(r.exit_code == 0);
    CHECK(slurp(base + ".csv").find("on_boundary") != std::string::npos);
}

TEST_CASE("epsilon-one override makes everything Campana") {
    auto r = run("enumerate --model " + kModels + "/p1_halves.toml -B 100 --set-eps 1,1 --json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const auto& b : j["buckets"]) {
        CHECK(b["non_campana"] == 0);
    }
}

TEST_CASE("the five-lines report carries its bigness margin") {
    auto r = run("enumerate --model " + kModels + "/p1_five_lines.toml -B 100 --json");
    CHECK(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.out)["bigness_margin"] == "1/2");
}

TEST_CASE("enumerate a P^2 model through the CLI") {
    auto r = run("enumerate --model " + kModels + "/p2_conic_line.toml -B 20 --json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["ambient_dim"] == 2);
    CHECK(j.contains("top_lines"));
    std::int64_t total = 0;
    for (const auto& b : j["buckets"]) total += b["total"].get<std::int64_t>();
    CHECK(total > 10000);
}

TEST_CASE("widening S through the CLI can make a point integral") {
    auto r = run("classify --model " + kModels + "/p1_halves.toml --set-s 2,3 --point 8,9 --json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["class"] == "Integral");
    CHECK(j["support"].empty());
}

TEST_CASE("vojta-gap emits a scatter and zero chain violations") {
    TempDir tmp;
    const std::string base = (tmp.path / "gap").string();
    auto r = run("vojta-gap --model " + kModels + "/p1_halves.toml -B 500 --delta 0 --out " +
                 base);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("chain violations: 0") != std::string::npos);

    const std::string csv = slurp(base + ".csv");
    CHECK(csv.substr(0, csv.find('\n')) == "point,height,n1,n_eps,height_bound,gap");
    const auto j = nlohmann::json::parse(slurp(base + ".json"));
    CHECK(j["chain_violations"] == 0);
    CHECK(j["delta"] == "0");
    CHECK(j["campana_points"].get<std::int64_t>() > 100);

    // default delta is 1/10
    r = run("vojta-gap --model " + kModels + "/p1_halves.toml -B 20 --out " + base);
    CHECK(r.exit_code == 0);
    CHECK(nlohmann::json::parse(slurp(base + ".json"))["delta"] == "1/10");

    CHECK(run("vojta-gap --model " + kModels + "/p1_halves.toml -B 20 --delta -1/2").exit_code ==
          2);
    CHECK(run("vojta-gap --model " + kModels + "/p1_halves.toml -B 20 --delta 0.1").exit_code ==
          2);

    // the big five-lines model: scatter produced, nothing asserted about bounds
    const std::string base5 = (tmp.path / "gap5").string();
    r = run("vojta-gap --model " + kModels + "/p1_five_lines.toml -B 1000 --delta 1/10 --out " +
            base5);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(base5 + ".csv"));
    CHECK(nlohmann::json::parse(slurp(base5 + ".json"))["chain_violations"] == 0);
}

TEST_CASE("verify subcommand") {
    auto r = run("verify --model " + kModels + "/p1_halves.toml -B 300 --oracle squarefull --json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["disagreements"] == 0);
    CHECK(j["points_checked"].get<std::int64_t>() > 50000);

    CHECK(run("verify --model " + kModels + "/p1_two_lines_eps0.toml -B 200 --oracle s-unit")
              .exit_code == 0);
    CHECK(run("verify --model " + kModels + "/p1_two_lines_eps1.toml -B 200 --oracle all-points")
              .exit_code == 0);
    // inapplicable oracle/model pair
    CHECK(run("verify --model " + kModels + "/p1_five_lines.toml -B 50 --oracle squarefull")
              .exit_code == 2);
    CHECK(run("verify --model " + kModels + "/p1_halves.toml -B 50 --oracle nonsense").exit_code ==
          2);
}

TEST_CASE("census over the fixture CSV is byte-reproducible") {
    TempDir tmp;
    const std::string base1 = (tmp.path / "c1").string();
    const std::string base2 = (tmp.path / "c2").string();
    auto r = run("census --source " + kData + "/curves_fixture.csv --limit 5000 --out " + base1);
    CHECK(r.exit_code == 0);
    r = run("census --source " + kData + "/curves_fixture.csv --limit 5000 --out " + base2);
    CHECK(r.exit_code == 0);
    CHECK(slurp(base1 + ".json") == slurp(base2 + ".json"));

    const auto j = nlohmann::json::parse(slurp(base1 + ".json"));
    CHECK(j["records"] == 1212);
    CHECK(j["all"]["max_level"] == 12);
    CHECK(j["semistable"]["max_level"] == 10);
    CHECK(j["semistable"]["curves"] == 738);
    CHECK(!j["proxy_caveat"].get<std::string>().empty());

    // widening S relaxes the semistable filter
    auto wide =
        run("census --source " + kData + "/curves_fixture.csv --limit 5000 --set-s 2,3 --json");
    CHECK(wide.exit_code == 0);
    const auto jw = nlohmann::json::parse(wide.out);
    CHECK(jw["semistable"]["curves"].get<std::int64_t>() >= 738);
}

TEST_CASE("census network failure without cache exits 4") {
    TempDir tmp;
    auto r = run("census --source 'http://127.0.0.1:9/api?offset={offset}&limit={limit}'"
                 " --limit 5 --cache-dir " +
                 (tmp.path / "cache").string());
    CHECK(r.exit_code == 4);
}

TEST_CASE("missing census source exits 2") {
    CHECK(run("census --source /nonexistent.csv").exit_code == 2);
}
