#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "lrlab_cli_test";

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + LRLAB_CLI_PATH + "\" " + args + " > \"" +
                            (kWork / "stdout.txt").string() + "\" 2> \"" + (kWork / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
    const auto p = kWork / name;
    std::ofstream(p) << text;
    return p;
}

struct Workspace {
    Workspace() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
};

}  // namespace

TEST_CASE_FIXTURE(Workspace, "usage errors exit 1") {
    CHECK(run("") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(slurp(kWork / "stderr.txt").size() + slurp(kWork / "stdout.txt").size() > 0);
    CHECK(run("locality --grid notanumber") == 1);
    CHECK(run("locality --config /nonexistent.json") == 1);
    CHECK(run("bound-check --supp-a 1,2 --supp-b 2,3 --mu 0.5") == 1);
    CHECK(run("locality --mu -1") == 1);
}

TEST_CASE_FIXTURE(Workspace, "locality certificate") {
    REQUIRE(run("locality --mu 0.5 --T 50 --grid 201") == 0);
    const auto j = json::parse(slurp(kWork / "stdout.txt"));
    CHECK(j["mu"] == 0.5);
    CHECK(j["v_lr"].get<double>() > 0.0);
    CHECK(j["grid"].size() == 201);

    REQUIRE(run("locality --optimize --T 50 --grid 201 --out \"" + (kWork / "loc").string() + "\"") == 0);
    CHECK(fs::exists(kWork / "loc" / "certificate.json"));
}

TEST_CASE_FIXTURE(Workspace, "decompose") {
    REQUIRE(run("decompose --T 10 --t 10 --mu 0.5") == 0);
    const auto j = json::parse(slurp(kWork / "stdout.txt"));
    CHECK(j["pairs"] == 10);
    CHECK(j["singletons"] == 11);
}

TEST_CASE_FIXTURE(Workspace, "bound-check and spread write their outputs") {
    const auto out = kWork / "audit";
    REQUIRE(run("bound-check --mu 0.5 --T 20 --grid 201 --supp-a 0 --supp-b 4,5 --out \"" + out.string() + "\"") == 0);
    const auto summary = json::parse(slurp(out / "audit_summary.json"));
    CHECK(summary["violations"] == 0);
    CHECK(slurp(out / "audit.csv").rfind("t,lhs,rhs,margin\n", 0) == 0);

    REQUIRE(run("spread --mu 0.5 --T 20 --grid 201 --source 3 --out \"" + out.string() + "\"") == 0);
    CHECK(slurp(out / "spread.csv").rfind("t,j,amplitude,bound\n", 0) == 0);
    CHECK(fs::exists(out / "spread.svg"));
}

TEST_CASE_FIXTURE(Workspace, "random model from a config") {
    const auto cfg = write_config("rnd.json", R"({"hamiltonian": {"type": "random_exp_local", "dimension": 9,
        "h": 1.0, "mu_prime": 1.5}, "seed": 3})");
    REQUIRE(run("locality --config \"" + cfg.string() + "\" --mu 0.75 --grid 51") == 0);
    const auto a = slurp(kWork / "stdout.txt");
    REQUIRE(run("locality --config \"" + cfg.string() + "\" --mu 0.75 --grid 51 --seed 4") == 0);
    CHECK(slurp(kWork / "stdout.txt") != a);
}

TEST_CASE_FIXTURE(Workspace, "adiabatic and fig1") {
    const auto out = kWork / "fig";
    const auto cfg = write_config("fig.json", R"({"hamiltonian": "paper_example", "T_values": [10, 20],
        "grid_points": 301})");
    REQUIRE(run("adiabatic --config \"" + cfg.string() + "\" --T 20 --out \"" + out.string() + "\"") == 0);
    const auto s = json::parse(slurp(out / "adiabatic_T20.json"));
    for (const char* key : {"T", "delta_ad", "gap_min", "eq8_ratio", "eq9_ratio", "eq11_ratio", "intertwining_defect"})
        CHECK(s.contains(key));

    REQUIRE(run("fig1 --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 0);
    CHECK(slurp(out / "fig1.csv").rfind("T,v_lr,delta_ad,gap_min,h_norm_min,h_norm_max\n", 0) == 0);
    CHECK(fs::exists(out / "fig1_dad_vs_vlr.svg"));
    CHECK(fs::exists(out / "fig1_vlr_vs_T.svg"));
    CHECK(fs::exists(out / "run_T10.json"));

    // A model whose ground state never leaves level 0 gives no crossings.
    const auto flat = write_config("flat.json", R"({"hamiltonian": {"type": "constant",
        "matrix": [[[0,0],[0,0]],[[0,0],[1,0]]]}, "T_values": [5], "grid_points": 51})");
    CHECK(run("fig1 --config \"" + flat.string() + "\" --out \"" + out.string() + "\"") == 2);
}
