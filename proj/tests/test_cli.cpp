#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rankscreen/csv.hpp"
#include "rankscreen/rng.hpp"
#include "rankscreen/simgen.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace rankscreen;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("rankscreen_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunResult run_cli(const std::string& args) {
    const fs::path out = scratch_dir() / "stdout.txt";
    const fs::path err = scratch_dir() / "stderr.txt";
    const std::string cmd = std::string(RANKSCREEN_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

// A 3-predictor CSV whose response equals x1.
fs::path toy_csv(bool exp_response) {
    SplitMix64 rng(606);
    std::ostringstream os;
    os << "x1,x2,x3,y\n";
    os.precision(17);
    for (int i = 0; i < 40; ++i) {
        const double x1 = rng.normal(), x2 = rng.normal(), x3 = rng.normal();
        const double y = x1;
        os << x1 << ',' << x2 << ',' << x3 << ',' << (exp_response ? std::exp(y) : y) << '\n';
    }
    const fs::path p = scratch_dir() / (exp_response ? "toy_exp.csv" : "toy.csv");
    write_file(p, os.str());
    return p;
}

}  // namespace

TEST_CASE("screen ranks the exact predictor first") {
    const auto csv = toy_csv(false);
    const auto r = run_cli("screen " + csv.string() + " --method rrcs --response y --top 1");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("feature,score,abs_rank,selected\nx1,0.25,1,1\n", 0) == 0);
}

TEST_CASE("screen output is invariant under exp-transformed response") {
    const auto plain = toy_csv(false);
    const auto expd = toy_csv(true);
    const fs::path out_a = scratch_dir() / "rank_a.csv";
    const fs::path out_b = scratch_dir() / "rank_b.csv";
    const auto a = run_cli("screen " + plain.string() + " --method rrcs --response y --out " +
                           out_a.string());
    const auto b = run_cli("screen " + expd.string() + " --method rrcs --response y --out " +
                           out_b.string());
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(slurp(out_a) == slurp(out_b));
}

TEST_CASE("screen exit codes: conflict, malformed input, degenerate column") {
    const auto csv = toy_csv(false);
    CHECK(run_cli("screen " + csv.string() + " --response y --top 2 --gamma 0.1").exit_code == 4);
    CHECK(run_cli("screen " + csv.string() + " --response y --iterative --method gcorr").exit_code ==
          4);

    const fs::path bad = scratch_dir() / "bad.csv";
    write_file(bad, "a,b\n1,2\n3,not_a_number\n");
    CHECK(run_cli("screen " + bad.string() + " --response b").exit_code == 2);
    CHECK(run_cli("screen " + csv.string() + " --response nope").exit_code == 2);

    const fs::path degen = scratch_dir() / "degen.csv";
    write_file(degen, "a,b,y\n1,7,0.5\n2,7,1.5\n3,7,0.25\n4,7,2.5\n");
    const auto r = run_cli("screen " + degen.string() + " --method sis --response y");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("b") != std::string::npos);  // offending column named
}

TEST_CASE("iterative screen keeps the strong block on Example-1-style input") {
    int covered = 0;
    for (int rep = 0; rep < 10; ++rep) {
        ScenarioConfig cfg;
        cfg.example = ExampleKind::ex1;
        cfg.p = 100;
        cfg.n = 70;
        cfg.seed = 9000 + static_cast<std::uint64_t>(rep);
        const auto inst = generate(cfg);
        std::ostringstream os;
        os.precision(17);
        for (int j = 0; j < cfg.p; ++j) os << "x" << j + 1 << ',';
        os << "y\n";
        for (int i = 0; i < cfg.n; ++i) {
            for (int j = 0; j < cfg.p; ++j) os << inst.dataset.X(i, j) << ',';
            os << inst.dataset.y[i] << '\n';
        }
        const fs::path csv = scratch_dir() / "ex1.csv";
        write_file(csv, os.str());
        const fs::path out = scratch_dir() / "ex1_rank.csv";
        const auto r = run_cli("screen " + csv.string() +
                               " --method rrcs --iterative --model linear --response y --out " +
                               out.string());
        REQUIRE(r.exit_code == 0);
        const auto table = read_csv(out.string());
        bool x1 = false, x2 = false, x3 = false;
        for (const auto& row : table.rows) {
            if (row[3] == "1") {
                if (row[0] == "x1") x1 = true;
                if (row[0] == "x2") x2 = true;
                if (row[0] == "x3") x3 = true;
            }
        }
        if (x1 && x2 && x3) ++covered;
    }
    CHECK(covered >= 9);
}

TEST_CASE("simulate: validation, outputs, determinism, no clobber") {
    const fs::path config = scratch_dir() / "config.json";
    write_file(config, R"({"scenarios": [{"example": "ex1", "p": 30, "n": 25,
        "rho": [0.0, 0.5], "methods": ["rrcs", "sis"]}]})");
    const fs::path outdir = scratch_dir() / "sim_out";

    CHECK(run_cli("simulate " + config.string() + " --reps 0 --seed 1 --out " + outdir.string())
              .exit_code == 2);
    CHECK(run_cli("simulate " + config.string() + " --reps 2 --out " + outdir.string()).exit_code ==
          2);  // --seed required

    const auto first = run_cli("simulate " + config.string() + " --reps 3 --seed 42 --out " +
                               outdir.string());
    REQUIRE(first.exit_code == 0);
    REQUIRE(fs::exists(outdir / "results.csv"));
    REQUIRE(fs::exists(outdir / "results.json"));

    // Existing outputs are not overwritten without --force.
    CHECK(run_cli("simulate " + config.string() + " --reps 3 --seed 42 --out " + outdir.string())
              .exit_code == 2);

    const std::string json_once = slurp(outdir / "results.json");
    const auto second = run_cli("simulate " + config.string() +
                                " --reps 3 --seed 42 --threads 2 --force --out " + outdir.string());
    REQUIRE(second.exit_code == 0);
    CHECK(slurp(outdir / "results.json") == json_once);  // byte-identical

    const fs::path badconfig = scratch_dir() / "bad_config.json";
    write_file(badconfig, R"({"scenarios": [{"example": "ex1", "rho": 2.0}]})");
    const auto bad = run_cli("simulate " + badconfig.string() + " --reps 1 --seed 1 --out " +
                             (scratch_dir() / "x").string());
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("scenarios[0]") != std::string::npos);
}

TEST_CASE("report merges result files") {
    const fs::path dir = scratch_dir() / "reports";
    fs::create_directories(dir);
    const std::string header =
        "example,p,n,rho,noise,method,reps,inclusion_proportion,mmms,rsd,failures,wall_time_s\n";
    write_file(dir / "a.csv", header + "ex1,100,50,0,normal,rrcs,200,1.0,3,0,0,1.5\n");
    write_file(dir / "b.csv",
               header + "ex1,100,50,0.5,normal,rrcs,200,0.9,4,1,0,1.5\n" +
                   "ex1,100,50,0.5,normal,sis,200,0.8,5,2,0,1.1\n");

    const auto merged = run_cli("report " + dir.string() + " --format csv");
    REQUIRE(merged.exit_code == 0);
    // One header plus the three data rows.
    CHECK(std::count(merged.out.begin(), merged.out.end(), '\n') == 4);

    const auto md = run_cli("report " + dir.string() + " --format markdown");
    REQUIRE(md.exit_code == 0);
    CHECK(md.out.find("| method |") != std::string::npos);
    CHECK(md.out.find("rho=0.5") != std::string::npos);

    CHECK(run_cli("report " + (scratch_dir() / "missing_dir").string()).exit_code == 2);
}
