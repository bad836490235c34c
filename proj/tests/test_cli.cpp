// Drives the installed CLI binary end to end: exit codes, file outputs, and
// run-to-run determinism.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunOutcome {
    int exit_code = -1;
    std::string output;
};

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "lockerloc_cli_tests";
    fs::create_directories(dir);
    return dir;
}

RunOutcome run_cli(const std::string& args) {
    const fs::path capture = work_dir() / "cli_output.txt";
    const std::string command =
        std::string(LOCKEROPT_BIN) + " " + args + " > " + capture.string() + " 2>&1";
    const int raw = std::system(command.c_str());
    RunOutcome outcome;
    outcome.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(capture);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    outcome.output = buffer.str();
    return outcome;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Drops lines holding wall-clock quantities before comparing runs.
std::string strip_volatile(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("wall_time_seconds") != std::string::npos) continue;
        if (line.find("timestamp") != std::string::npos) continue;
        out << line << "\n";
    }
    return out.str();
}

const fs::path& worked_example_file() {
    static const fs::path path = [] {
        const fs::path p = work_dir() / "worked_example.json";
        std::ofstream out(p);
        out << R"({
  "m": 2, "n": 3,
  "demand": [50, 50],
  "cost": [0, 0, 0],
  "attraction": [[2, 2, 3.1], [2, 2, 3.1]],
  "outside": [4, 4],
  "gamma": 0.5,
  "meta": {}
})";
        return p;
    }();
    return path;
}

} // namespace

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("gen --zones 5 --lockers 3").exit_code == 2); // missing --out
    CHECK(run_cli("definitely-not-a-command").exit_code == 2);
    CHECK(run_cli("solve").exit_code == 2);
    CHECK(run_cli("sweep --vary gamma --values 1 --out x.csv").exit_code == 2); // no input
    CHECK(run_cli("solve --instance " + worked_example_file().string() + " --gamma banana")
              .exit_code == 2);
    CHECK(run_cli("sweep --spec m=3,n=oops,seed=1 --vary gamma --values 1 --out x.csv")
              .exit_code == 2);
    const auto unknown_form =
        run_cli("export --instance " + worked_example_file().string() +
                " --form nope --format lp --out " + (work_dir() / "x.lp").string());
    CHECK(unknown_form.exit_code == 2);
}

TEST_CASE("data errors exit with code 3") {
    const fs::path bad = work_dir() / "bad.json";
    std::ofstream(bad) << "{ this is not json";
    CHECK(run_cli("solve --instance " + bad.string() + " --method bruteforce").exit_code == 3);
    CHECK(run_cli("solve --instance " + (work_dir() / "missing.json").string()).exit_code == 3);
}

TEST_CASE("gen then solve round trip") {
    const fs::path instance = work_dir() / "generated.json";
    const auto gen = run_cli("gen --zones 10 --lockers 6 --side 10 --seed 5 --out " +
                             instance.string());
    REQUIRE(gen.exit_code == 0);
    CHECK(fs::exists(instance));
    CHECK(gen.output.find("m=10 n=6") != std::string::npos);

    const auto solve = run_cli("solve --instance " + instance.string() +
                               " --gamma 1 --cost 2 --method bb --gap 0");
    CHECK(solve.exit_code == 0);
    CHECK(solve.output.find("status    optimal") != std::string::npos);
}

TEST_CASE("worked example through both methods") {
    const std::string base = "solve --instance " + worked_example_file().string() + " --cost 0 ";
    const auto brute = run_cli(base + "--method bruteforce");
    CHECK(brute.exit_code == 0);
    CHECK(brute.output.find("profit    50\n") != std::string::npos);

    const auto bb = run_cli(base + "--method bb --gap 0");
    CHECK(bb.exit_code == 0);
    CHECK(bb.output.find("profit    50\n") != std::string::npos);

    const auto mnl = run_cli(base + "--method bb --gap 0 --gamma inf");
    CHECK(mnl.exit_code == 0);
    CHECK(mnl.output.find("profit    63.9639") != std::string::npos);
    CHECK(mnl.output.find("open      3") != std::string::npos);
}

TEST_CASE("result files are deterministic apart from clock fields") {
    const fs::path out_a = work_dir() / "result_a.json";
    const fs::path out_b = work_dir() / "result_b.json";
    const std::string base = "solve --instance " + worked_example_file().string() +
                             " --cost 0.1 --method bb --gap 0 --threads 1 --out ";
    REQUIRE(run_cli(base + out_a.string()).exit_code == 0);
    REQUIRE(run_cli(base + out_b.string()).exit_code == 0);

    // identical command lines write different --out paths; compare bodies only
    const std::string body_a = strip_volatile(read_file(out_a));
    const std::string body_b = strip_volatile(read_file(out_b));
    const auto result_pos_a = body_a.find("\"result\"");
    const auto result_pos_b = body_b.find("\"result\"");
    REQUIRE(result_pos_a != std::string::npos);
    CHECK(body_a.substr(result_pos_a) == body_b.substr(result_pos_b));
    CHECK(body_a.find("\"manifest_hash\"") != std::string::npos);
    CHECK(body_a.find("\"x\": [1, 1, 0]") != std::string::npos);
}

TEST_CASE("seed check passes on a deterministic solve") {
    const auto checked = run_cli("solve --instance " + worked_example_file().string() +
                                 " --cost 0 --method bb --gap 0 --seed-check");
    CHECK(checked.exit_code == 0);
    CHECK(checked.output.find("seed check passed") != std::string::npos);
}

TEST_CASE("node limit terminates with exit code 1") {
    const fs::path instance = work_dir() / "limit_case.json";
    REQUIRE(run_cli("gen --zones 20 --lockers 14 --side 6 --seed 9 --out " + instance.string())
                .exit_code == 0);
    const auto limited = run_cli("solve --instance " + instance.string() +
                                 " --gamma 1 --cost 1 --gap 0 --node-limit 2 --method bb");
    CHECK(limited.exit_code == 1);
    CHECK(limited.output.find("status    node_limit") != std::string::npos);
}

TEST_CASE("export subcommand writes all formats") {
    const std::string instance = worked_example_file().string();

    const fs::path lp = work_dir() / "example.lp";
    REQUIRE(run_cli("export --instance " + instance + " --form ipd --format lp --out " +
                    lp.string())
                .exit_code == 0);
    const std::string lp_text = read_file(lp);
    CHECK(lp_text.find("y_1_3 + y_1_1 <= 1") != std::string::npos);
    CHECK(lp_text.find("Binaries") != std::string::npos);

    const fs::path conic = work_dir() / "example.conic";
    REQUIRE(run_cli("export --instance " + instance + " --form micqp-a --format conic --out " +
                    conic.string())
                .exit_code == 0);
    CHECK(read_file(conic).find("rotated b_1 z_1 1") != std::string::npos);

    const fs::path dot = work_dir() / "example.dot";
    REQUIRE(run_cli("export --instance " + instance + " --format dot --zone 0 --out " +
                    dot.string())
                .exit_code == 0);
    CHECK(read_file(dot).find("digraph") != std::string::npos);

    const fs::path json = work_dir() / "example.form.json";
    REQUIRE(run_cli("export --instance " + instance + " --form micqp-d --format json --out " +
                    json.string())
                .exit_code == 0);
    CHECK(read_file(json).find("lockerloc-formulation") != std::string::npos);
}

TEST_CASE("sweep subcommand writes the CSV and a manifest sidecar") {
    const fs::path csv = work_dir() / "sweep.csv";
    const auto sweep = run_cli(
        "sweep --spec m=6,n=5,side=8,demand-lo=10,demand-hi=100,alpha=1,xi=1,seed=77 "
        "--vary gamma --values 0,1,2,inf --cost 2 --gap 0 --out " +
        csv.string());
    REQUIRE(sweep.exit_code == 0);
    const std::string text = read_file(csv);
    CHECK(text.find("param_name,param_value,profit") == 0);
    CHECK(text.find("gamma,inf,") != std::string::npos);
    CHECK(read_file(csv.string() + ".manifest.json").find("manifest_hash") != std::string::npos);

    CHECK(run_cli("sweep --spec m=3,n=3,seed=1 --vary gamma --values \"\" --out " +
                  csv.string())
              .exit_code == 2);
}
