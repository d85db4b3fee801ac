#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

using std::string;
namespace fs = std::filesystem;

namespace {

string cli_path() {
    const char* p = std::getenv("PPQ_CLI");
    REQUIRE_MESSAGE(p != nullptr, "PPQ_CLI must point at the command-line binary");
    return p;
}

struct RunResult {
    int exit_code = -1;
    string output; // stdout and stderr combined
};

RunResult run(const string& args) {
    string cmd = cli_path() + " " + args + " 2>&1";
    std::array<char, 4096> buf;
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ppq_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    string p(const string& name) const { return (path / name).string(); }
};

string slurp(const string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

size_t count_lines(const string& s) {
    size_t n = 0;
    for (char c : s) n += (c == '\n');
    return n;
}

} // namespace

TEST_CASE("help exits cleanly; bad invocations exit with the usage code") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("summarize --help").exit_code == 0);
    CHECK(run("").exit_code == 1);                  // a subcommand is required
    CHECK(run("frobnicate").exit_code == 1);        // unknown subcommand
    CHECK(run("synth --bogus-flag x").exit_code == 1);
    CHECK(run("summarize --input a.csv").exit_code == 1); // --output missing
}

TEST_CASE("missing input files exit with the data code") {
    TempDir dir;
    RunResult r = run("summarize --input " + dir.p("absent.csv") + " --output " + dir.p("s.bin"));
    CHECK(r.exit_code == 2);
    CHECK(run("inspect --summary " + dir.p("absent.bin")).exit_code == 2);
}

TEST_CASE("synth writes the requested number of rows") {
    TempDir dir;
    string csv = dir.p("synth.csv");
    RunResult r = run("synth --n 6 --steps 11 --sigma 0.0002 --extent 0.01 --seed 4 --output " + csv);
    CHECK(r.exit_code == 0);
    string body = slurp(csv);
    CHECK(count_lines(body) == 6 * 11 + 1); // header + one row per point
    CHECK(body.rfind("traj_id,t,x,y\n", 0) == 0);
}

TEST_CASE("summarize is deterministic and verifies its own bound") {
    TempDir dir;
    string csv = dir.p("data.csv");
    REQUIRE(run("synth --n 8 --steps 15 --sigma 0.0002 --extent 0.01 --seed 6 --output " + csv)
                .exit_code == 0);
    string s1 = dir.p("a.bin"), s2 = dir.p("b.bin");
    string flags = " --eps-p 0.005 --eps-s 0.005 --verify";
    RunResult r1 = run("summarize --input " + csv + " --output " + s1 + flags);
    RunResult r2 = run("summarize --input " + csv + " --output " + s2 + flags);
    CHECK(r1.exit_code == 0);
    CHECK(r1.output.find("codebook:") != string::npos);
    CHECK(r1.output.find("verify: max refined deviation") != string::npos);
    CHECK(slurp(s1) == slurp(s2)); // byte-identical reruns
}

TEST_CASE("a planted trajectory is found by point and path queries") {
    TempDir dir;
    // trajectory 42 sits near (0.5, 0.5); trajectory 7 is far away
    std::ofstream csv(dir.p("planted.csv"));
    csv << "traj_id,t,x,y\n";
    for (int t = 1; t <= 10; ++t) {
        csv << "42," << t << "," << 0.5 + 0.0001 * t << ",0.5\n";
        csv << "7," << t << "," << 9.0 + 0.0001 * t << ",9.0\n";
    }
    csv.close();
    string summary = dir.p("planted.bin");
    // a 1 m correction grid keeps refined points well inside their raw cell
    REQUIRE(run("summarize --input " + dir.p("planted.csv") + " --output " + summary +
                " --eps-p 2 --eps-s 2 --gs 1").exit_code == 0);

    RunResult approx = run("query --summary " + summary + " --x 0.5005 --y 0.5 --t 5");
    CHECK(approx.exit_code == 0);
    CHECK(approx.output.find("42") != string::npos);
    CHECK(approx.output.find("7\n") == string::npos);

    RunResult exact = run("query --summary " + summary + " --x 0.5005 --y 0.5 --t 5 --exact" +
                          " --verify-raw " + dir.p("planted.csv"));
    CHECK(exact.exit_code == 0);
    CHECK(exact.output.find("42") != string::npos);
    CHECK(exact.output.find("raw-verified 1 of 1") != string::npos);

    RunResult path = run("query --summary " + summary + " --x 0.5005 --y 0.5 --t 5 --l 3");
    CHECK(path.exit_code == 0);
    // header plus four path points: t = 5, 6, 7, 8
    CHECK(count_lines(path.output) == 1 + 4);
    CHECK(path.output.find("42,5,") != string::npos);
    CHECK(path.output.find("42,8,") != string::npos);
}

TEST_CASE("eval reports the requested metrics") {
    TempDir dir;
    string csv = dir.p("data.csv");
    REQUIRE(run("synth --n 10 --steps 20 --sigma 0.0002 --extent 0.01 --seed 8 --output " + csv)
                .exit_code == 0);
    string summary = dir.p("s.bin");
    REQUIRE(run("summarize --input " + csv + " --output " + summary +
                " --eps-p 0.005 --eps-s 0.005").exit_code == 0);

    RunResult r = run("eval --summary " + summary + " --input " + csv +
                      " --mae --ratio --pr --io --queries 50 --seed 3");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("mae_m,") != string::npos);
    CHECK(r.output.find("ratio,") != string::npos);
    CHECK(r.output.find("precision,1") != string::npos); // exact queries are exact
    CHECK(r.output.find("recall,1") != string::npos);
    CHECK(r.output.find("pages,") != string::npos);

    // a mismatched dataset is a data error
    string other = dir.p("other.csv");
    REQUIRE(run("synth --n 3 --steps 20 --sigma 0.0002 --output " + other).exit_code == 0);
    CHECK(run("eval --summary " + summary + " --input " + other + " --mae").exit_code == 2);
}

TEST_CASE("inspect prints the stored configuration") {
    TempDir dir;
    string csv = dir.p("data.csv");
    REQUIRE(run("synth --n 5 --steps 12 --sigma 0.0002 --extent 0.01 --output " + csv)
                .exit_code == 0);
    string summary = dir.p("s.bin");
    REQUIRE(run("summarize --input " + csv + " --output " + summary +
                " --mode epq --no-cqc --eps-p 0.005 --eps-s 0.005").exit_code == 0);
    RunResult r = run("inspect --summary " + summary);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("mode: epq") != string::npos);
    CHECK(r.output.find("cqc: off") != string::npos);
    CHECK(r.output.find("trajectories: 5") != string::npos);
    CHECK(r.output.find("points: 60") != string::npos);
}
