// CLI surface checks: exit codes, CSV shape, byte-identical reruns across
// worker counts, game spec loading. Takes the CLI binary path as argv[1].

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

int run_cmd(const std::string& cmd) {
    int rc = std::system((cmd + " > /dev/null 2> /dev/null").c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-regretlab>\n");
        return 2;
    }
    std::string cli = argv[1];

    check(run_cmd(cli + " demo --builtin quadratic --T 8") == 0, "demo quadratic exits 0");
    check(run_cmd(cli + " value --builtin experts-simple --N 2 --T 1") == 0, "value exits 0");
    check(run_cmd(cli + " value --builtin no-such-game --T 1") == 2, "unknown builtin exits 2");
    check(run_cmd(cli + " value --builtin ball --T 1") == 2, "ball without matrix form exits 2");
    check(run_cmd(cli + " regret --builtin disjoint-interval --grid 64 --T 8 --exact") == 3,
          "over-budget exact enumeration exits 3");
    check(run_cmd(cli + " bounds --builtin quadratic --T 4 --assert --budget 2000") == 0,
          "quadratic bounds hold under --assert");
    check(run_cmd(cli + " bounds --builtin experts-simple --alpha 16 --seed 12345 --T 2 --assert --budget 2000") == 4,
          "experts flatness violation exits 4 under --assert");
    check(run_cmd(cli + " decompose --builtin quadratic --T 3 --assert") == 0,
          "decompose residual holds under --assert");
    check(run_cmd(cli + " report --builtin experts-simple --T 2 --budget 3000") == 2,
          "report without --out exits 2");

    // value lands on the known 1/2
    {
        int rc = std::system((cli + " value --builtin experts-simple --N 2 --T 1 --format csv > cli_value.csv 2>/dev/null").c_str());
        check(WEXITSTATUS(rc) == 0, "csv value run exits 0");
        std::string csv = slurp("cli_value.csv");
        check(csv.find("game,T,quantity,value,stderr,bound,holds,seed") == 0, "csv header exact");
        check(csv.find("minimax_value,0.49999999999999") != std::string::npos ||
                  csv.find("minimax_value,0.5") != std::string::npos,
              "csv contains the T=1 experts value 1/2");
    }

    // byte-identical CSV across reruns and worker counts
    {
        std::string base = cli + " demo --builtin experts-general --N 4 --T 512 --samples 4000 --seed 99";
        int rc1 = std::system(("REGRETLAB_THREADS=1 " + base + " --out cli_a.csv > /dev/null 2>&1").c_str());
        int rc2 = std::system(("REGRETLAB_THREADS=8 " + base + " --out cli_b.csv > /dev/null 2>&1").c_str());
        check(WEXITSTATUS(rc1) == 0 && WEXITSTATUS(rc2) == 0, "demo runs for determinism check exit 0");
        check(slurp("cli_a.csv") == slurp("cli_b.csv"), "CSV byte-identical across worker counts");
        check(!slurp("cli_a.csv").empty(), "CSV non-empty");
    }

    // game spec file: explicit matrix form and builtin form
    {
        std::ofstream spec("cli_game.json");
        spec << R"({"name":"coin","outcomes":["h","t"],"actions":["a","b"],)"
             << R"("loss":[[1.0,0.0],[0.0,1.0]]})";
        spec.close();
        check(run_cmd(cli + " value --game cli_game.json --T 1") == 0, "explicit game spec loads");
        std::ofstream bspec("cli_builtin.json");
        bspec << R"({"builtin":"experts-simple","params":{"N":3}})";
        bspec.close();
        check(run_cmd(cli + " value --game cli_builtin.json --T 1") == 0, "builtin game spec loads");
        std::ofstream bad("cli_bad.json");
        bad << "{ not json";
        bad.close();
        check(run_cmd(cli + " value --game cli_bad.json --T 1") == 2, "bad spec exits 2");
    }

    // hierarchy emits exactly one row per hierarchy level
    {
        int rc = std::system(
            (cli + " hierarchy --builtin experts-simple --T 1 --budget 3000 --out cli_h.csv > /dev/null 2>&1").c_str());
        check(WEXITSTATUS(rc) == 0, "hierarchy exits 0");
        std::string csv = slurp("cli_h.csv");
        int rows = 0;
        for (char c : csv)
            if (c == '\n') ++rows;
        check(rows == 5, "hierarchy CSV has header plus 4 rows");
        for (const char* q : {"reg_iid", "reg_indep", "reg_joint", "reg_minimax"})
            check(csv.find(q) != std::string::npos, std::string("hierarchy CSV has ") + q);
    }

    // report emits CSV plus plot data with a named series
    {
        int rc = std::system(
            (cli + " report --builtin experts-simple --T 2 --budget 3000 --out cli_report.csv > /dev/null 2>&1").c_str());
        check(WEXITSTATUS(rc) == 0, "report exits 0");
        std::string csv = slurp("cli_report.csv");
        check(csv.find("reg_iid") != std::string::npos && csv.find("reg_minimax") != std::string::npos,
              "report CSV has hierarchy rows");
        std::string plot = slurp("cli_report.cseq.dat");
        check(plot.rfind("# series: c_sequence_sweep", 0) == 0, "plot data names its series");
        int lines = 0;
        for (char c : plot)
            if (c == '\n') ++lines;
        check(lines == 6, "plot data has one point per sweep entry");
    }

    // unwritable output path exits 5
    check(run_cmd(cli + " value --builtin experts-simple --T 1 --out /no/such/dir/x.csv") == 5,
          "unwritable --out exits 5");

    std::printf("%s: %d failure(s)\n", failures == 0 ? "OK" : "FAILED", failures);
    return failures == 0 ? 0 : 1;
}
