#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "statsim_cli_tests";
        fs::remove_all(d);
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

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const fs::path out = scratch_dir() / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = scratch_dir() / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = env_prefix + " '" + STATSIM_CLI_PATH + "' " + args + " > '" +
                            out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    CmdResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

fs::path fixture(const std::string& name, const std::string& text) {
    const fs::path p = scratch_dir() / name;
    write_file(p, text);
    return p;
}

const std::string kHalfHalf =
    R"({"alphabet": 2, "marginals": [["1/2","1/2"], ["1/2","1/2"]]})";
const std::string kQuarterSkew =
    R"({"alphabet": 2, "marginals": [["3/4","1/4"], ["1/4","3/4"]]})";

}  // namespace

TEST_CASE("sim exact reports the rational value") {
    const auto p = fixture("p.json", kHalfHalf);
    const auto q = fixture("q.json", kQuarterSkew);
    const auto r = run_cli("sim '" + p.string() + "' '" + q.string() + "' --mode exact");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "result: 11/16"));
    CHECK(contains(r.out, "result_decimal: 0.6875"));
    CHECK(contains(r.out, "fnv1a64="));
}

TEST_CASE("sim fptas stays inside the sandwich and echoes scheme parameters") {
    const auto p = fixture("p.json", kHalfHalf);
    const auto r =
        run_cli("sim '" + p.string() + "' '" + p.string() + "' --mode fptas --epsilon 0.1");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "tau: 0.5"));
    CHECK(contains(r.out, "m: "));
    const auto pos = r.out.find("result_decimal: ");
    REQUIRE(pos != std::string::npos);
    const double value = std::stod(r.out.substr(pos + 16));
    CHECK(value >= 1.0 / 1.1);
    CHECK(value <= 1.1);
}

TEST_CASE("invalid epsilon exits 3") {
    const auto p = fixture("p.json", kHalfHalf);
    const auto r = run_cli("sim '" + p.string() + "' '" + p.string() + "' --epsilon 0");
    CHECK(r.exit_code == 3);
    CHECK(contains(r.err, "InvalidAccuracy"));
}

TEST_CASE("tv reports the distance and its Scheffe complement") {
    const auto p = fixture("p.json", kHalfHalf);
    const auto q = fixture("q.json", kQuarterSkew);
    const auto r = run_cli("tv '" + p.string() + "' '" + q.string() + "'");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "tv: 5/16"));
    CHECK(contains(r.out, "scheffe_similarity: 11/16"));

    const auto same = run_cli("tv '" + p.string() + "' '" + p.string() + "'");
    CHECK(contains(same.out, "tv: 0\n"));
}

TEST_CASE("reduce counts solutions and emits nets") {
    const auto phi = fixture("or2.cnf", "p cnf 2 1\n1 2 0\n");
    const fs::path nets = scratch_dir() / "nets";
    const auto r =
        run_cli("reduce '" + phi.string() + "' --count --emit-nets '" + nets.string() + "'");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "solution_count: 3"));
    CHECK(fs::exists(nets / "P.json"));
    CHECK(fs::exists(nets / "Q.json"));

    const auto unsat = fixture("unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    const auto r2 = run_cli("reduce '" + unsat.string() + "' --count");
    CHECK(r2.exit_code == 0);
    CHECK(contains(r2.out, "solution_count: 0"));
}

TEST_CASE("reduce --count over the variable budget exits 2") {
    std::string text = "p cnf 30 1\n1 2 0\n";
    const auto phi = fixture("big.cnf", text);
    const auto r = run_cli("reduce '" + phi.string() + "' --count");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "TooManyVariables"));
}

TEST_CASE("bayes-error on a prediction problem and a Bernoulli test") {
    const auto prob = fixture("prob.json",
                              R"({"prior": ["1/2","1/2"],
                                  "likelihood0": ["4/5","1/5"],
                                  "likelihood1": ["1/5","4/5"]})");
    const auto r = run_cli("bayes-error '" + prob.string() + "'");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "result: 1/5"));

    const auto degenerate = fixture("prob0.json",
                                    R"({"prior": ["1","0"],
                                        "likelihood0": ["1/2","1/2"],
                                        "likelihood1": ["1/2","1/2"]})");
    const auto r2 = run_cli("bayes-error '" + degenerate.string() + "'");
    CHECK(contains(r2.out, "result: 0\n"));

    const auto test = fixture("test.json",
                              R"({"p1": "1/2", "psi": ["3/10","7/10"], "eta": ["3/10","7/10"]})");
    const auto r3 = run_cli("bayes-error '" + test.string() + "'");
    CHECK(r3.exit_code == 0);
    CHECK(contains(r3.out, "result: 1/2"));

    const auto r4 = run_cli("bayes-error '" + test.string() + "' --mode fptas --epsilon 0.05");
    CHECK(r4.exit_code == 0);
    CHECK(contains(r4.out, "result_decimal: 0.5"));
}

TEST_CASE("float-weight files run the fptas paths") {
    const auto p = fixture("pf.json", R"({"alphabet": 2, "marginals": [[0.3, 0.7], [0.4, 0.6]]})");
    const auto r = run_cli("sim '" + p.string() + "' '" + p.string() + "' --epsilon 0.1");
    CHECK(r.exit_code == 0);
    const auto pos = r.out.find("result_decimal: ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 16)) >= 1.0 / 1.1);

    const auto test = fixture("testf.json",
                              R"({"p1": 0.5, "psi": [0.8, 0.8], "eta": [0.2, 0.2]})");
    const auto r2 = run_cli("bayes-error '" + test.string() + "' --mode fptas --epsilon 0.05");
    CHECK(r2.exit_code == 0);
    const auto pos2 = r2.out.find("result_decimal: ");
    REQUIRE(pos2 != std::string::npos);
    const double v = std::stod(r2.out.substr(pos2 + 16));
    CHECK(v >= 0.2 / 1.05 * 0.999);
    CHECK(v <= 0.2 * 1.05 * 1.001);

    const auto r3 = run_cli("bayes-error '" + test.string() + "'");  // exact needs rationals
    CHECK(r3.exit_code == 1);
    CHECK(contains(r3.err, "NonRationalInput"));

    const auto prob = fixture("probf.json",
                              R"({"prior": [0.5, 0.5],
                                  "likelihood0": [0.8, 0.2],
                                  "likelihood1": [0.2, 0.8]})");
    const auto r4 = run_cli("bayes-error '" + prob.string() + "' --mode fptas --epsilon 0.05");
    CHECK(r4.exit_code == 0);
    CHECK(contains(r4.out, "problem: prediction"));
}

TEST_CASE("reports are byte-identical across runs") {
    const auto p = fixture("p.json", kHalfHalf);
    const auto q = fixture("q.json", kQuarterSkew);
    const std::vector<std::string> invocations = {
        "sim '" + p.string() + "' '" + q.string() + "' --epsilon 0.01",
        "sim '" + p.string() + "' '" + q.string() + "' --mode exact",
        "tv '" + p.string() + "' '" + q.string() + "'"};
    for (const std::string& args : invocations) {
        const auto first = run_cli(args);
        const auto second = run_cli(args);
        CHECK(first.exit_code == 0);
        CHECK(first.out == second.out);
    }
}

TEST_CASE("parse and validation failures exit 1 with diagnostics") {
    const auto broken = fixture("broken.json", "{\"alphabet\": 2,\n  \"marginals\": [[}");
    const auto r = run_cli("sim '" + broken.string() + "' '" + broken.string() + "'");
    CHECK(r.exit_code == 1);
    CHECK(contains(r.err, broken.filename().string() + ":"));

    const auto mixed = fixture("mixed.json",
                               R"({"alphabet": 2, "marginals": [[0.5, "1/2"]]})");
    const auto r2 = run_cli("sim '" + mixed.string() + "' '" + mixed.string() + "'");
    CHECK(r2.exit_code == 1);
    CHECK(contains(r2.err, "mixed"));

    const auto floats = fixture("floats.json",
                                R"({"alphabet": 2, "marginals": [[0.5, 0.5]]})");
    const auto r3 = run_cli("sim '" + floats.string() + "' '" + floats.string() +
                            "' --mode exact");
    CHECK(r3.exit_code == 1);
    CHECK(contains(r3.err, "NonRationalInput"));

    const auto bad_sum = fixture("badsum.json",
                                 R"({"alphabet": 2, "marginals": [[0.5, 0.6]]})");
    const auto r4 = run_cli("sim '" + bad_sum.string() + "' '" + bad_sum.string() + "'");
    CHECK(r4.exit_code == 1);
    CHECK(contains(r4.err, "SumNotOne"));
}

TEST_CASE("STATSIM_ENUM_CAP overrides the enumeration cap") {
    const auto p = fixture("p3.json",
                           R"({"alphabet": 2,
                               "marginals": [["1/2","1/2"],["1/2","1/2"],["1/2","1/2"]]})");
    const auto r =
        run_cli("sim '" + p.string() + "' '" + p.string() + "' --mode exact",
                "STATSIM_ENUM_CAP=4");
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, "StateSpaceTooLarge"));

    const auto ok = run_cli("sim '" + p.string() + "' '" + p.string() + "' --mode exact",
                            "STATSIM_ENUM_CAP=8");
    CHECK(ok.exit_code == 0);
    CHECK(contains(ok.out, "result: 1\n"));
}

TEST_CASE("--json and --output render the same deterministic report") {
    const auto p = fixture("p.json", kHalfHalf);
    const fs::path saved = scratch_dir() / "report.json";
    const auto r = run_cli("sim '" + p.string() + "' '" + p.string() +
                           "' --mode exact --json --output '" + saved.string() + "'");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "\"result\": \"1\""));
    CHECK(slurp(saved) == r.out);
}

TEST_CASE("selftest passes") {
    const auto r = run_cli("selftest");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "all passed"));
    CHECK(!contains(r.out, "FAIL"));
}
