// statsim: command-line front end for the similarity library.
//
// Subcommands: sim, tv, reduce, bayes-error, selftest. Reports are plain
// "key: value" text (or JSON with --json) and are byte-identical across runs
// on identical inputs; wall time therefore goes to stderr only.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "statsim/bayes_error.hpp"
#include "statsim/bayesnet.hpp"
#include "statsim/exact.hpp"
#include "statsim/io.hpp"
#include "statsim/ratio.hpp"

namespace {

using namespace statsim;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::size_t enumeration_cap() {
    const char* env = std::getenv("STATSIM_ENUM_CAP");
    if (env == nullptr || *env == '\0') return kDefaultEnumCap;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(env, &used);
        if (used != std::string(env).size() || v == 0) throw std::invalid_argument(env);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        raise(Errc::InvalidParameter,
              std::string("STATSIM_ENUM_CAP is not a positive integer: ") + env);
    }
}

struct RunReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;  // path -> digest
    std::vector<std::pair<std::string, std::string>> fields;

    void add_input(const std::filesystem::path& path) {
        inputs.emplace_back(path.string(), file_digest(path));
    }
    void add(std::string key, std::string value) {
        fields.emplace_back(std::move(key), std::move(value));
    }
    void add(std::string key, double value) { add(std::move(key), fmt_double(value)); }

    std::string text() const {
        std::string out = "command: " + command + "\n";
        for (const auto& [path, digest] : inputs)
            out += "input: " + path + " fnv1a64=" + digest + "\n";
        for (const auto& [key, value] : fields) out += key + ": " + value + "\n";
        return out;
    }

    std::string json() const {
        nlohmann::ordered_json doc;
        doc["command"] = command;
        doc["inputs"] = nlohmann::ordered_json::array();
        for (const auto& [path, digest] : inputs)
            doc["inputs"].push_back({{"path", path}, {"fnv1a64", digest}});
        for (const auto& [key, value] : fields) doc[key] = value;
        return doc.dump(2) + "\n";
    }
};

struct OutputOptions {
    std::string output_path;
    bool as_json = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--output", output_path, "also write the report to this file");
        cmd->add_flag("--json", as_json, "emit the report as JSON");
    }

    void emit(const RunReport& report) const {
        const std::string rendered = as_json ? report.json() : report.text();
        std::cout << rendered;
        if (!output_path.empty()) {
            std::ofstream out(output_path, std::ios::binary);
            if (!out) raise(Errc::ParseError, output_path + ": cannot open for writing");
            out << rendered;
        }
    }
};

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

RationalProduct require_rational(LoadedProduct&& loaded, const std::string& path) {
    if (auto* r = std::get_if<RationalProduct>(&loaded)) return std::move(*r);
    raise(Errc::NonRationalInput,
          path + ": exact mode needs rational weights (\"num/den\" strings)");
}

ProductDistribution as_float(LoadedProduct&& loaded) {
    if (auto* r = std::get_if<RationalProduct>(&loaded)) return to_double(*r);
    return std::move(std::get<ProductDistribution>(loaded));
}

void add_scheme_fields(RunReport& report, const FptasResult& run) {
    report.add("early_exit", run.early_exit ? std::string("true") : std::string("false"));
    if (run.scheme) {
        report.add("tau", run.scheme->tau);
        report.add("delta", run.scheme->delta);
        report.add("log_gamma", run.scheme->log_gamma);
        report.add("log_B", run.scheme->log_b);
        report.add("m", std::to_string(run.scheme->m));
    }
}

// ---- sim ----------------------------------------------------------------

struct SimArgs {
    std::string p_file, q_file;
    std::string mode = "fptas";
    double epsilon = 0.1;
    OutputOptions out;
};

void run_sim(const SimArgs& args, const std::string& command) {
    RunReport report;
    report.command = command;
    report.add_input(args.p_file);
    report.add_input(args.q_file);
    report.add("mode", args.mode);

    if (args.mode == "exact") {
        const auto p = require_rational(load_product_json(args.p_file), args.p_file);
        const auto q = require_rational(load_product_json(args.q_file), args.q_file);
        const ExactValue sim = sim_exact(p, q, enumeration_cap());
        report.add("result", to_string(sim));
        report.add("result_decimal", to_double(sim));
    } else {
        const auto p = as_float(load_product_json(args.p_file));
        const auto q = as_float(load_product_json(args.q_file));
        report.add("epsilon", args.epsilon);
        const FptasResult run = sim_fptas_run(p, q, args.epsilon);
        add_scheme_fields(report, run);
        report.add("result_decimal", run.value);
    }
    args.out.emit(report);
}

// ---- tv -----------------------------------------------------------------

struct TvArgs {
    std::string p_file, q_file;
    OutputOptions out;
};

void run_tv(const TvArgs& args, const std::string& command) {
    RunReport report;
    report.command = command;
    report.add_input(args.p_file);
    report.add_input(args.q_file);

    const auto p = require_rational(load_product_json(args.p_file), args.p_file);
    const auto q = require_rational(load_product_json(args.q_file), args.q_file);
    const ExactValue tv = tv_exact(p, q, enumeration_cap());
    const ExactValue complement = 1 - tv;
    report.add("tv", to_string(tv));
    report.add("tv_decimal", to_double(tv));
    report.add("scheffe_similarity", to_string(complement));
    report.add("scheffe_similarity_decimal", to_double(complement));
    args.out.emit(report);
}

// ---- reduce ---------------------------------------------------------------

struct ReduceArgs {
    std::string dimacs_file;
    std::string emit_dir;
    bool count = false;
    int max_vars = 24;
    OutputOptions out;
};

void run_reduce(const ReduceArgs& args, const std::string& command) {
    RunReport report;
    report.command = command;
    report.add_input(args.dimacs_file);

    const CnfFormula phi = load_dimacs(args.dimacs_file);
    const auto [p, q] = reduction(phi);
    report.add("variables", std::to_string(phi.num_vars));
    report.add("clauses", std::to_string(phi.clauses.size()));
    report.add("nodes_per_net", std::to_string(p.node_count()));
    report.add("max_in_degree", std::to_string(p.max_in_degree()));

    if (!args.emit_dir.empty()) {
        std::filesystem::create_directories(args.emit_dir);
        const auto p_path = std::filesystem::path(args.emit_dir) / "P.json";
        const auto q_path = std::filesystem::path(args.emit_dir) / "Q.json";
        save_bayes_net_json(p_path, p);
        save_bayes_net_json(q_path, q);
        report.add("emitted", p_path.string() + " " + q_path.string());
    }
    if (args.count) {
        const std::uint64_t count = count_solutions_via_sim(phi, args.max_vars);
        report.add("solution_count", std::to_string(count));
    }
    args.out.emit(report);
}

// ---- bayes-error ----------------------------------------------------------

struct BayesErrorArgs {
    std::string file;
    std::string mode = "exact";
    double epsilon = 0.1;
    OutputOptions out;
};

void run_bayes_error(const BayesErrorArgs& args, const std::string& command) {
    RunReport report;
    report.command = command;
    report.add_input(args.file);
    report.add("mode", args.mode);

    LoadedProblem loaded = load_problem_json(args.file);
    const bool exact = args.mode == "exact";

    if (std::holds_alternative<Prediction<Rational>>(loaded) ||
        std::holds_alternative<Prediction<double>>(loaded)) {
        report.add("problem", "prediction");
        if (exact) {
            if (!std::holds_alternative<Prediction<Rational>>(loaded))
                raise(Errc::NonRationalInput,
                      args.file + ": exact mode needs rational weights");
            const auto& prob = std::get<Prediction<Rational>>(loaded);
            const Rational r = bayes_error_exact(prob);
            report.add("result", to_string(r));
            report.add("result_decimal", to_double(r));
        } else {
            report.add("epsilon", args.epsilon);
            const Prediction<double> prob =
                std::holds_alternative<Prediction<Rational>>(loaded)
                    ? to_double(std::get<Prediction<Rational>>(loaded))
                    : std::get<Prediction<double>>(loaded);
            report.add("result_decimal", bayes_error_fptas(prob, args.epsilon));
        }
    } else {
        report.add("problem", "bernoulli-test");
        if (exact) {
            if (!std::holds_alternative<BernoulliTest<Rational>>(loaded))
                raise(Errc::NonRationalInput,
                      args.file + ": exact mode needs rational weights");
            const auto& test = std::get<BernoulliTest<Rational>>(loaded);
            const Rational r = hypothesis_test_error_exact(test);
            report.add("result", to_string(r));
            report.add("result_decimal", to_double(r));
        } else {
            report.add("epsilon", args.epsilon);
            const BernoulliTest<double> test =
                std::holds_alternative<BernoulliTest<Rational>>(loaded)
                    ? to_double(std::get<BernoulliTest<Rational>>(loaded))
                    : std::get<BernoulliTest<double>>(loaded);
            report.add("result_decimal", hypothesis_test_error_fptas(test, args.epsilon));
        }
    }
    args.out.emit(report);
}

// ---- selftest ---------------------------------------------------------------

RationalProduct rp(std::initializer_list<std::initializer_list<std::pair<long, long>>> rows) {
    std::vector<RationalMarginal> ms;
    for (const auto& row : rows) {
        std::vector<Rational> w;
        for (auto [num, den] : row) w.push_back(rational(num, den));
        ms.emplace_back(std::move(w));
    }
    return RationalProduct(std::move(ms));
}

int run_selftest(const OutputOptions& out, const std::string& command) {
    RunReport report;
    report.command = command;
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
        report.add("selftest " + name, ok ? "PASS" : "FAIL");
        if (!ok) ++failures;
    };

    const auto p = rp({{{1, 2}, {1, 2}}, {{1, 2}, {1, 2}}});
    const auto q = rp({{{3, 4}, {1, 4}}, {{1, 4}, {3, 4}}});
    const Rational sim = sim_exact(p, q);
    check("exact sim 11/16", sim == rational(11, 16));
    check("scheffe identity", sim + tv_exact(p, q) == 1);

    const auto pf = to_double(p);
    const auto qf = to_double(q);
    const double est = sim_fptas(pf, qf, 0.1);
    const double truth = to_double(sim);
    check("fptas sandwich",
          est >= truth / 1.1 * (1 - 1e-9) && est <= truth * 1.1 * (1 + 1e-9));
    check("fptas deterministic", sim_fptas(pf, qf, 0.1) == est);

    const auto disj_p = rp({{{1, 1}, {0, 1}}});
    const auto disj_q = rp({{{0, 1}, {1, 1}}});
    check("zero exactness", sim_fptas(to_double(disj_p), to_double(disj_q), 0.5) == 0.0);

    const CnfFormula or2 = CnfFormula::validate(2, {{1, 2}});
    check("reduction count", count_solutions_via_sim(or2) == 3);
    const CnfFormula unsat = CnfFormula::validate(1, {{1}, {-1}});
    check("unsat count", count_solutions_via_sim(unsat) == 0);

    const Prediction<Rational> prob(rational(1, 2), rational(1, 2),
                                    {rational(4, 5), rational(1, 5)},
                                    {rational(1, 5), rational(4, 5)});
    check("bayes error identity", bayes_error_exact(prob) == rational(1, 5) &&
                                      bayes_error_classifier_oracle(prob) == rational(1, 5));

    const BernoulliTest<Rational> bt(rational(1, 2), {rational(3, 10)}, {rational(3, 10)});
    check("hypothesis test balanced", hypothesis_test_error_exact(bt) == rational(1, 2));

    report.add("selftest summary",
               failures == 0 ? "all passed" : std::to_string(failures) + " failed");
    out.emit(report);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"statistical similarity between succinctly represented distributions"};
    app.require_subcommand(1);
    const std::string command = join_args(argc, argv);

    SimArgs sim_args;
    auto* sim_cmd = app.add_subcommand("sim", "similarity of two product distributions");
    sim_cmd->add_option("p_file", sim_args.p_file, "P distribution JSON")->required();
    sim_cmd->add_option("q_file", sim_args.q_file, "Q distribution JSON")->required();
    sim_cmd->add_option("--mode", sim_args.mode, "exact or fptas (default fptas)")
        ->check(CLI::IsMember({"exact", "fptas"}));
    sim_cmd->add_option("--epsilon", sim_args.epsilon, "accuracy for fptas (default 0.1)");
    sim_args.out.attach(sim_cmd);

    TvArgs tv_args;
    auto* tv_cmd = app.add_subcommand("tv", "exact total variation distance");
    tv_cmd->add_option("p_file", tv_args.p_file, "P distribution JSON")->required();
    tv_cmd->add_option("q_file", tv_args.q_file, "Q distribution JSON")->required();
    tv_args.out.attach(tv_cmd);

    ReduceArgs reduce_args;
    auto* reduce_cmd = app.add_subcommand("reduce", "CNF to Bayes-net reduction");
    reduce_cmd->add_option("dimacs_file", reduce_args.dimacs_file, "DIMACS cnf input")
        ->required();
    reduce_cmd->add_option("--emit-nets", reduce_args.emit_dir,
                           "write P.json and Q.json into this directory");
    reduce_cmd->add_flag("--count", reduce_args.count,
                         "count satisfying assignments via the SIM identity");
    reduce_args.out.attach(reduce_cmd);

    BayesErrorArgs be_args;
    auto* be_cmd = app.add_subcommand("bayes-error",
                                      "Bayes error / optimal hypothesis-testing error");
    be_cmd->add_option("file", be_args.file, "prediction problem or Bernoulli test JSON")
        ->required();
    be_cmd->add_option("--mode", be_args.mode, "exact or fptas (default exact)")
        ->check(CLI::IsMember({"exact", "fptas"}));
    be_cmd->add_option("--epsilon", be_args.epsilon, "accuracy for fptas (default 0.1)");
    be_args.out.attach(be_cmd);

    OutputOptions selftest_out;
    auto* selftest_cmd = app.add_subcommand("selftest", "run built-in instance checks");
    selftest_out.attach(selftest_cmd);

    try {
        app.parse(argc, argv);
        const auto start = std::chrono::steady_clock::now();
        int rc = 0;
        if (*sim_cmd)
            run_sim(sim_args, command);
        else if (*tv_cmd)
            run_tv(tv_args, command);
        else if (*reduce_cmd)
            run_reduce(reduce_args, command);
        else if (*be_cmd)
            run_bayes_error(be_args, command);
        else if (*selftest_cmd)
            rc = run_selftest(selftest_out, command);
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - start;
        // stderr only: reports must stay byte-identical across runs
        std::fprintf(stderr, "wall_time_s: %.3f\n", elapsed.count());
        return rc;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const statsim::Error& e) {
        std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
        return errc_exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
