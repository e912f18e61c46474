#include "statsim/bayesnet.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <string>

namespace statsim {

namespace {

std::size_t cpt_row_index(const std::vector<int>& parents, std::span<const int> x,
                          std::size_t alphabet) {
    std::size_t row = 0;
    for (int parent : parents) row = row * alphabet + static_cast<std::size_t>(x[parent]);
    return row;
}

}  // namespace

BayesNet::BayesNet(std::vector<BayesNode> nodes, std::size_t alphabet)
    : nodes_(std::move(nodes)), alphabet_(alphabet) {
    if (alphabet_ < 2) raise(Errc::InvalidParameter, "alphabet size must be at least 2");
    if (nodes_.empty()) raise(Errc::InvalidParameter, "Bayes net needs at least one node");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const BayesNode& node = nodes_[i];
        for (int parent : node.parents)
            if (parent < 0 || static_cast<std::size_t>(parent) >= i)
                raise(Errc::InvalidParameter,
                      "node " + std::to_string(i) + " has a parent not preceding it");
        std::size_t rows = 1;
        for (std::size_t k = 0; k < node.parents.size(); ++k) rows *= alphabet_;
        if (node.cpt.size() != rows)
            raise(Errc::DimensionMismatch,
                  "node " + std::to_string(i) + " CPT has " + std::to_string(node.cpt.size()) +
                      " rows, expected " + std::to_string(rows));
        for (const auto& row : node.cpt) {
            if (row.size() != alphabet_)
                raise(Errc::DimensionMismatch,
                      "node " + std::to_string(i) + " CPT row has wrong width");
            Rational sum(0);
            for (const Rational& v : row) {
                if (v < 0)
                    raise(Errc::NegativeWeight,
                          "node " + std::to_string(i) + " CPT entry is negative");
                sum += v;
            }
            if (sum != 1)
                raise(Errc::SumNotOne, "node " + std::to_string(i) + " CPT row sums to " +
                                           to_string(sum) + ", expected 1");
        }
    }
}

std::size_t BayesNet::max_in_degree() const {
    std::size_t deg = 0;
    for (const BayesNode& node : nodes_) deg = std::max(deg, node.parents.size());
    return deg;
}

Rational bn_point_mass(const BayesNet& net, std::span<const int> x) {
    if (x.size() != net.node_count())
        raise(Errc::DimensionMismatch, "assignment has " + std::to_string(x.size()) +
                                           " symbols, expected " +
                                           std::to_string(net.node_count()));
    for (int s : x)
        if (s < 0 || static_cast<std::size_t>(s) >= net.alphabet())
            raise(Errc::SymbolOutOfRange, "symbol " + std::to_string(s) + " outside alphabet");
    Rational mass(1);
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        const BayesNode& node = net.node(i);
        const Rational& f =
            node.cpt[cpt_row_index(node.parents, x, net.alphabet())][static_cast<std::size_t>(x[i])];
        if (f == 0) return Rational(0);
        if (f != 1) mass *= f;
    }
    return mass;
}

CnfFormula CnfFormula::validate(int num_vars, std::vector<std::vector<int>> clauses,
                                bool allow_empty_clause) {
    if (num_vars < 1) raise(Errc::InvalidParameter, "formula needs at least one variable");
    for (std::size_t c = 0; c < clauses.size(); ++c) {
        if (clauses[c].empty() && !allow_empty_clause)
            raise(Errc::EmptyClause, "clause " + std::to_string(c + 1) + " is empty");
        for (int lit : clauses[c]) {
            const int v = std::abs(lit);
            if (v < 1 || v > num_vars)
                raise(Errc::ParseError, "clause " + std::to_string(c + 1) +
                                            " references variable " + std::to_string(v) +
                                            " outside [1," + std::to_string(num_vars) + "]");
        }
    }
    CnfFormula phi;
    phi.num_vars = num_vars;
    phi.clauses = std::move(clauses);
    return phi;
}

Circuit::Circuit(int num_inputs, std::vector<Gate> gates)
    : num_inputs_(num_inputs), gates_(std::move(gates)) {
    if (num_inputs_ < 1) raise(Errc::InvalidParameter, "circuit needs at least one input");
    if (gates_.empty()) raise(Errc::InvalidParameter, "circuit needs at least one gate");
    for (std::size_t k = 0; k < gates_.size(); ++k) {
        const Gate& g = gates_[k];
        const int limit = num_inputs_ + static_cast<int>(k);
        if (g.a < 0 || g.a >= limit || (g.op != GateOp::Not && (g.b < 0 || g.b >= limit)))
            raise(Errc::InvalidParameter, "gate input out of topological order");
    }
}

std::vector<int> Circuit::eval_gates(std::span<const int> inputs) const {
    if (inputs.size() != static_cast<std::size_t>(num_inputs_))
        raise(Errc::DimensionMismatch, "wrong number of circuit inputs");
    std::vector<int> values(gates_.size());
    auto value_of = [&](int id) {
        return id < num_inputs_ ? inputs[static_cast<std::size_t>(id)]
                                : values[static_cast<std::size_t>(id - num_inputs_)];
    };
    for (std::size_t k = 0; k < gates_.size(); ++k) {
        const Gate& g = gates_[k];
        switch (g.op) {
            case GateOp::And: values[k] = value_of(g.a) & value_of(g.b); break;
            case GateOp::Or: values[k] = value_of(g.a) | value_of(g.b); break;
            case GateOp::Not: values[k] = 1 - value_of(g.a); break;
        }
    }
    return values;
}

bool Circuit::eval(std::span<const int> inputs) const {
    return eval_gates(inputs).back() != 0;
}

Circuit cnf_to_circuit(const CnfFormula& phi) {
    const int n = phi.num_vars;
    std::vector<Gate> gates;
    auto push = [&](GateOp op, int a, int b) {
        gates.push_back({op, a, b});
        return n + static_cast<int>(gates.size()) - 1;
    };
    auto literal_node = [&](int lit) {
        const int v = std::abs(lit) - 1;
        return lit > 0 ? v : push(GateOp::Not, v, -1);
    };

    std::vector<int> clause_outputs;
    clause_outputs.reserve(phi.clauses.size());
    for (const std::vector<int>& clause : phi.clauses) {
        if (clause.empty()) {
            // unsatisfiable by convention: a constant-false pair of gates
            const int neg = push(GateOp::Not, 0, -1);
            clause_outputs.push_back(push(GateOp::And, 0, neg));
            continue;
        }
        int out = literal_node(clause.front());
        for (std::size_t i = 1; i < clause.size(); ++i)
            out = push(GateOp::Or, out, literal_node(clause[i]));
        if (clause.size() == 1 && clause.front() > 0)
            out = push(GateOp::Or, out, out);  // every clause output must be a gate
        clause_outputs.push_back(out);
    }

    if (clause_outputs.empty()) {
        // tautology placeholder; reduction() overrides its CPT with constant 1
        push(GateOp::Or, 0, 0);
        return Circuit(n, std::move(gates));
    }

    int out = clause_outputs.front();
    for (std::size_t i = 1; i < clause_outputs.size(); ++i)
        out = push(GateOp::And, out, clause_outputs[i]);
    return Circuit(n, std::move(gates));
}

namespace {

int eval_gate_fn(GateOp op, int a, int b) {
    switch (op) {
        case GateOp::And: return a & b;
        case GateOp::Or: return a | b;
        case GateOp::Not: return 1 - a;
    }
    return 0;
}

// Deterministic CPT of one gate. Gates with two equal inputs keep a single
// parent, so the DAG never carries duplicate edges.
BayesNode gate_node(const Gate& g) {
    BayesNode node;
    if (g.op == GateOp::Not) {
        node.parents = {g.a};
        for (int v = 0; v < 2; ++v) {
            const int out = eval_gate_fn(g.op, v, 0);
            node.cpt.push_back({Rational(out == 0 ? 1 : 0), Rational(out == 1 ? 1 : 0)});
        }
    } else if (g.a == g.b) {
        node.parents = {g.a};
        for (int v = 0; v < 2; ++v) {
            const int out = eval_gate_fn(g.op, v, v);
            node.cpt.push_back({Rational(out == 0 ? 1 : 0), Rational(out == 1 ? 1 : 0)});
        }
    } else {
        node.parents = {g.a, g.b};
        for (int va = 0; va < 2; ++va)
            for (int vb = 0; vb < 2; ++vb) {
                const int out = eval_gate_fn(g.op, va, vb);
                node.cpt.push_back({Rational(out == 0 ? 1 : 0), Rational(out == 1 ? 1 : 0)});
            }
    }
    return node;
}

void make_constant_one(BayesNode& node) {
    for (auto& row : node.cpt) row = {Rational(0), Rational(1)};
}

}  // namespace

std::pair<BayesNet, BayesNet> reduction(const CnfFormula& phi) {
    const Circuit circuit = cnf_to_circuit(phi);
    const int n = circuit.num_inputs();

    std::vector<BayesNode> nodes_p;
    nodes_p.reserve(static_cast<std::size_t>(n) + circuit.gates().size());
    for (int i = 0; i < n; ++i) {
        BayesNode bit;
        bit.cpt = {{rational(1, 2), rational(1, 2)}};
        nodes_p.push_back(std::move(bit));
    }
    for (const Gate& g : circuit.gates()) nodes_p.push_back(gate_node(g));

    std::vector<BayesNode> nodes_q = nodes_p;
    make_constant_one(nodes_q.back());
    if (phi.clauses.empty()) make_constant_one(nodes_p.back());

    return {BayesNet(std::move(nodes_p), 2), BayesNet(std::move(nodes_q), 2)};
}

namespace {

// Extends an input assignment to the unique support point of a reduction net
// by walking its deterministic gate CPTs in topological order.
void complete_support_point(const BayesNet& net, std::size_t num_inputs,
                            std::vector<int>& z) {
    for (std::size_t i = num_inputs; i < net.node_count(); ++i) {
        const BayesNode& node = net.node(i);
        const auto& row = node.cpt[cpt_row_index(node.parents, z, net.alphabet())];
        int chosen = -1;
        for (std::size_t b = 0; b < row.size(); ++b)
            if (row[b] == 1) chosen = static_cast<int>(b);
        if (chosen < 0)
            throw std::logic_error("reduction net has a non-deterministic gate CPT");
        z[i] = chosen;
    }
}

}  // namespace

std::uint64_t count_solutions_via_sim(const CnfFormula& phi, int max_vars) {
    if (phi.num_vars > max_vars)
        raise(Errc::TooManyVariables, "formula has " + std::to_string(phi.num_vars) +
                                          " variables, budget is " + std::to_string(max_vars));
    auto [p, q] = reduction(phi);
    const std::size_t n = static_cast<std::size_t>(phi.num_vars);

    Rational acc(0);
    std::vector<int> z(p.node_count(), 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) z[i] = static_cast<int>((mask >> i) & 1);
        complete_support_point(p, n, z);
        const Rational mp = bn_point_mass(p, z);
        const Rational mq = bn_point_mass(q, z);
        acc += (mp <= mq ? mp : mq);
    }

    Rational scaled = acc * Rational(mpz_class(1) << n);
    scaled.canonicalize();
    if (scaled.get_den() != 1)
        throw std::logic_error("2^n * SIM is not an integer: " + to_string(scaled));
    return scaled.get_num().get_ui();
}

ExactValue bn_sim_exact(const BayesNet& p, const BayesNet& q, std::size_t cap) {
    if (p.node_count() != q.node_count() || p.alphabet() != q.alphabet())
        raise(Errc::DimensionMismatch, "nets have different node sets or alphabets");
    std::vector<std::size_t> dims(p.node_count(), p.alphabet());
    return sim_exact_generic(
        dims, [&](std::span<const int> x) { return bn_point_mass(p, x); },
        [&](std::span<const int> x) { return bn_point_mass(q, x); }, cap);
}

CnfFormula parse_dimacs(std::istream& in) {
    std::string line;
    int num_vars = -1;
    long declared_clauses = -1;
    std::vector<std::vector<int>> clauses;
    std::vector<int> current;
    bool done = false;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        bool first_token = true;
        while (ls >> tok) {
            // comments start at the beginning of a line
            if (first_token && (tok == "c" || tok.front() == 'c')) break;
            first_token = false;
            if (tok == "%") {
                done = true;
                break;
            }
            if (tok == "p") {
                std::string kind;
                if (!(ls >> kind >> num_vars >> declared_clauses) || kind != "cnf" ||
                    num_vars < 1 || declared_clauses < 0)
                    raise(Errc::ParseError,
                          "line " + std::to_string(line_no) + ": malformed problem line");
                continue;
            }
            if (num_vars < 0)
                raise(Errc::ParseError, "line " + std::to_string(line_no) +
                                            ": clause data before the 'p cnf' header");
            int lit = 0;
            try {
                std::size_t used = 0;
                lit = std::stoi(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                raise(Errc::ParseError, "line " + std::to_string(line_no) +
                                            ": bad literal '" + tok + "'");
            }
            if (lit == 0) {
                clauses.push_back(current);
                current.clear();
            } else {
                if (std::abs(lit) > num_vars)
                    raise(Errc::ParseError, "line " + std::to_string(line_no) +
                                                ": literal " + tok + " exceeds variable count");
                current.push_back(lit);
            }
        }
        if (done) break;
    }

    if (num_vars < 0) raise(Errc::ParseError, "missing 'p cnf' header");
    if (!current.empty())
        raise(Errc::ParseError, "last clause is not terminated by 0");
    // empty clauses are allowed here: they are explicit in the input
    return CnfFormula::validate(num_vars, std::move(clauses), /*allow_empty_clause=*/true);
}

}  // namespace statsim
