#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <utility>
#include <vector>

#include "statsim/exact.hpp"
#include "statsim/rational.hpp"

namespace statsim {

/// One node of a Bayes net: a parent list (indices of earlier nodes) and a
/// CPT. Row r of the CPT is the distribution of this node's symbol given the
/// parent assignment whose base-l index is r, with the first listed parent
/// most significant.
struct BayesNode {
    std::vector<int> parents;
    std::vector<std::vector<Rational>> cpt;
};

/// DAG-structured distribution with exact-rational CPTs. Nodes are stored in
/// topological order (every parent index precedes its child).
class BayesNet {
public:
    BayesNet(std::vector<BayesNode> nodes, std::size_t alphabet);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t alphabet() const { return alphabet_; }
    const BayesNode& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<BayesNode>& nodes() const { return nodes_; }
    std::size_t max_in_degree() const;

private:
    std::vector<BayesNode> nodes_;
    std::size_t alphabet_;
};

/// Prob[X = x] = prod_i CPT_i(x_i | x_parents(i)), one table lookup per node.
Rational bn_point_mass(const BayesNet& net, std::span<const int> x);

/// CNF formula over variables 1..num_vars with DIMACS-signed literals.
/// An empty clause makes the formula unsatisfiable; constructing one requires
/// the explicit flag (the DIMACS parser sets it, since there the clause is
/// spelled out in the input).
struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;

    static CnfFormula validate(int num_vars, std::vector<std::vector<int>> clauses,
                               bool allow_empty_clause = false);
};

enum class GateOp { And, Or, Not };

/// b < 0 marks a single-input gate (Not). Input ids come first: variable i
/// (1-based in the CNF) is node i-1; gate k is node num_inputs + k.
struct Gate {
    GateOp op;
    int a;
    int b;
};

/// Fan-in <= 2 Boolean circuit over AND/OR/NOT gates, gates in topological
/// order; the last gate is the output.
class Circuit {
public:
    Circuit(int num_inputs, std::vector<Gate> gates);

    int num_inputs() const { return num_inputs_; }
    const std::vector<Gate>& gates() const { return gates_; }
    int output_id() const { return num_inputs_ + static_cast<int>(gates_.size()) - 1; }

    /// Values of all gates, in order, for the given 0/1 input assignment.
    std::vector<int> eval_gates(std::span<const int> inputs) const;
    bool eval(std::span<const int> inputs) const;

private:
    int num_inputs_;
    std::vector<Gate> gates_;
};

/// Views the CNF as a fan-in <= 2 circuit. Each clause becomes a left-leaning
/// OR tree, negated literals pass through NOT gates, clause outputs are folded
/// by a left-leaning AND tree. A positive unit clause gets an OR(v,v) identity
/// gate so every clause output is a gate; a negative unit clause's NOT gate
/// serves directly. An empty clause becomes AND(x1, NOT x1). A formula with no
/// clauses gets the OR(x1,x1) placeholder that reduction() overrides.
Circuit cnf_to_circuit(const CnfFormula& phi);

/// The model-counting gadget: two in-degree <= 2 Bayes nets over the circuit
/// DAG whose CPTs differ only at the output gate (deterministic gate function
/// in P, constant 1 in Q), with uniform input bits. SIM(P,Q) = |Sol(phi)|/2^n.
/// For the zero-clause tautology both output CPTs are constant 1, so P = Q.
std::pair<BayesNet, BayesNet> reduction(const CnfFormula& phi);

/// Counts satisfying assignments through the reduction: enumerates the 2^n
/// assignments, derives each unique support point from P's deterministic CPTs,
/// sums min masses and returns 2^n * SIM, which must come out an integer.
std::uint64_t count_solutions_via_sim(const CnfFormula& phi, int max_vars = 24);

/// Exact SIM between two Bayes nets over the same node set, by full
/// enumeration of all alphabet^node_count states.
ExactValue bn_sim_exact(const BayesNet& p, const BayesNet& q,
                        std::size_t cap = kDefaultEnumCap);

/// DIMACS cnf reader ("p cnf <vars> <clauses>", clauses 0-terminated,
/// 'c' comments, optional '%' trailer). Errors carry the offending line.
CnfFormula parse_dimacs(std::istream& in);

}  // namespace statsim
