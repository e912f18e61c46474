#pragma once

// Shared deterministic generators and independent oracles for the test
// suites. Everything here is seeded explicitly; no test depends on global
// state.

#include <cstdint>
#include <random>
#include <vector>

#include "statsim/bayes_error.hpp"
#include "statsim/bayesnet.hpp"
#include "statsim/dist.hpp"

namespace testsup {

using statsim::BernoulliTest;
using statsim::CategoricalMarginal;
using statsim::CnfFormula;
using statsim::Prediction;
using statsim::ProductDistribution;
using statsim::Rational;
using statsim::rational;
using statsim::RationalMarginal;
using statsim::RationalProduct;

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

inline double uniform(Rng& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

/// Random rational marginal with denominator `den`: entries k_i/den with
/// k_i >= min_unit and sum den. min_unit = 1 bounds every entry below by
/// 1/den; min_unit = 0 allows zero weights.
inline RationalMarginal random_rational_marginal(Rng& rng, std::size_t alphabet,
                                                 long den, long min_unit) {
    std::vector<long> units(alphabet, min_unit);
    const long remaining = den - min_unit * static_cast<long>(alphabet);
    for (long i = 0; i < remaining; ++i) ++units[rng() % alphabet];
    std::vector<Rational> weights;
    weights.reserve(alphabet);
    for (long u : units) weights.push_back(rational(u, den));
    return RationalMarginal(std::move(weights));
}

inline RationalProduct random_rational_product(Rng& rng, std::size_t n, std::size_t alphabet,
                                               long den, long min_unit) {
    std::vector<RationalMarginal> ms;
    ms.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        ms.push_back(random_rational_marginal(rng, alphabet, den, min_unit));
    return RationalProduct(std::move(ms));
}

/// Float marginal with every entry at least `floor_entry`.
inline CategoricalMarginal random_float_marginal(Rng& rng, std::size_t alphabet,
                                                 double floor_entry) {
    std::vector<double> raw(alphabet);
    double total = 0.0;
    for (double& v : raw) {
        v = uniform(rng, 0.05, 1.0);
        total += v;
    }
    const double slack = 1.0 - floor_entry * static_cast<double>(alphabet);
    std::vector<double> weights(alphabet);
    for (std::size_t i = 0; i < alphabet; ++i)
        weights[i] = floor_entry + slack * raw[i] / total;
    return CategoricalMarginal(std::move(weights));
}

inline ProductDistribution random_float_product(Rng& rng, std::size_t n, std::size_t alphabet,
                                                double floor_entry) {
    std::vector<CategoricalMarginal> ms;
    ms.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        ms.push_back(random_float_marginal(rng, alphabet, floor_entry));
    return ProductDistribution(std::move(ms));
}

/// Random CNF with clause widths in [1, max_width]; duplicate and
/// complementary literals within one clause are allowed.
inline CnfFormula random_cnf(Rng& rng, int num_vars, std::size_t num_clauses,
                             std::size_t max_width) {
    std::vector<std::vector<int>> clauses;
    clauses.reserve(num_clauses);
    for (std::size_t c = 0; c < num_clauses; ++c) {
        std::vector<int> clause;
        const std::size_t width = pick(rng, 1, max_width);
        for (std::size_t i = 0; i < width; ++i) {
            const int var = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(num_vars));
            clause.push_back(rng() % 2 == 0 ? var : -var);
        }
        clauses.push_back(std::move(clause));
    }
    return CnfFormula::validate(num_vars, std::move(clauses));
}

/// Direct CNF semantics on a bitmask assignment (bit i = variable i+1).
/// This is the independent truth-table oracle; it never touches the circuit
/// or reduction code paths.
inline bool cnf_eval_mask(const CnfFormula& phi, std::uint64_t mask) {
    for (const std::vector<int>& clause : phi.clauses) {
        bool satisfied = false;
        for (int lit : clause) {
            const bool v = (mask >> (std::abs(lit) - 1)) & 1;
            if (lit > 0 ? v : !v) {
                satisfied = true;
                break;
            }
        }
        if (!satisfied) return false;
    }
    return true;
}

inline std::uint64_t cnf_count_truth_table(const CnfFormula& phi) {
    std::uint64_t count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << phi.num_vars); ++mask)
        if (cnf_eval_mask(phi, mask)) ++count;
    return count;
}

inline Prediction<Rational> random_prediction(Rng& rng, std::size_t features, long den,
                                              bool balanced) {
    const long a = balanced ? den / 2 : static_cast<long>(pick(rng, 0, den));
    std::vector<Rational> l0, l1;
    const auto m0 = random_rational_marginal(rng, features, den, 0);
    const auto m1 = random_rational_marginal(rng, features, den, 0);
    return Prediction<Rational>(rational(a, den), rational(den - a, den), m0.weights(),
                                m1.weights());
}

inline BernoulliTest<Rational> random_bernoulli_test(Rng& rng, std::size_t n, long den) {
    std::vector<Rational> psi, eta;
    psi.reserve(n);
    eta.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        psi.push_back(rational(static_cast<long>(pick(rng, 1, den - 1)), den));
        eta.push_back(rational(static_cast<long>(pick(rng, 1, den - 1)), den));
    }
    return BernoulliTest<Rational>(rational(static_cast<long>(pick(rng, 0, den)), den),
                                   std::move(psi), std::move(eta));
}

}  // namespace testsup
