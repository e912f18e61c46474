#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "statsim/bayes_error.hpp"
#include "statsim/bayesnet.hpp"
#include "statsim/dist.hpp"

namespace statsim {

/// A product-distribution file is either all-float or all-rational; mixing the
/// two weight spellings in one file is rejected.
using LoadedProduct = std::variant<ProductDistribution, RationalProduct>;

/// Reads {"alphabet": l, "marginals": [[...], ...]} with weights given as
/// JSON numbers (float path) or "num/den" strings (exact path).
LoadedProduct load_product_json(const std::filesystem::path& path);

using LoadedProblem = std::variant<Prediction<Rational>, Prediction<double>,
                                   BernoulliTest<Rational>, BernoulliTest<double>>;

/// Accepts either a prediction problem {"prior": [a0,a1], "likelihood0": [...],
/// "likelihood1": [...]} or a Bernoulli test {"p1": v, "psi": [...],
/// "eta": [...]}; numbers and rational strings follow the same all-or-nothing
/// rule as distributions.
LoadedProblem load_problem_json(const std::filesystem::path& path);

CnfFormula load_dimacs(const std::filesystem::path& path);

std::string bayes_net_to_json(const BayesNet& net);
void save_bayes_net_json(const std::filesystem::path& path, const BayesNet& net);
BayesNet load_bayes_net_json(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string file_digest(const std::filesystem::path& path);

}  // namespace statsim
