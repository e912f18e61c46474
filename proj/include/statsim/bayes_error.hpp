#pragma once

#include <type_traits>
#include <vector>

#include "statsim/dist.hpp"
#include "statsim/rational.hpp"

namespace statsim {

/// Binary prediction problem: label prior (alpha0, alpha1) plus the two
/// likelihood distributions over a finite feature space.
template <typename W>
struct Prediction {
    W alpha0;
    W alpha1;
    std::vector<W> lik0;
    std::vector<W> lik1;

    Prediction(W a0, W a1, std::vector<W> l0, std::vector<W> l1)
        : alpha0(std::move(a0)), alpha1(std::move(a1)), lik0(std::move(l0)),
          lik1(std::move(l1)) {
        if (alpha0 < W(0) || alpha1 < W(0))
            raise(Errc::InvalidParameter, "priors must be nonnegative");
        if constexpr (std::is_same_v<W, double>) {
            if (std::abs((alpha0 + alpha1) - 1.0) > kSumTolerance)
                raise(Errc::SumNotOne, "priors do not sum to 1");
        } else {
            if (alpha0 + alpha1 != W(1)) raise(Errc::SumNotOne, "priors do not sum to 1");
        }
        if (lik0.size() != lik1.size())
            raise(Errc::DimensionMismatch, "likelihoods cover different feature spaces");
        (void)Marginal<W>(lik0);  // distribution checks
        (void)Marginal<W>(lik1);
    }

    std::size_t feature_count() const { return lik0.size(); }
};

using PredictionProblem = Prediction<Rational>;

/// Hypothesis-testing game: Y ~ Bern(p1), and X_i ~ Bern(psi_i) under Y=1,
/// X_i ~ Bern(eta_i) under Y=0. Parameters are strictly inside (0,1).
template <typename W>
struct BernoulliTest {
    W p1;
    std::vector<W> psi;
    std::vector<W> eta;

    BernoulliTest(W p, std::vector<W> ps, std::vector<W> et)
        : p1(std::move(p)), psi(std::move(ps)), eta(std::move(et)) {
        if (p1 < W(0) || p1 > W(1)) raise(Errc::InvalidParameter, "p1 must lie in [0,1]");
        if (psi.empty() || psi.size() != eta.size())
            raise(Errc::DimensionMismatch, "psi and eta must have equal positive length");
        for (const W& v : psi)
            if (!(v > W(0)) || !(v < W(1)))
                raise(Errc::InvalidParameter, "psi entries must lie strictly in (0,1)");
        for (const W& v : eta)
            if (!(v > W(0)) || !(v < W(1)))
                raise(Errc::InvalidParameter, "eta entries must lie strictly in (0,1)");
    }

    std::size_t dimensions() const { return psi.size(); }
};

/// Bayes error R* = SIM(alpha0 P0, alpha1 P1), summed exactly over the
/// feature space.
Rational bayes_error_exact(const Prediction<Rational>& prob);

/// Independent route to R*: exhaustive minimum of the 0-1 error over all
/// 2^|X| deterministic classifiers.
Rational bayes_error_classifier_oracle(const Prediction<Rational>& prob,
                                       std::size_t max_features = 20);

/// FPTAS route for float problems: likelihoods as one-coordinate products
/// scaled by the priors.
double bayes_error_fptas(const Prediction<double>& prob, double epsilon);

/// Optimal test error sum_x min(p1 Bern(psi)(x), p0 Bern(eta)(x)), exact
/// enumeration of {0,1}^n.
Rational hypothesis_test_error_exact(const BernoulliTest<Rational>& test,
                                     std::size_t max_dims = 20);

/// Same error through the sparsification pipeline with alpha = p1, beta = p0.
double hypothesis_test_error_fptas(const BernoulliTest<double>& test, double epsilon);

Prediction<double> to_double(const Prediction<Rational>& prob);
BernoulliTest<double> to_double(const BernoulliTest<Rational>& test);

}  // namespace statsim
