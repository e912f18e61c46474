#include "statsim/bayes_error.hpp"

#include <string>

#include "statsim/ratio.hpp"

namespace statsim {

Rational bayes_error_exact(const Prediction<Rational>& prob) {
    Rational acc(0);
    for (std::size_t x = 0; x < prob.feature_count(); ++x) {
        const Rational a = prob.alpha0 * prob.lik0[x];
        const Rational b = prob.alpha1 * prob.lik1[x];
        acc += (a <= b ? a : b);
    }
    return acc;
}

Rational bayes_error_classifier_oracle(const Prediction<Rational>& prob,
                                       std::size_t max_features) {
    const std::size_t k = prob.feature_count();
    if (k > max_features)
        raise(Errc::FeatureSpaceTooLarge, "feature space of size " + std::to_string(k) +
                                              " exceeds classifier-enumeration budget " +
                                              std::to_string(max_features));
    Rational best(2);  // above any reachable error
    for (std::uint64_t g = 0; g < (std::uint64_t{1} << k); ++g) {
        Rational err(0);
        for (std::size_t x = 0; x < k; ++x) {
            if ((g >> x) & 1)
                err += prob.alpha0 * prob.lik0[x];  // predicts 1, true label 0
            else
                err += prob.alpha1 * prob.lik1[x];  // predicts 0, true label 1
        }
        if (err < best) best = err;
    }
    return best;
}

double bayes_error_fptas(const Prediction<double>& prob, double epsilon) {
    if (prob.alpha0 == 0.0 || prob.alpha1 == 0.0) return 0.0;
    ScaledProduct p0(ProductDistribution({CategoricalMarginal(prob.lik0)}), prob.alpha0);
    ScaledProduct p1(ProductDistribution({CategoricalMarginal(prob.lik1)}), prob.alpha1);
    return sim_fptas_scaled(p0, p1, epsilon);
}

namespace {

void test_dfs(const BernoulliTest<Rational>& t, std::size_t i, const Rational& mass_p,
              const Rational& mass_q, Rational& acc) {
    if (i == t.dimensions()) {
        acc += (mass_p <= mass_q ? mass_p : mass_q);
        return;
    }
    test_dfs(t, i + 1, mass_p * (1 - t.psi[i]), mass_q * (1 - t.eta[i]), acc);
    test_dfs(t, i + 1, mass_p * t.psi[i], mass_q * t.eta[i], acc);
}

std::vector<CategoricalMarginal> bernoulli_marginals(const std::vector<double>& params) {
    std::vector<CategoricalMarginal> out;
    out.reserve(params.size());
    for (double v : params) out.emplace_back(std::vector<double>{1.0 - v, v});
    return out;
}

}  // namespace

Rational hypothesis_test_error_exact(const BernoulliTest<Rational>& test,
                                     std::size_t max_dims) {
    if (test.dimensions() > max_dims)
        raise(Errc::StateSpaceTooLarge, "test over " + std::to_string(test.dimensions()) +
                                            " coordinates exceeds enumeration budget " +
                                            std::to_string(max_dims));
    const Rational p0 = 1 - test.p1;
    if (test.p1 == 0 || p0 == 0) return Rational(0);
    Rational acc(0);
    test_dfs(test, 0, test.p1, p0, acc);
    return acc;
}

double hypothesis_test_error_fptas(const BernoulliTest<double>& test, double epsilon) {
    const double p0 = 1.0 - test.p1;
    if (test.p1 == 0.0 || p0 <= 0.0) return 0.0;
    ScaledProduct alt(ProductDistribution(bernoulli_marginals(test.psi)), test.p1);
    ScaledProduct null(ProductDistribution(bernoulli_marginals(test.eta)), p0);
    return sim_fptas_scaled(alt, null, epsilon);
}

Prediction<double> to_double(const Prediction<Rational>& prob) {
    std::vector<double> l0, l1;
    l0.reserve(prob.lik0.size());
    l1.reserve(prob.lik1.size());
    for (const Rational& r : prob.lik0) l0.push_back(to_double(r));
    for (const Rational& r : prob.lik1) l1.push_back(to_double(r));
    return Prediction<double>(to_double(prob.alpha0), to_double(prob.alpha1), std::move(l0),
                              std::move(l1));
}

BernoulliTest<double> to_double(const BernoulliTest<Rational>& test) {
    std::vector<double> psi, eta;
    psi.reserve(test.psi.size());
    eta.reserve(test.eta.size());
    for (const Rational& r : test.psi) psi.push_back(to_double(r));
    for (const Rational& r : test.eta) eta.push_back(to_double(r));
    return BernoulliTest<double>(to_double(test.p1), std::move(psi), std::move(eta));
}

}  // namespace statsim
