#include <doctest.h>

#include "statsim/bayes_error.hpp"
#include "statsim/exact.hpp"
#include "test_support.hpp"

using namespace statsim;

TEST_CASE("bayes_error_exact frozen examples") {
    const Prediction<Rational> same(rational(1, 2), rational(1, 2),
                                    {rational(1, 3), rational(2, 3)},
                                    {rational(1, 3), rational(2, 3)});
    CHECK(bayes_error_exact(same) == rational(1, 2));

    const Prediction<Rational> constant_label(rational(1), rational(0),
                                              {rational(1, 2), rational(1, 2)},
                                              {rational(1, 4), rational(3, 4)});
    CHECK(bayes_error_exact(constant_label) == 0);

    const Prediction<Rational> skewed(rational(1, 2), rational(1, 2),
                                      {rational(4, 5), rational(1, 5)},
                                      {rational(1, 5), rational(4, 5)});
    CHECK(bayes_error_exact(skewed) == rational(1, 5));
}

TEST_CASE("bayes_error_classifier_oracle frozen examples") {
    const Prediction<Rational> same(rational(1, 2), rational(1, 2),
                                    {rational(1, 2), rational(1, 2)},
                                    {rational(1, 2), rational(1, 2)});
    CHECK(bayes_error_classifier_oracle(same) == rational(1, 2));

    const Prediction<Rational> skewed(rational(1, 2), rational(1, 2),
                                      {rational(4, 5), rational(1, 5)},
                                      {rational(1, 5), rational(4, 5)});
    CHECK(bayes_error_classifier_oracle(skewed) == rational(1, 5));

    const Prediction<Rational> separable(rational(3, 4), rational(1, 4),
                                         {rational(1), rational(0)},
                                         {rational(0), rational(1)});
    CHECK(bayes_error_classifier_oracle(separable) == 0);

    const Prediction<Rational> wide(rational(1, 2), rational(1, 2),
                                    std::vector<Rational>(21, rational(1, 21)),
                                    std::vector<Rational>(21, rational(1, 21)));
    try {
        (void)bayes_error_classifier_oracle(wide);
        FAIL("feature cap not enforced");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::FeatureSpaceTooLarge);
    }
}

TEST_CASE("the two Bayes-error routes agree on random problems") {
    testsup::Rng rng(91001);
    for (int it = 0; it < 60; ++it) {
        const std::size_t features = testsup::pick(rng, 1, 10);
        const bool balanced = it % 2 == 0;
        const auto prob = testsup::random_prediction(rng, features, 12, balanced);
        const Rational direct = bayes_error_exact(prob);
        CHECK(direct == bayes_error_classifier_oracle(prob));

        // constant-classifier bound
        CHECK(direct <= (prob.alpha0 <= prob.alpha1 ? prob.alpha0 : prob.alpha1));

        if (balanced) {
            const RationalProduct p0({RationalMarginal(prob.lik0)});
            const RationalProduct p1({RationalMarginal(prob.lik1)});
            CHECK(direct == sim_exact(p0, p1) / 2);
        }
    }
}

TEST_CASE("prediction validation") {
    CHECK_THROWS_AS(Prediction<Rational>(rational(1, 2), rational(1, 3),
                                         {rational(1)}, {rational(1)}),
                    Error);
    CHECK_THROWS_AS(Prediction<Rational>(rational(1, 2), rational(1, 2), {rational(1)},
                                         {rational(1, 2), rational(1, 2)}),
                    Error);
}

TEST_CASE("hypothesis_test_error frozen examples") {
    const BernoulliTest<Rational> same(rational(1, 2), {rational(3, 10), rational(7, 10)},
                                       {rational(3, 10), rational(7, 10)});
    CHECK(hypothesis_test_error_exact(same) == rational(1, 2));

    const BernoulliTest<Rational> never(rational(0), {rational(1, 2)}, {rational(1, 2)});
    CHECK(hypothesis_test_error_exact(never) == 0);
    CHECK(hypothesis_test_error_fptas(to_double(never), 0.1) == 0.0);

    const BernoulliTest<Rational> spread(rational(1, 2), {rational(4, 5), rational(4, 5)},
                                         {rational(1, 5), rational(1, 5)});
    CHECK(hypothesis_test_error_exact(spread) == rational(1, 5));
    const double est = hypothesis_test_error_fptas(to_double(spread), 0.01);
    CHECK(est >= 0.2 / 1.01 * (1 - 1e-9));
    CHECK(est <= 0.2 * 1.01 * (1 + 1e-9));
}

TEST_CASE("bayes_error_fptas approximates the exact value") {
    const Prediction<Rational> skewed(rational(1, 2), rational(1, 2),
                                      {rational(4, 5), rational(1, 5)},
                                      {rational(1, 5), rational(4, 5)});
    const double est = bayes_error_fptas(to_double(skewed), 0.05);
    CHECK(est >= 0.2 / 1.05 * (1 - 1e-9));
    CHECK(est <= 0.2 * 1.05 * (1 + 1e-9));

    const Prediction<double> degenerate(0.0, 1.0, {0.5, 0.5}, {0.25, 0.75});
    CHECK(bayes_error_fptas(degenerate, 0.1) == 0.0);

    testsup::Rng rng(91003);
    for (int it = 0; it < 30; ++it) {
        const auto prob = testsup::random_prediction(rng, testsup::pick(rng, 1, 10), 12,
                                                     it % 2 == 0);
        const double truth = to_double(bayes_error_exact(prob));
        const double est2 = bayes_error_fptas(to_double(prob), 0.05);
        if (truth == 0.0) {
            CHECK(est2 == 0.0);
        } else {
            CHECK(est2 >= truth / 1.05 * (1 - 1e-9));
            CHECK(est2 <= truth * 1.05 * (1 + 1e-9));
        }
    }
}

TEST_CASE("exact and fptas test errors agree within (1+eps)") {
    testsup::Rng rng(91002);
    for (int it = 0; it < 30; ++it) {
        const std::size_t n = testsup::pick(rng, 1, 10);
        const auto test = testsup::random_bernoulli_test(rng, n, 32);
        const double truth = to_double(hypothesis_test_error_exact(test));
        const double est = hypothesis_test_error_fptas(to_double(test), 0.05);
        if (truth == 0.0) {
            CHECK(est == 0.0);
        } else {
            CHECK(est >= truth / 1.05 * (1 - 1e-9));
            CHECK(est <= truth * 1.05 * (1 + 1e-9));
        }
    }
}

TEST_CASE("Bernoulli test validation rejects boundary parameters") {
    CHECK_THROWS_AS(BernoulliTest<Rational>(rational(1, 2), {rational(0)}, {rational(1, 2)}),
                    Error);
    CHECK_THROWS_AS(BernoulliTest<Rational>(rational(1, 2), {rational(1, 2)}, {rational(1)}),
                    Error);
    CHECK_THROWS_AS(BernoulliTest<Rational>(rational(2), {rational(1, 2)}, {rational(1, 2)}),
                    Error);
    CHECK_THROWS_AS(BernoulliTest<double>(0.5, {0.5, 0.5}, {0.5}), Error);

    const BernoulliTest<Rational> wide(rational(1, 2),
                                       std::vector<Rational>(21, rational(1, 2)),
                                       std::vector<Rational>(21, rational(1, 2)));
    try {
        (void)hypothesis_test_error_exact(wide);
        FAIL("dimension cap not enforced");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::StateSpaceTooLarge);
    }
}
