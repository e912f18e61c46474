#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <type_traits>
#include <utility>
#include <vector>

#include "statsim/error.hpp"
#include "statsim/logprob.hpp"
#include "statsim/rational.hpp"

namespace statsim {

/// Float inputs must sum to 1 within this absolute tolerance. Rational inputs
/// must sum to 1 exactly.
inline constexpr double kSumTolerance = 1e-9;

/// One coordinate of a product distribution: a probability vector over an
/// alphabet of size l. Immutable after construction; weights are never
/// silently renormalized.
template <typename W>
class Marginal {
    static_assert(std::is_same_v<W, double> || std::is_same_v<W, Rational>);

public:
    /// Validates: nonempty, all weights >= 0, sum equal to 1 (exactly for
    /// rationals, within kSumTolerance for doubles), at least one weight > 0.
    explicit Marginal(std::vector<W> weights) : weights_(std::move(weights)) {
        if (weights_.empty()) raise(Errc::EmptyAlphabet, "marginal has no weights");
        bool any_positive = false;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            const W& w = weights_[i];
            if constexpr (std::is_same_v<W, double>) {
                if (!std::isfinite(w))
                    raise(Errc::InvalidParameter,
                          "weight " + std::to_string(i) + " is not finite");
            }
            if (w < W(0))
                raise(Errc::NegativeWeight, "weight " + std::to_string(i) + " is negative");
            if (w > W(0)) any_positive = true;
        }
        if constexpr (std::is_same_v<W, double>) {
            double sum = 0.0;
            for (double w : weights_) sum += w;
            if (std::abs(sum - 1.0) > kSumTolerance) {
                std::ostringstream os;
                os.precision(17);
                os << "weights sum to " << sum << ", expected 1";
                raise(Errc::SumNotOne, os.str());
            }
        } else {
            Rational sum(0);
            for (const Rational& w : weights_) sum += w;
            if (sum != Rational(1))
                raise(Errc::SumNotOne, "weights sum to " + to_string(sum) + ", expected 1");
        }
        if (!any_positive) raise(Errc::SumNotOne, "all weights are zero");
    }

    std::size_t alphabet() const { return weights_.size(); }
    const W& weight(std::size_t symbol) const { return weights_[symbol]; }
    const std::vector<W>& weights() const { return weights_; }

private:
    std::vector<W> weights_;
};

using CategoricalMarginal = Marginal<double>;
using RationalMarginal = Marginal<Rational>;

template <typename W>
Marginal<W> validate_marginal(std::vector<W> weights) {
    return Marginal<W>(std::move(weights));
}

/// Product distribution over [l]^n given by n per-coordinate marginals, all
/// over the same alphabet.
template <typename W>
class Product {
public:
    explicit Product(std::vector<Marginal<W>> marginals) : marginals_(std::move(marginals)) {
        if (marginals_.empty())
            raise(Errc::InvalidParameter, "product distribution needs at least one marginal");
        const std::size_t l = marginals_.front().alphabet();
        for (const auto& m : marginals_)
            if (m.alphabet() != l)
                raise(Errc::DimensionMismatch, "marginals have differing alphabet sizes");
    }

    std::size_t size() const { return marginals_.size(); }  // n
    std::size_t alphabet() const { return marginals_.front().alphabet(); }
    const Marginal<W>& marginal(std::size_t i) const { return marginals_[i]; }
    const std::vector<Marginal<W>>& marginals() const { return marginals_; }

private:
    std::vector<Marginal<W>> marginals_;
};

using ProductDistribution = Product<double>;
using RationalProduct = Product<Rational>;

ProductDistribution to_double(const RationalProduct& p);

/// Product distribution scaled by a total mass in (0,1] (a sub-distribution).
struct ScaledProduct {
    ProductDistribution base;
    double scale;

    ScaledProduct(ProductDistribution b, double s) : base(std::move(b)), scale(s) {
        if (!(s > 0.0) || s > 1.0 || !std::isfinite(s))
            raise(Errc::InvalidParameter, "scale must lie in (0,1]");
    }
};

namespace detail {
inline void check_point(std::size_t n, std::size_t alphabet, std::span<const int> y) {
    if (y.size() != n)
        raise(Errc::DimensionMismatch, "point has " + std::to_string(y.size()) +
                                           " coordinates, expected " + std::to_string(n));
    for (int s : y)
        if (s < 0 || static_cast<std::size_t>(s) >= alphabet)
            raise(Errc::SymbolOutOfRange, "symbol " + std::to_string(s) + " outside alphabet");
}
}  // namespace detail

/// P(y) = prod_i p_i(y_i), exact zero whenever any factor is zero.
LogProb product_point_mass(const ProductDistribution& p, std::span<const int> y);

/// Same product mass in exact arithmetic.
Rational product_point_mass(const RationalProduct& p, std::span<const int> y);

/// tau = smallest strictly positive marginal entry across both distributions.
/// Always > 0: every valid marginal has a positive weight.
template <typename W>
W min_nonzero_mass(const Product<W>& p, const Product<W>& q) {
    if (p.size() != q.size() || p.alphabet() != q.alphabet())
        raise(Errc::DimensionMismatch, "distributions have different shapes");
    bool found = false;
    W tau(1);
    auto scan = [&](const Product<W>& d) {
        for (const auto& m : d.marginals())
            for (const W& w : m.weights())
                if (w > W(0) && (!found || w < tau)) {
                    tau = w;
                    found = true;
                }
    };
    scan(p);
    scan(q);
    return tau;
}

}  // namespace statsim
