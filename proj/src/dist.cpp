#include "statsim/dist.hpp"

namespace statsim {

ProductDistribution to_double(const RationalProduct& p) {
    std::vector<CategoricalMarginal> out;
    out.reserve(p.size());
    for (const auto& m : p.marginals()) {
        std::vector<double> w;
        w.reserve(m.alphabet());
        for (const Rational& r : m.weights()) w.push_back(to_double(r));
        out.emplace_back(std::move(w));
    }
    return ProductDistribution(std::move(out));
}

LogProb product_point_mass(const ProductDistribution& p, std::span<const int> y) {
    detail::check_point(p.size(), p.alphabet(), y);
    LogProb mass = LogProb::one();
    for (std::size_t i = 0; i < p.size(); ++i)
        mass *= LogProb::from_linear(p.marginal(i).weight(static_cast<std::size_t>(y[i])));
    return mass;
}

Rational product_point_mass(const RationalProduct& p, std::span<const int> y) {
    detail::check_point(p.size(), p.alphabet(), y);
    Rational mass(1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Rational& w = p.marginal(i).weight(static_cast<std::size_t>(y[i]));
        if (w == 0) return Rational(0);
        mass *= w;
    }
    return mass;
}

}  // namespace statsim
