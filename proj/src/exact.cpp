#include "statsim/exact.hpp"

#include <string>

namespace statsim {

namespace {

std::size_t checked_state_count(std::size_t alphabet, std::size_t n, std::size_t cap) {
    std::size_t states = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (alphabet != 0 && states > cap / alphabet)
            raise(Errc::StateSpaceTooLarge,
                  "state space exceeds enumeration cap of " + std::to_string(cap));
        states *= alphabet;
    }
    return states;
}

void check_shapes(const RationalProduct& p, const RationalProduct& q) {
    if (p.size() != q.size() || p.alphabet() != q.alphabet())
        raise(Errc::DimensionMismatch, "distributions have different shapes");
}

void sim_dfs(const RationalProduct& p, const RationalProduct& q, std::size_t i,
             const Rational& mass_p, const Rational& mass_q, Rational& acc) {
    if (mass_p == 0 || mass_q == 0) return;  // min stays 0 on the whole subtree
    if (i == p.size()) {
        acc += (mass_p <= mass_q ? mass_p : mass_q);
        return;
    }
    for (std::size_t x = 0; x < p.alphabet(); ++x)
        sim_dfs(p, q, i + 1, mass_p * p.marginal(i).weight(x),
                mass_q * q.marginal(i).weight(x), acc);
}

void tv_dfs(const RationalProduct& p, const RationalProduct& q, std::size_t i,
            const Rational& mass_p, const Rational& mass_q, Rational& acc) {
    if (mass_p == 0) return;
    if (mass_q == 0) {
        // remaining P-marginals each sum to 1, so the subtree contributes mass_p
        acc += mass_p;
        return;
    }
    if (i == p.size()) {
        if (mass_p > mass_q) acc += mass_p - mass_q;
        return;
    }
    for (std::size_t x = 0; x < p.alphabet(); ++x)
        tv_dfs(p, q, i + 1, mass_p * p.marginal(i).weight(x),
               mass_q * q.marginal(i).weight(x), acc);
}

}  // namespace

ExactValue sim_exact(const RationalProduct& p, const RationalProduct& q, std::size_t cap) {
    check_shapes(p, q);
    checked_state_count(p.alphabet(), p.size(), cap);
    Rational acc(0);
    sim_dfs(p, q, 0, Rational(1), Rational(1), acc);
    return acc;
}

ExactValue tv_exact(const RationalProduct& p, const RationalProduct& q, std::size_t cap) {
    check_shapes(p, q);
    checked_state_count(p.alphabet(), p.size(), cap);
    Rational acc(0);
    tv_dfs(p, q, 0, Rational(1), Rational(1), acc);
    return acc;
}

ExactValue sim_exact_marginal(const RationalMarginal& pi, const RationalMarginal& qi) {
    if (pi.alphabet() != qi.alphabet())
        raise(Errc::DimensionMismatch, "marginals have different alphabet sizes");
    Rational acc(0);
    for (std::size_t x = 0; x < pi.alphabet(); ++x) {
        const Rational& a = pi.weight(x);
        const Rational& b = qi.weight(x);
        acc += (a <= b ? a : b);
    }
    return acc;
}

ExactValue sim_exact_generic(std::span<const std::size_t> dims, const PointMassFn& pm_p,
                             const PointMassFn& pm_q, std::size_t cap) {
    std::size_t states = 1;
    for (std::size_t d : dims) {
        if (d == 0) raise(Errc::InvalidParameter, "domain dimension of size zero");
        if (states > cap / d)
            raise(Errc::StateSpaceTooLarge,
                  "state space exceeds enumeration cap of " + std::to_string(cap));
        states *= d;
    }
    std::vector<int> point(dims.size(), 0);
    Rational acc(0);
    for (std::size_t s = 0; s < states; ++s) {
        const Rational a = pm_p(point);
        const Rational b = pm_q(point);
        acc += (a <= b ? a : b);
        for (std::size_t i = dims.size(); i-- > 0;) {
            if (++point[i] < static_cast<int>(dims[i])) break;
            point[i] = 0;
        }
    }
    return acc;
}

}  // namespace statsim
