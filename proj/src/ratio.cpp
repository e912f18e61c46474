#include "statsim/ratio.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace statsim {

namespace {

// 2^-30 relative slack, expressed in the log domain, absorbing rounding at
// interval edges and mass checks.
const double kLogSlack = std::log1p(std::ldexp(1.0, -30));
const double kMassSlack = std::ldexp(1.0, -30);

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        raise(Errc::InvalidAccuracy, "accuracy parameter must be positive and finite");
}

// Neumaier-compensated accumulation; plain summation error grows with the
// term count, which matters once stages carry millions of atoms.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace

RatioVariable::RatioVariable(std::vector<RatioAtom> atoms) : atoms_(std::move(atoms)) {
    for (const RatioAtom& a : atoms_) {
        if (!(a.weight > 0.0) || !std::isfinite(a.weight))
            raise(Errc::InvalidParameter, "ratio atom weight must be positive and finite");
        if (std::isnan(a.value.log()))
            raise(Errc::InvalidParameter, "ratio atom value is not a number");
    }
    if (total_mass() > 1.0 + kMassSlack)
        raise(Errc::InvalidParameter, "ratio atom weights exceed total mass 1");
}

double RatioVariable::total_mass() const {
    CompensatedSum total;
    for (const RatioAtom& a : atoms_) total.add(a.weight);
    return total.value();
}

IntervalScheme build_intervals(double tau, std::size_t n, double epsilon) {
    return build_intervals(tau, n, epsilon, 1.0);
}

IntervalScheme build_intervals(double tau, std::size_t n, double epsilon, double scale) {
    check_epsilon(epsilon);
    if (!(tau > 0.0) || tau > 1.0)
        raise(Errc::InvalidParameter, "tau must lie in (0,1]");
    if (n == 0) raise(Errc::InvalidParameter, "n must be at least 1");
    if (!(scale > 0.0) || scale > 1.0)
        raise(Errc::InvalidParameter, "scale must lie in (0,1]");

    const double nn = static_cast<double>(n);
    const double log_tau = std::log(tau);
    const double log_scale = std::log(scale);

    IntervalScheme s;
    s.tau = tau;
    s.epsilon = epsilon;
    s.n = n;
    s.delta = epsilon / (2.0 * nn);
    s.log1p_delta = std::log1p(s.delta);
    s.log_b = -nn * log_tau + log_scale;
    s.log_gamma = std::log(epsilon) + 2.0 * nn * log_tau -
                  std::log(4.0 * nn * nn * (1.0 + epsilon)) + log_scale;
    // B/gamma > 1 always, so m >= 1
    const double m_real = (s.log_b - s.log_gamma) / s.log1p_delta;
    if (!std::isfinite(m_real) || m_real >= 9.0e15)
        raise(Errc::InvalidParameter, "interval scheme is too large to materialize");
    s.m = static_cast<std::size_t>(std::ceil(m_real));
    return s;
}

std::int64_t bucket_index(double log_value, const IntervalScheme& scheme) {
    if (log_value > scheme.log_b + kLogSlack) {
        std::ostringstream os;
        os << "ratio value exceeds B: log value " << log_value << " > log B "
           << scheme.log_b;
        raise(Errc::ValueAboveB, os.str());
    }
    if (log_value <= scheme.log_gamma) return 0;
    const double r = (log_value - scheme.log_gamma) / scheme.log1p_delta;
    auto j = static_cast<std::int64_t>(std::ceil(r));
    j = std::clamp<std::int64_t>(j, 1, static_cast<std::int64_t>(scheme.m));
    // Edge rounding can push a value just below its computed interval; one
    // step down restores containment.
    if (scheme.log_gamma + static_cast<double>(j - 1) * scheme.log1p_delta >
        log_value + kLogSlack)
        --j;
    return j;
}

double SparsifiedRatio::total_mass() const {
    CompensatedSum total;
    for (const SparsifiedBucket& b : buckets_) total.add(b.mass);
    return total.value();
}

RatioVariable SparsifiedRatio::as_ratio() const {
    std::vector<RatioAtom> atoms;
    atoms.reserve(buckets_.size());
    for (const SparsifiedBucket& b : buckets_) atoms.push_back({b.value, b.mass});
    return RatioVariable(std::move(atoms));
}

RatioVariable make_ratio(const CategoricalMarginal& pi, const CategoricalMarginal& qi) {
    if (pi.alphabet() != qi.alphabet())
        raise(Errc::DimensionMismatch, "marginals have different alphabet sizes");
    std::vector<RatioAtom> atoms;
    atoms.reserve(qi.alphabet());
    for (std::size_t x = 0; x < qi.alphabet(); ++x) {
        const double qx = qi.weight(x);
        if (qx <= 0.0) continue;
        const double px = pi.weight(x);
        const LogProb value =
            px == 0.0 ? LogProb::zero() : LogProb::from_log(std::log(px) - std::log(qx));
        atoms.push_back({value, qx});
    }
    return RatioVariable(std::move(atoms));
}

namespace {

// sum of min(value, cap) * weight; cap passed in both domains so the capped
// branch never goes through exp().
double sim_capped(const std::vector<RatioAtom>& atoms, double cap_linear, double cap_log) {
    CompensatedSum acc;
    for (const RatioAtom& a : atoms) {
        if (a.value.is_zero()) continue;
        acc.add((a.value.log() >= cap_log ? cap_linear : a.value.linear()) * a.weight);
    }
    return acc.value();
}

double sim_capped(const SparsifiedRatio& s, double cap_linear, double cap_log) {
    CompensatedSum acc;
    for (const SparsifiedBucket& b : s.buckets()) {
        if (b.value.is_zero()) continue;
        acc.add((b.value.log() >= cap_log ? cap_linear : b.value.linear()) * b.mass);
    }
    return acc.value();
}

}  // namespace

double sim_of_ratio(const RatioVariable& r) { return sim_capped(r.atoms(), 1.0, 0.0); }

SparsifiedRatio sparsify(const RatioVariable& y, const IntervalScheme& scheme) {
    struct Entry {
        std::int64_t index;
        double log_value;
        double weight;
    };
    std::vector<Entry> entries;
    entries.reserve(y.atoms().size());
    double zero_mass = 0.0;
    for (const RatioAtom& a : y.atoms()) {
        if (a.value.is_zero()) {
            zero_mass += a.weight;
            continue;
        }
        entries.push_back({bucket_index(a.value.log(), scheme), a.value.log(), a.weight});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.index < b.index; });

    std::vector<SparsifiedBucket> buckets;
    if (zero_mass > 0.0) buckets.push_back({-1, LogProb::zero(), zero_mass});
    for (std::size_t i = 0; i < entries.size();) {
        std::size_t j = i;
        double max_log = entries[i].log_value;
        while (j < entries.size() && entries[j].index == entries[i].index) {
            max_log = std::max(max_log, entries[j].log_value);
            ++j;
        }
        // conditional mean via max-shifted log-domain summation; members of a
        // nonzero interval are within a (1+delta) factor, so the shift is tame
        CompensatedSum shifted;
        CompensatedSum mass;
        for (std::size_t k = i; k < j; ++k) {
            shifted.add(entries[k].weight * std::exp(entries[k].log_value - max_log));
            mass.add(entries[k].weight);
        }
        const double log_mean = max_log + std::log(shifted.value()) - std::log(mass.value());
        buckets.push_back({entries[i].index, LogProb::from_log(log_mean), mass.value()});
        i = j;
    }
    return SparsifiedRatio(std::move(buckets));
}

RatioVariable ratio_product(const RatioVariable& a, const RatioVariable& b) {
    std::vector<RatioAtom> atoms;
    atoms.reserve(a.atoms().size() * b.atoms().size());
    for (const RatioAtom& x : a.atoms())
        for (const RatioAtom& y : b.atoms())
            atoms.push_back({x.value * y.value, x.weight * y.weight});
    return RatioVariable(std::move(atoms));
}

RatioVariable ratio_product(const SparsifiedRatio& a, const RatioVariable& b) {
    std::vector<RatioAtom> atoms;
    atoms.reserve(a.buckets().size() * b.atoms().size());
    for (const SparsifiedBucket& x : a.buckets())
        for (const RatioAtom& y : b.atoms())
            atoms.push_back({x.value * y.value, x.mass * y.weight});
    return RatioVariable(std::move(atoms));
}

namespace {

bool supports_overlap(const CategoricalMarginal& p, const CategoricalMarginal& q) {
    for (std::size_t x = 0; x < p.alphabet(); ++x)
        if (p.weight(x) > 0.0 && q.weight(x) > 0.0) return true;
    return false;
}

RatioVariable scale_values(const RatioVariable& r, double log_scale) {
    if (log_scale == 0.0) return r;
    std::vector<RatioAtom> atoms;
    atoms.reserve(r.atoms().size());
    for (const RatioAtom& a : r.atoms())
        atoms.push_back({a.value.is_zero() ? LogProb::zero()
                                           : LogProb::from_log(a.value.log() + log_scale),
                         a.weight});
    return RatioVariable(std::move(atoms));
}

FptasResult run_pipeline(const ProductDistribution& p, const ProductDistribution& q,
                         double epsilon, double alpha, double beta) {
    check_epsilon(epsilon);
    if (p.size() != q.size() || p.alphabet() != q.alphabet())
        raise(Errc::DimensionMismatch, "distributions have different shapes");

    const std::size_t n = p.size();
    const double log_alpha = std::log(alpha);
    const double log_beta = std::log(beta);

    FptasResult res;
    std::vector<RatioVariable> ratios;
    ratios.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // SIM(R_i) = 0 exactly when the coordinate supports are disjoint
        if (!supports_overlap(p.marginal(i), q.marginal(i))) {
            res.value = 0.0;
            res.early_exit = true;
            return res;
        }
        ratios.push_back(make_ratio(p.marginal(i), q.marginal(i)));
    }

    if (n == 1) {
        // one coordinate needs no approximation
        const RatioVariable r1 = scale_values(ratios.front(), log_alpha);
        res.value = sim_capped(r1.atoms(), beta, log_beta);
        res.max_stage_atoms = r1.atoms().size();
        return res;
    }

    const double tau = min_nonzero_mass(p, q);
    const IntervalScheme scheme = build_intervals(tau, n, epsilon, alpha);

    RatioVariable y = scale_values(ratios.front(), log_alpha);
    res.max_stage_atoms = y.atoms().size();
    SparsifiedRatio s = sparsify(y, scheme);
    for (std::size_t i = 1; i < n; ++i) {
        y = ratio_product(s, ratios[i]);
        res.max_stage_atoms = std::max(res.max_stage_atoms, y.atoms().size());
        s = sparsify(y, scheme);
    }

    res.value = sim_capped(s, beta, log_beta);
    res.scheme = scheme;
    return res;
}

}  // namespace

FptasResult sim_fptas_run(const ProductDistribution& p, const ProductDistribution& q,
                          double epsilon) {
    return run_pipeline(p, q, epsilon, 1.0, 1.0);
}

double sim_fptas(const ProductDistribution& p, const ProductDistribution& q,
                 double epsilon) {
    return sim_fptas_run(p, q, epsilon).value;
}

FptasResult sim_fptas_scaled_run(const ScaledProduct& p, const ScaledProduct& q,
                                 double epsilon) {
    return run_pipeline(p.base, q.base, epsilon, p.scale, q.scale);
}

double sim_fptas_scaled(const ScaledProduct& p, const ScaledProduct& q, double epsilon) {
    return sim_fptas_scaled_run(p, q, epsilon).value;
}

}  // namespace statsim
