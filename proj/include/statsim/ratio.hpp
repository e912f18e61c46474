#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "statsim/dist.hpp"
#include "statsim/logprob.hpp"

namespace statsim {

/// One atom of a ratio random variable: it takes `value` with probability
/// `weight`. Values live in the log domain, weights stay linear.
struct RatioAtom {
    LogProb value;
    double weight;
};

/// Finite weighted multiset of nonnegative ratio values; the random variable
/// R = P||Q takes value P(x)/Q(x) with probability Q(x). Total weight is the
/// mass of the conditioning distribution (1 for full distributions).
class RatioVariable {
public:
    explicit RatioVariable(std::vector<RatioAtom> atoms);

    const std::vector<RatioAtom>& atoms() const { return atoms_; }
    double total_mass() const;

private:
    std::vector<RatioAtom> atoms_;
};

/// The interval family J = {{0}, (0,g], (g,g(1+d)], ..., (g(1+d)^(m-1), g(1+d)^m]}
/// that partitions [0,B]. gamma and B are kept as natural logs; they leave the
/// double range quickly as n grows.
struct IntervalScheme {
    double delta;        // eps / (2n)
    double log_gamma;    // ln gamma
    double log_b;        // ln B
    std::size_t m;       // ceil(log(B/gamma) / log(1+delta))
    double log1p_delta;  // cached ln(1+delta)
    double tau;          // bound the scheme was built from
    double epsilon;
    std::size_t n;

    /// ln of the lower edge of interval I_j, j in [1, m].
    double lower_edge_log(std::size_t j) const {
        return log_gamma + static_cast<double>(j - 1) * log1p_delta;
    }
};

/// Builds the scheme for ratio bound B = 1/tau^n, delta = eps/(2n) and
/// gamma = eps * tau^(2n) / (4 n^2 (1+eps)).
IntervalScheme build_intervals(double tau, std::size_t n, double epsilon);

/// Same scheme with the whole value axis scaled by `scale` in (0,1]:
/// B = scale/tau^n and gamma picks up the same factor, so m is unchanged.
IntervalScheme build_intervals(double tau, std::size_t n, double epsilon, double scale);

/// Index of the interval of `scheme` containing a positive value with the
/// given natural log: 0 for (0,gamma], j in [1,m] otherwise. Values beyond B
/// (past a 2^-30 relative slack) raise ValueAboveB.
std::int64_t bucket_index(double log_value, const IntervalScheme& scheme);

/// One bucket of a J-sparsified variable. index -1 is the {0} interval and
/// carries value exactly zero; index 0 is (0,gamma]; index j >= 1 is I_j.
struct SparsifiedBucket {
    std::int64_t index;
    LogProb value;  // conditional mean of member values, inside its interval
    double mass;
};

/// J-sparsification of a ratio variable: per occupied interval, the total
/// member mass and the conditional mean of member values. At most m+2 buckets,
/// sorted by interval index.
class SparsifiedRatio {
public:
    const std::vector<SparsifiedBucket>& buckets() const { return buckets_; }
    double total_mass() const;

    /// View of the buckets as plain atoms.
    RatioVariable as_ratio() const;

private:
    friend SparsifiedRatio sparsify(const RatioVariable&, const IntervalScheme&);
    explicit SparsifiedRatio(std::vector<SparsifiedBucket> buckets)
        : buckets_(std::move(buckets)) {}
    std::vector<SparsifiedBucket> buckets_;
};

/// R_i = P_i || Q_i: one atom per symbol with Q_i(x) > 0, value P_i(x)/Q_i(x),
/// weight Q_i(x).
RatioVariable make_ratio(const CategoricalMarginal& pi, const CategoricalMarginal& qi);

/// SIM(R) = E[min(R,1)].
double sim_of_ratio(const RatioVariable& r);

/// Routes every atom to its interval; per interval the bucket mass is the
/// weight sum and the bucket value the weighted mean of member values,
/// computed with max-shifted log-domain summation.
SparsifiedRatio sparsify(const RatioVariable& y, const IntervalScheme& scheme);

/// Independent product: all pairwise (value*value, weight*weight) atoms.
/// Atoms with equal values are left unmerged.
RatioVariable ratio_product(const RatioVariable& a, const RatioVariable& b);
RatioVariable ratio_product(const SparsifiedRatio& a, const RatioVariable& b);

/// Full outcome of one estimator run, for reporting and diagnostics.
struct FptasResult {
    double value = 0.0;
    bool early_exit = false;                // some coordinate pair had disjoint supports
    std::optional<IntervalScheme> scheme;   // absent when early_exit or n == 1
    std::size_t max_stage_atoms = 0;        // peak atom count fed to one sparsification
};

/// Deterministic (1+eps)-approximation of SIM(P,Q) for product distributions:
/// early-returns 0 when some SIM(R_i) = 0, otherwise runs the sparsified
/// recursion Y_1 = R_1, Y_(i+1) = sparsify(Y_i) * R_(i+1) and evaluates
/// SIM on the final sparsification.
FptasResult sim_fptas_run(const ProductDistribution& p, const ProductDistribution& q,
                          double epsilon);
double sim_fptas(const ProductDistribution& p, const ProductDistribution& q, double epsilon);

/// Sub-distribution variant: estimates sum_x min(alpha P'(x), beta Q'(x)) by
/// scaling the ratio variable by alpha and capping the final functional at
/// beta. With alpha = beta = 1 it coincides with sim_fptas.
FptasResult sim_fptas_scaled_run(const ScaledProduct& p, const ScaledProduct& q,
                                 double epsilon);
double sim_fptas_scaled(const ScaledProduct& p, const ScaledProduct& q, double epsilon);

}  // namespace statsim
