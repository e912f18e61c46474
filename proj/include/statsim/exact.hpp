#pragma once

#include <functional>
#include <span>

#include "statsim/dist.hpp"
#include "statsim/rational.hpp"

namespace statsim {

/// Exact results are plain rationals in [0,1], kept in lowest terms by GMP.
using ExactValue = Rational;

/// Default ceiling on the number of enumerated states (2^20). Exceeding the
/// cap is an error, never a silent truncation.
inline constexpr std::size_t kDefaultEnumCap = std::size_t{1} << 20;

/// SIM(P,Q) = sum over all l^n points of min(P(x),Q(x)), exact.
ExactValue sim_exact(const RationalProduct& p, const RationalProduct& q,
                     std::size_t cap = kDefaultEnumCap);

/// Total variation distance sum_x max(0, P(x)-Q(x)), exact. Computed by its
/// own enumeration, not as 1 - sim_exact.
ExactValue tv_exact(const RationalProduct& p, const RationalProduct& q,
                    std::size_t cap = kDefaultEnumCap);

/// Single-coordinate SIM: sum over symbols of min(P_i(x), Q_i(x)).
ExactValue sim_exact_marginal(const RationalMarginal& pi, const RationalMarginal& qi);

using PointMassFn = std::function<Rational(std::span<const int>)>;

/// SIM over an arbitrary finite domain given as per-coordinate dimension
/// sizes, with opaque exact point-mass evaluators. Enumerates every state.
ExactValue sim_exact_generic(std::span<const std::size_t> dims, const PointMassFn& pm_p,
                             const PointMassFn& pm_q, std::size_t cap = kDefaultEnumCap);

}  // namespace statsim
