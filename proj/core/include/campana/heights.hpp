#pragma once

#include <span>

#include "campana/classify.hpp"
#include "campana/logsum.hpp"

namespace campana {

/// N(D_w, x) = sum over primes p outside S of (sum_i w_i v_p(F_i(x))) log p.
/// Components with weight 0 are ignored; the rest must not vanish at x.
LogSum counting_N(const OrbifoldModel& m, const ProjectivePoint& x,
                  std::span<const Rational> weights);

/// Convenience overload using the model's own epsilon weights.
LogSum counting_N_eps(const OrbifoldModel& m, const ProjectivePoint& x);

/// N^(1)(D, x) = sum of log p over the support primes of the full boundary.
LogSum counting_N1(const OrbifoldModel& m, const ProjectivePoint& x);

/// log max_j |x_j|, kept symbolic with the integer max as base. This fixes
/// the representative of the height class once and for all.
LogSum weil_height(const ProjectivePoint& x);

/// (sum_i w_i d_i) * weil_height(x): the representative of h_{D_w}.
LogSum divisor_height(const OrbifoldModel& m, const ProjectivePoint& x,
                      std::span<const Rational> weights);

/// deg(K_X + sum (1 - eps_i) D_i) on P^n: sum_i (1 - eps_i) d_i - (n + 1).
/// Positive exactly when the log-canonical divisor is big.
Rational bigness_margin(const OrbifoldModel& m);

/// sum_i d_i - (n + 1), the degree of K_X(D).
std::int64_t log_canonical_degree(const OrbifoldModel& m);

/// N^(1)(D,x) - (sum d_i - n - 1) h(x) + delta h(x), evaluated as a real.
double vojta_gap(const OrbifoldModel& m, const ProjectivePoint& x, const Rational& delta);

/// sum_i w_i log ||F_i||_1 where ||F||_1 is the coefficient L1 norm: the
/// explicit constant making N(D_w,x) <= h_{D_w}(x) + const exact.
LogSum height_bound_constant(const OrbifoldModel& m, std::span<const Rational> weights);

struct ChainCheck {
    bool truncated_le_weighted = false;  // N^(1) <= N(D_eps)
    bool weighted_le_height = false;     // N(D_eps) <= h_{D_eps} + const
    bool ok() const { return truncated_le_weighted && weighted_le_height; }
};

/// Exact two-step inequality check for a point already classified Campana.
ChainCheck counting_height_chain(const OrbifoldModel& m, const ProjectivePoint& x);

}  // namespace campana
