#include "campana/heights.hpp"

#include <algorithm>

namespace campana {

LogSum counting_N(const OrbifoldModel& m, const ProjectivePoint& x,
                  std::span<const Rational> weights) {
    if (weights.size() != m.components.size()) {
        throw std::invalid_argument("counting_N: weight count mismatch");
    }
    // factor each weighted component value once; accumulate per prime
    std::map<BigInt, Rational> per_prime;
    for (std::size_t i = 0; i < m.components.size(); ++i) {
        if (weights[i] == 0) continue;
        const BigInt v = evaluate(m.components[i], x);
        if (v == 0) throw on_component_error(i, x.to_string());
        for (const auto& [p, e] : factorize(v).factors) {
            if (!m.in_s(p)) per_prime[p] += weights[i] * e;
        }
    }
    LogSum total;
    for (const auto& [p, c] : per_prime) total.add_term(p, c);
    return total;
}

LogSum counting_N_eps(const OrbifoldModel& m, const ProjectivePoint& x) {
    const std::vector<Rational> eps = m.weights();
    return counting_N(m, x, eps);
}

LogSum counting_N1(const OrbifoldModel& m, const ProjectivePoint& x) {
    LogSum total;
    for (const BigInt& p : support_primes(m, x)) total.add_term(p, 1);
    return total;
}

LogSum weil_height(const ProjectivePoint& x) {
    return LogSum::log_of(x.height_base());
}

LogSum divisor_height(const OrbifoldModel& m, const ProjectivePoint& x,
                      std::span<const Rational> weights) {
    if (weights.size() != m.components.size()) {
        throw std::invalid_argument("divisor_height: weight count mismatch");
    }
    Rational degree = 0;
    for (std::size_t i = 0; i < m.components.size(); ++i) {
        degree += weights[i] * m.components[i].degree();
    }
    return weil_height(x) * degree;
}

Rational bigness_margin(const OrbifoldModel& m) {
    Rational margin = -(m.ambient_dim + 1);
    for (const DivisorComponent& c : m.components) {
        margin += (Rational(1) - c.weight) * c.degree();
    }
    return margin;
}

std::int64_t log_canonical_degree(const OrbifoldModel& m) {
    std::int64_t d = -(m.ambient_dim + 1);
    for (const DivisorComponent& c : m.components) d += c.degree();
    return d;
}

double vojta_gap(const OrbifoldModel& m, const ProjectivePoint& x, const Rational& delta) {
    LogSum gap = counting_N1(m, x);
    gap -= weil_height(x) * Rational(log_canonical_degree(m));
    gap += weil_height(x) * delta;
    return gap.value();
}

LogSum height_bound_constant(const OrbifoldModel& m, std::span<const Rational> weights) {
    if (weights.size() != m.components.size()) {
        throw std::invalid_argument("height_bound_constant: weight count mismatch");
    }
    LogSum total;
    for (std::size_t i = 0; i < m.components.size(); ++i) {
        total.add_term(m.components[i].coeff_l1(), weights[i]);
    }
    return total;
}

ChainCheck counting_height_chain(const OrbifoldModel& m, const ProjectivePoint& x) {
    const std::vector<Rational> eps = m.weights();
    const LogSum n1 = counting_N1(m, x);
    const LogSum n_eps = counting_N(m, x, eps);
    const LogSum bound = divisor_height(m, x, eps) + height_bound_constant(m, eps);
    ChainCheck check;
    check.truncated_le_weighted = n1.leq(n_eps);
    check.weighted_le_height = n_eps.leq(bound);
    return check;
}

}  // namespace campana
