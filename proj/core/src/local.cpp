#include "campana/local.hpp"

namespace campana {

namespace {

void check_prime_outside_s(const OrbifoldModel& m, const BigInt& p) {
    if (!is_prime(p)) throw std::invalid_argument("multiplicity: p must be prime");
    if (m.in_s(p)) {
        throw std::invalid_argument("multiplicity: p lies in S, where multiplicities are not counted");
    }
}

}  // namespace

unsigned multiplicity(const OrbifoldModel& m, const ProjectivePoint& x, const BigInt& p,
                      std::size_t component_index) {
    check_prime_outside_s(m, p);
    const BigInt v = evaluate(m.components.at(component_index), x);
    if (v == 0) throw on_component_error(component_index, x.to_string());
    return valuation(p, v);
}

Rational weighted_multiplicity(const OrbifoldModel& m, const ProjectivePoint& x,
                               const BigInt& p, std::span<const Rational> weights) {
    check_prime_outside_s(m, p);
    if (weights.size() != m.components.size()) {
        throw std::invalid_argument("weighted_multiplicity: weight count mismatch");
    }
    Rational total = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] == 0) continue;
        const BigInt v = evaluate(m.components[i], x);
        if (v == 0) throw on_component_error(i, x.to_string());
        total += weights[i] * valuation(p, v);
    }
    return total;
}

MultiplicityVector multiplicity_vector(const OrbifoldModel& m, const ProjectivePoint& x,
                                       const BigInt& p) {
    check_prime_outside_s(m, p);
    std::vector<unsigned> entries;
    entries.reserve(m.components.size());
    for (std::size_t i = 0; i < m.components.size(); ++i) {
        const BigInt v = evaluate(m.components[i], x);
        if (v == 0) throw on_component_error(i, x.to_string());
        entries.push_back(valuation(p, v));
    }
    return MultiplicityVector{x, p, std::move(entries)};
}

}  // namespace campana
