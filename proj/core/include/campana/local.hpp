#pragma once

#include <span>
#include <stdexcept>

#include "campana/geometry.hpp"

namespace campana {

/// Raised when a point lies on a boundary component, where the local
/// multiplicity is undefined (infinite).
class on_component_error : public std::runtime_error {
public:
    on_component_error(std::size_t component_index, std::string point)
        : std::runtime_error("point " + point + " lies on component " +
                             std::to_string(component_index)),
          component_index_(component_index) {}

    std::size_t component_index() const { return component_index_; }

private:
    std::size_t component_index_;
};

/// v_p(F_i(x)): the intersection multiplicity of x with component i at p.
/// Requires p prime, p outside S, and F_i(x) != 0.
unsigned multiplicity(const OrbifoldModel& m, const ProjectivePoint& x, const BigInt& p,
                      std::size_t component_index);

/// sum_i weights[i] * v_p(F_i(x)), exact; components with weight 0 are skipped
/// entirely, so they may vanish at x.
Rational weighted_multiplicity(const OrbifoldModel& m, const ProjectivePoint& x,
                               const BigInt& p, std::span<const Rational> weights);

/// All per-component multiplicities of x at one prime.
struct MultiplicityVector {
    ProjectivePoint point;
    BigInt prime;
    std::vector<unsigned> entries;
};

MultiplicityVector multiplicity_vector(const OrbifoldModel& m, const ProjectivePoint& x,
                                       const BigInt& p);

}  // namespace campana
