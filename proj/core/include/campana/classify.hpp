#pragma once

#include <optional>

#include "campana/local.hpp"

namespace campana {

enum class PointClass { Integral, Campana, NonCampana, OnBoundary };

const char* point_class_name(PointClass c);

struct Classification {
    PointClass cls = PointClass::NonCampana;
    /// smallest prime violating the weighted-multiplicity condition
    std::optional<BigInt> witness;
    /// index of a vanishing component, for OnBoundary
    std::optional<std::size_t> boundary_component;
};

/// Whether the classification puts the point in the epsilon-Campana set
/// (integral points satisfy the condition vacuously).
inline bool in_campana_set(const Classification& c) {
    return c.cls == PointClass::Integral || c.cls == PointClass::Campana;
}

/// Primes p outside S with positive multiplicity against some component,
/// i.e. the prime support of prod |F_i(x)| away from S, ascending.
/// Throws on_component_error if any F_i(x) = 0.
std::vector<BigInt> support_primes(const OrbifoldModel& m, const ProjectivePoint& x);

/// The epsilon-Campana predicate: Integral when the support is empty, Campana
/// when every support prime has weighted multiplicity >= 1 (exact rational
/// comparison, ties count as Campana), NonCampana with the smallest violating
/// prime as witness otherwise, OnBoundary when some component vanishes at x.
Classification classify(const OrbifoldModel& m, const ProjectivePoint& x);

}  // namespace campana
