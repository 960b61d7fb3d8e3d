#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "campana/arith.hpp"

namespace campana {

/// coeff * x0^e0 * ... * xn^en
struct Monomial {
    std::int64_t coeff = 0;
    std::vector<int> exponents;

    int total_degree() const;
};

/// One boundary component: an integral homogeneous form with its weight.
struct DivisorComponent {
    std::vector<Monomial> monomials;
    Rational weight;

    int arity() const;   // number of variables (n + 1)
    int degree() const;  // max total degree over monomials
    /// sum of |coeff| over monomials
    BigInt coeff_l1() const;
    std::string to_string() const;
};

/// Builds a component and enforces its invariants: nonempty homogeneous form
/// of degree >= 1, unit content, weight in [0, 1]. Monomials are merged and
/// sorted so equal forms compare equal. Throws std::invalid_argument.
DivisorComponent make_component(std::vector<Monomial> monomials, Rational weight);

/// Primitive sign-normalized homogeneous coordinates.
class ProjectivePoint {
public:
    /// gcd 1, first nonzero coordinate positive. Throws on the zero tuple.
    static ProjectivePoint normalize(std::vector<BigInt> raw);

    /// Caller guarantees coordinates are already canonical (enumerator output).
    static ProjectivePoint from_canonical(std::vector<BigInt> coords);

    const std::vector<BigInt>& coords() const { return coords_; }
    std::size_t ambient_dim() const { return coords_.size() - 1; }
    BigInt height_base() const;  // max |x_j|
    std::string to_string() const;

    bool operator==(const ProjectivePoint& o) const = default;

private:
    explicit ProjectivePoint(std::vector<BigInt> coords) : coords_(std::move(coords)) {}
    std::vector<BigInt> coords_;
};

struct OrbifoldModel {
    int ambient_dim = 1;
    std::vector<DivisorComponent> components;
    std::vector<std::int64_t> s_primes;  // finite part of S, sorted, distinct

    std::vector<Rational> weights() const;  // epsilon vector
    bool in_s(const BigInt& p) const;
    std::string summary() const;
};

/// Checks arity consistency and S-prime sanity eagerly (those are structural);
/// everything else is left to validate_model. Throws std::invalid_argument.
OrbifoldModel make_model(int ambient_dim, std::vector<DivisorComponent> components,
                         std::vector<std::int64_t> s_primes);

/// Exact value of the form at the point's coordinates.
BigInt evaluate(const DivisorComponent& f, const ProjectivePoint& x);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Re-checks every type invariant plus the cross-component conditions:
/// pairwise non-proportionality and, on P^1, pairwise nonzero resultants.
ValidationReport validate_model(const OrbifoldModel& m);

/// Resultant of two binary forms via the Sylvester determinant.
BigInt binary_form_resultant(const DivisorComponent& f, const DivisorComponent& g);

}  // namespace campana
