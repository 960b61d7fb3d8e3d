#include "campana/oracle.hpp"

#include <algorithm>

namespace campana {

namespace {

// independent form evaluation; the system's own evaluators are under test
std::int64_t eval_form_i64(const DivisorComponent& c, std::span<const std::int64_t> coords) {
    std::int64_t total = 0;
    for (const Monomial& m : c.monomials) {
        std::int64_t term = m.coeff;
        for (std::size_t j = 0; j < m.exponents.size(); ++j) {
            for (int e = 0; e < m.exponents[j]; ++e) term *= coords[j];
        }
        total += term;
    }
    return total;
}

BigInt eval_form_big(const DivisorComponent& c, const ProjectivePoint& x) {
    BigInt total = 0;
    for (const Monomial& m : c.monomials) {
        BigInt term = m.coeff;
        for (std::size_t j = 0; j < m.exponents.size(); ++j) {
            for (int e = 0; e < m.exponents[j]; ++e) term *= x.coords()[j];
        }
        total += term;
    }
    return total;
}

bool is_unit_form(const DivisorComponent& c, std::size_t var, std::size_t arity) {
    if (c.monomials.size() != 1) return false;
    const Monomial& m = c.monomials.front();
    if (m.coeff != 1 && m.coeff != -1) return false;
    if (m.exponents.size() != arity) return false;
    for (std::size_t j = 0; j < arity; ++j) {
        if (m.exponents[j] != (j == var ? 1 : 0)) return false;
    }
    return true;
}

void check_applicable(const OrbifoldModel& m, OracleKind kind) {
    switch (kind) {
        case OracleKind::SquarefullPairs: {
            const bool shape_ok =
                m.ambient_dim == 1 && m.components.size() == 2 && m.s_primes.empty() &&
                ((is_unit_form(m.components[0], 0, 2) && is_unit_form(m.components[1], 1, 2)) ||
                 (is_unit_form(m.components[0], 1, 2) && is_unit_form(m.components[1], 0, 2)));
            const bool weights_ok = shape_ok && m.components[0].weight == Rational(1, 2) &&
                                    m.components[1].weight == Rational(1, 2);
            if (!weights_ok) {
                throw std::invalid_argument(
                    "squarefull oracle applies only to the half-weighted coordinate model on P^1 "
                    "with empty S");
            }
            return;
        }
        case OracleKind::SUnit:
            for (const DivisorComponent& c : m.components) {
                if (c.weight != 0) {
                    throw std::invalid_argument("s-unit oracle requires all weights zero");
                }
            }
            return;
        case OracleKind::AllPoints:
            for (const DivisorComponent& c : m.components) {
                if (c.weight != 1) {
                    throw std::invalid_argument("all-points oracle requires all weights one");
                }
            }
            return;
    }
}

}  // namespace

bool is_squarefull(const BigInt& n) {
    if (n == 0) throw std::invalid_argument("is_squarefull: n must be nonzero");
    for (const auto& [p, e] : factorize(n).factors) {
        if (e < 2) return false;
    }
    return true;
}

bool is_squarefull_i64(std::int64_t n, const SpfSieve* sieve) {
    if (n == 0) throw std::invalid_argument("is_squarefull: n must be nonzero");
    SmallFactors f;
    factorize_i64(n, sieve, f);
    for (const PrimePower& pp : f) {
        if (pp.exponent < 2) return false;
    }
    return true;
}

bool campana_oracle_p1_halves(const ProjectivePoint& x) {
    if (x.coords().size() != 2) {
        throw std::invalid_argument("campana_oracle_p1_halves: expected a point on P^1");
    }
    const BigInt& a = x.coords()[0];
    const BigInt& b = x.coords()[1];
    if (a == 0 || b == 0) {
        throw std::invalid_argument("campana_oracle_p1_halves: boundary point");
    }
    return is_squarefull(a) && is_squarefull(b);
}

bool sunit_oracle(const OrbifoldModel& m, const ProjectivePoint& x) {
    for (std::size_t i = 0; i < m.components.size(); ++i) {
        const BigInt v = eval_form_big(m.components[i], x);
        if (v == 0) throw on_component_error(i, x.to_string());
        for (const auto& [p, e] : factorize(v).factors) {
            if (!m.in_s(p)) return false;
        }
    }
    return true;
}

const char* oracle_kind_name(OracleKind kind) {
    switch (kind) {
        case OracleKind::SquarefullPairs: return "squarefull";
        case OracleKind::SUnit: return "s-unit";
        case OracleKind::AllPoints: return "all-points";
    }
    return "?";
}

CrossValidation cross_validate(const OrbifoldModel& m, std::int64_t bound, OracleKind kind,
                               int threads) {
    check_applicable(m, kind);
    if (bound < 1) throw std::invalid_argument("cross_validate: bound must be >= 1");

    const SweepClassifier classifier(m, bound);
    if (!classifier.fast_path()) {
        throw std::invalid_argument("cross_validate: model/bound outside the int64 sweep range");
    }
    const SpfSieve* sieve = classifier.sieve();

    // oracle-side expectation from raw coordinates, arith only
    auto expected = [&](std::span<const std::int64_t> pt, bool& boundary) -> bool {
        switch (kind) {
            case OracleKind::SquarefullPairs: {
                if (pt[0] == 0 || pt[1] == 0) {
                    boundary = true;
                    return false;
                }
                return is_squarefull_i64(pt[0], sieve) && is_squarefull_i64(pt[1], sieve);
            }
            case OracleKind::SUnit: {
                for (const DivisorComponent& c : m.components) {
                    const std::int64_t v = eval_form_i64(c, pt);
                    if (v == 0) {
                        boundary = true;
                        return false;
                    }
                    SmallFactors f;
                    factorize_i64(v, sieve, f);
                    for (const PrimePower& pp : f) {
                        if (!std::binary_search(m.s_primes.begin(), m.s_primes.end(), pp.prime)) {
                            return false;
                        }
                    }
                }
                return true;
            }
            case OracleKind::AllPoints: {
                for (const DivisorComponent& c : m.components) {
                    if (eval_form_i64(c, pt) == 0) {
                        boundary = true;
                        return false;
                    }
                }
                return true;
            }
        }
        return false;
    };

    const auto tasks = height_range_tasks(m.ambient_dim, bound);
    std::vector<CrossValidation> partial(tasks.size());
    constexpr std::size_t kMaxStored = 100;

    run_height_tasks(m.ambient_dim, bound, threads,
                     [&](std::size_t task, std::int64_t lo, std::int64_t hi) {
                         CrossValidation& cv = partial[task];
                         for_each_point_in_range(
                             m.ambient_dim, lo, hi, [&](std::span<const std::int64_t> pt) {
                                 bool boundary = false;
                                 const bool want = expected(pt, boundary);
                                 if (boundary) {
                                     cv.boundary_skipped += 1;
                                     return;
                                 }
                                 const auto r = classifier.classify_point(pt);
                                 const bool got = r.cls == PointClass::Campana ||
                                                  r.cls == PointClass::Integral;
                                 cv.points_checked += 1;
                                 if (want != got) {
                                     cv.disagreement_count += 1;
                                     if (cv.disagreements.size() < kMaxStored) {
                                         cv.disagreements.push_back(OracleVerdict{
                                             {pt.begin(), pt.end()}, want, r.cls, false});
                                     }
                                 }
                             });
                     });

    CrossValidation total;
    for (CrossValidation& cv : partial) {
        total.points_checked += cv.points_checked;
        total.boundary_skipped += cv.boundary_skipped;
        total.disagreement_count += cv.disagreement_count;
        for (OracleVerdict& v : cv.disagreements) {
            if (total.disagreements.size() < kMaxStored) {
                total.disagreements.push_back(std::move(v));
            }
        }
    }
    return total;
}

}  // namespace campana
