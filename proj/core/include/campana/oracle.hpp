#pragma once

#include "campana/enumerate.hpp"

namespace campana {

/// Brute-force ground truths for the classifier, built on arith primitives
/// only — never on the local/classify machinery they are meant to check.

/// true iff |n| = 1 or every prime factor of n has exponent >= 2
bool is_squarefull(const BigInt& n);
bool is_squarefull_i64(std::int64_t n, const SpfSieve* sieve = nullptr);

/// Membership test for the half-weighted two-point boundary on P^1 with
/// empty S: both coordinates squarefull. Requires a*b != 0.
bool campana_oracle_p1_halves(const ProjectivePoint& x);

/// Membership test for all-zero weights: every prime factor of every
/// |F_i(x)| lies in S. Forms are evaluated independently of the geometry
/// evaluator. Requires x off all components.
bool sunit_oracle(const OrbifoldModel& m, const ProjectivePoint& x);

enum class OracleKind { SquarefullPairs, SUnit, AllPoints };

struct OracleVerdict {
    std::vector<std::int64_t> point;
    bool expected_in_set = false;
    PointClass actual = PointClass::NonCampana;
    bool agree = false;
};

struct CrossValidation {
    std::int64_t points_checked = 0;
    std::int64_t boundary_skipped = 0;
    std::int64_t disagreement_count = 0;
    std::vector<OracleVerdict> disagreements;  // capped sample
};

/// Sweeps every valid point of height <= bound, comparing the classifier
/// against the named oracle. Throws std::invalid_argument when the oracle
/// does not apply to the model.
CrossValidation cross_validate(const OrbifoldModel& m, std::int64_t bound, OracleKind kind,
                               int threads = 0);

const char* oracle_kind_name(OracleKind kind);

}  // namespace campana
