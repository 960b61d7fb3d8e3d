#pragma once

#include <map>

#include "campana/arith.hpp"

namespace campana {

/// Exact formal linear combination  sum_b c_b * log(b)  with rational
/// coefficients and integer bases >= 1. The value stays symbolic; reals only
/// appear at output boundaries via value()/value_precise().
///
/// Comparisons first canonicalize both sides onto prime bases and decide by
/// coefficientwise domination when possible; otherwise they fall back to
/// 100-digit evaluation with a 1e-30 guard band (differences inside the band
/// compare as equal).
class LogSum {
public:
    LogSum() = default;

    static LogSum log_of(const BigInt& base, const Rational& coeff = 1);

    void add_term(const BigInt& base, const Rational& coeff);

    LogSum& operator+=(const LogSum& o);
    LogSum& operator-=(const LogSum& o);
    LogSum& operator*=(const Rational& scalar);

    friend LogSum operator+(LogSum a, const LogSum& b) { return a += b; }
    friend LogSum operator-(LogSum a, const LogSum& b) { return a -= b; }
    friend LogSum operator*(LogSum a, const Rational& s) { return a *= s; }
    friend LogSum operator*(const Rational& s, LogSum a) { return a *= s; }

    const std::map<BigInt, Rational>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    /// Equivalent sum over prime bases only, zero coefficients dropped.
    LogSum canonical() const;

    double value() const;

    /// -1, 0, +1; exact where domination decides, else guarded evaluation.
    static int compare(const LogSum& a, const LogSum& b);

    bool leq(const LogSum& o) const { return compare(*this, o) <= 0; }
    bool equivalent(const LogSum& o) const { return compare(*this, o) == 0; }

    std::string to_string() const;

private:
    std::map<BigInt, Rational> terms_;
};

}  // namespace campana
