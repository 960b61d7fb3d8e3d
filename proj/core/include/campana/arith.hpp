#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace campana {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact prime factorization of a nonzero integer.
/// Invariant: sign * prod(p^e) == value, every key prime, keys ascending.
struct Factorization {
    BigInt value;
    int sign = 1;
    std::map<BigInt, unsigned> factors;
};

/// Deterministic Miller-Rabin with the 13-witness set {2,...,41}, proven
/// correct for n < 3.317e24; larger inputs use an extended witness set.
bool is_prime(const BigInt& n);

/// Trial division by primes <= 10^6, then Brent's rho with a fixed
/// parameter schedule. Throws std::invalid_argument on n == 0.
Factorization factorize(const BigInt& n);

/// Largest e with p^e | n, by repeated exact division.
/// Requires p prime and n != 0; throws std::invalid_argument otherwise.
unsigned valuation(const BigInt& p, const BigInt& n);

/// All primes <= bound, ascending. Requires bound >= 2.
std::vector<std::int64_t> primes_up_to(std::int64_t bound);

/// One (prime, exponent) entry of an int64 factorization.
struct PrimePower {
    std::int64_t prime;
    std::uint32_t exponent;
};

/// Inline factor list for the enumeration hot path. A 64-bit integer has at
/// most 15 distinct prime factors.
struct SmallFactors {
    std::array<PrimePower, 15> entries{};
    std::size_t count = 0;

    void push(std::int64_t p, std::uint32_t e) { entries[count++] = {p, e}; }
    const PrimePower* begin() const { return entries.data(); }
    const PrimePower* end() const { return entries.data() + count; }
};

/// Smallest-prime-factor table for batch factorization of bounded values.
class SpfSieve {
public:
    explicit SpfSieve(std::int64_t limit);

    std::int64_t limit() const { return limit_; }
    bool covers(std::int64_t v) const { return v >= 1 && v <= limit_; }

    /// v in [1, limit()]; factors of v appended in ascending prime order.
    void factor(std::int64_t v, SmallFactors& out) const;

private:
    std::int64_t limit_;
    std::vector<std::int32_t> spf_;
};

/// Factorization of |v| for nonzero int64 v, ascending primes. Uses the
/// sieve when it covers |v|, otherwise trial division plus Brent's rho.
void factorize_i64(std::int64_t v, const SpfSieve* sieve, SmallFactors& out);

bool is_prime_u64(std::uint64_t n);

}  // namespace campana
