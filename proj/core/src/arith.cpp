#include "campana/arith.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace campana {

namespace {

using boost::multiprecision::gcd;
using boost::multiprecision::powm;

constexpr std::int64_t kTrialDivisionBound = 1'000'000;

// Witnesses proving primality for every n < 3.317e24 (first 13 primes).
constexpr std::array<std::uint64_t, 13> kWitnesses{2,  3,  5,  7,  11, 13, 17,
                                                   19, 23, 29, 31, 37, 41};
// Fallback witnesses for inputs beyond the proven range.
constexpr std::array<std::uint64_t, 7> kExtraWitnesses{43, 47, 53, 59, 61, 67, 71};

const std::vector<std::int64_t>& trial_primes() {
    static const std::vector<std::int64_t> primes = primes_up_to(kTrialDivisionBound);
    return primes;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool miller_rabin_u64(std::uint64_t n, std::uint64_t a) {
    if (a % n == 0) return true;
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

bool miller_rabin_big(const BigInt& n, const BigInt& a) {
    if (a % n == 0) return true;
    BigInt d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    BigInt x = powm(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = powm(x, BigInt(2), n);
        if (x == n - 1) return true;
    }
    return false;
}

// Brent's cycle-finding rho. Parameters are fixed so factorizations are
// reproducible: x0 = 2, c = 1, 2, 3, ... until a nontrivial factor appears.
std::uint64_t brent_rho_u64(std::uint64_t n) {
    if ((n & 1) == 0) return 2;
    for (std::uint64_t c = 1;; ++c) {
        std::uint64_t y = 2, g = 1, q = 1, x = 0, ys = 0, r = 1;
        const std::uint64_t batch = 128;
        while (g == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
            std::uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                std::uint64_t lim = std::min(batch, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    y = (mulmod_u64(y, y, n) + c) % n;
                    q = mulmod_u64(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += batch;
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            y = ys;
            while (g == 1) {
                y = (mulmod_u64(y, y, n) + c) % n;
                std::uint64_t diff = x > y ? x - y : y - x;
                g = diff == 0 ? n : std::gcd(diff, n);
            }
        }
        if (g != n) return g;
    }
}

BigInt brent_rho_big(const BigInt& n) {
    if ((n & 1) == 0) return 2;
    for (BigInt c = 1;; ++c) {
        BigInt x = 2, y = 2, d = 1;
        std::uint64_t power = 1, lam = 1;
        while (d == 1) {
            if (power == lam) {
                x = y;
                power <<= 1;
                lam = 0;
            }
            y = (y * y + c) % n;
            ++lam;
            BigInt diff = x > y ? x - y : y - x;
            d = diff == 0 ? n : gcd(diff, n);
        }
        if (d != n) return d;
    }
}

void factor_u64_into(std::uint64_t v, std::map<BigInt, unsigned>& out);

void split_u64(std::uint64_t v, std::map<BigInt, unsigned>& out) {
    if (v == 1) return;
    if (is_prime_u64(v)) {
        out[BigInt(v)] += 1;
        return;
    }
    std::uint64_t d = brent_rho_u64(v);
    split_u64(d, out);
    split_u64(v / d, out);
}

void factor_u64_into(std::uint64_t v, std::map<BigInt, unsigned>& out) {
    for (std::int64_t p : trial_primes()) {
        auto up = static_cast<std::uint64_t>(p);
        if (up * up > v) break;
        while (v % up == 0) {
            out[BigInt(up)] += 1;
            v /= up;
        }
        if (v == 1) return;
    }
    if (v > 1) split_u64(v, out);
}

void split_big(const BigInt& v, std::map<BigInt, unsigned>& out) {
    if (v == 1) return;
    if (v <= std::numeric_limits<std::uint64_t>::max()) {
        split_u64(static_cast<std::uint64_t>(v), out);
        return;
    }
    if (is_prime(v)) {
        out[v] += 1;
        return;
    }
    BigInt d = brent_rho_big(v);
    split_big(d, out);
    split_big(v / d, out);
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    for (std::uint64_t a : kWitnesses) {
        if (!miller_rabin_u64(n, a)) return false;
    }
    return true;
}

bool is_prime(const BigInt& n) {
    if (n < 2) return false;
    if (n <= std::numeric_limits<std::uint64_t>::max()) {
        return is_prime_u64(static_cast<std::uint64_t>(n));
    }
    for (std::uint64_t p : kWitnesses) {
        if (n % p == 0) return false;
    }
    for (std::uint64_t a : kWitnesses) {
        if (!miller_rabin_big(n, a)) return false;
    }
    // Beyond the proven 3.317e24 bound, pile on more witnesses.
    static const BigInt proven_bound = BigInt("3317044064679887385961981");
    if (n >= proven_bound) {
        for (std::uint64_t a : kExtraWitnesses) {
            if (!miller_rabin_big(n, a)) return false;
        }
    }
    return true;
}

Factorization factorize(const BigInt& n) {
    if (n == 0) throw std::invalid_argument("factorize: input must be nonzero");
    Factorization f;
    f.value = n;
    f.sign = n < 0 ? -1 : 1;
    BigInt v = abs(n);
    if (v == 1) return f;
    if (v <= std::numeric_limits<std::uint64_t>::max()) {
        factor_u64_into(static_cast<std::uint64_t>(v), f.factors);
        return f;
    }
    for (std::int64_t p : trial_primes()) {
        BigInt bp(p);
        if (bp * bp > v) break;
        while (v % bp == 0) {
            f.factors[bp] += 1;
            v /= bp;
        }
        if (v == 1) return f;
        if (v <= std::numeric_limits<std::uint64_t>::max()) {
            factor_u64_into(static_cast<std::uint64_t>(v), f.factors);
            return f;
        }
    }
    split_big(v, f.factors);
    return f;
}

unsigned valuation(const BigInt& p, const BigInt& n) {
    if (n == 0) throw std::invalid_argument("valuation: n must be nonzero");
    if (!is_prime(p)) throw std::invalid_argument("valuation: p must be prime");
    BigInt v = abs(n);
    unsigned e = 0;
    while (v % p == 0) {
        v /= p;
        ++e;
    }
    return e;
}

std::vector<std::int64_t> primes_up_to(std::int64_t bound) {
    if (bound < 2) throw std::invalid_argument("primes_up_to: bound must be >= 2");
    if (bound > (std::int64_t{1} << 31)) {
        throw std::invalid_argument("primes_up_to: bound beyond supported sieve size");
    }
    std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
    std::vector<std::int64_t> primes;
    for (std::int64_t i = 2; i <= bound; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        primes.push_back(i);
        for (std::int64_t j = i * i; j <= bound; j += i) {
            composite[static_cast<std::size_t>(j)] = true;
        }
    }
    return primes;
}

SpfSieve::SpfSieve(std::int64_t limit) : limit_(limit) {
    if (limit < 1 || limit > (std::int64_t{1} << 31)) {
        throw std::invalid_argument("SpfSieve: limit out of range");
    }
    spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (spf_[static_cast<std::size_t>(i)] != 0) continue;
        for (std::int64_t j = i; j <= limit; j += i) {
            if (spf_[static_cast<std::size_t>(j)] == 0) {
                spf_[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(i);
            }
        }
    }
}

void SpfSieve::factor(std::int64_t v, SmallFactors& out) const {
    while (v > 1) {
        std::int64_t p = spf_[static_cast<std::size_t>(v)];
        std::uint32_t e = 0;
        while (v % p == 0) {
            v /= p;
            ++e;
        }
        out.push(p, e);
    }
}

void factorize_i64(std::int64_t v, const SpfSieve* sieve, SmallFactors& out) {
    if (v == 0) throw std::invalid_argument("factorize_i64: input must be nonzero");
    auto u = static_cast<std::uint64_t>(v < 0 ? -(v + 1) + std::uint64_t{1} : v);
    if (u == 1) return;
    if (sieve != nullptr && sieve->covers(static_cast<std::int64_t>(u))) {
        sieve->factor(static_cast<std::int64_t>(u), out);
        return;
    }
    std::map<BigInt, unsigned> factors;
    factor_u64_into(u, factors);
    for (const auto& [p, e] : factors) {
        out.push(static_cast<std::int64_t>(p), e);
    }
}

}  // namespace campana
