#include "campana/logsum.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace campana {

namespace {

using Float100 = boost::multiprecision::cpp_bin_float_100;

// Differences whose 100-digit evaluation lands inside this band are treated
// as zero. Exact domination is tried first, so the band only matters for
// mixed-sign prime-coefficient differences.
const Float100 kGuardBand("1e-30");

Float100 eval_precise(const LogSum& s) {
    Float100 total = 0;
    for (const auto& [base, coeff] : s.terms()) {
        total += static_cast<Float100>(coeff) * log(static_cast<Float100>(base));
    }
    return total;
}

}  // namespace

LogSum LogSum::log_of(const BigInt& base, const Rational& coeff) {
    LogSum s;
    s.add_term(base, coeff);
    return s;
}

void LogSum::add_term(const BigInt& base, const Rational& coeff) {
    if (base < 1) throw std::invalid_argument("LogSum: base must be >= 1");
    if (base == 1 || coeff == 0) return;
    auto [it, inserted] = terms_.emplace(base, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

LogSum& LogSum::operator+=(const LogSum& o) {
    for (const auto& [base, coeff] : o.terms_) add_term(base, coeff);
    return *this;
}

LogSum& LogSum::operator-=(const LogSum& o) {
    for (const auto& [base, coeff] : o.terms_) add_term(base, -coeff);
    return *this;
}

LogSum& LogSum::operator*=(const Rational& scalar) {
    if (scalar == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [base, coeff] : terms_) coeff *= scalar;
    return *this;
}

LogSum LogSum::canonical() const {
    LogSum out;
    for (const auto& [base, coeff] : terms_) {
        if (is_prime(base)) {
            out.add_term(base, coeff);
            continue;
        }
        for (const auto& [p, e] : factorize(base).factors) {
            out.add_term(p, coeff * e);
        }
    }
    return out;
}

double LogSum::value() const {
    double total = 0;
    for (const auto& [base, coeff] : terms_) {
        total += static_cast<double>(coeff) * std::log(static_cast<double>(base));
    }
    return total;
}

int LogSum::compare(const LogSum& a, const LogSum& b) {
    const LogSum diff = (a - b).canonical();
    if (diff.terms_.empty()) return 0;
    bool any_pos = false, any_neg = false;
    for (const auto& [base, coeff] : diff.terms_) {
        (coeff > 0 ? any_pos : any_neg) = true;
    }
    if (!any_neg) return 1;
    if (!any_pos) return -1;
    const Float100 v = eval_precise(diff);
    if (v > kGuardBand) return 1;
    if (v < -kGuardBand) return -1;
    return 0;
}

std::string LogSum::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [base, coeff] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << coeff << "*log(" << base << ")";
    }
    return os.str();
}

}  // namespace campana
