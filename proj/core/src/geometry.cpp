#include "campana/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace campana {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::gcd;

BigInt pow_big(const BigInt& base, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// Bareiss fraction-free determinant; exact over the integers.
BigInt determinant(std::vector<std::vector<BigInt>> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1) {
        os << "/" << boost::multiprecision::denominator(r);
    }
    return os.str();
}

void component_issues(const DivisorComponent& c, std::size_t index,
                      std::vector<std::string>& out) {
    auto tag = [index](const std::string& msg) {
        return "component " + std::to_string(index) + ": " + msg;
    };
    if (c.monomials.empty()) {
        out.push_back(tag("form is zero"));
        return;
    }
    const std::size_t arity = c.monomials.front().exponents.size();
    int degree = c.monomials.front().total_degree();
    BigInt content = 0;
    for (const Monomial& mono : c.monomials) {
        if (mono.exponents.size() != arity) {
            out.push_back(tag("inconsistent monomial arity"));
            return;
        }
        if (mono.coeff == 0) out.push_back(tag("zero coefficient monomial"));
        for (int e : mono.exponents) {
            if (e < 0) out.push_back(tag("negative exponent"));
        }
        if (mono.total_degree() != degree) {
            out.push_back(tag("form is not homogeneous"));
        }
        content = gcd(content, BigInt(mono.coeff < 0 ? -mono.coeff : mono.coeff));
    }
    if (degree < 1) out.push_back(tag("degree must be >= 1"));
    if (content != 1) out.push_back(tag("content (gcd of coefficients) must be 1"));
    if (c.weight < 0 || c.weight > 1) {
        out.push_back(tag("weight " + rational_str(c.weight) + " outside [0, 1]"));
    }
}

// cross-multiplied ratio test, so scalar multiples are caught even when a
// form violates the unit-content invariant
bool proportional(const DivisorComponent& a, const DivisorComponent& b) {
    if (a.monomials.size() != b.monomials.size() || a.monomials.empty()) return false;
    const BigInt a0 = a.monomials.front().coeff;
    const BigInt b0 = b.monomials.front().coeff;
    for (std::size_t i = 0; i < a.monomials.size(); ++i) {
        if (a.monomials[i].exponents != b.monomials[i].exponents) return false;
        if (BigInt(a.monomials[i].coeff) * b0 != BigInt(b.monomials[i].coeff) * a0) return false;
    }
    return true;
}

}  // namespace

int Monomial::total_degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0);
}

int DivisorComponent::arity() const {
    return monomials.empty() ? 0 : static_cast<int>(monomials.front().exponents.size());
}

int DivisorComponent::degree() const {
    int d = 0;
    for (const Monomial& m : monomials) d = std::max(d, m.total_degree());
    return d;
}

BigInt DivisorComponent::coeff_l1() const {
    BigInt s = 0;
    for (const Monomial& m : monomials) s += m.coeff < 0 ? -m.coeff : m.coeff;
    return s;
}

std::string DivisorComponent::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const Monomial& m : monomials) {
        if (!first) os << (m.coeff >= 0 ? " + " : " - ");
        else if (m.coeff < 0) os << "-";
        first = false;
        std::int64_t c = m.coeff < 0 ? -m.coeff : m.coeff;
        bool printed = false;
        if (c != 1 || m.total_degree() == 0) {
            os << c;
            printed = true;
        }
        for (std::size_t j = 0; j < m.exponents.size(); ++j) {
            if (m.exponents[j] == 0) continue;
            if (printed) os << "*";
            os << "x" << j;
            if (m.exponents[j] > 1) os << "^" << m.exponents[j];
            printed = true;
        }
    }
    return os.str();
}

DivisorComponent make_component(std::vector<Monomial> monomials, Rational weight) {
    std::sort(monomials.begin(), monomials.end(),
              [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
    std::vector<Monomial> merged;
    for (Monomial& m : monomials) {
        if (!merged.empty() && merged.back().exponents == m.exponents) {
            merged.back().coeff += m.coeff;
        } else {
            merged.push_back(std::move(m));
        }
    }
    std::erase_if(merged, [](const Monomial& m) { return m.coeff == 0; });

    DivisorComponent c{std::move(merged), std::move(weight)};
    std::vector<std::string> issues;
    component_issues(c, 0, issues);
    if (!issues.empty()) throw std::invalid_argument("make_component: " + issues.front());
    return c;
}

ProjectivePoint ProjectivePoint::normalize(std::vector<BigInt> raw) {
    if (raw.empty()) throw std::invalid_argument("normalize: empty coordinate tuple");
    BigInt g = 0;
    for (const BigInt& c : raw) g = gcd(g, abs(c));
    if (g == 0) throw std::invalid_argument("normalize: all coordinates are zero");
    for (BigInt& c : raw) c /= g;
    for (const BigInt& c : raw) {
        if (c == 0) continue;
        if (c < 0) {
            for (BigInt& d : raw) d = -d;
        }
        break;
    }
    return ProjectivePoint(std::move(raw));
}

ProjectivePoint ProjectivePoint::from_canonical(std::vector<BigInt> coords) {
    return ProjectivePoint(std::move(coords));
}

BigInt ProjectivePoint::height_base() const {
    BigInt m = 0;
    for (const BigInt& c : coords_) {
        BigInt a = abs(c);
        if (a > m) m = a;
    }
    return m;
}

std::string ProjectivePoint::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) os << " : ";
        os << coords_[i];
    }
    os << ")";
    return os.str();
}

std::vector<Rational> OrbifoldModel::weights() const {
    std::vector<Rational> w;
    w.reserve(components.size());
    for (const DivisorComponent& c : components) w.push_back(c.weight);
    return w;
}

bool OrbifoldModel::in_s(const BigInt& p) const {
    if (p > std::numeric_limits<std::int64_t>::max()) return false;
    auto v = static_cast<std::int64_t>(p);
    return std::binary_search(s_primes.begin(), s_primes.end(), v);
}

std::string OrbifoldModel::summary() const {
    std::ostringstream os;
    os << "P^" << ambient_dim << ", components [";
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (i) os << "; ";
        os << components[i].to_string() << " w=" << rational_str(components[i].weight);
    }
    os << "], S={";
    for (std::size_t i = 0; i < s_primes.size(); ++i) {
        if (i) os << ",";
        os << s_primes[i];
    }
    os << "}";
    return os.str();
}

OrbifoldModel make_model(int ambient_dim, std::vector<DivisorComponent> components,
                         std::vector<std::int64_t> s_primes) {
    if (ambient_dim < 1) throw std::invalid_argument("make_model: ambient_dim must be >= 1");
    for (const DivisorComponent& c : components) {
        if (c.arity() != ambient_dim + 1) {
            throw std::invalid_argument("make_model: component arity does not match ambient_dim");
        }
    }
    std::sort(s_primes.begin(), s_primes.end());
    s_primes.erase(std::unique(s_primes.begin(), s_primes.end()), s_primes.end());
    for (std::int64_t p : s_primes) {
        if (!is_prime(BigInt(p))) {
            throw std::invalid_argument("make_model: S contains non-prime " + std::to_string(p));
        }
    }
    return OrbifoldModel{ambient_dim, std::move(components), std::move(s_primes)};
}

BigInt evaluate(const DivisorComponent& f, const ProjectivePoint& x) {
    if (static_cast<std::size_t>(f.arity()) != x.coords().size()) {
        throw std::invalid_argument("evaluate: form arity does not match point dimension");
    }
    BigInt total = 0;
    for (const Monomial& m : f.monomials) {
        BigInt term = m.coeff;
        for (std::size_t j = 0; j < m.exponents.size(); ++j) {
            if (m.exponents[j] > 0) term *= pow_big(x.coords()[j], m.exponents[j]);
        }
        total += term;
    }
    return total;
}

ValidationReport validate_model(const OrbifoldModel& m) {
    ValidationReport report;
    if (m.ambient_dim < 1) report.violations.push_back("ambient_dim must be >= 1");
    for (std::size_t i = 0; i < m.components.size(); ++i) {
        component_issues(m.components[i], i, report.violations);
        if (m.components[i].arity() != m.ambient_dim + 1) {
            report.violations.push_back("component " + std::to_string(i) +
                                        ": arity does not match ambient_dim");
        }
    }
    for (std::size_t i = 0; i < m.s_primes.size(); ++i) {
        if (!is_prime(BigInt(m.s_primes[i]))) {
            report.violations.push_back("S contains non-prime " + std::to_string(m.s_primes[i]));
        }
        if (i > 0 && m.s_primes[i] <= m.s_primes[i - 1]) {
            report.violations.push_back("S is not sorted / has duplicates");
        }
    }
    for (std::size_t i = 0; i < m.components.size(); ++i) {
        for (std::size_t j = i + 1; j < m.components.size(); ++j) {
            if (proportional(m.components[i], m.components[j])) {
                report.violations.push_back("components " + std::to_string(i) + " and " +
                                            std::to_string(j) + " are proportional");
            } else if (m.ambient_dim == 1 && m.components[i].arity() == 2 &&
                       m.components[j].arity() == 2) {
                if (binary_form_resultant(m.components[i], m.components[j]) == 0) {
                    report.violations.push_back("components " + std::to_string(i) + " and " +
                                                std::to_string(j) +
                                                " share a root (zero resultant)");
                }
            }
        }
    }
    return report;
}

BigInt binary_form_resultant(const DivisorComponent& f, const DivisorComponent& g) {
    if (f.arity() != 2 || g.arity() != 2) {
        throw std::invalid_argument("binary_form_resultant: forms must be binary");
    }
    const int df = f.degree(), dg = g.degree();
    auto coeff_vector = [](const DivisorComponent& c, int d) {
        // index k holds the coefficient of x0^(d-k) * x1^k
        std::vector<BigInt> v(static_cast<std::size_t>(d) + 1, 0);
        for (const Monomial& m : c.monomials) {
            v[static_cast<std::size_t>(m.exponents[1])] = m.coeff;
        }
        return v;
    };
    const std::vector<BigInt> a = coeff_vector(f, df);
    const std::vector<BigInt> b = coeff_vector(g, dg);
    const std::size_t n = static_cast<std::size_t>(df + dg);
    std::vector<std::vector<BigInt>> sylvester(n, std::vector<BigInt>(n, 0));
    for (int row = 0; row < dg; ++row) {
        for (int k = 0; k <= df; ++k) sylvester[row][row + k] = a[static_cast<std::size_t>(k)];
    }
    for (int row = 0; row < df; ++row) {
        for (int k = 0; k <= dg; ++k) {
            sylvester[static_cast<std::size_t>(dg + row)][row + k] = b[static_cast<std::size_t>(k)];
        }
    }
    return determinant(std::move(sylvester));
}

}  // namespace campana
