#include "campana/classify.hpp"

#include <algorithm>

namespace campana {

const char* point_class_name(PointClass c) {
    switch (c) {
        case PointClass::Integral: return "Integral";
        case PointClass::Campana: return "Campana";
        case PointClass::NonCampana: return "NonCampana";
        case PointClass::OnBoundary: return "OnBoundary";
    }
    return "?";
}

std::vector<BigInt> support_primes(const OrbifoldModel& m, const ProjectivePoint& x) {
    std::vector<BigInt> primes;
    for (std::size_t i = 0; i < m.components.size(); ++i) {
        const BigInt v = evaluate(m.components[i], x);
        if (v == 0) throw on_component_error(i, x.to_string());
        for (const auto& [p, e] : factorize(v).factors) {
            if (!m.in_s(p)) primes.push_back(p);
        }
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    return primes;
}

Classification classify(const OrbifoldModel& m, const ProjectivePoint& x) {
    // factor each component value once; reuse for every support prime
    std::vector<Factorization> values;
    values.reserve(m.components.size());
    for (std::size_t i = 0; i < m.components.size(); ++i) {
        const BigInt v = evaluate(m.components[i], x);
        if (v == 0) {
            Classification c;
            c.cls = PointClass::OnBoundary;
            c.boundary_component = i;
            return c;
        }
        values.push_back(factorize(v));
    }

    std::vector<BigInt> support;
    for (const Factorization& f : values) {
        for (const auto& [p, e] : f.factors) {
            if (!m.in_s(p)) support.push_back(p);
        }
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    if (support.empty()) return Classification{PointClass::Integral, {}, {}};

    for (const BigInt& p : support) {
        Rational weighted = 0;
        for (std::size_t i = 0; i < m.components.size(); ++i) {
            auto it = values[i].factors.find(p);
            if (it != values[i].factors.end()) {
                weighted += m.components[i].weight * it->second;
            }
        }
        if (weighted < 1) return Classification{PointClass::NonCampana, p, {}};
    }
    return Classification{PointClass::Campana, {}, {}};
}

}  // namespace campana
