#include <doctest.h>

#include <random>
#include <set>

#include "campana/classify.hpp"
#include "campana/enumerate.hpp"
#include "campana/model_io.hpp"
#include "campana/oracle.hpp"

using namespace campana;

namespace {

OrbifoldModel load(const char* name) {
    return parse_model_file(std::string(CAMPANA_MODELS_DIR) + "/" + name);
}

ProjectivePoint pt(std::initializer_list<std::int64_t> v) {
    return ProjectivePoint::normalize(std::vector<BigInt>(v.begin(), v.end()));
}

// random P^1 model with pairwise distinct lines and weights from a small pool
OrbifoldModel random_line_model(std::mt19937_64& rng, std::size_t n_components,
                                const std::vector<Rational>& weights,
                                std::vector<std::int64_t> s = {}) {
    std::uniform_int_distribution<std::int64_t> c(-3, 3);
    std::vector<DivisorComponent> comps;
    while (comps.size() < n_components) {
        std::int64_t a = c(rng), b = c(rng);
        if (a == 0 && b == 0) continue;
        std::int64_t g = std::gcd(std::abs(a), std::abs(b));
        a /= g;
        b /= g;
        DivisorComponent cand{{}, weights[comps.size()]};
        std::vector<Monomial> ms;
        if (a != 0) ms.push_back(Monomial{a, {1, 0}});
        if (b != 0) ms.push_back(Monomial{b, {0, 1}});
        try {
            cand = make_component(ms, weights[comps.size()]);
        } catch (const std::invalid_argument&) {
            continue;
        }
        bool dup = false;
        OrbifoldModel probe{1, comps, {}};
        probe.components.push_back(cand);
        if (!validate_model(probe).ok()) dup = true;
        if (!dup) comps.push_back(cand);
    }
    return make_model(1, std::move(comps), std::move(s));
}

}  // namespace

TEST_CASE("support primes") {
    const auto m = load("p1_halves.toml");
    CHECK(support_primes(m, pt({8, 9})) == std::vector<BigInt>{2, 3});
    CHECK(support_primes(m, pt({1, 1})).empty());
    CHECK_THROWS_AS(support_primes(m, pt({1, 0})), on_component_error);

    auto with_s = parse_model_text(R"(
ambient_dim = 1
s_primes = [2]
[[component]]
form = [[1, [1, 0]]]
weight = "1/2"
[[component]]
form = [[1, [0, 1]]]
weight = "1/2"
)");
    CHECK(support_primes(with_s, pt({8, 9})) == std::vector<BigInt>{3});
}

TEST_CASE("classification on the halves model") {
    const auto m = load("p1_halves.toml");

    auto c = classify(m, pt({8, 9}));
    CHECK(c.cls == PointClass::Campana);

    c = classify(m, pt({2, 3}));
    CHECK(c.cls == PointClass::NonCampana);
    REQUIRE(c.witness.has_value());
    CHECK(*c.witness == 2);

    c = classify(m, pt({1, 1}));
    CHECK(c.cls == PointClass::Integral);
    CHECK(in_campana_set(c));

    c = classify(m, pt({0, 1}));
    CHECK(c.cls == PointClass::OnBoundary);
    REQUIRE(c.boundary_component.has_value());
    CHECK(*c.boundary_component == 0);
    CHECK_FALSE(in_campana_set(c));
}

TEST_CASE("weight one makes every valid point Campana") {
    const auto m = load("p1_two_lines_eps1.toml");
    for (std::int64_t a = 1; a <= 30; ++a) {
        for (std::int64_t b = -30; b <= 30; ++b) {
            if (b == 0 || std::gcd(a, std::abs(b)) != 1) continue;
            CHECK(in_campana_set(classify(m, pt({a, b}))));
        }
    }
}

TEST_CASE("weight zero recovers S-integral points") {
    const auto m0 = load("p1_two_lines_eps0.toml");
    const auto s23 = load("p1_three_lines_eps0_s23.toml");
    for (std::int64_t a = 1; a <= 40; ++a) {
        for (std::int64_t b = -40; b <= 40; ++b) {
            if (b == 0 || std::gcd(a, std::abs(b)) != 1) continue;
            const auto x = pt({a, b});
            CHECK(in_campana_set(classify(m0, x)) == sunit_oracle(m0, x));
            if (a != std::abs(b)) {
                CHECK(in_campana_set(classify(s23, x)) == sunit_oracle(s23, x));
            }
        }
    }
}

TEST_CASE("exact classifier agrees with the squarefull oracle up to height 300") {
    const auto m = load("p1_halves.toml");
    std::int64_t checked = 0;
    for_each_point(1, 300, [&](std::span<const std::int64_t> raw) {
        if (raw[0] == 0 || raw[1] == 0) return;
        const auto x = ProjectivePoint::from_canonical({BigInt(raw[0]), BigInt(raw[1])});
        CHECK(in_campana_set(classify(m, x)) == campana_oracle_p1_halves(x));
        ++checked;
    });
    CHECK(checked > 50000);
}

TEST_CASE("raising weights never shrinks the Campana set") {
    std::mt19937_64 rng(2025);
    for (int trial = 0; trial < 6; ++trial) {
        std::uniform_int_distribution<int> den(1, 4);
        std::size_t k = 2 + trial % 4;
        std::vector<Rational> lo, hi;
        for (std::size_t i = 0; i < k; ++i) {
            const int d = den(rng);
            const Rational w(1, d + 1);
            lo.push_back(w);
            hi.push_back(w + Rational(1, 2 * (d + 1)) <= 1 ? w + Rational(1, 2 * (d + 1))
                                                           : Rational(1));
        }
        const auto model_lo = random_line_model(rng, k, lo);
        auto model_hi = model_lo;
        for (std::size_t i = 0; i < k; ++i) model_hi.components[i].weight = hi[i];

        const SweepClassifier cls_lo(model_lo, 200);
        const SweepClassifier cls_hi(model_hi, 200);
        for_each_point(1, 200, [&](std::span<const std::int64_t> raw) {
            const auto a = cls_lo.classify_point(raw);
            if (a.cls == PointClass::OnBoundary) return;
            if (a.cls == PointClass::Campana || a.cls == PointClass::Integral) {
                const auto b = cls_hi.classify_point(raw);
                CHECK((b.cls == PointClass::Campana || b.cls == PointClass::Integral));
            }
        });
    }
}

TEST_CASE("enlarging S never shrinks the Campana set") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<Rational> w(3, Rational(1, 2));
        const auto base = random_line_model(rng, 3, w);
        auto wider = base;
        wider.s_primes = {2, 5};
        const SweepClassifier cls_a(base, 200);
        const SweepClassifier cls_b(wider, 200);
        for_each_point(1, 200, [&](std::span<const std::int64_t> raw) {
            const auto a = cls_a.classify_point(raw);
            if (a.cls == PointClass::OnBoundary) return;
            if (a.cls == PointClass::Campana || a.cls == PointClass::Integral) {
                const auto b = cls_b.classify_point(raw);
                CHECK((b.cls == PointClass::Campana || b.cls == PointClass::Integral));
            }
        });
    }
}

namespace {

// reference classifier written from scratch for these tests: own evaluation,
// own trial-division factor loop, weighted condition compared via
// cross-multiplied integers; shares nothing with the production paths
PointClass reference_classify(const OrbifoldModel& m, std::span<const std::int64_t> pt) {
    std::vector<std::int64_t> values;
    for (const auto& comp : m.components) {
        std::int64_t v = 0;
        for (const auto& mono : comp.monomials) {
            std::int64_t term = mono.coeff;
            for (std::size_t j = 0; j < mono.exponents.size(); ++j) {
                for (int e = 0; e < mono.exponents[j]; ++e) term *= pt[j];
            }
            v += term;
        }
        if (v == 0) return PointClass::OnBoundary;
        values.push_back(std::llabs(v));
    }
    std::set<std::int64_t> support;
    for (std::int64_t v : values) {
        for (std::int64_t d = 2; d * d <= v; ++d) {
            while (v % d == 0) {
                support.insert(d);
                v /= d;
            }
        }
        if (v > 1) support.insert(v);
    }
    for (std::int64_t p : m.s_primes) support.erase(p);
    if (support.empty()) return PointClass::Integral;
    for (std::int64_t p : support) {
        // sum of eps_i * v_p(values[i]) >= 1, checked over a common denominator
        std::int64_t num = 0, den = 1;
        for (std::size_t i = 0; i < values.size(); ++i) {
            std::int64_t v = values[i], e = 0;
            while (v % p == 0) {
                v /= p;
                ++e;
            }
            const auto wn =
                static_cast<std::int64_t>(boost::multiprecision::numerator(m.components[i].weight));
            const auto wd = static_cast<std::int64_t>(
                boost::multiprecision::denominator(m.components[i].weight));
            num = num * wd + wn * e * den;
            den *= wd;
        }
        if (num < den) return PointClass::NonCampana;
    }
    return PointClass::Campana;
}

}  // namespace

TEST_CASE("production classifier agrees with a from-scratch reference") {
    std::vector<OrbifoldModel> models;
    models.push_back(load("p1_halves.toml"));
    models.push_back(load("p1_five_lines.toml"));
    models.push_back(load("p1_three_lines_eps0_s23.toml"));
    models.push_back(load("p2_conic_line.toml"));
    models.push_back(parse_model_text(R"(
ambient_dim = 1
s_primes = [5]
[[component]]
form = [[1, [2, 0]], [1, [0, 2]]]
weight = "1/3"
[[component]]
form = [[2, [1, 0]], [-3, [0, 1]]]
weight = "3/4"
)"));
    models.push_back(parse_model_text(R"(
ambient_dim = 2
[[component]]
form = [[1, [1, 0, 0]], [1, [0, 1, 0]], [1, [0, 0, 1]]]
weight = "2/3"
[[component]]
form = [[1, [0, 1, 0]], [-2, [0, 0, 1]]]
weight = "1/2"
)"));

    for (const auto& m : models) {
        const std::int64_t bound = m.ambient_dim == 1 ? 80 : 12;
        const SweepClassifier cls(m, bound);
        std::int64_t checked = 0;
        for_each_point(m.ambient_dim, bound, [&](std::span<const std::int64_t> pt) {
            const auto expected = reference_classify(m, pt);
            CHECK(cls.classify_point(pt).cls == expected);
            std::vector<BigInt> big(pt.begin(), pt.end());
            CHECK(classify(m, ProjectivePoint::from_canonical(std::move(big))).cls == expected);
            ++checked;
        });
        CHECK(checked > 100);
    }
}

TEST_CASE("point class names") {
    CHECK(std::string(point_class_name(PointClass::Integral)) == "Integral");
    CHECK(std::string(point_class_name(PointClass::OnBoundary)) == "OnBoundary");
}
