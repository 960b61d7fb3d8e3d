#include <doctest.h>

#include <numeric>

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

}  // namespace

TEST_CASE("squarefull predicate") {
    CHECK(is_squarefull(8));
    CHECK_FALSE(is_squarefull(12));
    CHECK(is_squarefull(1));
    CHECK(is_squarefull(72));
    CHECK(is_squarefull(-49));
    CHECK_FALSE(is_squarefull(-50));
    CHECK_THROWS_AS(is_squarefull(0), std::invalid_argument);

    SpfSieve sieve(10000);
    for (std::int64_t n = 1; n <= 10000; ++n) {
        CHECK(is_squarefull_i64(n, &sieve) == is_squarefull(n));
    }
}

TEST_CASE("halves oracle") {
    CHECK(campana_oracle_p1_halves(pt({8, 9})));
    CHECK_FALSE(campana_oracle_p1_halves(pt({2, 3})));
    CHECK(campana_oracle_p1_halves(pt({1, 1})));
    CHECK_THROWS_AS(campana_oracle_p1_halves(pt({1, 0})), std::invalid_argument);
    CHECK_THROWS_AS(campana_oracle_p1_halves(pt({1, 1, 1})), std::invalid_argument);
}

TEST_CASE("s-unit oracle") {
    const auto m0 = load("p1_two_lines_eps0.toml");
    CHECK(sunit_oracle(m0, pt({1, -1})));
    CHECK_FALSE(sunit_oracle(m0, pt({8, 9})));

    auto s23 = m0;
    s23.s_primes = {2, 3};
    CHECK(sunit_oracle(s23, pt({8, 9})));
    auto s2 = m0;
    s2.s_primes = {2};
    CHECK_FALSE(sunit_oracle(s2, pt({8, 9})));

    CHECK_THROWS_AS(sunit_oracle(m0, pt({0, 1})), on_component_error);
}

TEST_CASE("cross validation finds zero disagreements on the fixture models") {
    const auto halves = load("p1_halves.toml");
    const auto cv = cross_validate(halves, 1000, OracleKind::SquarefullPairs, 2);
    CHECK(cv.disagreement_count == 0);
    CHECK(cv.disagreements.empty());
    CHECK(cv.boundary_skipped == 2);
    // every non-boundary point of height <= 1000 was checked
    std::int64_t coprime_pairs = 0;
    for (std::int64_t a = 1; a <= 1000; ++a) {
        for (std::int64_t b = 1; b <= 1000; ++b) {
            if (std::gcd(a, b) == 1) ++coprime_pairs;
        }
    }
    CHECK(cv.points_checked == 2 * coprime_pairs);

    const auto eps0 = load("p1_two_lines_eps0.toml");
    CHECK(cross_validate(eps0, 500, OracleKind::SUnit, 2).disagreement_count == 0);

    const auto s23 = load("p1_three_lines_eps0_s23.toml");
    CHECK(cross_validate(s23, 300, OracleKind::SUnit, 2).disagreement_count == 0);

    const auto eps1 = load("p1_two_lines_eps1.toml");
    CHECK(cross_validate(eps1, 300, OracleKind::AllPoints, 2).disagreement_count == 0);
}

TEST_CASE("oracle applicability is enforced") {
    const auto five = load("p1_five_lines.toml");
    CHECK_THROWS_AS(cross_validate(five, 10, OracleKind::SquarefullPairs, 1),
                    std::invalid_argument);
    const auto halves = load("p1_halves.toml");
    CHECK_THROWS_AS(cross_validate(halves, 10, OracleKind::SUnit, 1), std::invalid_argument);
    CHECK_THROWS_AS(cross_validate(halves, 10, OracleKind::AllPoints, 1), std::invalid_argument);
    CHECK_THROWS_AS(cross_validate(halves, 0, OracleKind::SquarefullPairs, 1),
                    std::invalid_argument);
}

TEST_CASE("a broken model would be caught: deliberate disagreement") {
    // same shape as the halves model but weight 1 on one side; the
    // squarefull oracle no longer applies semantically, so verify that the
    // applicability check refuses it rather than reporting nonsense
    auto skewed = load("p1_halves.toml");
    skewed.components[0].weight = Rational(1);
    CHECK_THROWS_AS(cross_validate(skewed, 100, OracleKind::SquarefullPairs, 1),
                    std::invalid_argument);
}

TEST_CASE("oracle names") {
    CHECK(std::string(oracle_kind_name(OracleKind::SquarefullPairs)) == "squarefull");
    CHECK(std::string(oracle_kind_name(OracleKind::SUnit)) == "s-unit");
    CHECK(std::string(oracle_kind_name(OracleKind::AllPoints)) == "all-points");
}
