#include <doctest.h>

#include "campana/model_io.hpp"

using namespace campana;

TEST_CASE("parse the shipped halves model") {
    const auto m = parse_model_file(std::string(CAMPANA_MODELS_DIR) + "/p1_halves.toml");
    CHECK(m.ambient_dim == 1);
    REQUIRE(m.components.size() == 2);
    CHECK(m.components[0].weight == Rational(1, 2));
    CHECK(m.components[1].weight == Rational(1, 2));
    CHECK(m.components[0].degree() == 1);
    CHECK(m.s_primes.empty());
}

TEST_CASE("parse the five lines model") {
    const auto m = parse_model_file(std::string(CAMPANA_MODELS_DIR) + "/p1_five_lines.toml");
    REQUIRE(m.components.size() == 5);
    for (const auto& c : m.components) CHECK(c.weight == Rational(1, 2));
    CHECK(validate_model(m).ok());
}

TEST_CASE("parse inline text with S primes and a two-variable form") {
    const std::string text = R"(
# comment
ambient_dim = 1
s_primes = [3, 2]

[[component]]
form = [[1, [1, 0]], [-2, [0, 1]]]
weight = "2/3"
)";
    const auto m = parse_model_text(text);
    CHECK(m.s_primes == std::vector<std::int64_t>{2, 3});
    REQUIRE(m.components.size() == 1);
    CHECK(m.components[0].weight == Rational(2, 3));
    CHECK(m.components[0].coeff_l1() == 3);
}

TEST_CASE("parse_rational") {
    CHECK(parse_rational("1/2") == Rational(1, 2));
    CHECK(parse_rational("0") == Rational(0));
    CHECK(parse_rational("1") == Rational(1));
    CHECK(parse_rational("-3/7") == Rational(-3, 7));
    CHECK(parse_rational(" 2/4 ") == Rational(1, 2));
    CHECK_THROWS_AS(parse_rational("0.5"), model_parse_error);
    CHECK_THROWS_AS(parse_rational("1/0"), model_parse_error);
    CHECK_THROWS_AS(parse_rational("x/2"), model_parse_error);
    CHECK_THROWS_AS(parse_rational(""), model_parse_error);
}

TEST_CASE("grammar errors carry origin and line info") {
    CHECK_THROWS_WITH_AS(parse_model_text("ambient_dim = 1\nbogus_key = 3\n", "m.toml"),
                         doctest::Contains("m.toml:2"), model_parse_error);
    CHECK_THROWS_AS(parse_model_text("ambient_dim = 1\n"), model_parse_error);  // no components
    CHECK_THROWS_AS(parse_model_text(R"(
ambient_dim = 1
[[component]]
form = [[1, [1, 0]]]
weight = "0.5"
)"),
                    model_parse_error);
    CHECK_THROWS_AS(parse_model_text(R"(
ambient_dim = 1
[[component]]
weight = "1/2"
)"),
                    model_parse_error);  // missing form
    // weight must be a string, not a bare number
    CHECK_THROWS_AS(parse_model_text(R"(
ambient_dim = 1
[[component]]
form = [[1, [1, 0]]]
weight = 1/2
)"),
                    model_parse_error);
}

TEST_CASE("semantic validation is enforced at parse time") {
    // proportional components
    CHECK_THROWS_AS(parse_model_text(R"(
ambient_dim = 1
[[component]]
form = [[1, [1, 0]]]
weight = "1/2"
[[component]]
form = [[-1, [1, 0]]]
weight = "1/2"
)"),
                    model_parse_error);
    // content != 1
    CHECK_THROWS_AS(parse_model_text(R"(
ambient_dim = 1
[[component]]
form = [[2, [1, 0]]]
weight = "1/2"
)"),
                    model_parse_error);
    // weight out of [0, 1]
    CHECK_THROWS_AS(parse_model_text(R"(
ambient_dim = 1
[[component]]
form = [[1, [1, 0]]]
weight = "5/4"
)"),
                    model_parse_error);

    CHECK_THROWS_AS(parse_model_file("/nonexistent/path.toml"), model_parse_error);
}
