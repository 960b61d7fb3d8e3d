#include "campana/model_io.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace campana {

namespace {

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    void skip_ws() {
        while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
    }
};

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& msg) {
    throw model_parse_error(origin + ":" + std::to_string(line) + ": " + msg);
}

std::int64_t parse_int(Cursor& c, const std::string& origin, std::size_t line) {
    c.skip_ws();
    std::size_t start = c.pos;
    if (!c.done() && (c.peek() == '-' || c.peek() == '+')) ++c.pos;
    while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) ++c.pos;
    if (c.pos == start || (c.pos == start + 1 && !std::isdigit(static_cast<unsigned char>(
                                                     c.text[start])))) {
        fail(origin, line, "expected integer");
    }
    if (!c.done() && c.peek() == '.') fail(origin, line, "decimal literals are not accepted");
    return std::stoll(c.text.substr(start, c.pos - start));
}

void expect(Cursor& c, char ch, const std::string& origin, std::size_t line) {
    c.skip_ws();
    if (c.done() || c.peek() != ch) {
        fail(origin, line, std::string("expected '") + ch + "'");
    }
    ++c.pos;
}

bool consume_if(Cursor& c, char ch) {
    c.skip_ws();
    if (!c.done() && c.peek() == ch) {
        ++c.pos;
        return true;
    }
    return false;
}

std::vector<std::int64_t> parse_int_array(Cursor& c, const std::string& origin,
                                          std::size_t line) {
    expect(c, '[', origin, line);
    std::vector<std::int64_t> out;
    if (consume_if(c, ']')) return out;
    while (true) {
        out.push_back(parse_int(c, origin, line));
        if (consume_if(c, ']')) return out;
        expect(c, ',', origin, line);
    }
}

// [[coeff, [e0, ..., en]], ...]
std::vector<Monomial> parse_form(Cursor& c, const std::string& origin, std::size_t line) {
    expect(c, '[', origin, line);
    std::vector<Monomial> monomials;
    if (consume_if(c, ']')) return monomials;
    while (true) {
        expect(c, '[', origin, line);
        Monomial m;
        m.coeff = parse_int(c, origin, line);
        expect(c, ',', origin, line);
        for (std::int64_t e : parse_int_array(c, origin, line)) {
            if (e < 0 || e > 255) fail(origin, line, "exponent out of range");
            m.exponents.push_back(static_cast<int>(e));
        }
        expect(c, ']', origin, line);
        monomials.push_back(std::move(m));
        if (consume_if(c, ']')) return monomials;
        expect(c, ',', origin, line);
    }
}

std::string parse_string(Cursor& c, const std::string& origin, std::size_t line) {
    expect(c, '"', origin, line);
    std::string out;
    while (!c.done() && c.peek() != '"') {
        out.push_back(c.peek());
        ++c.pos;
    }
    if (c.done()) fail(origin, line, "unterminated string");
    ++c.pos;
    return out;
}

void expect_end(Cursor& c, const std::string& origin, std::size_t line) {
    c.skip_ws();
    if (!c.done() && c.peek() == '#') return;
    if (!c.done()) fail(origin, line, "trailing characters after value");
}

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct RawComponent {
    std::optional<std::vector<Monomial>> form;
    std::optional<Rational> weight;
    std::size_t line = 0;
};

}  // namespace

Rational parse_rational(const std::string& text) {
    const std::string t = strip(text);
    if (t.find('.') != std::string::npos) {
        throw model_parse_error("rationals must be fraction strings, not decimals: \"" + t + "\"");
    }
    const std::size_t slash = t.find('/');
    auto parse_part = [&](const std::string& part) -> BigInt {
        if (part.empty()) throw model_parse_error("malformed rational: \"" + t + "\"");
        std::size_t i = part[0] == '-' || part[0] == '+' ? 1 : 0;
        if (i == part.size()) throw model_parse_error("malformed rational: \"" + t + "\"");
        for (; i < part.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(part[i]))) {
                throw model_parse_error("malformed rational: \"" + t + "\"");
            }
        }
        return BigInt(part);
    };
    if (slash == std::string::npos) return Rational(parse_part(t));
    const BigInt num = parse_part(t.substr(0, slash));
    const BigInt den = parse_part(t.substr(slash + 1));
    if (den == 0) throw model_parse_error("zero denominator: \"" + t + "\"");
    return Rational(num, den);
}

OrbifoldModel parse_model_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string raw_line;
    std::size_t line_no = 0;

    std::optional<std::int64_t> ambient_dim;
    std::optional<std::vector<std::int64_t>> s_primes;
    std::vector<RawComponent> raw_components;
    bool in_component = false;

    while (std::getline(in, raw_line)) {
        ++line_no;
        std::string line = strip(raw_line);
        if (line.empty() || line[0] == '#') continue;
        if (line == "[[component]]") {
            raw_components.push_back(RawComponent{{}, {}, line_no});
            in_component = true;
            continue;
        }
        if (line[0] == '[') fail(origin, line_no, "unknown table header: " + line);

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value'");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        Cursor c{value, 0};

        if (!in_component) {
            if (key == "ambient_dim") {
                ambient_dim = parse_int(c, origin, line_no);
                expect_end(c, origin, line_no);
            } else if (key == "s_primes") {
                s_primes = parse_int_array(c, origin, line_no);
                expect_end(c, origin, line_no);
            } else {
                fail(origin, line_no, "unknown top-level key: " + key);
            }
        } else {
            RawComponent& rc = raw_components.back();
            if (key == "form") {
                rc.form = parse_form(c, origin, line_no);
                expect_end(c, origin, line_no);
            } else if (key == "weight") {
                const std::string s = parse_string(c, origin, line_no);
                expect_end(c, origin, line_no);
                try {
                    rc.weight = parse_rational(s);
                } catch (const model_parse_error& e) {
                    fail(origin, line_no, e.what());
                }
            } else {
                fail(origin, line_no, "unknown component key: " + key);
            }
        }
    }

    if (!ambient_dim) fail(origin, 0, "missing ambient_dim");
    if (raw_components.empty()) fail(origin, 0, "model declares no components");

    std::vector<DivisorComponent> components;
    for (const RawComponent& rc : raw_components) {
        if (!rc.form) fail(origin, rc.line, "component missing form");
        if (!rc.weight) fail(origin, rc.line, "component missing weight");
        try {
            components.push_back(make_component(*rc.form, *rc.weight));
        } catch (const std::invalid_argument& e) {
            fail(origin, rc.line, e.what());
        }
    }

    OrbifoldModel model;
    try {
        model = make_model(static_cast<int>(*ambient_dim), std::move(components),
                           s_primes.value_or(std::vector<std::int64_t>{}));
    } catch (const std::invalid_argument& e) {
        fail(origin, 0, e.what());
    }
    const ValidationReport report = validate_model(model);
    if (!report.ok()) {
        std::string msg = "invalid model:";
        for (const std::string& v : report.violations) msg += "\n  - " + v;
        throw model_parse_error(origin + ": " + msg);
    }
    return model;
}

OrbifoldModel parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw model_parse_error("cannot open model file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model_text(buffer.str(), path);
}

}  // namespace campana
