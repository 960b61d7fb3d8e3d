#pragma once

#include <stdexcept>
#include <string>

#include "campana/geometry.hpp"

namespace campana {

class model_parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the model file grammar (a small TOML subset, see README):
///
///   ambient_dim = 1
///   s_primes = [2, 3]
///
///   [[component]]
///   form = [[1, [1, 0]], [-1, [0, 1]]]   # x0 - x1
///   weight = "1/2"
///
/// Rationals must be fraction strings; decimal literals are rejected.
/// The parsed model is validated; violations raise model_parse_error.
OrbifoldModel parse_model_text(const std::string& text, const std::string& origin = "<string>");
OrbifoldModel parse_model_file(const std::string& path);

/// "p/q" or "p"; rejects anything else (decimals in particular).
Rational parse_rational(const std::string& text);

}  // namespace campana
