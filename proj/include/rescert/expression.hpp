#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string_view>

#include "rescert/ball.hpp"

namespace rescert {

using BigRational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                                 boost::multiprecision::et_off>;

// Result of a config expression: always a ball enclosure, plus the exact value
// when the expression only involves rational literals and + - * / ^.
struct ExprValue {
    Ball ball;
    std::optional<BigRational> exact;

    [[nodiscard]] bool is_real() const;
    // Nearest double for exact values, otherwise the ball center; throws if
    // the value is not real.
    [[nodiscard]] double to_double() const;
};

// Grammar: sums, products, quotients, integer powers (^), unary minus,
// decimal literals (exact), the constants pi and i, and the functions
// sqrt, exp, conj, polar(modulus, angle) and rect(re, im).
ExprValue evaluate_expression(std::string_view text);

// Enclosure of an exact rational.
Interval rational_interval(const BigRational& q);

}  // namespace rescert
