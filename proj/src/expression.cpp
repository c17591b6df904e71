#include "rescert/expression.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace rescert {

namespace {

BigRational pow10(int e) {
    BigRational p(1);
    const BigRational ten(10);
    for (int k = 0; k < (e < 0 ? -e : e); ++k) p *= ten;
    return e < 0 ? BigRational(1) / p : p;
}

ExprValue from_rational(const BigRational& q) { return {Ball::from_interval(rational_interval(q)), q}; }

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    ExprValue parse() {
        ExprValue v = sum();
        skip();
        if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void error(const std::string& what) const {
        fail(ErrorKind::Config, "expression '" + std::string(s_) + "': " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) error(std::string("expected '") + c + "'");
    }

    static ExprValue add(const ExprValue& a, const ExprValue& b, bool minus) {
        ExprValue out{minus ? a.ball - b.ball : a.ball + b.ball, std::nullopt};
        if (a.exact && b.exact) out = from_rational(minus ? *a.exact - *b.exact : *a.exact + *b.exact);
        return out;
    }

    ExprValue mul(const ExprValue& a, const ExprValue& b) const {
        if (a.exact && b.exact) return from_rational(*a.exact * *b.exact);
        return {a.ball * b.ball, std::nullopt};
    }

    ExprValue div(const ExprValue& a, const ExprValue& b) const {
        if (b.exact && *b.exact == 0) error("division by zero");
        if (a.exact && b.exact) return from_rational(*a.exact / *b.exact);
        return {a.ball / b.ball, std::nullopt};
    }

    ExprValue sum() {
        ExprValue v = product();
        for (;;) {
            if (eat('+')) v = add(v, product(), false);
            else if (eat('-')) v = add(v, product(), true);
            else return v;
        }
    }

    ExprValue product() {
        ExprValue v = unary();
        for (;;) {
            if (eat('*')) v = mul(v, unary());
            else if (eat('/')) v = div(v, unary());
            else return v;
        }
    }

    ExprValue unary() {
        if (eat('-')) {
            ExprValue v = unary();
            return {-v.ball, v.exact ? std::optional<BigRational>(-*v.exact) : std::nullopt};
        }
        if (eat('+')) return unary();
        return power();
    }

    ExprValue power() {
        ExprValue base = primary();
        if (!eat('^')) return base;
        ExprValue e = unary();
        if (!e.exact || denominator(*e.exact) != 1) error("exponent must be an integer");
        const auto n = static_cast<long>(numerator(*e.exact));
        if (n < -4096 || n > 4096) error("exponent out of range");
        if (base.exact) {
            if (n < 0 && *base.exact == 0) error("zero to a negative power");
            BigRational p(1);
            for (long k = 0; k < (n < 0 ? -n : n); ++k) p *= *base.exact;
            return from_rational(n < 0 ? BigRational(1) / p : p);
        }
        const Ball p = pow(base.ball, n < 0 ? -n : n);
        return {n < 0 ? inv(p) : p, std::nullopt};
    }

    ExprValue number() {
        const std::size_t start = pos_;
        std::string digits;
        int scale = 0;
        bool dot = false;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
            if (s_[pos_] == '.') {
                if (dot) error("malformed number");
                dot = true;
            } else {
                digits += s_[pos_];
                if (dot) --scale;
            }
            ++pos_;
        }
        if (digits.empty()) error("malformed number at offset " + std::to_string(start));
        // cpp_int reads a leading zero as an octal prefix.
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            ++pos_;
            bool neg = false;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) neg = s_[pos_++] == '-';
            std::string ex;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ex += s_[pos_++];
            if (ex.empty() || ex.size() > 4) error("malformed exponent");
            scale += neg ? -std::stoi(ex) : std::stoi(ex);
        }
        return from_rational(BigRational(boost::multiprecision::cpp_int(digits)) * pow10(scale));
    }

    std::vector<ExprValue> arguments() {
        std::vector<ExprValue> args;
        expect('(');
        if (eat(')')) return args;
        do args.push_back(sum());
        while (eat(','));
        expect(')');
        return args;
    }

    ExprValue call(const std::string& name) {
        auto args = arguments();
        auto arity = [&](std::size_t n) {
            if (args.size() != n) error(name + " takes " + std::to_string(n) + " argument(s)");
        };
        auto real_part = [&](const ExprValue& v) {
            if (!v.is_real()) error(name + " needs real arguments");
            return v.ball.real();
        };
        if (name == "sqrt") {
            arity(1);
            const Interval x = real_part(args[0]);
            if (x.lo() < 0) error("sqrt of a negative value");
            return {Ball::from_interval(sqrt(x)), std::nullopt};
        }
        if (name == "exp") {
            arity(1);
            return {exp(args[0].ball), std::nullopt};
        }
        if (name == "conj") {
            arity(1);
            return {conj(args[0].ball), args[0].exact};
        }
        if (name == "polar") {
            arity(2);
            return {polar(real_part(args[0]), real_part(args[1])), std::nullopt};
        }
        if (name == "rect") {
            arity(2);
            const Interval re = real_part(args[0]);
            const Interval im = real_part(args[1]);
            return {Ball::from_interval(re, im), std::nullopt};
        }
        error("unknown function '" + name + "'");
    }

    ExprValue primary() {
        skip();
        if (pos_ >= s_.size()) error("unexpected end");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ExprValue v = sum();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                name += s_[pos_++];
            if (name == "pi") return {Ball::from_interval(Interval::pi()), std::nullopt};
            if (name == "i") return {Ball(complex(0.0, 1.0)), std::nullopt};
            return call(name);
        }
        error("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Interval rational_interval(const BigRational& q) {
    const double x = q.convert_to<double>();
    require(std::isfinite(x), ErrorKind::Config, "rational literal out of double range");
    if (BigRational(x) == q) return Interval(x);
    return {rnd::down(x), rnd::up(x)};
}

bool ExprValue::is_real() const { return ball.center().imag() == 0; }

double ExprValue::to_double() const {
    if (exact) return exact->convert_to<double>();
    if (ball.center().imag() != 0) fail(ErrorKind::Config, "expected a real value, got " + to_string(ball));
    return ball.center().real();
}

ExprValue evaluate_expression(std::string_view text) { return Parser(text).parse(); }

}  // namespace rescert
