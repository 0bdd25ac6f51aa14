#include "bsq/expr.hpp"

#include "bsq/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bsq {

ParseError::ParseError(std::size_t offset, std::string message, std::vector<std::string> expected)
    : Error([&] {
          std::ostringstream os;
          os << "offset " << offset << ": " << message;
          if (!expected.empty()) {
              os << " (expected ";
              for (std::size_t i = 0; i < expected.size(); ++i)
                  os << (i ? ", " : "") << expected[i];
              os << ")";
          }
          return os.str();
      }()),
      offset_(offset), message_(std::move(message)), expected_(std::move(expected))
{
}

// --- Rational ---------------------------------------------------------------

Rational Rational::make(std::int64_t num, std::int64_t den)
{
    if (den == 0)
        throw DomainError("rational exponent with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational{num, den};
}

bool Rational::from_double(double v, Rational& out, std::int64_t max_den)
{
    if (!std::isfinite(v) || std::fabs(v) > 1e12)
        return false;
    // Continued fraction convergents h/k.
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = v;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(r);
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t h2 = ai * h1 + h0;
        const std::int64_t k2 = ai * k1 + k0;
        if (k2 > max_den)
            return false;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const double approx = static_cast<double>(h1) / static_cast<double>(k1);
        if (std::fabs(approx - v) <= 1e-12 * std::max(1.0, std::fabs(v))) {
            out = make(h1, k1);
            return true;
        }
        const double frac = r - a;
        if (frac == 0.0)
            return false;
        r = 1.0 / frac;
    }
    return false;
}

const char* function_name(Op op)
{
    switch (op) {
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::sqrt: return "sqrt";
    case Op::tanh: return "tanh";
    default: return "";
    }
}

// --- nodes and builders -----------------------------------------------------

struct Expr::Node
{
    Op op = Op::constant;
    double value = 0.0;
    Rational exponent{};
    std::vector<Expr> kids;
};

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Expr Expr::constant(double v)
{
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = v;
    return Expr(std::move(n));
}

Expr Expr::variable()
{
    static const Expr x = [] {
        auto n = std::make_shared<Node>();
        n->op = Op::variable;
        return Expr(std::move(n));
    }();
    return x;
}

Op Expr::op() const { return node_->op; }
double Expr::constant_value() const { return node_->value; }
Rational Expr::exponent() const { return node_->exponent; }
std::size_t Expr::arity() const { return node_->kids.size(); }
const Expr& Expr::child(std::size_t i) const { return node_->kids.at(i); }

std::size_t Expr::size() const
{
    std::size_t s = 1;
    for (const auto& k : node_->kids)
        s += k.size();
    return s;
}

namespace {

bool in_real_domain(Op fn, double a)
{
    switch (fn) {
    case Op::log: return a > 0.0;
    case Op::sqrt: return a >= 0.0;
    default: return true;
    }
}

double apply_function(Op fn, double a)
{
    switch (fn) {
    case Op::exp: return std::exp(a);
    case Op::log: return std::log(a);
    case Op::sin: return std::sin(a);
    case Op::cos: return std::cos(a);
    case Op::sqrt: return std::sqrt(a);
    case Op::tanh: return std::tanh(a);
    default: return a;
    }
}

bool real_power_defined(double base, Rational r)
{
    if (base == 0.0)
        return r.num >= 0;
    if (base < 0.0)
        return r.den % 2 != 0;
    return true;
}

double real_power(double base, Rational r)
{
    if (r.is_integer())
        return std::pow(base, static_cast<double>(r.num));
    if (base < 0.0) {
        const double mag = std::pow(-base, r.value());
        return (r.num % 2 != 0) ? -mag : mag;
    }
    return std::pow(base, r.value());
}

} // namespace


Expr Expr::make(Op op, std::vector<Expr> kids, Rational exponent)
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->kids = std::move(kids);
    n->exponent = exponent;
    return Expr(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant())
        return Expr::constant(a.constant_value() + b.constant_value());
    if (a.is_constant(0.0))
        return b;
    if (b.is_constant(0.0))
        return a;
    return Expr::make(Op::add, {a, b});
}

Expr operator-(const Expr& a)
{
    if (a.is_constant())
        return Expr::constant(-a.constant_value());
    if (a.op() == Op::neg)
        return a.child(0);
    return Expr::make(Op::neg, {a});
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant())
        return Expr::constant(a.constant_value() * b.constant_value());
    if (a.is_constant(0.0) || b.is_constant(0.0))
        return Expr::constant(0.0);
    if (a.is_constant(1.0))
        return b;
    if (b.is_constant(1.0))
        return a;
    if (a.is_constant(-1.0))
        return -b;
    if (b.is_constant(-1.0))
        return -a;
    return Expr::make(Op::mul, {a, b});
}

Expr operator/(const Expr& a, const Expr& b) { return a * Expr::power(b, Rational{-1, 1}); }

Expr Expr::power(Expr base, Rational r)
{
    if (r.num == 0)
        return constant(1.0);
    if (r == Rational{1, 1})
        return base;
    if (base.is_constant() && real_power_defined(base.constant_value(), r))
        return constant(real_power(base.constant_value(), r));
    if (base.op() == Op::pow && r.is_integer() && base.exponent().is_integer())
        return power(base.child(0), Rational{base.exponent().num * r.num, 1});
    return make(Op::pow, {std::move(base)}, r);
}

Expr Expr::call(Op fn, Expr arg)
{
    if (arg.is_constant() && in_real_domain(fn, arg.constant_value()))
        return constant(apply_function(fn, arg.constant_value()));
    return make(fn, {std::move(arg)});
}

// --- differentiation --------------------------------------------------------

Expr derivative(const Expr& e)
{
    switch (e.op()) {
    case Op::constant: return Expr::constant(0.0);
    case Op::variable: return Expr::constant(1.0);
    case Op::add: return derivative(e.child(0)) + derivative(e.child(1));
    case Op::neg: return -derivative(e.child(0));
    case Op::mul: {
        const Expr& f = e.child(0);
        const Expr& g = e.child(1);
        return derivative(f) * g + f * derivative(g);
    }
    case Op::pow: {
        const Expr& f = e.child(0);
        const Rational r = e.exponent();
        const Rational rm1 = Rational::make(r.num - r.den, r.den);
        return Expr::constant(r.value()) * Expr::power(f, rm1) * derivative(f);
    }
    case Op::exp: return e * derivative(e.child(0));
    case Op::log: return derivative(e.child(0)) / e.child(0);
    case Op::sin: return Expr::call(Op::cos, e.child(0)) * derivative(e.child(0));
    case Op::cos: return -(Expr::call(Op::sin, e.child(0)) * derivative(e.child(0)));
    case Op::sqrt:
        return Expr::constant(0.5) * Expr::power(e.child(0), Rational{-1, 2}) * derivative(e.child(0));
    case Op::tanh:
        return (Expr::constant(1.0) - Expr::power(e, Rational{2, 1})) * derivative(e.child(0));
    }
    return Expr::constant(0.0);
}

// --- evaluation -------------------------------------------------------------

namespace {

double eval_real(const Expr& e, double x)
{
    switch (e.op()) {
    case Op::constant: return e.constant_value();
    case Op::variable: return x;
    case Op::add: return eval_real(e.child(0), x) + eval_real(e.child(1), x);
    case Op::mul: return eval_real(e.child(0), x) * eval_real(e.child(1), x);
    case Op::neg: return -eval_real(e.child(0), x);
    case Op::pow: {
        const double b = eval_real(e.child(0), x);
        const Rational r = e.exponent();
        if (b == 0.0 && r.num < 0)
            throw DomainError("division by zero at x = " + std::to_string(x));
        if (b < 0.0 && r.den % 2 == 0)
            throw DomainError("even root of negative value at x = " + std::to_string(x));
        return real_power(b, r);
    }
    case Op::log: {
        const double a = eval_real(e.child(0), x);
        if (!(a > 0.0))
            throw DomainError("log of non-positive value at x = " + std::to_string(x));
        return std::log(a);
    }
    case Op::sqrt: {
        const double a = eval_real(e.child(0), x);
        if (a < 0.0)
            throw DomainError("sqrt of negative value at x = " + std::to_string(x));
        return std::sqrt(a);
    }
    default: return apply_function(e.op(), eval_real(e.child(0), x));
    }
}

std::complex<double> int_power(std::complex<double> z, std::int64_t n)
{
    if (n < 0)
        return 1.0 / int_power(z, -n);
    std::complex<double> acc(1.0, 0.0);
    while (n > 0) {
        if (n & 1)
            acc *= z;
        z *= z;
        n >>= 1;
    }
    return acc;
}

std::complex<double> eval_complex(const Expr& e, std::complex<double> z)
{
    switch (e.op()) {
    case Op::constant: return {e.constant_value(), 0.0};
    case Op::variable: return z;
    case Op::add: return eval_complex(e.child(0), z) + eval_complex(e.child(1), z);
    case Op::mul: return eval_complex(e.child(0), z) * eval_complex(e.child(1), z);
    case Op::neg: return -eval_complex(e.child(0), z);
    case Op::pow: {
        const auto b = eval_complex(e.child(0), z);
        const Rational r = e.exponent();
        if (r.is_integer())
            return int_power(b, r.num);
        return std::pow(b, r.value());
    }
    case Op::exp: return std::exp(eval_complex(e.child(0), z));
    case Op::log: return std::log(eval_complex(e.child(0), z));
    case Op::sin: return std::sin(eval_complex(e.child(0), z));
    case Op::cos: return std::cos(eval_complex(e.child(0), z));
    case Op::sqrt: return std::sqrt(eval_complex(e.child(0), z));
    case Op::tanh: return std::tanh(eval_complex(e.child(0), z));
    default: return {};
    }
}

} // namespace

double Expr::eval(double x) const
{
    const double v = eval_real(*this, x);
    if (!std::isfinite(v))
        throw DomainError("non-finite value at x = " + std::to_string(x));
    return v;
}

std::complex<double> Expr::eval(std::complex<double> z) const { return eval_complex(*this, z); }

bool structurally_equal(const Expr& a, const Expr& b)
{
    if (a.op() != b.op() || a.arity() != b.arity())
        return false;
    if (a.op() == Op::constant && a.constant_value() != b.constant_value())
        return false;
    if (a.op() == Op::pow && !(a.exponent() == b.exponent()))
        return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (!structurally_equal(a.child(i), b.child(i)))
            return false;
    return true;
}

// --- printing ---------------------------------------------------------------

namespace {

// Binding strength; higher binds tighter.
int precedence(const Expr& e)
{
    switch (e.op()) {
    case Op::add: return 1;
    case Op::mul: return 2;
    case Op::neg: return 3;
    case Op::pow: return 4;
    default: return 5;
    }
}

std::string format_number(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void print(const Expr& e, int min_prec, std::string& out)
{
    const bool paren = precedence(e) < min_prec;
    if (paren)
        out += '(';
    switch (e.op()) {
    case Op::constant:
        if (std::signbit(e.constant_value()))
            out += "(" + format_number(e.constant_value()) + ")";
        else
            out += format_number(e.constant_value());
        break;
    case Op::variable: out += 'x'; break;
    case Op::add: {
        print(e.child(0), 1, out);
        const Expr& r = e.child(1);
        if (r.op() == Op::neg) {
            out += " - ";
            print(r.child(0), 2, out);
        } else if (r.is_constant() && std::signbit(r.constant_value())) {
            out += " - " + format_number(-r.constant_value());
        } else {
            out += " + ";
            print(r, 2, out);
        }
        break;
    }
    case Op::mul:
        print(e.child(0), 2, out);
        out += '*';
        print(e.child(1), 3, out);
        break;
    case Op::neg:
        out += '-';
        print(e.child(0), 3, out);
        break;
    case Op::pow: {
        print(e.child(0), 5, out);
        const Rational r = e.exponent();
        if (r.is_integer() && r.num >= 0)
            out += "^" + std::to_string(r.num);
        else if (r.is_integer())
            out += "^(" + std::to_string(r.num) + ")";
        else
            out += "^(" + std::to_string(r.num) + "/" + std::to_string(r.den) + ")";
        break;
    }
    default:
        out += function_name(e.op());
        out += '(';
        print(e.child(0), 0, out);
        out += ')';
        break;
    }
    if (paren)
        out += ')';
}

} // namespace

std::string to_string(const Expr& e)
{
    std::string out;
    print(e, 0, out);
    return out;
}

// --- parsing ----------------------------------------------------------------

namespace {

const std::vector<std::string> kOperandStart = {"number", "x", "function", "(", "-"};

class Parser
{
public:
    explicit Parser(std::string_view text) : s_(text) {}

    Expr run()
    {
        skip_ws();
        if (pos_ == s_.size())
            throw ParseError(pos_, "empty expression", kOperandStart);
        Expr e = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw ParseError(pos_, std::string("unexpected '") + s_[pos_] + "'",
                             {"+", "-", "*", "/", "^", "end of input"});
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr()
    {
        Expr lhs = term();
        for (;;) {
            if (accept('+'))
                lhs = lhs + term();
            else if (accept('-'))
                lhs = lhs - term();
            else
                return lhs;
        }
    }

    Expr term()
    {
        Expr lhs = unary("operand");
        for (;;) {
            if (accept('*'))
                lhs = lhs * unary("operand");
            else if (accept('/'))
                lhs = lhs / unary("operand");
            else
                return lhs;
        }
    }

    Expr unary(const char* what)
    {
        if (accept('-'))
            return -unary(what);
        if (accept('+'))
            return unary(what);
        return power(what);
    }

    Expr power(const char* what)
    {
        Expr base = primary(what);
        if (!accept('^'))
            return base;
        Expr ex = unary("exponent");
        if (ex.is_constant()) {
            Rational r;
            if (Rational::from_double(ex.constant_value(), r))
                return Expr::power(base, r);
        }
        return Expr::call(Op::exp, ex * Expr::call(Op::log, base));
    }

    Expr primary(const char* what)
    {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ == s_.size())
            throw ParseError(pos_, std::string("expected ") + what, kOperandStart);
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (c == '(') {
            ++pos_;
            Expr inner = expr();
            if (!accept(')')) {
                skip_ws();
                throw ParseError(pos_, "expected ')'", {")"});
            }
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            const std::string_view id = s_.substr(start, pos_ - start);
            if (id == "x")
                return Expr::variable();
            static const std::array<Op, 6> fns = {Op::exp, Op::log, Op::sin, Op::cos, Op::sqrt, Op::tanh};
            for (Op fn : fns) {
                if (id == function_name(fn)) {
                    if (!accept('(')) {
                        skip_ws();
                        throw ParseError(pos_, "expected '(' after " + std::string(id), {"("});
                    }
                    Expr arg = expr();
                    if (!accept(')')) {
                        skip_ws();
                        throw ParseError(pos_, "expected ')'", {")"});
                    }
                    return Expr::call(fn, arg);
                }
            }
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '(')
                throw ParseError(start, "unsupported function '" + std::string(id) + "'",
                                 {"exp", "log", "sin", "cos", "sqrt", "tanh"});
            throw ParseError(start, "unknown identifier '" + std::string(id) + "'", {"x"});
        }
        throw ParseError(pos_, std::string("unexpected '") + c + "', expected " + what, kOperandStart);
    }

    Expr number()
    {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
            ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-'))
                ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                while (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p])))
                    ++p;
                pos_ = p;
            }
        }
        double v = 0.0;
        const char* first = s_.data() + start;
        const char* last = s_.data() + pos_;
        auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last)
            throw ParseError(start, "malformed number '" + std::string(first, last) + "'", {"number"});
        return Expr::constant(v);
    }
};

} // namespace

Expr parse_expression(std::string_view text) { return Parser(text).run(); }

} // namespace bsq
