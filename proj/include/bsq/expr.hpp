#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace bsq {

// Exponent of a power node. Always normalized: den > 0, gcd(num, den) == 1.
struct Rational
{
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool is_integer() const { return den == 1; }

    static Rational make(std::int64_t num, std::int64_t den);
    // Continued-fraction reconstruction; false when no denominator <= max_den
    // reproduces `v` to 1e-12 relative.
    static bool from_double(double v, Rational& out, std::int64_t max_den = 1000000);

    friend bool operator==(const Rational&, const Rational&) = default;
};

enum class Op { constant, variable, add, mul, pow, neg, exp, log, sin, cos, sqrt, tanh };

const char* function_name(Op op);

// Immutable expression tree in the single variable x. Copies share nodes.
class Expr
{
public:
    Expr();  // the constant 0

    static Expr constant(double v);
    static Expr variable();
    static Expr call(Op fn, Expr arg);
    static Expr power(Expr base, Rational exponent);

    Op op() const;
    double constant_value() const;   // op() == constant
    Rational exponent() const;       // op() == pow
    std::size_t arity() const;
    const Expr& child(std::size_t i) const;

    bool is_constant() const { return op() == Op::constant; }
    bool is_constant(double v) const { return is_constant() && constant_value() == v; }

    // Throws DomainError when x leaves the natural domain of a sub-expression
    // or the result is not finite.
    double eval(double x) const;
    // Principal-branch continuation; no domain checks.
    std::complex<double> eval(std::complex<double> z) const;

    std::size_t size() const;  // node count

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> n);
    static Expr make(Op op, std::vector<Expr> kids, Rational exponent = {});
    std::shared_ptr<const Node> node_;
};

Expr derivative(const Expr& e);

// Round-trippable text: parse_expression(to_string(e)) is structurally equal to e.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'x' | func '(' expr ')' | '(' expr ')'
//   func    := exp | log | sin | cos | sqrt | tanh
// Throws ParseError with the byte offset of the offending token.
Expr parse_expression(std::string_view text);

} // namespace bsq
