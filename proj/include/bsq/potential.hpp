#pragma once

#include "bsq/expr.hpp"
#include "bsq/interval.hpp"

#include <array>
#include <optional>
#include <string>

namespace bsq {

struct Derivs
{
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
    double d4 = 0.0;
};

// V(x) with its first four symbolic derivatives. Immutable once built.
class Potential
{
public:
    Potential(std::string source, Expr ast, std::optional<Interval> hint = std::nullopt);

    const std::string& source() const { return source_; }
    const Expr& ast() const { return d_[0]; }
    // k = 0..4; derivative(0) is V itself.
    const Expr& derivative(int k) const { return d_.at(static_cast<std::size_t>(k)); }
    const std::optional<Interval>& hint() const { return hint_; }

    double operator()(double x) const { return d_[0].eval(x); }
    double eval(int k, double x) const { return derivative(k).eval(x); }
    std::complex<double> eval(int k, std::complex<double> z) const { return derivative(k).eval(z); }

private:
    std::string source_;
    std::array<Expr, 5> d_;
    std::optional<Interval> hint_;
};

// Throws ParseError on malformed text.
Potential parse_potential(const std::string& text, std::optional<Interval> hint = std::nullopt);

// Throws DomainError when x is outside the domain of any derivative.
Derivs eval_derivs(const Potential& p, double x);

} // namespace bsq
