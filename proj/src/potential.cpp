#include "bsq/potential.hpp"

#include "bsq/errors.hpp"

namespace bsq {

Potential::Potential(std::string source, Expr ast, std::optional<Interval> hint)
    : source_(std::move(source)), hint_(hint)
{
    d_[0] = std::move(ast);
    for (std::size_t k = 1; k < d_.size(); ++k)
        d_[k] = bsq::derivative(d_[k - 1]);
}

Potential parse_potential(const std::string& text, std::optional<Interval> hint)
{
    return Potential(text, parse_expression(text), hint);
}

Derivs eval_derivs(const Potential& p, double x)
{
    return Derivs{p.eval(0, x), p.eval(1, x), p.eval(2, x), p.eval(3, x), p.eval(4, x)};
}

} // namespace bsq
