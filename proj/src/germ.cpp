#include "qpgerm/germ.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qpgerm {

std::vector<Series> linear_components(const Spectrum& spectrum, int order_cap)
{
    const int n = spectrum.n();
    std::vector<Series> comps;
    comps.reserve(static_cast<std::size_t>(n + 1));
    comps.push_back(Series::variable(n, order_cap, 0));
    for (int j = 1; j <= n; ++j) comps.push_back(Series::variable(n, order_cap, j, spectrum.lambda(j - 1)));
    return comps;
}

GermMap::GermMap(Spectrum spectrum, std::vector<Series> components, double lin_tol)
    : spectrum_(std::move(spectrum)), components_(std::move(components))
{
    const int n = spectrum_.n();
    if (static_cast<int>(components_.size()) != n + 1) throw Error("germ: expected n+1 components");
    const int cap = components_.front().order_cap();
    for (const auto& c : components_) {
        if (c.n() != n) throw Error("germ: component has wrong number of w variables");
        if (c.order_cap() != cap) throw Error("germ: components disagree on order_cap");
        if (c.constant_term() != cplx{}) throw Error("germ: nonzero constant term (origin must be fixed)");
    }
    for (int s = 0; s <= n; ++s) {
        for (int var = 0; var <= n; ++var) {
            MultiIndex m = MultiIndex::zero(n);
            if (var == 0)
                m.z = 1;
            else
                m.w[static_cast<std::size_t>(var - 1)] = 1;
            const cplx expected = (var == s) ? spectrum_.component_eigenvalue(s) : cplx{};
            const cplx got = components_[static_cast<std::size_t>(s)].coeff(m);
            if (std::abs(got - expected) > lin_tol) {
                std::ostringstream os;
                os << "germ: linear part mismatch in component " << (s == 0 ? std::string("z1") : "w" + std::to_string(s))
                   << " at " << (var == 0 ? std::string("z") : "w" + std::to_string(var)) << ": expected " << expected
                   << ", got " << got;
                throw Error(os.str());
            }
        }
    }
}

Point GermMap::evaluate(std::span<const cplx> p) const
{
    Point out(static_cast<std::size_t>(n() + 1));
    GermEvaluator(*this).apply(p, out);
    return out;
}

std::vector<Series> GermMap::homogeneous_part(int d) const
{
    if (d < 1 || d > order_cap()) throw Error("homogeneous_part: degree out of range");
    std::vector<Series> out;
    for (const auto& c : components_) out.push_back(c.homogeneous(d));
    return out;
}

Point evaluate(const GermMap& germ, std::span<const cplx> p) { return germ.evaluate(p); }

std::vector<Series> homogeneous_part(const GermMap& germ, int d) { return germ.homogeneous_part(d); }

GermEvaluator::GermEvaluator(const GermMap& germ) : dim_(germ.n() + 1)
{
    for (const auto& comp : germ.components()) {
        std::vector<Term> terms;
        for (const auto& [idx, c] : comp.terms()) {
            Term t{c, {}};
            t.exps.reserve(static_cast<std::size_t>(dim_));
            for (int v = 0; v < dim_; ++v) {
                t.exps.push_back(idx.exponent(v));
                max_exp_ = std::max(max_exp_, idx.exponent(v));
            }
            terms.push_back(std::move(t));
        }
        components_.push_back(std::move(terms));
    }
    powers_.resize(static_cast<std::size_t>((max_exp_ + 1) * dim_));
}

void GermEvaluator::apply(std::span<const cplx> p, std::span<cplx> out) const
{
    if (static_cast<int>(p.size()) != dim_ || static_cast<int>(out.size()) != dim_)
        throw Error("evaluate: point has wrong dimension");
    const auto stride = static_cast<std::size_t>(max_exp_ + 1);
    for (int v = 0; v < dim_; ++v) {
        cplx* row = &powers_[static_cast<std::size_t>(v) * stride];
        row[0] = 1.0;
        for (std::size_t e = 1; e < stride; ++e) row[e] = row[e - 1] * p[static_cast<std::size_t>(v)];
    }
    for (int s = 0; s < dim_; ++s) {
        cplx sum{};
        for (const auto& t : components_[static_cast<std::size_t>(s)]) {
            cplx m = t.coeff;
            for (int v = 0; v < dim_; ++v) {
                const int e = t.exps[static_cast<std::size_t>(v)];
                if (e) m *= powers_[static_cast<std::size_t>(v) * stride + static_cast<std::size_t>(e)];
            }
            sum += m;
        }
        out[static_cast<std::size_t>(s)] = sum;
    }
}

} // namespace qpgerm
