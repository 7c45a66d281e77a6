#include "qpgerm/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qpgerm {

int MultiIndex::w_degree() const { return std::accumulate(w.begin(), w.end(), 0); }

MultiIndex MultiIndex::operator+(const MultiIndex& other) const
{
    MultiIndex out = *this;
    out.z += other.z;
    for (std::size_t j = 0; j < w.size(); ++j) out.w[j] += other.w[j];
    return out;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const
{
    if (auto c = degree() <=> other.degree(); c != 0) return c;
    if (auto c = z <=> other.z; c != 0) return c;
    return w <=> other.w;
}

std::string to_string(const MultiIndex& m)
{
    std::ostringstream os;
    os << "z^" << m.z << " w^(";
    for (std::size_t j = 0; j < m.w.size(); ++j) os << (j ? "," : "") << m.w[j];
    os << ")";
    return os.str();
}

Series::Series(int n, int order_cap) : n_(n), cap_(order_cap)
{
    if (n < 1) throw Error("series: n must be positive");
    if (order_cap < 1) throw Error("series: order_cap must be positive");
}

Series Series::constant(int n, int order_cap, cplx c)
{
    Series s(n, order_cap);
    s.add_term(MultiIndex::zero(n), c);
    s.prune();
    return s;
}

Series Series::variable(int n, int order_cap, int var, cplx c)
{
    if (var < 0 || var > n) throw Error("series: variable index out of range");
    MultiIndex m = MultiIndex::zero(n);
    if (var == 0)
        m.z = 1;
    else
        m.w[static_cast<std::size_t>(var - 1)] = 1;
    return monomial(n, order_cap, m, c);
}

Series Series::monomial(int n, int order_cap, const MultiIndex& m, cplx c)
{
    if (m.n() != n) throw Error("series: multi-index has wrong number of w exponents");
    Series s(n, order_cap);
    s.add_term(m, c);
    s.prune();
    return s;
}

cplx Series::coeff(const MultiIndex& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? cplx{} : it->second;
}

void Series::add_term(const MultiIndex& m, cplx c)
{
    if (m.n() != n_) throw Error("series: multi-index has wrong number of w exponents");
    if (m.z < 0 || std::any_of(m.w.begin(), m.w.end(), [](int e) { return e < 0; }))
        throw Error("series: negative exponent");
    if (m.degree() > cap_) return;
    terms_[m] += c;
}

void Series::prune()
{
    const double threshold = prune_rel * max_abs();
    std::erase_if(terms_, [&](const auto& kv) {
        const double a = std::abs(kv.second);
        return a == 0.0 || a < threshold;
    });
}

double Series::max_abs() const
{
    double m = 0.0;
    for (const auto& [idx, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

Series Series::homogeneous(int d) const
{
    Series out(n_, cap_);
    for (const auto& [idx, c] : terms_)
        if (idx.degree() == d) out.terms_.emplace(idx, c);
    return out;
}

Series Series::truncated(int new_cap) const
{
    Series out(n_, new_cap);
    for (const auto& [idx, c] : terms_)
        if (idx.degree() <= new_cap) out.terms_.emplace(idx, c);
    return out;
}

int Series::low_degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

cplx Series::evaluate(std::span<const cplx> point) const
{
    if (static_cast<int>(point.size()) != n_ + 1) throw Error("series: point has wrong dimension");
    cplx sum{};
    for (const auto& [idx, c] : terms_) {
        cplx t = c;
        for (int e = 0; e < idx.z; ++e) t *= point[0];
        for (int j = 0; j < n_; ++j)
            for (int e = 0; e < idx.w[static_cast<std::size_t>(j)]; ++e) t *= point[static_cast<std::size_t>(j + 1)];
        sum += t;
    }
    return sum;
}

void Series::check_compatible(const Series& other) const
{
    if (n_ != other.n_) throw Error("series: dimension mismatch");
    if (cap_ != other.cap_) throw Error("series: order_cap mismatch");
}

Series& Series::operator+=(const Series& other)
{
    check_compatible(other);
    for (const auto& [idx, c] : other.terms_) terms_[idx] += c;
    prune();
    return *this;
}

Series& Series::operator-=(const Series& other)
{
    check_compatible(other);
    for (const auto& [idx, c] : other.terms_) terms_[idx] -= c;
    prune();
    return *this;
}

Series& Series::operator*=(cplx s)
{
    for (auto& [idx, c] : terms_) c *= s;
    prune();
    return *this;
}

Series operator*(const Series& a, const Series& b)
{
    a.check_compatible(b);
    Series out(a.n_, a.cap_);
    for (const auto& [ia, ca] : a.terms_) {
        const int da = ia.degree();
        for (const auto& [ib, cb] : b.terms_) {
            // b is graded, so once the degree overflows the rest does too
            if (da + ib.degree() > a.cap_) break;
            out.terms_[ia + ib] += ca * cb;
        }
    }
    out.prune();
    return out;
}

bool Series::approx_equal(const Series& other, double tol) const
{
    return n_ == other.n_ && max_coeff_diff(*this, other) <= tol;
}

Series series_add(const Series& a, const Series& b) { return a + b; }

Series series_mul(const Series& a, const Series& b) { return a * b; }

Series substitute(const Series& target, std::span<const Series> replacements)
{
    const int n = target.n();
    const int cap = target.order_cap();
    if (static_cast<int>(replacements.size()) != n + 1)
        throw Error("substitute: expected n+1 replacement series");
    for (const auto& r : replacements) {
        if (r.n() != n || r.order_cap() != cap) throw Error("substitute: replacement dimension/order mismatch");
        if (r.constant_term() != cplx{}) throw Error("substitute: replacement has nonzero constant term");
    }

    // powers[var][e] = replacements[var]^e, filled lazily
    std::vector<std::vector<Series>> powers(static_cast<std::size_t>(n + 1));
    auto power = [&](int var, int e) -> const Series& {
        auto& p = powers[static_cast<std::size_t>(var)];
        if (p.empty()) p.push_back(Series::constant(n, cap, 1.0));
        while (static_cast<int>(p.size()) <= e) p.push_back(p.back() * replacements[static_cast<std::size_t>(var)]);
        return p[static_cast<std::size_t>(e)];
    };
    // low degree of each replacement bounds the degree of its powers
    std::vector<int> low(static_cast<std::size_t>(n + 1));
    for (int v = 0; v <= n; ++v) {
        const int d = replacements[static_cast<std::size_t>(v)].low_degree();
        low[static_cast<std::size_t>(v)] = d < 0 ? cap + 1 : d;
    }

    Series out(n, cap);
    for (const auto& [idx, c] : target.terms()) {
        int min_degree = 0;
        for (int v = 0; v <= n; ++v) min_degree += idx.exponent(v) * low[static_cast<std::size_t>(v)];
        if (min_degree > cap) continue;
        Series prod = Series::constant(n, cap, c);
        for (int v = 0; v <= n && !prod.empty(); ++v) {
            const int e = idx.exponent(v);
            if (e > 0) prod = prod * power(v, e);
        }
        for (const auto& [pi, pc] : prod.terms()) out.add_term(pi, pc);
    }
    out.prune();
    return out;
}

Series series_inverse(const Series& s)
{
    const cplx c0 = s.constant_term();
    if (c0 == cplx{}) throw Error("series_inverse: zero constant term");
    // s = c0 (1 - t), 1/s = (1/c0) sum_i t^i
    Series t = Series::constant(s.n(), s.order_cap(), 1.0) - s * (1.0 / c0);
    Series sum = Series::constant(s.n(), s.order_cap(), 1.0);
    Series term = sum;
    for (int i = 1; i <= s.order_cap() && !t.empty(); ++i) {
        term = term * t;
        if (term.empty()) break;
        sum += term;
    }
    return sum * (1.0 / c0);
}

double max_coeff_diff(const Series& a, const Series& b)
{
    double m = 0.0;
    for (const auto& [idx, c] : a.terms()) m = std::max(m, std::abs(c - b.coeff(idx)));
    for (const auto& [idx, c] : b.terms())
        if (a.terms().find(idx) == a.terms().end()) m = std::max(m, std::abs(c));
    return m;
}

} // namespace qpgerm
