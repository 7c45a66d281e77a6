#pragma once

// Truncated multivariate power series in (z, w_1, ..., w_n) with complex
// coefficients. Truncation is by total degree; terms are kept in graded
// lexicographic order so that every traversal is deterministic.

#include <compare>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpgerm {

using cplx = std::complex<double>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MultiIndex {
    int z = 0;
    std::vector<int> w;

    MultiIndex() = default;
    MultiIndex(int z_exp, std::vector<int> w_exp) : z(z_exp), w(std::move(w_exp)) {}

    static MultiIndex zero(int n) { return {0, std::vector<int>(static_cast<std::size_t>(n), 0)}; }

    int n() const { return static_cast<int>(w.size()); }
    int w_degree() const;
    int degree() const { return z + w_degree(); }

    // exponent of variable `var` where 0 is z and j >= 1 is w_j
    int exponent(int var) const { return var == 0 ? z : w[static_cast<std::size_t>(var - 1)]; }

    MultiIndex operator+(const MultiIndex& other) const;

    bool operator==(const MultiIndex&) const = default;
    // graded lexicographic: total degree first, then (z, w_1, ..., w_n)
    std::strong_ordering operator<=>(const MultiIndex& other) const;
};

std::string to_string(const MultiIndex& m);

class Series {
public:
    using TermMap = std::map<MultiIndex, cplx>;

    // relative prune threshold (w.r.t. the largest coefficient modulus)
    static constexpr double prune_rel = 1e-14;

    Series(int n, int order_cap);

    static Series constant(int n, int order_cap, cplx c);
    // var = 0 is z, var = j is w_j
    static Series variable(int n, int order_cap, int var, cplx c = 1.0);
    static Series monomial(int n, int order_cap, const MultiIndex& m, cplx c);

    int n() const { return n_; }
    int order_cap() const { return cap_; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    cplx coeff(const MultiIndex& m) const;
    cplx constant_term() const { return coeff(MultiIndex::zero(n_)); }

    // Adds c to the coefficient of m; terms above order_cap are dropped.
    // Does not prune; call prune() after a batch of updates.
    void add_term(const MultiIndex& m, cplx c);
    void prune();

    Series homogeneous(int d) const;
    Series truncated(int new_cap) const;
    // lowest total degree of a stored term, -1 if empty
    int low_degree() const;
    double max_abs() const;

    cplx evaluate(std::span<const cplx> point) const;

    Series& operator+=(const Series& other);
    Series& operator-=(const Series& other);
    Series& operator*=(cplx s);

    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(Series a, cplx s) { return a *= s; }
    friend Series operator*(cplx s, Series a) { return a *= s; }
    friend Series operator*(const Series& a, const Series& b);

    // coefficientwise equality within an absolute tolerance
    bool approx_equal(const Series& other, double tol) const;

private:
    void check_compatible(const Series& other) const;

    int n_;
    int cap_;
    TermMap terms_;
};

Series series_add(const Series& a, const Series& b);
Series series_mul(const Series& a, const Series& b);

// Formal composition target(z -> repl[0], w_j -> repl[j]). Every replacement
// must have zero constant term and share n and order_cap with the target.
Series substitute(const Series& target, std::span<const Series> replacements);

// Multiplicative inverse; the constant term must be nonzero.
Series series_inverse(const Series& s);

// Coefficientwise max |a - b| over all monomials.
double max_coeff_diff(const Series& a, const Series& b);

} // namespace qpgerm
