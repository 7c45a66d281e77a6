#pragma once

// A germ of biholomorphism of C^{n+1} fixing the origin, represented by its
// Taylor polynomial up to order_cap, with linear part Diag(1, lambda_1, ...).

#include <span>
#include <vector>

#include "qpgerm/resonance.hpp"
#include "qpgerm/series.hpp"

namespace qpgerm {

using Point = std::vector<cplx>;

class GermMap {
public:
    static constexpr double default_lin_tol = 1e-9;

    // components[0] is the z component, components[j] the w_j component.
    // Validates the linear part against the spectrum and the zero constant
    // term; throws Error on violation.
    GermMap(Spectrum spectrum, std::vector<Series> components, double lin_tol = default_lin_tol);

    int n() const { return spectrum_.n(); }
    int order_cap() const { return components_.front().order_cap(); }
    const Spectrum& spectrum() const { return spectrum_; }

    const Series& z_component() const { return components_.front(); }
    const Series& w_component(int j) const { return components_[static_cast<std::size_t>(j)]; } // 1-based
    const Series& component(int s) const { return components_[static_cast<std::size_t>(s)]; }   // 0 = z
    const std::vector<Series>& components() const { return components_; }

    Point evaluate(std::span<const cplx> p) const;

    // degree-d part of each component (1 <= d <= order_cap)
    std::vector<Series> homogeneous_part(int d) const;

private:
    Spectrum spectrum_;
    std::vector<Series> components_;
};

Point evaluate(const GermMap& germ, std::span<const cplx> p);
std::vector<Series> homogeneous_part(const GermMap& germ, int d);

// Flattened term tables for fast repeated evaluation.
class GermEvaluator {
public:
    explicit GermEvaluator(const GermMap& germ);

    int dimension() const { return dim_; }
    // writes F(p) into out; out and p must not alias
    void apply(std::span<const cplx> p, std::span<cplx> out) const;

private:
    struct Term {
        cplx coeff;
        std::vector<int> exps; // one per variable, z first
    };
    int dim_;
    int max_exp_ = 0;
    std::vector<std::vector<Term>> components_;
    mutable std::vector<cplx> powers_; // (max_exp+1) * dim scratch
};

// Identity linear part diag(1, lambda) with no higher-order terms.
std::vector<Series> linear_components(const Spectrum& spectrum, int order_cap);

} // namespace qpgerm
