#pragma once

// Finite-order Poincare-Dulac normalization, blow-ups centered at the
// direction [1:0:...:0], and extraction of the invariants that decide whether
// a quasi-parabolic one-resonant germ has parabolic basins.

#include <optional>
#include <string>
#include <vector>

#include "qpgerm/germ.hpp"

namespace qpgerm {

struct Orders {
    std::optional<int> nu; // least i with z^i in the z component
    std::optional<int> mu; // least i with z^i in some w component
    bool ultra_resonant = false;
    // nu or mu could not be decided within order_cap
    bool truncation_limited = false;
};

Orders compute_orders(const GermMap& germ);

// The lambda with F_nu(v) = lambda v at v = (1, 0, ..., 0), if v is a
// non-degenerate characteristic direction.
std::optional<cplx> check_characteristic_direction(const GermMap& germ, double tol = 1e-12);

struct Separation {
    bool dynamically_separating = false;
    bool degenerately_separating = false;
    // least i >= 1 with z^i w_j in the w_j component
    std::vector<std::optional<int>> r_js;
};

Separation check_dynamical_separation(const GermMap& germ);

struct ResonantLeading {
    std::optional<int> k; // one-resonant order
    std::vector<std::optional<int>> l_js;
    std::vector<cplx> a; // w_j1 contains -a_j z^{l_j} w^{k alpha} w_j
    std::vector<cplx> b; // w_j1 contains -b_j z^{r_j} w_j
    std::optional<int> l; // common l_j when all agree and l <= nu - 1
    std::vector<std::string> diagnostics;
};

// k' >= 1 with beta = k' alpha + e_j, if any
std::optional<int> resonant_block_power(const std::vector<int>& alpha, const std::vector<int>& beta, int j);

ResonantLeading extract_resonant_leading(const GermMap& germ, const std::vector<int>& alpha);

struct Attraction {
    cplx A;
    cplx c;
    bool nondegenerate = false;
    bool attracting = false;
    std::vector<cplx> ratios; // a_j lambda_j^{-1} A^{-1}
};

Attraction compute_A_c_attracting(const Spectrum& spectrum, const std::vector<int>& alpha, const std::vector<cplx>& a,
                                  const std::vector<cplx>& b, double tol = 1e-12);

struct InvariantProfile {
    std::vector<int> alpha;
    std::optional<int> nu;
    std::optional<int> mu;
    bool ultra_resonant = false;
    bool truncation_limited = false;
    std::optional<cplx> char_dir_lambda;
    bool dynamically_separating = false;
    bool degenerately_separating = false;
    std::vector<std::optional<int>> l_js;
    std::vector<std::optional<int>> r_js;
    std::optional<int> l;
    std::optional<int> k;
    std::vector<cplx> a;
    std::vector<cplx> b;
    std::vector<cplx> lambdas;
    cplx A;
    cplx c;
    bool nondegenerate = false;
    bool attracting = false;
    std::vector<std::string> diagnostics;

    bool log_case() const { return nu && l && *l == *nu - 1; }
    // a_j lambda_j^{-1}
    std::vector<cplx> a_over_lambda() const;
};

// Runs every extractor above. Extractors whose preconditions fail leave
// their fields empty and add a diagnostic.
InvariantProfile compute_profile(const GermMap& germ, const std::vector<int>& alpha);

// New coordinates z' = z_scale z, w_j' = w_scale[j] w_j.
GermMap scale_coordinates(const GermMap& germ, cplx z_scale, const std::vector<cplx>& w_scale);

struct Rescaled {
    GermMap germ;
    cplx sigma; // w' = sigma w for every j
};

// Uniform w-rescaling making A = 1/k; sigma is the principal k|alpha|-th
// root of kA.
Rescaled rescale_to_unit_A(const GermMap& germ, const InvariantProfile& profile);

// z' = sigma z making the coefficient of z^nu equal to -1/(nu - 1).
GermMap normalize_parabolic_coefficient(const GermMap& germ);

// Components of the composition outer o inner.
std::vector<Series> compose(const std::vector<Series>& outer, const std::vector<Series>& inner);
std::vector<Series> identity_map(int n, int order_cap);

struct NormalizationStep {
    GermMap germ;
    // old = change(new); new = inverse_change(old)
    std::vector<Series> change;
    std::vector<Series> inverse_change;
    int removed = 0;
    int kept = 0;
};

// Removes every degree-d monomial z^m w^beta of component s whose divisor
// lambda^beta - lambda_s exceeds sd_tol in modulus.
NormalizationStep poincare_dulac_step(const GermMap& germ, int degree, double sd_tol = 1e-6);

// Steps for degrees 2..max_degree, composing the coordinate changes.
NormalizationStep poincare_dulac_normalize(const GermMap& germ, int max_degree, double sd_tol = 1e-6);

// Chart w = z w'. The result has order_cap reduced by one: pure-z terms move
// down a degree, so the top degree is no longer determined by the input.
GermMap blowup(const GermMap& germ);

struct Monomial {
    int component = 0; // 0 = z
    MultiIndex index;
    cplx coeff;
};

// z^{l'} w^{k' alpha} w_j in component j with k' > k and l' < l_j.
std::vector<Monomial> offending_monomials(const GermMap& germ, const std::vector<int>& alpha,
                                          const ResonantLeading& lead);

struct InvarianceCheck {
    std::string name;
    bool holds = true;
};

struct Reduction {
    GermMap germ;
    int blowups = 0;
    std::vector<InvarianceCheck> checks;
};

Reduction reduce_to_good_form(const GermMap& germ, const std::vector<int>& alpha, int max_blowups = 16);

} // namespace qpgerm
