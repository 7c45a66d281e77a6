#pragma once

// Spectrum {1, lambda_1, ..., lambda_n} given by rotation numbers, and the
// resonance relations lambda_s = lambda^beta among the lambda_j.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpgerm/series.hpp"

namespace qpgerm {

struct SpectrumLimits {
    int root_of_unity_bound = 64;
    double root_tol = 1e-9;
};

class Spectrum {
public:
    // theta_j in turns; lambda_j = exp(2 pi i theta_j). Angles are reduced
    // into [0, 1). Throws if some lambda_j is (close to) a root of unity of
    // order <= limits.root_of_unity_bound or two angles coincide.
    explicit Spectrum(std::vector<double> theta, SpectrumLimits limits = {});

    int n() const { return static_cast<int>(theta_.size()); }
    const std::vector<double>& theta() const { return theta_; }
    cplx lambda(int j) const { return lambda_[static_cast<std::size_t>(j)]; }
    const std::vector<cplx>& lambdas() const { return lambda_; }

    // lambda^beta over the w exponents of m (z carries eigenvalue 1)
    cplx lambda_pow(const std::vector<int>& beta) const;
    // eigenvalue of component s: s = 0 is the z component (1), s >= 1 is lambda_s
    cplx component_eigenvalue(int s) const { return s == 0 ? cplx{1.0} : lambda_[static_cast<std::size_t>(s - 1)]; }

private:
    std::vector<double> theta_;
    std::vector<cplx> lambda_;
};

// distance from x to the nearest integer
double dist_to_integer(double x);

struct ResonanceRelation {
    int s = 0; // 1-based component index
    std::vector<int> beta;
    double residual = 0.0;

    int degree() const;
    bool operator==(const ResonanceRelation& o) const { return s == o.s && beta == o.beta; }
};

struct ResonanceOptions {
    double res_tol = 1e-9;
    std::uint64_t enumeration_cap = 10'000'000;
};

// Number of (beta, s) candidates with 2 <= |beta| <= degree_bound; saturates
// at UINT64_MAX.
std::uint64_t resonance_candidate_count(int n, int degree_bound);

// All relations with 2 <= |beta| <= degree_bound within res_tol, sorted by
// (|beta|, s, beta lexicographic).
std::vector<ResonanceRelation> find_resonances(const Spectrum& spec, int degree_bound,
                                               const ResonanceOptions& opts = {});

enum class CertificateVerdict { certified, refuted, inconclusive, asserted };
std::string to_string(CertificateVerdict v);

struct OneResonanceCertificate {
    std::vector<int> alpha;
    int degree_bound = 0;
    std::vector<ResonanceRelation> relations;
    double alpha_unit_residual = 0.0;
    CertificateVerdict verdict = CertificateVerdict::inconclusive;
    std::optional<ResonanceRelation> witness; // set when refuted

    bool holds() const
    {
        return verdict == CertificateVerdict::certified || verdict == CertificateVerdict::asserted;
    }
};

// If beta = k alpha + e_s for some k >= 1, returns k.
std::optional<int> one_resonant_power(const std::vector<int>& alpha, const std::vector<int>& beta, int s);

OneResonanceCertificate certify_one_resonance(const Spectrum& spec, const std::vector<int>& alpha,
                                              int degree_bound, const ResonanceOptions& opts = {});

// Skips enumeration; only lambda^alpha is evaluated.
OneResonanceCertificate assert_one_resonance(const Spectrum& spec, const std::vector<int>& alpha);

} // namespace qpgerm
