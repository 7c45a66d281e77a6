#include "qpgerm/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qpgerm {

double dist_to_integer(double x) { return std::abs(x - std::round(x)); }

Spectrum::Spectrum(std::vector<double> theta, SpectrumLimits limits) : theta_(std::move(theta))
{
    if (theta_.empty()) throw Error("spectrum: need at least one eigenvalue besides 1");
    for (auto& t : theta_) {
        if (!std::isfinite(t)) throw Error("spectrum: non-finite angle");
        t -= std::floor(t);
    }
    for (std::size_t j = 0; j < theta_.size(); ++j) {
        for (int q = 1; q <= limits.root_of_unity_bound; ++q) {
            if (dist_to_integer(q * theta_[j]) / q < limits.root_tol) {
                std::ostringstream os;
                os << "spectrum: lambda_" << j + 1 << " is a root of unity of order " << q
                   << " (theta = " << theta_[j] << ")";
                throw Error(os.str());
            }
        }
        for (std::size_t i = 0; i < j; ++i) {
            if (dist_to_integer(theta_[j] - theta_[i]) < limits.root_tol) {
                std::ostringstream os;
                os << "spectrum: lambda_" << i + 1 << " and lambda_" << j + 1 << " coincide";
                throw Error(os.str());
            }
        }
    }
    lambda_.reserve(theta_.size());
    for (double t : theta_) lambda_.push_back(std::polar(1.0, 2.0 * std::numbers::pi * t));
}

cplx Spectrum::lambda_pow(const std::vector<int>& beta) const
{
    // through the angle so that exact relations give exactly unit residuals
    double angle = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) angle += beta[j] * theta_[j];
    angle -= std::floor(angle);
    return std::polar(1.0, 2.0 * std::numbers::pi * angle);
}

int ResonanceRelation::degree() const
{
    int d = 0;
    for (int b : beta) d += b;
    return d;
}

std::uint64_t resonance_candidate_count(int n, int degree_bound)
{
    constexpr auto sat = std::numeric_limits<std::uint64_t>::max();
    // C(D + n, n) computed incrementally with saturation
    std::uint64_t binom = 1;
    for (int i = 1; i <= n; ++i) {
        const auto num = static_cast<std::uint64_t>(degree_bound + i);
        if (binom > sat / num) return sat;
        binom = binom * num / static_cast<std::uint64_t>(i);
    }
    const auto low = static_cast<std::uint64_t>(1 + n); // |beta| <= 1
    if (binom <= low) return 0;
    const std::uint64_t per_component = binom - low;
    if (per_component > sat / static_cast<std::uint64_t>(n)) return sat;
    return per_component * static_cast<std::uint64_t>(n);
}

namespace {

// all beta in N^n with |beta| = d, lexicographically ascending
void compositions(int n, int d, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    const auto pos = cur.size();
    if (static_cast<int>(pos) == n - 1) {
        cur.push_back(d);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int e = 0; e <= d; ++e) {
        cur.push_back(e);
        compositions(n, d - e, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<ResonanceRelation> find_resonances(const Spectrum& spec, int degree_bound, const ResonanceOptions& opts)
{
    if (degree_bound < 2) throw Error("find_resonances: degree_bound must be >= 2");
    const int n = spec.n();
    if (resonance_candidate_count(n, degree_bound) > opts.enumeration_cap) {
        std::ostringstream os;
        os << "find_resonances: enumeration at degree bound " << degree_bound << " exceeds the cap of "
           << opts.enumeration_cap << " candidates";
        throw Error(os.str());
    }
    std::vector<ResonanceRelation> out;
    std::vector<std::vector<int>> betas;
    std::vector<int> cur;
    for (int d = 2; d <= degree_bound; ++d) {
        betas.clear();
        compositions(n, d, cur, betas);
        for (int s = 1; s <= n; ++s) {
            const double ts = spec.theta()[static_cast<std::size_t>(s - 1)];
            for (const auto& beta : betas) {
                double sum = -ts;
                for (int j = 0; j < n; ++j) sum += beta[static_cast<std::size_t>(j)] * spec.theta()[static_cast<std::size_t>(j)];
                const double r = dist_to_integer(sum);
                if (r <= opts.res_tol) out.push_back({s, beta, r});
            }
        }
    }
    return out;
}

std::string to_string(CertificateVerdict v)
{
    switch (v) {
    case CertificateVerdict::certified: return "certified";
    case CertificateVerdict::refuted: return "refuted";
    case CertificateVerdict::inconclusive: return "inconclusive";
    case CertificateVerdict::asserted: return "asserted";
    }
    return "?";
}

std::optional<int> one_resonant_power(const std::vector<int>& alpha, const std::vector<int>& beta, int s)
{
    if (alpha.size() != beta.size() || s < 1 || s > static_cast<int>(beta.size())) return std::nullopt;
    std::vector<int> g = beta;
    g[static_cast<std::size_t>(s - 1)] -= 1;
    if (std::any_of(g.begin(), g.end(), [](int e) { return e < 0; })) return std::nullopt;
    std::optional<int> k;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        if (alpha[j] == 0) {
            if (g[j] != 0) return std::nullopt;
            continue;
        }
        if (g[j] % alpha[j] != 0) return std::nullopt;
        const int kj = g[j] / alpha[j];
        if (k && *k != kj) return std::nullopt;
        k = kj;
    }
    if (!k || *k < 1) return std::nullopt;
    return k;
}

namespace {

void check_alpha(const Spectrum& spec, const std::vector<int>& alpha)
{
    if (static_cast<int>(alpha.size()) != spec.n()) throw Error("alpha: length must equal n");
    if (std::any_of(alpha.begin(), alpha.end(), [](int a) { return a < 0; }))
        throw Error("alpha: entries must be non-negative");
    if (std::all_of(alpha.begin(), alpha.end(), [](int a) { return a == 0; }))
        throw Error("alpha: must be nonzero");
}

double alpha_residual(const Spectrum& spec, const std::vector<int>& alpha)
{
    double sum = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) sum += alpha[j] * spec.theta()[j];
    return dist_to_integer(sum);
}

} // namespace

OneResonanceCertificate certify_one_resonance(const Spectrum& spec, const std::vector<int>& alpha, int degree_bound,
                                              const ResonanceOptions& opts)
{
    check_alpha(spec, alpha);
    OneResonanceCertificate cert;
    cert.alpha = alpha;
    cert.degree_bound = degree_bound;
    cert.relations = find_resonances(spec, degree_bound, opts);
    cert.alpha_unit_residual = alpha_residual(spec, alpha);
    for (const auto& rel : cert.relations) {
        if (!one_resonant_power(alpha, rel.beta, rel.s)) {
            cert.witness = rel;
            break;
        }
    }
    if (cert.witness)
        cert.verdict = CertificateVerdict::refuted;
    else if (cert.alpha_unit_residual <= opts.res_tol)
        cert.verdict = CertificateVerdict::certified;
    else
        cert.verdict = CertificateVerdict::inconclusive;
    return cert;
}

OneResonanceCertificate assert_one_resonance(const Spectrum& spec, const std::vector<int>& alpha)
{
    check_alpha(spec, alpha);
    OneResonanceCertificate cert;
    cert.alpha = alpha;
    cert.alpha_unit_residual = alpha_residual(spec, alpha);
    cert.verdict = CertificateVerdict::asserted;
    return cert;
}

} // namespace qpgerm
