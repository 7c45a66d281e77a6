#include "qpgerm/basin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace qpgerm {

namespace {

constexpr double pi = std::numbers::pi;

int alpha_norm(const std::vector<int>& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

// portable uniform on [0, 1)
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double symmetric(std::mt19937_64& rng) { return 2.0 * unit(rng) - 1.0; }

void require(bool cond, const std::string& what)
{
    if (!cond) throw Error("basin parameters: " + what);
}

struct ProfileFacts {
    int nu, k, l, alpha_deg;
    double max_arg, min_re;
};

ProfileFacts facts(const InvariantProfile& profile)
{
    require(profile.nu.has_value(), "order nu undefined");
    require(profile.k.has_value(), "one-resonant order k undefined");
    require(profile.l.has_value(), "separation order l undefined");
    ProfileFacts f{*profile.nu, *profile.k, *profile.l, alpha_norm(profile.alpha), 0.0, 0.0};
    const auto aol = profile.a_over_lambda();
    f.min_re = aol.empty() ? 0.0 : aol.front().real();
    for (const auto& x : aol) {
        f.max_arg = std::max(f.max_arg, std::abs(std::arg(x)));
        f.min_re = std::min(f.min_re, x.real());
    }
    return f;
}

} // namespace

double relative_arg(cplx t, double center) { return std::arg(t * std::polar(1.0, -center)); }

bool Sector::contains(cplx t) const
{
    const double r = std::abs(t);
    const bool radial = kind == Kind::V ? (r > 0.0 && r < radius) : (r > radius);
    return radial && std::abs(relative_arg(t, center_arg)) < halfangle;
}

std::string to_string(BasinCase c) { return c == BasinCase::power ? "power" : "log"; }

std::string to_string(const Petal& p)
{
    return "(t=" + std::to_string(p.t) + ", s=" + (p.s ? std::to_string(*p.s) : std::string("none")) + ")";
}

double BasinParams::R(int k) const { return std::pow(epsilon, -k); }
double BasinParams::R_prime(int nu) const { return std::pow(epsilon_prime, -(nu - 1)); }

void validate_params(const BasinParams& p, const InvariantProfile& profile)
{
    const auto f = facts(profile);
    require(p.epsilon > 0 && p.epsilon < 1, "need 0 < epsilon < 1");
    require(p.epsilon_prime > 0 && p.epsilon_prime < 1, "need 0 < epsilon' < 1");
    require(p.beta > 0 && p.beta < 1, "need 0 < beta < 1");
    require(p.beta < f.k * f.min_re, "need beta < k min Re(a_j / lambda_j)");
    require(p.delta > 0 && p.delta < 1.0 / f.k, "need 0 < delta < 1/k");
    require(f.max_arg + 2.0 * f.k * p.delta < pi / 2, "need max |arg(a_j / lambda_j)| + 2 k delta < pi/2");
    require(p.delta_prime > 0, "need delta' > 0");
    require(p.gamma > 0, "need gamma > 0");
    const bool log_case = f.l == f.nu - 1;
    require(log_case == (p.basin_case == BasinCase::log), "basin case does not match l and nu");
    if (log_case) {
        require(p.delta_prime < p.delta / (2.0 * f.l * f.l), "need delta' < delta / (2 l^2)");
        require(p.gamma < f.k / std::sqrt(1.0 + std::tan(1.0)), "need gamma < k / sqrt(1 + tan 1)");
    } else {
        const double bound = f.l >= 1 ? p.delta / (2.0 * f.l * (f.nu - 1)) : p.delta / (2.0 * (f.nu - 1));
        require(p.delta_prime < bound, "need delta' below its separation bound");
        require(p.gamma > static_cast<double>(f.k) / (f.nu - f.l) && p.gamma < static_cast<double>(f.k) / (f.nu - f.l - 1),
                "need k/(nu-l) < gamma < k/(nu-l-1)");
    }
    require(p.petal.t >= 1 && p.petal.t <= f.k, "petal index t out of range");
    if (p.petal.s) require(*p.petal.s >= 1 && *p.petal.s <= f.nu - 1, "petal index s out of range");
}

BasinParams choose_params(const InvariantProfile& profile, const Petal& petal, const ParamOverrides& overrides)
{
    if (!profile.attracting) throw Error("choose_params: germ is not attracting");
    if (!profile.degenerately_separating) throw Error("choose_params: germ is not degenerately dynamically separating");
    const auto f = facts(profile);
    if (std::abs(static_cast<double>(f.k) * profile.A - 1.0) > 1e-8)
        throw Error("choose_params: profile must be rescaled so that A = 1/k");
    if (f.max_arg >= pi / 2) throw Error("choose_params: attracting condition fails, delta interval is empty");

    BasinParams p;
    p.petal = petal;
    p.basin_case = f.l == f.nu - 1 ? BasinCase::log : BasinCase::power;
    p.delta = std::min(1.0 / (2.0 * f.k), (pi / 2 - f.max_arg) / (4.0 * f.k));
    if (p.basin_case == BasinCase::log) {
        p.delta_prime = 0.5 * p.delta / (2.0 * f.l * f.l);
        p.gamma = 0.5 * f.k / std::sqrt(1.0 + std::tan(1.0));
    } else {
        const double bound = f.l >= 1 ? p.delta / (2.0 * f.l * (f.nu - 1)) : p.delta / (2.0 * (f.nu - 1));
        p.delta_prime = 0.5 * bound;
        p.gamma = 0.5 * (static_cast<double>(f.k) / (f.nu - f.l) + static_cast<double>(f.k) / (f.nu - f.l - 1));
    }
    p.beta = std::min(0.5 * f.k * f.min_re, 0.5);
    p.epsilon = overrides.epsilon.value_or(0.1);
    p.epsilon_prime = overrides.epsilon_prime.value_or(0.1);
    if (overrides.delta) p.delta = *overrides.delta;
    if (overrides.delta_prime) p.delta_prime = *overrides.delta_prime;
    if (overrides.beta) p.beta = *overrides.beta;
    if (overrides.gamma) p.gamma = *overrides.gamma;
    validate_params(p, profile);
    return p;
}

std::vector<Petal> petal_list(const InvariantProfile& profile)
{
    const auto f = facts(profile);
    std::vector<Petal> out;
    const bool refined = f.l == 0 || f.l == f.nu - 1;
    for (int t = 1; t <= f.k; ++t) {
        if (refined) {
            for (int s = 1; s <= f.nu - 1; ++s) out.push_back({t, s});
        } else {
            out.push_back({t, std::nullopt});
        }
    }
    return out;
}

cplx petal_u_center(const Petal& petal, int k) { return std::polar(1.0, 2.0 * pi * (petal.t - 1) / k); }

cplx petal_z_center(const Petal& petal, int nu)
{
    if (!petal.s) return 1.0;
    return std::polar(1.0, 2.0 * pi * (*petal.s - 1) / (nu - 1));
}

std::string to_string(BasinCondition c)
{
    switch (c) {
    case BasinCondition::none: return "none";
    case BasinCondition::u_sector: return "u in eta_t V(epsilon, delta)";
    case BasinCondition::z_sector: return "z in rho_s V(epsilon', delta')";
    case BasinCondition::z_bound: return "z bound";
    case BasinCondition::w_bound: return "|w_j| < |u|^beta";
    }
    return "?";
}

cplx resonant_monomial(const Point& p, const std::vector<int>& alpha)
{
    cplx u = 1.0;
    for (std::size_t j = 0; j < alpha.size(); ++j)
        for (int e = 0; e < alpha[j]; ++e) u *= p[j + 1];
    return u;
}

BasinCondition first_violation(const Point& p, const BasinParams& params, const InvariantProfile& profile)
{
    const int k = *profile.k;
    const int nu = *profile.nu;
    const cplx u = resonant_monomial(p, profile.alpha);
    const double au = std::abs(u);
    // negated comparisons so that NaN fails
    if (!(au > 0.0 && au < params.epsilon)) return BasinCondition::u_sector;
    const double u_center = 2.0 * pi * (params.petal.t - 1) / k;
    if (!(std::abs(relative_arg(u, u_center)) < params.delta)) return BasinCondition::u_sector;

    const cplx z = p[0];
    const double az = std::abs(z);
    if (!(az > 0.0 && az < params.epsilon_prime)) return BasinCondition::z_sector;
    const double z_center = params.petal.s ? 2.0 * pi * (*params.petal.s - 1) / (nu - 1) : 0.0;
    if (!(std::abs(relative_arg(z, z_center)) < params.delta_prime)) return BasinCondition::z_sector;

    if (params.basin_case == BasinCase::power) {
        if (!(az < std::pow(au, params.gamma))) return BasinCondition::z_bound;
    } else {
        if (!(std::pow(au, params.gamma) * std::log(az) < -1.0 / *profile.l)) return BasinCondition::z_bound;
    }
    const double wb = std::pow(au, params.beta);
    for (std::size_t j = 1; j < p.size(); ++j)
        if (!(std::abs(p[j]) < wb)) return BasinCondition::w_bound;
    return BasinCondition::none;
}

bool membership(const Point& p, const BasinParams& params, const InvariantProfile& profile)
{
    return first_violation(p, params, profile) == BasinCondition::none;
}

namespace {

// w with |w_j| = r and arg(w^alpha) = arg(eta_t)
std::vector<cplx> rotated_w(double r, const BasinParams& params, const InvariantProfile& profile)
{
    const int k = *profile.k;
    std::vector<cplx> w(profile.alpha.size(), cplx{r, 0.0});
    const auto jstar = static_cast<std::size_t>(
        std::find_if(profile.alpha.begin(), profile.alpha.end(), [](int a) { return a > 0; }) - profile.alpha.begin());
    w[jstar] *= std::polar(1.0, 2.0 * pi * (params.petal.t - 1) / (static_cast<double>(k) * profile.alpha[jstar]));
    return w;
}

double z_bound(double au, const BasinParams& params, const InvariantProfile& profile)
{
    if (params.basin_case == BasinCase::power) return std::min(params.epsilon_prime, std::pow(au, params.gamma));
    return std::min(params.epsilon_prime, std::exp(-1.0 / (*profile.l * std::pow(au, params.gamma))));
}

Point assemble(cplx z, const std::vector<cplx>& w)
{
    Point p{z};
    p.insert(p.end(), w.begin(), w.end());
    return p;
}

} // namespace

Point witness_point(double r, const BasinParams& params, const InvariantProfile& profile)
{
    const auto w = rotated_w(r, params, profile);
    const double au = std::pow(r, alpha_norm(profile.alpha));
    double az;
    if (params.basin_case == BasinCase::power)
        az = std::pow(r, 2.0 * alpha_norm(profile.alpha) * params.gamma);
    else
        az = std::exp(-2.0 / (*profile.l * std::pow(au, params.gamma)));
    return assemble(az * petal_z_center(params.petal, *profile.nu), w);
}

Point canonical_witness(const BasinParams& params, const InvariantProfile& profile)
{
    const double r0 = std::pow(params.epsilon / 2.0, 1.0 / alpha_norm(profile.alpha));
    double r = r0;
    for (int i = 0; i < 400; ++i, r *= 0.8) {
        Point p = witness_point(r, params, profile);
        if (membership(p, params, profile)) return p;
    }
    throw Error("canonical_witness: no member found on the witness curve");
}

Point interior_point(const BasinParams& params, const InvariantProfile& profile)
{
    double r = std::pow(params.epsilon / 2.0, 1.0 / alpha_norm(profile.alpha));
    for (int i = 0; i < 400; ++i, r *= 0.8) {
        const auto w = rotated_w(r, params, profile);
        const double au = std::pow(r, alpha_norm(profile.alpha));
        const double az = 0.5 * z_bound(au, params, profile);
        Point p = assemble(az * petal_z_center(params.petal, *profile.nu), w);
        if (membership(p, params, profile)) return p;
    }
    throw Error("interior_point: no member found");
}

std::vector<Point> sample_basin(const BasinParams& params, const InvariantProfile& profile, int count,
                                std::uint64_t seed, const SampleOptions& opts)
{
    if (count < 1) throw Error("sample_basin: need at least one sample");
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(count));
    out.push_back(canonical_witness(params, profile));
    if (count == 1) return out;

    std::mt19937_64 rng(seed);
    const int adeg = alpha_norm(profile.alpha);
    const cplx zc = petal_z_center(params.petal, *profile.nu);
    const double max_attempts = static_cast<double>(count) / std::max(1e-12, 1.0 - opts.max_rejection);
    long attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > max_attempts) {
            std::ostringstream os;
            os << "sample_basin: rejection rate above " << opts.max_rejection << " for petal " << to_string(params.petal)
               << " (parameters degenerate?)";
            throw Error(os.str());
        }
        const double au_target = params.epsilon * std::exp(std::log(1e-3) * unit(rng));
        const double r = std::pow(au_target, 1.0 / adeg);
        auto w = rotated_w(r, params, profile);
        for (auto& wj : w) {
            const double re = 0.5 * opts.spread * symmetric(rng);
            const double im = 1.2 * params.delta / adeg * opts.spread * symmetric(rng);
            wj *= std::exp(cplx{re, im});
        }
        const Point probe = assemble(0.0, w);
        const double au = std::abs(resonant_monomial(probe, profile.alpha));
        double log_az;
        if (params.basin_case == BasinCase::power) {
            log_az = std::log(z_bound(au, params, profile)) - (1e-3 + 4.0 * opts.spread * unit(rng));
        } else {
            const double base = -1.0 / (*profile.l * std::pow(au, params.gamma));
            log_az = std::min(std::log(params.epsilon_prime), base * (1.0 + 1e-3 + 2.0 * opts.spread * unit(rng)));
        }
        const double zarg = 1.1 * params.delta_prime * opts.spread * symmetric(rng);
        Point p = assemble(std::polar(std::exp(log_az), zarg) * zc, w);
        if (membership(p, params, profile)) out.push_back(std::move(p));
    }
    return out;
}

} // namespace qpgerm
