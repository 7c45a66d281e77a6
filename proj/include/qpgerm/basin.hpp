#pragma once

// Sector arithmetic and the sector-shaped basin regions of a germ in good
// form (A = 1/k, z1 = z - z^nu/(nu-1) + ...).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpgerm/germ.hpp"
#include "qpgerm/normal_form.hpp"

namespace qpgerm {

// arg(t / e^{i center}) in (-pi, pi]
double relative_arg(cplx t, double center);

struct Sector {
    enum class Kind { V, U };
    Kind kind = Kind::V;
    double radius = 1.0;    // a for V (outer), R for U (inner)
    double halfangle = 0.1; // radians
    double center_arg = 0.0;

    static Sector V(double a, double halfangle, double center = 0.0) { return {Kind::V, a, halfangle, center}; }
    static Sector U(double R, double halfangle, double center = 0.0) { return {Kind::U, R, halfangle, center}; }

    bool contains(cplx t) const;
};

enum class BasinCase { power, log };
std::string to_string(BasinCase c);

struct Petal {
    int t = 1;              // u-sector eta_t, 1..k
    std::optional<int> s;   // z-sector rho_s, 1..nu-1
    bool operator==(const Petal&) const = default;
};

std::string to_string(const Petal& p);

struct BasinParams {
    BasinCase basin_case = BasinCase::power;
    double epsilon = 0.1;
    double epsilon_prime = 0.1;
    double delta = 0.0;
    double delta_prime = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    Petal petal;

    double R(int k) const;        // epsilon^{-k}
    double R_prime(int nu) const; // epsilon'^{-(nu-1)}
};

struct ParamOverrides {
    std::optional<double> epsilon;
    std::optional<double> epsilon_prime;
    std::optional<double> delta;
    std::optional<double> delta_prime;
    std::optional<double> beta;
    std::optional<double> gamma;
};

// Throws Error naming the first violated constraint.
void validate_params(const BasinParams& params, const InvariantProfile& profile);

// Deterministic midpoint / half-bound selection; the profile must come from
// a germ rescaled to A = 1/k.
BasinParams choose_params(const InvariantProfile& profile, const Petal& petal = {}, const ParamOverrides& overrides = {});

std::vector<Petal> petal_list(const InvariantProfile& profile);

// eta_t = e^{2 pi i (t-1)/k}; rho_s = e^{2 pi i (s-1)/(nu-1)}, 1 when s is unset
cplx petal_u_center(const Petal& petal, int k);
cplx petal_z_center(const Petal& petal, int nu);

enum class BasinCondition { none, u_sector, z_sector, z_bound, w_bound };
std::string to_string(BasinCondition c);

// First violated defining inequality, or none for a member.
BasinCondition first_violation(const Point& p, const BasinParams& params, const InvariantProfile& profile);
bool membership(const Point& p, const BasinParams& params, const InvariantProfile& profile);

cplx resonant_monomial(const Point& p, const std::vector<int>& alpha); // u = w^alpha

// Point on the curve (r^{2|alpha| gamma}, r, ..., r) rotated into the petal;
// in the log case z = exp(-2 / (l |u|^gamma)) instead.
Point witness_point(double r, const BasinParams& params, const InvariantProfile& profile);

// The witness at the largest r on the ladder (eps/2)^{1/|alpha|} * 0.8^i that
// is a member.
Point canonical_witness(const BasinParams& params, const InvariantProfile& profile);

// Member with |u| near eps/2 and |z| at half of its admissible bound: a
// start point far from the transient regime, used for long orbits.
Point interior_point(const BasinParams& params, const InvariantProfile& profile);

struct SampleOptions {
    double spread = 1.0; // 0 gives unperturbed witness-curve points
    double max_rejection = 0.999;
};

// First sample is the canonical witness; the rest are perturbed points,
// rejection-filtered by membership. Deterministic given seed.
std::vector<Point> sample_basin(const BasinParams& params, const InvariantProfile& profile, int count,
                                std::uint64_t seed, const SampleOptions& opts = {});

} // namespace qpgerm
