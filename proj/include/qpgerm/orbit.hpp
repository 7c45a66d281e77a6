#pragma once

// Orbit simulation of a germ in good form: forward invariance of the basin
// regions, the tracked observables u = w^alpha and v = u^k, and rate fits.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpgerm/basin.hpp"
#include "qpgerm/germ.hpp"
#include "qpgerm/normal_form.hpp"

namespace qpgerm {

enum class OrbitStatus { converging, escaped, max_iter };
std::string to_string(OrbitStatus s);

struct OrbitPoint {
    long m = 0;
    Point p;
    // sum_{i < m} |z_i|^l over every step, stored ones or not
    double z_power_sum = 0.0;
};

struct IterateOptions {
    long max_iter = 100000;
    double escape_radius = 2.0;
    long thin_stride = 1; // keep every stride-th point after the first 100
    int nu = 2;           // order used by the convergence trend test
    int sum_power = 0;    // exponent l of the accumulated |z_i|^l
};

struct OrbitTrace {
    std::vector<OrbitPoint> points;
    OrbitStatus status = OrbitStatus::max_iter;
    bool non_finite = false;
    long steps = 0;     // iterations actually performed
    int sum_power = 0;  // l used for OrbitPoint::z_power_sum
};

OrbitTrace iterate(const GermMap& germ, const Point& start, const IterateOptions& opts);

// Observables recomputed from a stored point.
struct Observables {
    double abs_z;
    cplx u;
    cplx v;
};
Observables observe(const Point& p, const std::vector<int>& alpha, int k);

struct InvarianceWitness {
    Point point;
    Point image;
    BasinCondition violated;
};

struct InvarianceReport {
    int pass = 0;
    int fail = 0;
    std::vector<InvarianceWitness> witnesses; // at most 10
    double pass_rate() const { return pass + fail == 0 ? 0.0 : static_cast<double>(pass) / (pass + fail); }
};

InvarianceReport verify_invariance(const GermMap& germ, const BasinParams& params, const InvariantProfile& profile,
                                   const std::vector<Point>& samples);
InvarianceReport verify_invariance(const GermMap& germ, const BasinParams& params, const InvariantProfile& profile,
                                   int count, std::uint64_t seed);

// sup over samples of |1/z1^{nu-1} - 1/z^{nu-1} - 1|
double z_step_constant(const GermMap& germ, const std::vector<Point>& samples, int nu);

struct Calibration {
    BasinParams params;
    int halvings = 0;
    double step_constant = 0.0;
    InvarianceReport last;
};

// Halves epsilon and epsilon' together until every sample maps into the
// region and epsilon' C < tan((nu-1) delta'); throws at the 1e-6 floor.
Calibration calibrate_epsilons(const GermMap& germ, const BasinParams& params, const InvariantProfile& profile,
                               int samples, std::uint64_t seed);

struct RecurrenceResidual {
    long m;
    cplx d_z; // 1/z1^{nu-1} - 1/z^{nu-1} - 1
    cplx d_v; // 1/v1 - 1/v - z^l
    cplx z_pow_l;
};

// One-step residuals at every stored point of the trace.
std::vector<RecurrenceResidual> recurrence_residuals(const GermMap& germ, const OrbitTrace& trace,
                                                     const InvariantProfile& profile);

enum class RateQuantity { z, u };
enum class RateModel { power, log };

struct RateFit {
    RateQuantity quantity;
    RateModel model;
    double fitted_exponent;
    double expected_exponent;
    double rel_error;
    long m_lo;
    long m_hi;

    double deviation() const { return std::abs(fitted_exponent - expected_exponent); }
};

std::string describe(const RateFit& fit);

// Least-squares slope of y on x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

// Throws Error if the trace has fewer than min_steps steps.
std::vector<RateFit> fit_rates(const OrbitTrace& trace, const InvariantProfile& profile, long min_steps = 10000);

// Orbit CSV: m,re_z,im_z,abs_z,abs_u,abs_v,arg_u_rel,abs_w_1..abs_w_n,theta
void write_orbit_csv(std::ostream& os, const OrbitTrace& trace, const std::vector<int>& alpha, int k, int petal_t);

// shortest round-trip decimal, locale independent
std::string format_number(double x);

} // namespace qpgerm
