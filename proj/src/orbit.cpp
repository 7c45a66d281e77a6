#include "qpgerm/orbit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace qpgerm {

std::string to_string(OrbitStatus s)
{
    switch (s) {
    case OrbitStatus::converging: return "converging";
    case OrbitStatus::escaped: return "escaped";
    case OrbitStatus::max_iter: return "max_iter";
    }
    return "?";
}

namespace {

double norm2(const Point& p)
{
    double s = 0.0;
    for (const auto& c : p) s += std::norm(c);
    return std::sqrt(s);
}

bool finite(const Point& p)
{
    return std::all_of(p.begin(), p.end(), [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

bool is_origin(const Point& p)
{
    return std::all_of(p.begin(), p.end(), [](cplx c) { return c == cplx{}; });
}

} // namespace

OrbitTrace iterate(const GermMap& germ, const Point& start, const IterateOptions& opts)
{
    if (opts.max_iter < 1) throw Error("iterate: max_iter must be >= 1");
    if (static_cast<int>(start.size()) != germ.n() + 1) throw Error("iterate: start point has wrong dimension");
    const long stride = std::max(1L, opts.thin_stride);
    OrbitTrace trace;
    trace.sum_power = opts.sum_power;
    Point p = start;
    double sum = 0.0;
    trace.points.push_back({0, p, sum});
    if (!finite(p)) {
        trace.non_finite = true;
        trace.status = OrbitStatus::escaped;
        return trace;
    }
    if (is_origin(p)) {
        trace.status = OrbitStatus::converging;
        return trace;
    }

    const GermEvaluator ev(germ);
    Point next(p.size());
    const long window = std::max(1L, opts.max_iter / 10);
    const long checkpoint = opts.max_iter - window;
    auto inv_z = [&](const Point& q) { return std::pow(std::abs(q[0]), -(opts.nu - 1)); };
    double inv_z_checkpoint = checkpoint == 0 ? inv_z(p) : 0.0;

    long m = 1;
    for (; m <= opts.max_iter; ++m) {
        sum += std::pow(std::abs(p[0]), opts.sum_power);
        ev.apply(p, next);
        std::swap(p, next);
        if (!finite(p)) {
            trace.non_finite = true;
            trace.status = OrbitStatus::escaped;
            trace.points.push_back({m, p, sum});
            break;
        }
        if (norm2(p) > opts.escape_radius) {
            trace.status = OrbitStatus::escaped;
            trace.points.push_back({m, p, sum});
            break;
        }
        if (m < 100 || m % stride == 0 || m == opts.max_iter) trace.points.push_back({m, p, sum});
        if (is_origin(p)) {
            if (trace.points.back().m != m) trace.points.push_back({m, p, sum});
            trace.status = OrbitStatus::converging;
            break;
        }
        if (m == checkpoint) inv_z_checkpoint = inv_z(p);
    }
    trace.steps = std::min(m, opts.max_iter);
    if (trace.status == OrbitStatus::max_iter && trace.steps == opts.max_iter) {
        const double gain = inv_z(p) - inv_z_checkpoint;
        if (gain >= 0.5 * static_cast<double>(window) && norm2(p) < 0.5) trace.status = OrbitStatus::converging;
    }
    return trace;
}

Observables observe(const Point& p, const std::vector<int>& alpha, int k)
{
    const cplx u = resonant_monomial(p, alpha);
    return {std::abs(p[0]), u, std::pow(u, k)};
}

InvarianceReport verify_invariance(const GermMap& germ, const BasinParams& params, const InvariantProfile& profile,
                                   const std::vector<Point>& samples)
{
    InvarianceReport rep;
    const GermEvaluator ev(germ);
    Point image(static_cast<std::size_t>(germ.n() + 1));
    for (const auto& p : samples) {
        ev.apply(p, image);
        const auto cond = first_violation(image, params, profile);
        if (cond == BasinCondition::none) {
            ++rep.pass;
        } else {
            ++rep.fail;
            if (rep.witnesses.size() < 10) rep.witnesses.push_back({p, image, cond});
        }
    }
    return rep;
}

InvarianceReport verify_invariance(const GermMap& germ, const BasinParams& params, const InvariantProfile& profile,
                                   int count, std::uint64_t seed)
{
    return verify_invariance(germ, params, profile, sample_basin(params, profile, count, seed));
}

double z_step_constant(const GermMap& germ, const std::vector<Point>& samples, int nu)
{
    const GermEvaluator ev(germ);
    Point image(static_cast<std::size_t>(germ.n() + 1));
    double c = 0.0;
    for (const auto& p : samples) {
        ev.apply(p, image);
        const cplx d = std::pow(image[0], -(nu - 1)) - std::pow(p[0], -(nu - 1)) - 1.0;
        c = std::max(c, std::abs(d));
    }
    return c;
}

Calibration calibrate_epsilons(const GermMap& germ, const BasinParams& params, const InvariantProfile& profile,
                               int samples, std::uint64_t seed)
{
    constexpr double floor = 1e-6;
    const int nu = *profile.nu;
    Calibration cal{params, 0, 0.0, {}};
    for (;;) {
        const auto pts = sample_basin(cal.params, profile, samples, seed);
        cal.last = verify_invariance(germ, cal.params, profile, pts);
        cal.step_constant = z_step_constant(germ, pts, nu);
        const bool margin = cal.params.epsilon_prime * cal.step_constant < std::tan((nu - 1) * cal.params.delta_prime);
        if (cal.last.fail == 0 && margin) return cal;
        const double next_eps = cal.params.epsilon / 2.0;
        const double next_eps_prime = cal.params.epsilon_prime / 2.0;
        if (next_eps < floor || next_eps_prime < floor) {
            std::ostringstream os;
            os << "calibrate_epsilons: floor " << floor << " reached for petal " << to_string(params.petal);
            if (!cal.last.witnesses.empty()) {
                const auto& w = cal.last.witnesses.front();
                os << "; failing sample z=" << w.point[0] << " violates " << to_string(w.violated);
            } else {
                os << "; z-step margin fails (C = " << cal.step_constant << ")";
            }
            throw Error(os.str());
        }
        cal.params.epsilon = next_eps;
        cal.params.epsilon_prime = next_eps_prime;
        ++cal.halvings;
    }
}

std::vector<RecurrenceResidual> recurrence_residuals(const GermMap& germ, const OrbitTrace& trace,
                                                     const InvariantProfile& profile)
{
    if (!profile.nu || !profile.k || !profile.l) throw Error("recurrence_residuals: incomplete profile");
    const int nu = *profile.nu, k = *profile.k, l = *profile.l;
    const GermEvaluator ev(germ);
    Point image(static_cast<std::size_t>(germ.n() + 1));
    std::vector<RecurrenceResidual> out;
    for (const auto& op : trace.points) {
        ev.apply(op.p, image);
        const auto o0 = observe(op.p, profile.alpha, k);
        const auto o1 = observe(image, profile.alpha, k);
        if (op.p[0] == cplx{} || image[0] == cplx{})
            throw Error("recurrence_residuals: z vanishes at step " + std::to_string(op.m));
        if (o0.v == cplx{} || o1.v == cplx{})
            throw Error("recurrence_residuals: v vanishes at step " + std::to_string(op.m));
        const cplx zl = std::pow(op.p[0], l);
        out.push_back({op.m, std::pow(image[0], -(nu - 1)) - std::pow(op.p[0], -(nu - 1)) - 1.0,
                       1.0 / o1.v - 1.0 / o0.v - zl, zl});
    }
    return out;
}

std::string describe(const RateFit& fit)
{
    std::ostringstream os;
    os << (fit.quantity == RateQuantity::z ? "z" : "u") << ' ' << (fit.model == RateModel::power ? "power" : "log");
    return os.str();
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw Error("ls_slope: need at least two points");
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw Error("ls_slope: degenerate abscissae");
    return sxy / sxx;
}

std::vector<RateFit> fit_rates(const OrbitTrace& trace, const InvariantProfile& profile, long min_steps)
{
    if (!profile.nu || !profile.k || !profile.l) throw Error("fit_rates: incomplete profile");
    const int nu = *profile.nu, k = *profile.k, l = *profile.l;
    const long m_hi = trace.points.empty() ? 0 : trace.points.back().m;
    if (m_hi < min_steps) {
        std::ostringstream os;
        os << "fit_rates: trace too short (" << m_hi << " steps, need " << min_steps << ")";
        throw Error(os.str());
    }
    const long m_lo = m_hi / 10;
    std::vector<double> logm, logz, logu, zsum, inv_v;
    for (const auto& op : trace.points) {
        if (op.m <= m_lo || op.m > m_hi) continue;
        const auto o = observe(op.p, profile.alpha, k);
        logm.push_back(std::log(static_cast<double>(op.m)));
        logz.push_back(std::log(o.abs_z));
        logu.push_back(std::log(std::abs(o.u)));
        zsum.push_back(op.z_power_sum);
        inv_v.push_back(1.0 / std::abs(o.v));
    }
    auto make = [&](RateQuantity q, RateModel model, double fitted, double expected) {
        return RateFit{q, model, fitted, expected, std::abs(fitted - expected) / std::abs(expected), m_lo, m_hi};
    };
    std::vector<RateFit> fits;
    fits.push_back(make(RateQuantity::z, RateModel::power, ls_slope(logm, logz), -1.0 / (nu - 1)));
    if (l == nu - 1) {
        if (trace.sum_power != l) throw Error("fit_rates: trace accumulated |z|^" + std::to_string(trace.sum_power)
                                              + " but the log model needs |z|^" + std::to_string(l));
        fits.push_back(make(RateQuantity::u, RateModel::log, ls_slope(zsum, inv_v), 1.0));
    } else {
        const double expected = -(1.0 - static_cast<double>(l) / (nu - 1)) / k;
        fits.push_back(make(RateQuantity::u, RateModel::power, ls_slope(logm, logu), expected));
    }
    return fits;
}

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

void write_orbit_csv(std::ostream& os, const OrbitTrace& trace, const std::vector<int>& alpha, int k, int petal_t)
{
    const double center = 2.0 * std::numbers::pi * (petal_t - 1) / k;
    os << "m,re_z,im_z,abs_z,abs_u,abs_v,arg_u_rel";
    for (std::size_t j = 1; j <= alpha.size(); ++j) os << ",abs_w_" << j;
    os << ",theta\n";
    for (const auto& op : trace.points) {
        const auto o = observe(op.p, alpha, k);
        os << op.m << ',' << format_number(op.p[0].real()) << ',' << format_number(op.p[0].imag()) << ','
           << format_number(o.abs_z) << ',' << format_number(std::abs(o.u)) << ',' << format_number(std::abs(o.v))
           << ',' << format_number(relative_arg(o.u, center));
        for (std::size_t j = 1; j < op.p.size(); ++j) os << ',' << format_number(std::abs(op.p[j]));
        os << ',' << format_number(std::log(o.abs_z) / std::log(std::abs(o.u))) << '\n';
    }
    os << "# status=" << to_string(trace.status) << '\n';
}

} // namespace qpgerm
