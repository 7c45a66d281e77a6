#include "qpgerm/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace qpgerm {

namespace {

std::string num(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
    return buf;
}

std::string ints(const std::vector<int>& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : "undefined"; }

std::string yes_no(bool b) { return b ? "true" : "false"; }

// key = value  [annotation]
void line(std::ostream& os, const std::string& key, const std::string& value, const std::string& note = {})
{
    os << key << " = " << value;
    if (!note.empty()) os << "  [" << note << ']';
    os << '\n';
}

std::vector<ChecklistItem> make_checklist(const OneResonanceCertificate& cert, const InvariantProfile& p)
{
    return {
        {"one-resonant", cert.holds()},
        {"ultra-resonant", p.ultra_resonant},
        {"characteristic direction", p.char_dir_lambda.has_value()},
        {"dynamically separating", p.dynamically_separating},
        {"degenerately separating", p.degenerately_separating},
        {"l defined and <= nu-1", p.l.has_value()},
        {"nondegenerate", p.nondegenerate},
        {"attracting", p.attracting},
    };
}

} // namespace

std::string format_complex(cplx c)
{
    const double im = c.imag() == 0.0 ? 0.0 : c.imag();
    return num(c.real()) + (im < 0 ? "-" : "+") + num(std::abs(im)) + "i";
}

AnalysisReport analyze(const GermFile& file, const std::string& digest, const AnalyzeOptions& opts)
{
    AnalysisReport rep;
    rep.digest = digest;
    rep.n = file.germ.n();
    rep.order_cap = file.germ.order_cap();
    rep.alpha = file.alpha;

    ResonanceOptions ropts;
    ropts.res_tol = opts.res_tol;
    rep.certificate = opts.assert_alpha ? assert_one_resonance(file.germ.spectrum(), file.alpha)
                                        : certify_one_resonance(file.germ.spectrum(), file.alpha, opts.degree_bound, ropts);

    GermMap normal = file.germ;
    rep.nf_order = std::min(opts.nf_order, file.germ.order_cap());
    if (rep.nf_order >= 2) {
        auto step = poincare_dulac_normalize(file.germ, rep.nf_order, opts.sd_tol);
        rep.nf_removed = step.removed;
        rep.nf_kept = step.kept;
        normal = std::move(step.germ);
    }

    std::optional<GermMap> reduced;
    try {
        auto red = reduce_to_good_form(normal, file.alpha, opts.max_blowups);
        rep.blowups = red.blowups;
        rep.reduction_checks = red.checks;
        reduced = std::move(red.germ);
    } catch (const Error& e) {
        rep.reduction_error = e.what();
    }

    rep.profile = compute_profile(reduced ? *reduced : normal, file.alpha);
    rep.checklist = make_checklist(rep.certificate, rep.profile);
    rep.theorem_applies = reduced.has_value()
                          && std::all_of(rep.checklist.begin(), rep.checklist.end(),
                                         [](const ChecklistItem& c) { return c.holds; });
    if (reduced && rep.profile.k && rep.profile.nondegenerate) {
        auto scaled = rescale_to_unit_A(*reduced, rep.profile);
        rep.sigma = scaled.sigma;
        rep.good_profile = compute_profile(scaled.germ, file.alpha);
        rep.good_form = std::move(scaled.germ);
    }
    return rep;
}

bool PetalVerification::passed(double rate_tol) const
{
    if (error || too_short) return false;
    if (invariance.fail != 0 || invariance.pass == 0 || cross_members != 0) return false;
    return std::all_of(rates.begin(), rates.end(), [&](const RateFit& f) { return f.rel_error <= rate_tol; });
}

std::vector<BasinParams> calibrated_params(const AnalysisReport& analysis, int samples, std::uint64_t seed)
{
    if (!analysis.theorem_applies || !analysis.good_form) throw Error("calibrated_params: hypotheses do not hold");
    std::vector<BasinParams> out;
    for (const auto& petal : petal_list(analysis.good_profile)) {
        const auto params = choose_params(analysis.good_profile, petal);
        out.push_back(calibrate_epsilons(*analysis.good_form, params, analysis.good_profile, samples, seed).params);
    }
    return out;
}

VerificationReport verify(const AnalysisReport& analysis, const VerifyOptions& opts)
{
    if (!analysis.theorem_applies || !analysis.good_form) throw Error("verify: hypotheses do not hold");
    const GermMap& germ = *analysis.good_form;
    const InvariantProfile& profile = analysis.good_profile;
    VerificationReport rep;

    for (const auto& petal : petal_list(profile)) {
        PetalVerification pv;
        pv.petal = petal;
        pv.params = choose_params(profile, petal);
        try {
            auto cal = calibrate_epsilons(germ, pv.params, profile, opts.samples, opts.seed);
            pv.params = cal.params;
            pv.halvings = cal.halvings;
            pv.step_constant = cal.step_constant;
            pv.invariance = cal.last;
        } catch (const Error& e) {
            pv.error = e.what();
        }
        rep.petals.push_back(std::move(pv));
    }

    for (std::size_t i = 0; i < rep.petals.size(); ++i) {
        auto& pv = rep.petals[i];
        if (pv.error) continue;
        if (rep.petals.size() > 1) {
            const auto pts = sample_basin(pv.params, profile, opts.samples, opts.seed);
            for (std::size_t j = 0; j < rep.petals.size(); ++j) {
                if (j == i || rep.petals[j].error) continue;
                for (const auto& p : pts) {
                    ++pv.cross_tested;
                    if (membership(p, rep.petals[j].params, profile)) ++pv.cross_members;
                }
            }
        }

        IterateOptions io;
        io.max_iter = opts.max_iter;
        io.thin_stride = std::max(1L, opts.max_iter / 20000);
        io.nu = *profile.nu;
        io.sum_power = *profile.l;
        try {
            const auto trace = iterate(germ, interior_point(pv.params, profile), io);
            pv.orbit_status = trace.status;
            pv.orbit_steps = trace.steps;
            if (trace.steps < opts.min_rate_steps) {
                pv.too_short = true;
            } else {
                pv.rates = fit_rates(trace, profile, opts.min_rate_steps);
            }
        } catch (const Error& e) {
            pv.error = e.what();
        }
    }

    rep.passed = !rep.petals.empty() && std::all_of(rep.petals.begin(), rep.petals.end(), [&](const auto& pv) {
        return pv.passed(opts.rate_tol);
    });
    return rep;
}

void write_analysis(std::ostream& os, const AnalysisReport& rep, const AnalyzeOptions& opts)
{
    const auto& cert = rep.certificate;
    const auto& p = rep.profile;
    os << "# germ analysis\n";
    line(os, "input.digest", "fnv1a:" + rep.digest);
    line(os, "input.n", std::to_string(rep.n));
    line(os, "input.order_cap", std::to_string(rep.order_cap));
    line(os, "input.alpha", ints(rep.alpha));

    os << "\n# one-resonance certificate\n";
    const std::string cert_note = cert.verdict == CertificateVerdict::asserted
                                      ? "asserted by flag, no enumeration"
                                      : "enumeration 2 <= |beta| <= " + std::to_string(cert.degree_bound)
                                            + ", res_tol " + num(opts.res_tol);
    line(os, "certificate.verdict", to_string(cert.verdict), cert_note);
    line(os, "certificate.alpha_unit_residual", num(cert.alpha_unit_residual), "|lambda^alpha - 1|");
    line(os, "certificate.relations", std::to_string(cert.relations.size()));
    for (std::size_t i = 0; i < cert.relations.size(); ++i) {
        const auto& r = cert.relations[i];
        line(os, "certificate.relation." + std::to_string(i + 1),
             "s=" + std::to_string(r.s) + " beta=" + ints(r.beta) + " residual=" + num(r.residual));
    }
    if (cert.witness)
        line(os, "certificate.witness", "s=" + std::to_string(cert.witness->s) + " beta=" + ints(cert.witness->beta),
             "relation not of the form k alpha + e_s");

    os << "\n# normalization\n";
    line(os, "normal_form.order", std::to_string(rep.nf_order), "small-divisor cutoff " + num(opts.sd_tol));
    line(os, "normal_form.removed", std::to_string(rep.nf_removed));
    line(os, "normal_form.kept", std::to_string(rep.nf_kept));
    line(os, "reduction.blowups", std::to_string(rep.blowups), "max " + std::to_string(opts.max_blowups));
    for (const auto& c : rep.reduction_checks) line(os, "reduction.check", c.name + ": " + yes_no(c.holds));
    if (rep.reduction_error) line(os, "reduction.error", *rep.reduction_error);

    os << "\n# invariants\n";
    line(os, "profile.nu", opt_int(p.nu), "exact");
    line(os, "profile.mu", opt_int(p.mu), p.mu ? "exact" : "not seen up to order_cap");
    line(os, "profile.ultra_resonant", yes_no(p.ultra_resonant), "exact");
    line(os, "profile.char_direction_lambda", p.char_dir_lambda ? format_complex(*p.char_dir_lambda) : "none",
         "nonzero test tol 1e-12");
    line(os, "profile.k", opt_int(p.k), "exact");
    for (std::size_t j = 0; j < p.l_js.size(); ++j)
        line(os, "profile.l_" + std::to_string(j + 1), opt_int(p.l_js[j]), "exact");
    line(os, "profile.l", opt_int(p.l), "exact");
    for (std::size_t j = 0; j < p.r_js.size(); ++j)
        line(os, "profile.r_" + std::to_string(j + 1), opt_int(p.r_js[j]), "exact");
    for (std::size_t j = 0; j < p.a.size(); ++j) {
        line(os, "profile.a_" + std::to_string(j + 1), format_complex(p.a[j]), "coefficient, double precision");
        line(os, "profile.b_" + std::to_string(j + 1), format_complex(p.b[j]), "coefficient, double precision");
    }
    line(os, "profile.A", format_complex(p.A), "computed, zero test tol 1e-12");
    line(os, "profile.c", format_complex(p.c), "computed");
    if (rep.good_form) {
        const auto& g = rep.good_profile;
        line(os, "rescale.sigma", format_complex(rep.sigma), "w' = sigma w");
        line(os, "rescale.A", format_complex(g.A), "target 1/k, tol 1e-8");
        line(os, "rescale.kA", format_complex(static_cast<double>(g.k.value_or(1)) * g.A), "target 1");
    }
    for (const auto& d : p.diagnostics) line(os, "profile.diagnostic", d);

    os << "\n# hypotheses\n";
    for (const auto& c : rep.checklist) line(os, "checklist." + c.name, yes_no(c.holds));
    line(os, "verdict.theorem_applies", yes_no(rep.theorem_applies), "all checklist items true");
}

void write_verification(std::ostream& os, const VerificationReport& rep, const VerifyOptions& opts)
{
    os << "\n# verification\n";
    line(os, "verify.samples", std::to_string(opts.samples));
    line(os, "verify.seed", std::to_string(opts.seed));
    line(os, "verify.max_iter", std::to_string(opts.max_iter));
    line(os, "verify.rate_tol", num(opts.rate_tol), "relative");
    line(os, "verify.petals", std::to_string(rep.petals.size()));
    int idx = 0;
    for (const auto& pv : rep.petals) {
        const std::string k = "petal." + std::to_string(++idx) + ".";
        const auto& bp = pv.params;
        line(os, k + "id", to_string(pv.petal));
        line(os, k + "case", to_string(bp.basin_case));
        line(os, k + "epsilon", num(bp.epsilon), "calibrated, " + std::to_string(pv.halvings) + " halvings");
        line(os, k + "epsilon_prime", num(bp.epsilon_prime), "calibrated");
        line(os, k + "delta", num(bp.delta), "chosen");
        line(os, k + "delta_prime", num(bp.delta_prime), "chosen");
        line(os, k + "beta", num(bp.beta), "chosen");
        line(os, k + "gamma", num(bp.gamma), "chosen");
        line(os, k + "z_step_constant", num(pv.step_constant), "sup over samples");
        if (pv.error) {
            line(os, k + "error", *pv.error);
            line(os, k + "pass", "false");
            continue;
        }
        line(os, k + "invariance", std::to_string(pv.invariance.pass) + "/"
                                        + std::to_string(pv.invariance.pass + pv.invariance.fail),
             "required 1.0");
        for (const auto& w : pv.invariance.witnesses)
            line(os, k + "invariance.violation", "z=" + format_complex(w.point[0]) + " " + to_string(w.violated));
        if (pv.cross_tested > 0)
            line(os, k + "cross_members", std::to_string(pv.cross_members) + "/" + std::to_string(pv.cross_tested),
                 "required 0");
        line(os, k + "orbit.status", to_string(pv.orbit_status));
        line(os, k + "orbit.steps", std::to_string(pv.orbit_steps));
        if (pv.too_short) {
            line(os, k + "rates", "too-short", "need " + std::to_string(opts.min_rate_steps) + " steps");
        }
        for (const auto& f : pv.rates) {
            const std::string rk = k + "rate." + (f.quantity == RateQuantity::z ? "z" : "u") + ".";
            line(os, rk + "model", f.model == RateModel::power ? "power" : "log");
            line(os, rk + "fitted", num(f.fitted_exponent),
                 "least squares over m in (" + std::to_string(f.m_lo) + ", " + std::to_string(f.m_hi) + "]");
            line(os, rk + "expected", num(f.expected_exponent), "closed form");
            line(os, rk + "rel_error", num(f.rel_error), "tol " + num(opts.rate_tol));
        }
        line(os, k + "pass", yes_no(pv.passed(opts.rate_tol)));
    }
    line(os, "verdict.verified", yes_no(rep.passed));
}

namespace {

// (variable index, imaginary part?) for an axis name
std::pair<int, bool> parse_axis(const std::string& name, int n)
{
    if (name.size() < 4 || (name.rfind("re_", 0) != 0 && name.rfind("im_", 0) != 0))
        throw InputError("slice: bad axis name '" + name + "'");
    const bool imag = name[0] == 'i';
    const std::string var = name.substr(3);
    if (var == "z") return {0, imag};
    if (var.size() >= 2 && var[0] == 'w') {
        int j = 0;
        try {
            j = std::stoi(var.substr(1));
        } catch (const std::exception&) {
            j = 0;
        }
        if (j >= 1 && j <= n) return {j, imag};
    }
    throw InputError("slice: bad axis name '" + name + "'");
}

} // namespace

void write_slice_csv(std::ostream& os, const GermMap& germ, const InvariantProfile& profile,
                     const std::vector<BasinParams>& params, const SliceSpec& spec)
{
    const int n = germ.n();
    if (spec.width < 1 || spec.height < 1) throw InputError("slice: grid must be at least 1x1");
    if (!(spec.x_max > spec.x_min) || !(spec.y_max > spec.y_min)) throw InputError("slice: degenerate window");
    if (static_cast<int>(spec.base.size()) != n + 1) throw InputError("slice: base point has wrong dimension");
    const auto ax = parse_axis(spec.x_axis, n);
    const auto ay = parse_axis(spec.y_axis, n);
    if (ax == ay) throw InputError("slice: the two axes coincide");

    auto set = [](Point& p, std::pair<int, bool> axis, double v) {
        auto& c = p[static_cast<std::size_t>(axis.first)];
        c = axis.second ? cplx{c.real(), v} : cplx{v, c.imag()};
    };
    auto cell = [](double lo, double hi, int count, int i) { return lo + (hi - lo) * (i + 0.5) / count; };

    os << "ix,iy,x,y,petal,re_z,im_z,abs_u\n";
    for (int iy = 0; iy < spec.height; ++iy) {
        for (int ix = 0; ix < spec.width; ++ix) {
            const double x = cell(spec.x_min, spec.x_max, spec.width, ix);
            const double y = cell(spec.y_min, spec.y_max, spec.height, iy);
            Point p = spec.base;
            set(p, ax, x);
            set(p, ay, y);
            int label = 0;
            for (std::size_t i = 0; i < params.size() && label == 0; ++i)
                if (membership(p, params[i], profile)) label = static_cast<int>(i) + 1;
            os << ix << ',' << iy << ',' << format_number(x) << ',' << format_number(y) << ',' << label << ','
               << format_number(p[0].real()) << ',' << format_number(p[0].imag()) << ','
               << format_number(std::abs(resonant_monomial(p, profile.alpha))) << '\n';
        }
    }
}

} // namespace qpgerm
