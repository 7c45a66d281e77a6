#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpgerm/report.hpp"

namespace py = pybind11;
using namespace qpgerm;

namespace {

py::dict relation_dict(const ResonanceRelation& r)
{
    py::dict d;
    d["s"] = r.s;
    d["beta"] = r.beta;
    d["residual"] = r.residual;
    return d;
}

py::dict profile_dict(const InvariantProfile& p)
{
    py::dict d;
    d["alpha"] = p.alpha;
    d["nu"] = p.nu;
    d["mu"] = p.mu;
    d["k"] = p.k;
    d["l"] = p.l;
    d["l_js"] = p.l_js;
    d["r_js"] = p.r_js;
    d["a"] = p.a;
    d["b"] = p.b;
    d["A"] = p.A;
    d["c"] = p.c;
    d["ultra_resonant"] = p.ultra_resonant;
    d["dynamically_separating"] = p.dynamically_separating;
    d["degenerately_separating"] = p.degenerately_separating;
    d["nondegenerate"] = p.nondegenerate;
    d["attracting"] = p.attracting;
    d["char_dir_lambda"] = p.char_dir_lambda;
    d["diagnostics"] = p.diagnostics;
    return d;
}

GermFile reference(const std::string& name, int order_cap)
{
    return make_reference_germ(parse_reference_name(name), order_cap);
}

AnalysisReport run_analysis(const GermFile& g, int nf_order, int degree_bound, double res_tol, int max_blowups,
                            bool assert_alpha)
{
    AnalyzeOptions o;
    o.nf_order = nf_order;
    o.degree_bound = degree_bound;
    o.res_tol = res_tol;
    o.max_blowups = max_blowups;
    o.assert_alpha = assert_alpha;
    return analyze(g, fnv1a_hex(to_json(g)), o);
}

} // namespace

PYBIND11_MODULE(_qpgerm, m)
{
    m.doc() = "Quasi-parabolic one-resonant germs: normal forms, basin regions and orbits";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

    py::class_<GermFile>(m, "Germ")
        .def_static("from_json", [](const std::string& text) { return parse_germ(text); }, py::arg("text"))
        .def_static("reference", &reference, py::arg("name"), py::arg("order_cap") = 8)
        .def("to_json", [](const GermFile& g) { return to_json(g); })
        .def_property_readonly("n", [](const GermFile& g) { return g.germ.n(); })
        .def_property_readonly("order_cap", [](const GermFile& g) { return g.germ.order_cap(); })
        .def_property_readonly("alpha", [](const GermFile& g) { return g.alpha; })
        .def_property_readonly("lambdas", [](const GermFile& g) { return g.germ.spectrum().lambdas(); })
        .def("evaluate", [](const GermFile& g, const Point& p) {
            if (static_cast<int>(p.size()) != g.germ.n() + 1) throw InputError("point has wrong dimension");
            return g.germ.evaluate(p);
        }, py::arg("point"));

    m.def("find_resonances", [](const std::vector<double>& theta, int degree_bound, double res_tol) {
        ResonanceOptions o;
        o.res_tol = res_tol;
        py::list out;
        for (const auto& r : find_resonances(Spectrum(theta), degree_bound, o)) out.append(relation_dict(r));
        return out;
    }, py::arg("theta"), py::arg("degree_bound"), py::arg("res_tol") = 1e-9);

    m.def("certify_one_resonance", [](const std::vector<double>& theta, const std::vector<int>& alpha, int degree_bound,
                                      double res_tol) {
        ResonanceOptions o;
        o.res_tol = res_tol;
        const auto cert = certify_one_resonance(Spectrum(theta), alpha, degree_bound, o);
        py::dict d;
        d["verdict"] = to_string(cert.verdict);
        d["alpha_unit_residual"] = cert.alpha_unit_residual;
        py::list rels;
        for (const auto& r : cert.relations) rels.append(relation_dict(r));
        d["relations"] = rels;
        d["witness"] = cert.witness ? py::object(relation_dict(*cert.witness)) : py::none();
        return d;
    }, py::arg("theta"), py::arg("alpha"), py::arg("degree_bound"), py::arg("res_tol") = 1e-9);

    py::class_<AnalysisReport>(m, "Analysis")
        .def_readonly("theorem_applies", &AnalysisReport::theorem_applies)
        .def_readonly("blowups", &AnalysisReport::blowups)
        .def_property_readonly("verdict", [](const AnalysisReport& r) { return to_string(r.certificate.verdict); })
        .def_property_readonly("profile", [](const AnalysisReport& r) { return profile_dict(r.profile); })
        .def_property_readonly("checklist", [](const AnalysisReport& r) {
            py::dict d;
            for (const auto& c : r.checklist) d[py::str(c.name)] = c.holds;
            return d;
        })
        .def_property_readonly("petals", [](const AnalysisReport& r) {
            py::list out;
            if (!r.good_form) return out;
            for (const auto& p : petal_list(r.good_profile)) out.append(py::make_tuple(p.t, p.s));
            return out;
        })
        .def("report", [](const AnalysisReport& r) {
            std::ostringstream os;
            write_analysis(os, r, {});
            return os.str();
        })
        .def("verify", [](const AnalysisReport& r, int samples, std::uint64_t seed, long max_iter, double rate_tol) {
            VerifyOptions o;
            o.samples = samples;
            o.seed = seed;
            o.max_iter = max_iter;
            o.rate_tol = rate_tol;
            const auto v = verify(r, o);
            std::ostringstream os;
            write_verification(os, v, o);
            return py::make_tuple(v.passed, os.str());
        }, py::arg("samples") = 1000, py::arg("seed") = 1, py::arg("max_iter") = 100000, py::arg("rate_tol") = 0.05)
        .def("orbit_csv", [](const AnalysisReport& r, std::optional<Point> start, long max_iter, int petal) {
            if (!r.theorem_applies || !r.good_form) throw Error("orbit: hypotheses do not hold");
            const auto& prof = r.good_profile;
            if (!start) {
                const auto params = calibrated_params(r, 1000, 1);
                if (petal < 1 || petal > static_cast<int>(params.size())) throw InputError("petal out of range");
                start = interior_point(params[static_cast<std::size_t>(petal - 1)], prof);
            }
            IterateOptions io;
            io.max_iter = max_iter;
            io.thin_stride = std::max(1L, max_iter / 10000);
            io.nu = *prof.nu;
            io.sum_power = *prof.l;
            std::ostringstream os;
            write_orbit_csv(os, iterate(*r.good_form, *start, io), prof.alpha, *prof.k, petal);
            return os.str();
        }, py::arg("start") = py::none(), py::arg("max_iter") = 10000, py::arg("petal") = 1);

    m.def("analyze", &run_analysis, py::arg("germ"), py::arg("nf_order") = 6, py::arg("degree_bound") = 6,
          py::arg("res_tol") = 1e-9, py::arg("max_blowups") = 16, py::arg("assert_alpha") = false);
}
