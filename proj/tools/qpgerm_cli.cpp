// qpgerm: analyze quasi-parabolic one-resonant germs, verify their basins
// numerically, and dump orbit / membership CSVs.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qpgerm/report.hpp"

using namespace qpgerm;

namespace {

struct Loaded {
    GermFile file;
    std::string digest;
};

Loaded load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return {parse_germ(text), fnv1a_hex(text)};
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(e.what());
    }
}

// "a", "a+bi", "a-bi", "bi"
cplx parse_complex(const std::string& s)
{
    const char* p = s.c_str();
    char* end = nullptr;
    const double a = std::strtod(p, &end);
    if (end == p) throw InputError("bad complex number '" + s + "'");
    if (*end == '\0') return {a, 0.0};
    if (*end == 'i' && end[1] == '\0') return {0.0, a};
    const char* q = end;
    const double b = std::strtod(q, &end);
    if (end == q || (*q != '+' && *q != '-') || *end != 'i' || end[1] != '\0')
        throw InputError("bad complex number '" + s + "'");
    return {a, b};
}

Point parse_point(const std::string& s, int n)
{
    Point p;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) p.push_back(parse_complex(item));
    if (static_cast<int>(p.size()) != n + 1)
        throw InputError("point '" + s + "' needs " + std::to_string(n + 1) + " coordinates (z,w_1,...,w_n)");
    return p;
}

std::vector<double> parse_doubles(const std::string& s, std::size_t count, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        out.push_back(std::strtod(item.c_str(), &end));
        if (end == item.c_str() || *end != '\0') throw InputError("bad " + what + " '" + s + "'");
    }
    if (out.size() != count) throw InputError("bad " + what + " '" + s + "'");
    return out;
}

std::ostream& open_out(const std::string& path, std::ofstream& file)
{
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw InputError("cannot write '" + path + "'");
    return file;
}

AnalysisReport require_analysis(const Loaded& in, const AnalyzeOptions& aopts)
{
    auto rep = analyze(in.file, in.digest, aopts);
    if (!rep.theorem_applies) {
        write_analysis(std::cerr, rep, aopts);
        throw Error("hypotheses fail; see the checklist above");
    }
    return rep;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Parabolic basins of quasi-parabolic one-resonant germs"};
    app.require_subcommand(1);

    AnalyzeOptions aopts;
    VerifyOptions vopts;
    std::string germ_path;

    auto add_analyze_flags = [&](CLI::App* cmd) {
        cmd->add_option("germ", germ_path, "Germ file (JSON)")->required();
        cmd->add_option("--nf-order", aopts.nf_order, "Poincare-Dulac normalization order")->capture_default_str();
        cmd->add_option("--degree-bound", aopts.degree_bound, "Resonance enumeration bound on |beta|")
            ->capture_default_str();
        cmd->add_option("--res-tol", aopts.res_tol, "Resonance residual tolerance")->capture_default_str();
        cmd->add_option("--sd-tol", aopts.sd_tol, "Small-divisor cutoff")->capture_default_str();
        cmd->add_option("--max-blowups", aopts.max_blowups, "Blow-up budget of the reducer")->capture_default_str();
        cmd->add_flag("--assert-alpha", aopts.assert_alpha, "Trust alpha, skip resonance enumeration");
    };
    auto add_sample_flags = [&](CLI::App* cmd) {
        cmd->add_option("--samples", vopts.samples, "Samples per petal")->capture_default_str();
        cmd->add_option("--seed", vopts.seed, "Sampler seed")->capture_default_str();
    };

    auto* analyze_cmd = app.add_subcommand("analyze", "Certify, normalize, reduce and report invariants");
    add_analyze_flags(analyze_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "Analyze, then check basin invariance and rates");
    add_analyze_flags(verify_cmd);
    add_sample_flags(verify_cmd);
    verify_cmd->add_option("--max-iter", vopts.max_iter, "Orbit length per petal")->capture_default_str();
    verify_cmd->add_option("--rate-tol", vopts.rate_tol, "Relative tolerance on fitted exponents")
        ->capture_default_str();

    std::string start, csv_path;
    long orbit_iter = 10000;
    int petal_index = 1;
    auto* orbit_cmd = app.add_subcommand("orbit", "Iterate the normalized germ and write the orbit CSV");
    add_analyze_flags(orbit_cmd);
    add_sample_flags(orbit_cmd);
    orbit_cmd->add_option("--start", start, "Start point z,w1,...,wn (a+bi form); default: interior point of --petal");
    orbit_cmd->add_option("--max-iter", orbit_iter, "Iterations")->capture_default_str();
    orbit_cmd->add_option("--petal", petal_index, "Petal index for the default start")->capture_default_str();
    orbit_cmd->add_option("--csv", csv_path, "Output path ('-' for stdout)")->capture_default_str();

    std::string grid = "64x64", window = "-0.5,0.5,-0.5,0.5", axes = "re_w1,re_w2", fix;
    auto* slice_cmd = app.add_subcommand("slice", "Basin membership on a 2D grid slice");
    add_analyze_flags(slice_cmd);
    add_sample_flags(slice_cmd);
    slice_cmd->add_option("--grid", grid, "Grid size WxH")->capture_default_str();
    slice_cmd->add_option("--window", window, "xmin,xmax,ymin,ymax")->capture_default_str();
    slice_cmd->add_option("--axes", axes, "Varying coordinates, from re_z,im_z,re_wj,im_wj")->capture_default_str();
    slice_cmd->add_option("--fix", fix, "Base point z,w1,...,wn; default: witness point of petal 1");
    slice_cmd->add_option("--csv", csv_path, "Output path ('-' for stdout)")->capture_default_str();

    std::string example_name, example_out;
    int example_cap = 8;
    auto* example_cmd = app.add_subcommand("example", "Write a reference germ file (E1, E2, E3)");
    example_cmd->add_option("name", example_name, "E1, E2 or E3")->required();
    example_cmd->add_option("--order-cap", example_cap, "Truncation order")->capture_default_str();
    example_cmd->add_option("-o,--out", example_out, "Output path ('-' for stdout)")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*example_cmd) {
            GermFile f = make_reference_germ(parse_reference_name(example_name), example_cap);
            std::ofstream file;
            open_out(example_out, file) << to_json(f);
            return exit_ok;
        }

        const Loaded in = load(germ_path);

        if (*analyze_cmd) {
            const auto rep = analyze(in.file, in.digest, aopts);
            write_analysis(std::cout, rep, aopts);
            return rep.theorem_applies ? exit_ok : exit_failure;
        }

        if (*verify_cmd) {
            const auto rep = analyze(in.file, in.digest, aopts);
            write_analysis(std::cout, rep, aopts);
            if (!rep.theorem_applies) return exit_failure;
            const auto ver = verify(rep, vopts);
            write_verification(std::cout, ver, vopts);
            return ver.passed ? exit_ok : exit_failure;
        }

        const auto rep = require_analysis(in, aopts);
        const auto& germ = *rep.good_form;
        const auto& profile = rep.good_profile;

        if (*orbit_cmd) {
            Point p;
            if (!start.empty()) {
                p = parse_point(start, germ.n());
            } else {
                const auto params = calibrated_params(rep, vopts.samples, vopts.seed);
                if (petal_index < 1 || petal_index > static_cast<int>(params.size()))
                    throw InputError("--petal out of range 1.." + std::to_string(params.size()));
                p = interior_point(params[static_cast<std::size_t>(petal_index - 1)], profile);
            }
            IterateOptions io;
            io.max_iter = orbit_iter;
            io.thin_stride = std::max(1L, orbit_iter / 10000);
            io.nu = *profile.nu;
            io.sum_power = *profile.l;
            const auto trace = iterate(germ, p, io);
            std::ofstream file;
            write_orbit_csv(open_out(csv_path, file), trace, profile.alpha, *profile.k,
                            start.empty() ? petal_index : 1);
            return exit_ok;
        }

        if (*slice_cmd) {
            SliceSpec spec;
            const auto x = grid.find('x');
            if (x == std::string::npos) throw InputError("bad --grid '" + grid + "'");
            spec.width = std::atoi(grid.substr(0, x).c_str());
            spec.height = std::atoi(grid.substr(x + 1).c_str());
            const auto win = parse_doubles(window, 4, "--window");
            spec.x_min = win[0];
            spec.x_max = win[1];
            spec.y_min = win[2];
            spec.y_max = win[3];
            const auto comma = axes.find(',');
            if (comma == std::string::npos) throw InputError("bad --axes '" + axes + "'");
            spec.x_axis = axes.substr(0, comma);
            spec.y_axis = axes.substr(comma + 1);
            const auto params = calibrated_params(rep, vopts.samples, vopts.seed);
            spec.base = fix.empty() ? canonical_witness(params.front(), profile) : parse_point(fix, germ.n());
            std::ofstream file;
            write_slice_csv(open_out(csv_path, file), germ, profile, params, spec);
            return exit_ok;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_ok;
}
