#include "qpgerm/germ_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace qpgerm {

using nlohmann::json;

namespace {

std::string line_col(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

const json& require(const json& obj, const char* key, const std::string& path)
{
    if (!obj.is_object()) throw InputError("field '" + path + "': expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError("missing field '" + (path.empty() ? "" : path + ".") + key + "'");
    return *it;
}

int as_int(const json& v, const std::string& path)
{
    if (!v.is_number_integer()) throw InputError("field '" + path + "': expected an integer");
    return v.get<int>();
}

double as_double(const json& v, const std::string& path)
{
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        double out = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        if (ec == std::errc{} && ptr == s.data() + s.size()) return out;
    }
    throw InputError("field '" + path + "': expected a decimal number");
}

std::string shortest(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

std::string component_name(int s) { return s == 0 ? "z1" : "w" + std::to_string(s); }

} // namespace

GermFile parse_germ(const std::string& text, const SpectrumLimits& limits)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError("malformed germ file at " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
    }
    const int n = as_int(require(doc, "n", ""), "n");
    if (n < 1) throw InputError("field 'n': must be positive");
    const int cap = as_int(require(doc, "order_cap", ""), "order_cap");
    if (cap < 1) throw InputError("field 'order_cap': must be positive");

    const json& angles = require(doc, "lambda_angles", "");
    if (!angles.is_array() || static_cast<int>(angles.size()) != n)
        throw InputError("field 'lambda_angles': expected an array of n decimal strings");
    std::vector<double> theta;
    for (std::size_t j = 0; j < angles.size(); ++j)
        theta.push_back(as_double(angles[j], "lambda_angles[" + std::to_string(j) + "]"));

    const json& jalpha = require(doc, "alpha", "");
    if (!jalpha.is_array() || static_cast<int>(jalpha.size()) != n)
        throw InputError("field 'alpha': expected an array of n non-negative integers");
    std::vector<int> alpha;
    for (std::size_t j = 0; j < jalpha.size(); ++j) {
        const int a = as_int(jalpha[j], "alpha[" + std::to_string(j) + "]");
        if (a < 0) throw InputError("field 'alpha[" + std::to_string(j) + "]': must be non-negative");
        alpha.push_back(a);
    }

    std::optional<Spectrum> spectrum;
    try {
        spectrum.emplace(theta, limits);
    } catch (const Error& e) {
        throw InputError(std::string("field 'lambda_angles': ") + e.what());
    }

    const json& comps = require(doc, "components", "");
    std::vector<Series> series;
    for (int s = 0; s <= n; ++s) {
        const std::string name = component_name(s);
        const json& list = require(comps, name.c_str(), "components");
        const std::string base = "components." + name;
        if (!list.is_array()) throw InputError("field '" + base + "': expected an array of terms");
        Series ser(n, cap);
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string tp = base + "[" + std::to_string(i) + "]";
            const json& t = list[i];
            const double re = as_double(require(t, "re", tp), tp + ".re");
            const double im = as_double(require(t, "im", tp), tp + ".im");
            const int ze = as_int(require(t, "z_exp", tp), tp + ".z_exp");
            const json& we = require(t, "w_exp", tp);
            if (!we.is_array() || static_cast<int>(we.size()) != n)
                throw InputError("field '" + tp + ".w_exp': expected n exponents");
            MultiIndex m(ze, {});
            for (std::size_t j = 0; j < we.size(); ++j) m.w.push_back(as_int(we[j], tp + ".w_exp"));
            if (m.z < 0 || std::any_of(m.w.begin(), m.w.end(), [](int e) { return e < 0; }))
                throw InputError("field '" + tp + "': negative exponent");
            if (m.degree() > cap) throw InputError("field '" + tp + "': degree exceeds order_cap");
            ser.add_term(m, {re, im});
        }
        ser.prune();
        series.push_back(std::move(ser));
    }
    try {
        return GermFile{GermMap(std::move(*spectrum), std::move(series)), std::move(alpha)};
    } catch (const Error& e) {
        throw InputError(std::string("components: ") + e.what());
    }
}

GermFile read_germ_file(const std::filesystem::path& path, const SpectrumLimits& limits)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open germ file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_germ(ss.str(), limits);
}

std::string to_json(const GermFile& file)
{
    const GermMap& g = file.germ;
    json doc = json::object();
    doc["n"] = g.n();
    doc["order_cap"] = g.order_cap();
    json angles = json::array();
    for (double t : g.spectrum().theta()) angles.push_back(shortest(t));
    doc["lambda_angles"] = angles;
    doc["alpha"] = file.alpha;
    json comps = json::object();
    for (int s = 0; s <= g.n(); ++s) {
        json list = json::array();
        for (const auto& [idx, c] : g.component(s).terms())
            list.push_back({{"re", c.real()}, {"im", c.imag()}, {"z_exp", idx.z}, {"w_exp", idx.w}});
        comps[component_name(s)] = list;
    }
    doc["components"] = comps;
    return doc.dump(2) + "\n";
}

void write_germ_file(const std::filesystem::path& path, const GermFile& file)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << to_json(file);
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::vector<double> golden_pair_angles()
{
    const double t1 = (3.0 - std::sqrt(5.0)) / 2.0;
    return {t1, 1.0 - t1};
}

GermFile make_reference_germ(ReferenceGerm which, int order_cap)
{
    Spectrum spec(golden_pair_angles());
    const int n = 2;
    std::vector<Series> comps = linear_components(spec, order_cap);
    comps[0].add_term({2, {0, 0}}, -1.0);
    const int z_exp = which == ReferenceGerm::E2 ? 1 : 0;
    const int power = which == ReferenceGerm::E3 ? 2 : 1;
    for (int j = 1; j <= n; ++j) {
        std::vector<int> w{power, power};
        w[static_cast<std::size_t>(j - 1)] += 1;
        comps[static_cast<std::size_t>(j)].add_term({z_exp, w}, -spec.lambda(j - 1) / 2.0);
    }
    for (auto& c : comps) c.prune();
    return GermFile{GermMap(spec, std::move(comps)), {1, 1}};
}

ReferenceGerm parse_reference_name(const std::string& name)
{
    if (name == "E1" || name == "e1") return ReferenceGerm::E1;
    if (name == "E2" || name == "e2") return ReferenceGerm::E2;
    if (name == "E3" || name == "e3") return ReferenceGerm::E3;
    throw InputError("unknown reference germ '" + name + "' (expected E1, E2 or E3)");
}

} // namespace qpgerm
