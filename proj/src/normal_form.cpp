#include "qpgerm/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace qpgerm {

namespace {

bool is_pure_z(const MultiIndex& m) { return std::all_of(m.w.begin(), m.w.end(), [](int e) { return e == 0; }); }

// z^i w_j exactly (w exponent e_j)
bool is_z_times_wj(const MultiIndex& m, int j)
{
    for (int v = 1; v <= m.n(); ++v)
        if (m.w[static_cast<std::size_t>(v - 1)] != (v == j ? 1 : 0)) return false;
    return true;
}

int alpha_norm(const std::vector<int>& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

cplx principal_root(cplx x, int order) { return std::exp(std::log(x) / static_cast<double>(order)); }

Series divide_by_z(const Series& s)
{
    Series out(s.n(), s.order_cap());
    for (const auto& [idx, c] : s.terms()) {
        if (idx.z < 1) throw Error("blowup: term " + to_string(idx) + " is not divisible by z");
        MultiIndex m = idx;
        m.z -= 1;
        out.add_term(m, c);
    }
    return out;
}

} // namespace

Orders compute_orders(const GermMap& germ)
{
    Orders o;
    for (const auto& [idx, c] : germ.z_component().terms()) {
        if (idx.degree() >= 2 && is_pure_z(idx)) {
            o.nu = idx.z;
            break; // graded order: first hit is the least
        }
    }
    for (int j = 1; j <= germ.n(); ++j) {
        for (const auto& [idx, c] : germ.w_component(j).terms()) {
            if (idx.degree() >= 2 && is_pure_z(idx)) {
                if (!o.mu || idx.z < *o.mu) o.mu = idx.z;
                break;
            }
        }
    }
    // mu absent within order_cap counts as mu >= nu
    o.ultra_resonant = o.nu.has_value() && (!o.mu || *o.mu >= *o.nu);
    o.truncation_limited = !o.nu || !o.mu;
    return o;
}

std::optional<cplx> check_characteristic_direction(const GermMap& germ, double tol)
{
    const auto orders = compute_orders(germ);
    if (!orders.nu) return std::nullopt;
    const auto parts = germ.homogeneous_part(*orders.nu);
    Point v(static_cast<std::size_t>(germ.n() + 1), cplx{});
    v[0] = 1.0;
    const cplx lambda = parts[0].evaluate(v);
    if (std::abs(lambda) <= tol) return std::nullopt;
    for (int j = 1; j <= germ.n(); ++j)
        if (std::abs(parts[static_cast<std::size_t>(j)].evaluate(v)) > tol * std::max(1.0, std::abs(lambda)))
            return std::nullopt;
    return lambda;
}

Separation check_dynamical_separation(const GermMap& germ)
{
    const auto orders = compute_orders(germ);
    if (!orders.nu) throw Error("dynamical separation: order nu is undefined");
    const int nu = *orders.nu;
    Separation sep;
    sep.dynamically_separating = true;
    sep.degenerately_separating = true;
    for (int j = 1; j <= germ.n(); ++j) {
        std::optional<int> r;
        for (const auto& [idx, c] : germ.w_component(j).terms()) {
            if (idx.z >= 1 && is_z_times_wj(idx, j)) {
                r = idx.z;
                break;
            }
        }
        sep.r_js.push_back(r);
        if (r && *r < nu - 1) sep.dynamically_separating = false;
        if (r && *r <= nu - 1) sep.degenerately_separating = false;
    }
    sep.degenerately_separating = sep.degenerately_separating && sep.dynamically_separating;
    return sep;
}

std::optional<int> resonant_block_power(const std::vector<int>& alpha, const std::vector<int>& beta, int j)
{
    return one_resonant_power(alpha, beta, j);
}

ResonantLeading extract_resonant_leading(const GermMap& germ, const std::vector<int>& alpha)
{
    const int n = germ.n();
    if (static_cast<int>(alpha.size()) != n) throw Error("extract_resonant_leading: alpha has wrong length");
    ResonantLeading out;
    out.l_js.assign(static_cast<std::size_t>(n), std::nullopt);
    out.a.assign(static_cast<std::size_t>(n), cplx{});
    out.b.assign(static_cast<std::size_t>(n), cplx{});

    for (int j = 1; j <= n; ++j)
        for (const auto& [idx, c] : germ.w_component(j).terms())
            if (auto kp = resonant_block_power(alpha, idx.w, j); kp && (!out.k || *kp < *out.k)) out.k = kp;

    if (!out.k) {
        out.diagnostics.push_back("no resonant monomial z^m w^(k alpha) w_j found up to order_cap "
                                  + std::to_string(germ.order_cap()) + " (truncation-limited)");
    } else {
        for (int j = 1; j <= n; ++j) {
            for (const auto& [idx, c] : germ.w_component(j).terms()) {
                auto kp = resonant_block_power(alpha, idx.w, j);
                if (kp && *kp == *out.k && (!out.l_js[static_cast<std::size_t>(j - 1)] || idx.z < *out.l_js[static_cast<std::size_t>(j - 1)])) {
                    out.l_js[static_cast<std::size_t>(j - 1)] = idx.z;
                    out.a[static_cast<std::size_t>(j - 1)] = -c;
                }
            }
        }
    }

    const auto orders = compute_orders(germ);
    if (orders.nu) {
        const auto sep = check_dynamical_separation(germ);
        for (int j = 1; j <= n; ++j) {
            const auto& r = sep.r_js[static_cast<std::size_t>(j - 1)];
            if (r) {
                MultiIndex m = MultiIndex::zero(n);
                m.z = *r;
                m.w[static_cast<std::size_t>(j - 1)] = 1;
                out.b[static_cast<std::size_t>(j - 1)] = -germ.w_component(j).coeff(m);
            }
        }
    }

    if (out.k) {
        const bool all_defined = std::all_of(out.l_js.begin(), out.l_js.end(), [](const auto& v) { return v.has_value(); });
        if (!all_defined) {
            out.diagnostics.push_back("some w component has no z^m w^(k alpha) w_j term; separation order undefined");
        } else if (!std::all_of(out.l_js.begin(), out.l_js.end(), [&](const auto& v) { return *v == *out.l_js.front(); })) {
            std::ostringstream os;
            os << "l_j values differ:";
            for (const auto& v : out.l_js) os << ' ' << *v;
            out.diagnostics.push_back(os.str());
        } else if (!orders.nu) {
            out.diagnostics.push_back("order nu undefined; separation order not checked against nu - 1");
        } else if (*out.l_js.front() > *orders.nu - 1) {
            out.diagnostics.push_back("common l_j = " + std::to_string(*out.l_js.front()) + " exceeds nu - 1 = "
                                      + std::to_string(*orders.nu - 1));
        } else {
            out.l = out.l_js.front();
        }
    }
    return out;
}

Attraction compute_A_c_attracting(const Spectrum& spectrum, const std::vector<int>& alpha, const std::vector<cplx>& a,
                                  const std::vector<cplx>& b, double tol)
{
    const auto n = static_cast<std::size_t>(spectrum.n());
    if (alpha.size() != n || a.size() != n || b.size() != n) throw Error("compute_A_c_attracting: length mismatch");
    Attraction out;
    for (std::size_t j = 0; j < n; ++j) {
        const cplx inv = 1.0 / spectrum.lambda(static_cast<int>(j));
        out.A += static_cast<double>(alpha[j]) * a[j] * inv;
        out.c += static_cast<double>(alpha[j]) * b[j] * inv;
    }
    out.nondegenerate = std::abs(out.A) > tol;
    if (out.nondegenerate) {
        out.attracting = true;
        for (std::size_t j = 0; j < n; ++j) {
            const cplx r = a[j] / spectrum.lambda(static_cast<int>(j)) / out.A;
            out.ratios.push_back(r);
            if (!(r.real() > 0.0)) out.attracting = false;
        }
    }
    return out;
}

std::vector<cplx> InvariantProfile::a_over_lambda() const
{
    std::vector<cplx> out;
    for (std::size_t j = 0; j < a.size(); ++j) out.push_back(a[j] / lambdas[j]);
    return out;
}

InvariantProfile compute_profile(const GermMap& germ, const std::vector<int>& alpha)
{
    InvariantProfile p;
    p.alpha = alpha;
    p.lambdas = germ.spectrum().lambdas();
    const auto n = static_cast<std::size_t>(germ.n());
    p.l_js.assign(n, std::nullopt);
    p.r_js.assign(n, std::nullopt);
    p.a.assign(n, cplx{});
    p.b.assign(n, cplx{});

    const auto orders = compute_orders(germ);
    p.nu = orders.nu;
    p.mu = orders.mu;
    p.ultra_resonant = orders.ultra_resonant;
    p.truncation_limited = orders.truncation_limited;
    if (!orders.nu) {
        p.diagnostics.push_back("no pure z^i term in the z component up to order_cap: order nu undefined");
        return p;
    }
    if (!orders.mu) p.diagnostics.push_back("no pure z^i term in any w component up to order_cap: mu taken as >= nu");
    p.char_dir_lambda = check_characteristic_direction(germ);
    if (!p.char_dir_lambda) p.diagnostics.push_back("[1:0:...:0] is not a non-degenerate characteristic direction");

    const auto sep = check_dynamical_separation(germ);
    p.dynamically_separating = sep.dynamically_separating;
    p.degenerately_separating = sep.degenerately_separating;
    p.r_js = sep.r_js;

    const auto lead = extract_resonant_leading(germ, alpha);
    p.k = lead.k;
    p.l_js = lead.l_js;
    p.l = lead.l;
    p.a = lead.a;
    p.b = lead.b;
    p.diagnostics.insert(p.diagnostics.end(), lead.diagnostics.begin(), lead.diagnostics.end());
    if (lead.k) {
        const auto att = compute_A_c_attracting(germ.spectrum(), alpha, p.a, p.b);
        p.A = att.A;
        p.c = att.c;
        p.nondegenerate = att.nondegenerate;
        p.attracting = att.attracting;
    }
    return p;
}

GermMap scale_coordinates(const GermMap& germ, cplx z_scale, const std::vector<cplx>& w_scale)
{
    const int n = germ.n();
    if (static_cast<int>(w_scale.size()) != n) throw Error("scale_coordinates: w_scale has wrong length");
    if (z_scale == cplx{} || std::any_of(w_scale.begin(), w_scale.end(), [](cplx s) { return s == cplx{}; }))
        throw Error("scale_coordinates: zero scale");
    std::vector<cplx> scale{z_scale};
    scale.insert(scale.end(), w_scale.begin(), w_scale.end());
    std::vector<Series> comps;
    for (int s = 0; s <= n; ++s) {
        Series out(n, germ.order_cap());
        for (const auto& [idx, c] : germ.component(s).terms()) {
            cplx f = scale[static_cast<std::size_t>(s)];
            for (int v = 0; v <= n; ++v) f *= std::pow(scale[static_cast<std::size_t>(v)], -idx.exponent(v));
            out.add_term(idx, c * f);
        }
        out.prune();
        // the linear coefficients are invariant; restore them exactly
        for (int v = 0; v <= n; ++v) {
            MultiIndex m = MultiIndex::zero(n);
            if (v == 0)
                m.z = 1;
            else
                m.w[static_cast<std::size_t>(v - 1)] = 1;
            const cplx orig = germ.component(s).coeff(m);
            if (orig != cplx{}) out.add_term(m, orig - out.coeff(m));
        }
        comps.push_back(std::move(out));
    }
    return GermMap(germ.spectrum(), std::move(comps));
}

Rescaled rescale_to_unit_A(const GermMap& germ, const InvariantProfile& profile)
{
    if (!profile.k) throw Error("rescale_to_unit_A: one-resonant order k undefined");
    if (!profile.nondegenerate) throw Error("rescale_to_unit_A: A = 0 (degenerate profile)");
    const int k = *profile.k;
    const int order = k * alpha_norm(profile.alpha);
    const cplx sigma = principal_root(static_cast<double>(k) * profile.A, order);
    std::vector<cplx> ws(static_cast<std::size_t>(germ.n()), sigma);
    return {scale_coordinates(germ, 1.0, ws), sigma};
}

GermMap normalize_parabolic_coefficient(const GermMap& germ)
{
    const auto orders = compute_orders(germ);
    if (!orders.nu) throw Error("normalize_parabolic_coefficient: order nu undefined");
    const int nu = *orders.nu;
    MultiIndex m = MultiIndex::zero(germ.n());
    m.z = nu;
    const cplx c = germ.z_component().coeff(m);
    const cplx sigma = principal_root(-c * static_cast<double>(nu - 1), nu - 1);
    if (std::abs(sigma - 1.0) == 0.0) return germ;
    return scale_coordinates(germ, sigma, std::vector<cplx>(static_cast<std::size_t>(germ.n()), 1.0));
}

std::vector<Series> identity_map(int n, int order_cap)
{
    std::vector<Series> id;
    for (int v = 0; v <= n; ++v) id.push_back(Series::variable(n, order_cap, v));
    return id;
}

std::vector<Series> compose(const std::vector<Series>& outer, const std::vector<Series>& inner)
{
    std::vector<Series> out;
    out.reserve(outer.size());
    for (const auto& s : outer) out.push_back(substitute(s, inner));
    return out;
}

NormalizationStep poincare_dulac_step(const GermMap& germ, int degree, double sd_tol)
{
    const int n = germ.n();
    const int cap = germ.order_cap();
    if (degree < 2 || degree > cap) throw Error("poincare_dulac_step: degree out of range");

    std::vector<Series> h;
    int removed = 0, kept = 0;
    for (int s = 0; s <= n; ++s) {
        Series hs(n, cap);
        const cplx ls = germ.spectrum().component_eigenvalue(s);
        for (const auto& [idx, c] : germ.component(s).terms()) {
            if (idx.degree() != degree) continue;
            const cplx divisor = germ.spectrum().lambda_pow(idx.w) - ls;
            if (std::abs(divisor) > sd_tol) {
                hs.add_term(idx, c / divisor);
                ++removed;
            } else {
                ++kept;
            }
        }
        hs.prune();
        h.push_back(std::move(hs));
    }

    const auto id = identity_map(n, cap);
    std::vector<Series> change;
    for (int s = 0; s <= n; ++s) change.push_back(id[static_cast<std::size_t>(s)] + h[static_cast<std::size_t>(s)]);

    // inverse of id + h by fixed point G = id - h o G; each pass fixes
    // degree - 1 more orders
    std::vector<Series> inverse = id;
    const int passes = cap / (degree - 1) + 2;
    for (int it = 0; it < passes; ++it) {
        const auto hg = compose(h, inverse);
        for (int s = 0; s <= n; ++s) inverse[static_cast<std::size_t>(s)] = id[static_cast<std::size_t>(s)] - hg[static_cast<std::size_t>(s)];
    }

    const auto conj = compose(inverse, compose(germ.components(), change));
    return {GermMap(germ.spectrum(), conj), std::move(change), std::move(inverse), removed, kept};
}

NormalizationStep poincare_dulac_normalize(const GermMap& germ, int max_degree, double sd_tol)
{
    const int n = germ.n();
    const int cap = germ.order_cap();
    if (max_degree > cap) max_degree = cap;
    NormalizationStep total{germ, identity_map(n, cap), identity_map(n, cap), 0, 0};
    for (int d = 2; d <= max_degree; ++d) {
        auto step = poincare_dulac_step(total.germ, d, sd_tol);
        total.change = compose(total.change, step.change);
        total.inverse_change = compose(step.inverse_change, total.inverse_change);
        total.removed += step.removed;
        total.kept += step.kept;
        total.germ = std::move(step.germ);
    }
    return total;
}

GermMap blowup(const GermMap& germ)
{
    const int n = germ.n();
    const int cap = germ.order_cap();
    if (cap < 2) throw Error("blowup: order_cap too small");
    // chart w_j = z w'_j
    std::vector<Series> chart{Series::variable(n, cap, 0)};
    for (int j = 1; j <= n; ++j) {
        MultiIndex m = MultiIndex::zero(n);
        m.z = 1;
        m.w[static_cast<std::size_t>(j - 1)] = 1;
        chart.push_back(Series::monomial(n, cap, m, 1.0));
    }
    const Series z1 = substitute(germ.z_component(), chart);
    const Series quotient = divide_by_z(z1);
    if (std::abs(quotient.constant_term()) == 0.0) throw Error("blowup: z1/z has zero constant term");
    const Series inv = series_inverse(quotient);

    std::vector<Series> comps{z1.truncated(cap - 1)};
    for (int j = 1; j <= n; ++j) {
        const Series wj = divide_by_z(substitute(germ.w_component(j), chart));
        Series out = (wj * inv).truncated(cap - 1);
        out.prune();
        comps.push_back(std::move(out));
    }
    return GermMap(germ.spectrum(), std::move(comps));
}

std::vector<Monomial> offending_monomials(const GermMap& germ, const std::vector<int>& alpha, const ResonantLeading& lead)
{
    std::vector<Monomial> out;
    if (!lead.k) return out;
    for (int j = 1; j <= germ.n(); ++j) {
        const auto& lj = lead.l_js[static_cast<std::size_t>(j - 1)];
        if (!lj) continue;
        for (const auto& [idx, c] : germ.w_component(j).terms()) {
            auto kp = resonant_block_power(alpha, idx.w, j);
            if (kp && *kp > *lead.k && idx.z < *lj) out.push_back({j, idx, c});
        }
    }
    return out;
}

namespace {

// lowest z exponent of z^m w^(k' alpha) w_j per (j, k')
std::map<std::pair<int, int>, int> resonant_support(const GermMap& germ, const std::vector<int>& alpha)
{
    std::map<std::pair<int, int>, int> out;
    for (int j = 1; j <= germ.n(); ++j) {
        for (const auto& [idx, c] : germ.w_component(j).terms()) {
            if (auto kp = resonant_block_power(alpha, idx.w, j)) {
                auto [it, inserted] = out.try_emplace({j, *kp}, idx.z);
                if (!inserted) it->second = std::min(it->second, idx.z);
            }
        }
    }
    return out;
}

bool l_js_equal(const ResonantLeading& lead)
{
    return !lead.l_js.empty() && std::all_of(lead.l_js.begin(), lead.l_js.end(), [&](const auto& v) { return v && v == lead.l_js.front(); });
}

} // namespace

Reduction reduce_to_good_form(const GermMap& germ, const std::vector<int>& alpha, int max_blowups)
{
    const auto orders = compute_orders(germ);
    if (!orders.ultra_resonant) throw Error("reduce_to_good_form: germ is not ultra-resonant");
    if (!check_dynamical_separation(germ).dynamically_separating)
        throw Error("reduce_to_good_form: germ is not dynamically separating");

    Reduction red{normalize_parabolic_coefficient(germ), 0, {}};
    auto lead = extract_resonant_leading(red.germ, alpha);
    if (!lead.k) throw Error("reduce_to_good_form: one-resonant order k undefined (truncation-limited)");
    const int alpha_deg = alpha_norm(alpha);

    for (;;) {
        const auto offending = offending_monomials(red.germ, alpha, lead);
        if (offending.empty()) break;
        if (red.blowups >= max_blowups) {
            std::ostringstream os;
            os << "reduce_to_good_form: " << max_blowups << " blow-ups exhausted; offending monomials:";
            for (const auto& m : offending) os << " [w" << m.component << ": " << to_string(m.index) << "]";
            throw Error(os.str());
        }
        const auto before_support = resonant_support(red.germ, alpha);
        GermMap next = blowup(red.germ);
        ++red.blowups;
        const auto next_lead = extract_resonant_leading(next, alpha);
        const std::string tag = " (blow-up " + std::to_string(red.blowups) + ")";
        red.checks.push_back({"nu invariant" + tag, compute_orders(next).nu == compute_orders(red.germ).nu});
        red.checks.push_back({"k invariant" + tag, next_lead.k == lead.k});
        red.checks.push_back({"l_j equality invariant" + tag, l_js_equal(next_lead) == l_js_equal(lead)});

        // every resonant block with k' <= k keeps its lowest z exponent,
        // shifted by k'|alpha|, and no such block appears from nothing
        bool law = true;
        const auto after_support = resonant_support(next, alpha);
        for (const auto& [key, m] : after_support) {
            if (key.second > *lead.k) continue;
            auto it = before_support.find(key);
            if (it == before_support.end() || m != it->second + key.second * alpha_deg) law = false;
        }
        red.checks.push_back({"no new terms with k' <= k" + tag, law});

        if (!next_lead.k) throw Error("reduce_to_good_form: k lost after blow-up (order_cap too small)");
        red.germ = std::move(next);
        lead = next_lead;
    }
    return red;
}

} // namespace qpgerm
