#pragma once

#include <json.hpp>

#include <complex>
#include <string>
#include <vector>

#include "bivar.hpp"
#include "fill.hpp"
#include "lab.hpp"
#include "measure.hpp"
#include "rootmodel.hpp"
#include "zfactor.hpp"

namespace dehnfill {

using ojson = nlohmann::ordered_json;

inline ojson coeffs_json(const UniIntPoly& f) {
    ojson a = ojson::array();
    for (const auto& c : f.coeffs()) a.push_back(to_decimal(c));
    return a;
}

inline ojson exponent_json(const Exponent& e) { return ojson::array({e.i, e.j}); }

inline ojson complex_json(std::complex<double> z) { return ojson::array({z.real(), z.imag()}); }

inline ojson to_json(const NewtonPolygon& np) {
    ojson j;
    auto& corners = j["corners"] = ojson::array();
    for (const auto& c : np.corners) corners.push_back(exponent_json(c));
    auto& edges = j["edges"] = ojson::array();
    for (const auto& e : np.edges) {
        edges.push_back({{"from", exponent_json(e.from)},
                         {"to", exponent_json(e.to)},
                         {"slope", e.slope ? ojson(to_string(*e.slope)) : ojson("inf")},
                         {"lattice_steps", e.lattice_steps},
                         {"polynomial", e.polynomial.to_string('x')}});
    }
    auto& rows = j["rows"] = ojson::array();
    for (const auto& r : np.rows) rows.push_back({{"j", r.j}, {"a", r.a}, {"b", r.b}});
    j["n"] = np.n;
    j["top_slope"] = np.top_slope ? ojson(to_string(*np.top_slope)) : ojson(nullptr);
    j["is_point"] = np.is_point;
    j["is_segment"] = np.is_segment;
    return j;
}

inline ojson to_json(const ValidationReport& r) {
    ojson j;
    j["passed"] = r.passed();
    j["reciprocal"] = r.reciprocal;
    j["reciprocity_sign"] = r.reciprocity_sign;
    j["reciprocity_shift"] = exponent_json(r.reciprocity_shift);
    j["corner_units"] = r.corner_units;
    j["edges_cyclotomic"] = r.edges_cyclotomic;
    j["vanishes_at_one"] = r.vanishes_at_one;
    j["failures"] = r.failures;
    return j;
}

/// raw: signed coefficients as produced by the substitution.
inline ojson to_json(const FillingPoly& fp, bool raw = false) {
    ojson j;
    j["p"] = fp.p;
    j["q"] = fp.q;
    j["coeffs"] = coeffs_json(raw ? fp.raw : fp.poly);
    j["t_shift"] = fp.t_shift;
    j["collision"] = fp.collision;
    if (!raw) j["sign"] = fp.sign;
    if (fp.predicted_leading) {
        j["predicted_leading"] = {{"corner", exponent_json(fp.predicted_leading->corner)},
                                  {"exponent", fp.predicted_leading->exponent}};
    }
    return j;
}

inline ojson to_json(const Factorization& f) {
    ojson j;
    j["unit"] = f.unit;
    j["content"] = to_decimal(f.content);
    j["t_power"] = f.t_power;
    auto& fs = j["factors"] = ojson::array();
    for (const auto& e : f.factors) {
        ojson x;
        x["coeffs"] = coeffs_json(e.poly);
        x["degree"] = e.poly.degree();
        x["multiplicity"] = e.multiplicity;
        x["cyclotomic_order"] = e.cyclotomic_order;
        fs.push_back(x);
    }
    if (f.split_done) {
        j["cyclotomic_part"] = f.cyclotomic_part;
        j["non_cyclotomic_part"] = f.non_cyclotomic_part;
    }
    return j;
}

/// Human-readable factorization, one factor per line.
inline std::string pretty(const Factorization& f) {
    std::string out;
    Integer lead = Integer(f.unit) * f.content;
    out += to_decimal(lead);
    if (f.t_power > 0) out += " * t^" + std::to_string(f.t_power);
    out += '\n';
    for (const auto& e : f.factors) {
        out += "  (" + e.poly.to_string('t') + ")";
        if (e.multiplicity > 1) out += "^" + std::to_string(e.multiplicity);
        if (e.cyclotomic_order) out += "   [Phi_" + std::to_string(e.cyclotomic_order) + "]";
        out += '\n';
    }
    return out;
}

inline ojson to_json(const MahlerEstimate& m) {
    return {{"value", m.value}, {"abs_error", m.abs_error}, {"method", to_string(m.method)}, {"precision_bits", m.precision_bits}};
}

inline ojson to_json(const RootGeometryReport& r) {
    ojson j;
    j["p"] = r.p;
    j["q"] = r.q;
    j["max_modulus"] = r.max_modulus;
    j["fitted_D"] = r.fitted_D;
    auto& cb = j["count_beyond"] = ojson::array();
    for (const auto& c : r.count_beyond) cb.push_back({{"c", c.c}, {"count", c.count}});
    j["product_top"] = r.product_top;
    j["moduli"] = r.moduli;
    j["precision_bits"] = r.precision_bits;
    j["isolated"] = r.isolated;
    return j;
}

inline ojson to_json(const ThresholdStats& s) {
    ojson j;
    j["epsilon"] = s.epsilon;
    j["zeta_set_empty"] = s.zeta_set_empty;
    auto& z = j["zetas"] = ojson::array();
    for (auto c : s.zetas) z.push_back(complex_json(c));
    j["total"] = s.total;
    j["inside"] = s.inside;
    j["small_power"] = s.small_power;
    j["away_only"] = s.away_only;
    j["neither"] = s.neither;
    j["away_total"] = s.away_total;
    j["fitted_C1_small_power"] = s.fitted_C1_small_power;
    j["fitted_C1_away"] = s.fitted_C1_away;
    j["fitted_C1"] = s.fitted_C1;
    return j;
}

inline ojson to_json(const ModelSolveReport& r) {
    ojson j;
    j["p"] = r.p;
    j["q"] = r.q;
    j["epsilon"] = r.epsilon;
    j["count"] = r.count;
    j["total_roots"] = r.total_roots;
    auto& sols = j["solutions"] = ojson::array();
    for (const auto& s : r.solutions) {
        sols.push_back({{"z", complex_json(s.z)}, {"abs_w", std::abs(s.w)}, {"residual", s.residual}, {"radius", s.radius}});
    }
    j["product_top"] = r.product_top;
    j["max_residual"] = r.max_residual;
    j["expanded_residual"] = r.expanded_residual ? ojson(*r.expanded_residual) : ojson(nullptr);
    j["converged"] = r.converged;
    j["isolated"] = r.isolated;
    return j;
}

inline ojson to_json(const std::vector<ProductBoundRow>& rows) {
    ojson a = ojson::array();
    for (const auto& r : rows) {
        a.push_back({{"k", r.k}, {"lhs", r.lhs ? ojson(*r.lhs) : ojson(nullptr)}, {"rhs", r.rhs}, {"pass", r.pass}});
    }
    return a;
}

} // namespace dehnfill
