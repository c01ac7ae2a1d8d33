#pragma once

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bivar.hpp"
#include "fill.hpp"
#include "measure.hpp"
#include "rootmodel.hpp"
#include "zfactor.hpp"

namespace dehnfill {

struct FactorSummary {
    int degree = 0;
    int multiplicity = 1;
    bool cyclotomic = false;
    std::uint64_t order = 0;
    double mahler = 1;
    double mahler_error = 0;
};

struct SurveyRecord {
    std::string fixture;
    std::int64_t p = 0, q = 0;
    Sector sector = Sector::Axis;
    int edge = -1;
    std::string status = "ok";  // ok | degenerate | error
    std::string error;
    bool collision = false;
    std::int64_t degree_total = 0;
    std::int64_t predicted_degree = 0;
    std::string leading_coeff;
    std::int64_t t_shift = 0;
    std::size_t t_power = 0;
    std::vector<FactorSummary> factors;
    std::vector<double> ratios;  // deg g / max(|p|,|q|) over non-cyclotomic g
    double max_modulus = 0;
    double fitted_D = 0;   // max(|q|,1) (max_modulus - 1)
    double fitted_C1 = 0;  // max(|p|,1) (max_modulus - 1)
    // sector-aware runs
    bool transformed = false;
    std::int64_t p_prime = 0, q_prime = 0;
    std::string transform;
    std::optional<bool> sector_match;

    std::int64_t max_pq() const { return std::max(std::abs(p), std::abs(q)); }
    bool has_noncyclotomic() const { return !ratios.empty(); }
};

struct IntRange {
    std::int64_t lo = 1, hi = 1;
    bool empty() const { return hi < lo; }
};

/// "a..b", "a" or "a:b".
inline IntRange parse_range(const std::string& text) {
    auto sep = text.find("..");
    std::size_t skip = 2;
    if (sep == std::string::npos) {
        sep = text.find(':');
        skip = 1;
    }
    try {
        if (sep == std::string::npos) {
            const auto v = std::stoll(text);
            return {v, v};
        }
        return {std::stoll(text.substr(0, sep)), std::stoll(text.substr(sep + skip))};
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "bad range '" + text + "'");
    }
}

inline std::string to_string(const IntRange& r) { return std::to_string(r.lo) + ".." + std::to_string(r.hi); }

enum class SectorStrategy { Direct, BasisChange };

inline MeasureOptions survey_measure_options() {
    MeasureOptions m;
    m.target_relative_error = 1e-9;
    m.roots.tolerance = 1e-9;
    return m;
}

struct SweepPlan {
    std::string fixture;       // path or inline polynomial
    IntRange p_range{1, 1};
    IntRange q_range{1, 1};
    bool coprime_only = true;  // when false, non-coprime cells come back as error records
    std::set<int> quadrants{1, 2, 3, 4};  // 1: p,q > 0   2: p < 0 < q   3: p,q < 0   4: q < 0 < p
    SectorStrategy strategy = SectorStrategy::Direct;
    unsigned jobs = 1;
    std::string output;        // directory; empty to skip persistence
    bool force = false;        // run even when the fixture fails validation
    bool root_geometry = true;
    MeasureOptions measure = survey_measure_options();
};

/// Plan from a JSON config mirroring the CLI flags.
inline SweepPlan plan_from_json(const nlohmann::json& j, SweepPlan plan = {}) {
    auto range = [](const nlohmann::json& v) {
        if (v.is_string()) return parse_range(v.get<std::string>());
        if (v.is_array() && v.size() == 2) return IntRange{v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
        if (v.is_number_integer()) return IntRange{v.get<std::int64_t>(), v.get<std::int64_t>()};
        throw Error(ErrorCode::InvalidArgument, "range must be \"a..b\", [a, b] or an integer");
    };
    if (j.contains("fixture")) plan.fixture = j["fixture"].get<std::string>();
    if (j.contains("p")) plan.p_range = range(j["p"]);
    if (j.contains("q")) plan.q_range = range(j["q"]);
    if (j.contains("coprime")) plan.coprime_only = j["coprime"].get<bool>();
    if (j.contains("quadrants")) plan.quadrants = j["quadrants"].get<std::set<int>>();
    if (j.contains("sector_aware")) plan.strategy = j["sector_aware"].get<bool>() ? SectorStrategy::BasisChange : SectorStrategy::Direct;
    if (j.contains("jobs")) plan.jobs = j["jobs"].get<unsigned>();
    if (j.contains("output")) plan.output = j["output"].get<std::string>();
    if (j.contains("force")) plan.force = j["force"].get<bool>();
    if (j.contains("root_geometry")) plan.root_geometry = j["root_geometry"].get<bool>();
    if (j.contains("bits")) plan.measure.roots.min_bits = j["bits"].get<int>();
    return plan;
}

/// (p, q) cells of the plan, canonical (p > 0 or (0,1)), sorted, unique.
inline std::vector<std::pair<std::int64_t, std::int64_t>> plan_cells(const SweepPlan& plan) {
    if (plan.p_range.empty() || plan.q_range.empty()) throw Error(ErrorCode::InvalidArgument, "empty range in sweep plan");
    std::set<std::pair<std::int64_t, std::int64_t>> cells;
    for (int quad : plan.quadrants) {
        if (quad < 1 || quad > 4) throw Error(ErrorCode::InvalidArgument, "quadrant must be 1..4");
        const int sp = (quad == 1 || quad == 4) ? 1 : -1;
        const int sq = (quad == 1 || quad == 2) ? 1 : -1;
        for (auto p = plan.p_range.lo; p <= plan.p_range.hi; ++p) {
            for (auto q = plan.q_range.lo; q <= plan.q_range.hi; ++q) {
                if (p == 0 && q == 0) continue;
                if (plan.coprime_only && gcd64(p, q) != 1) continue;
                cells.insert(canonical_pair(sp * p, sq * q));
            }
        }
    }
    return {cells.begin(), cells.end()};
}

namespace detail {

inline std::multiset<std::pair<int, int>> degree_multiset(const Factorization& f) {
    std::multiset<std::pair<int, int>> out;
    for (const auto& e : f.factors) out.insert({e.poly.degree(), e.multiplicity});
    return out;
}

struct SurveyContext {
    std::string name;
    BivarLaurentPoly poly;
    NewtonPolygon np;
    std::vector<SectorTransform> transforms;
};

inline SurveyRecord survey_cell(const SurveyContext& ctx, std::int64_t p, std::int64_t q, const SweepPlan& plan) {
    SurveyRecord rec;
    rec.fixture = ctx.name;
    rec.p = p;
    rec.q = q;
    try {
        const auto slope = classify(ctx.np, p, q);
        rec.sector = slope.sector;
        rec.edge = slope.edge;
        rec.predicted_degree = predicted_degree(ctx.np, p, q);
        FillingPoly fp;
        try {
            fp = specialize(ctx.poly, p, q);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegeneratePolynomial) throw;
            rec.status = "degenerate";
            rec.collision = true;
            rec.error = e.what();
            return rec;
        }
        rec.collision = fp.collision;
        if (fp.collision) rec.status = "degenerate";
        rec.degree_total = fp.poly.degree();
        rec.leading_coeff = to_decimal(fp.leading_coeff());
        rec.t_shift = fp.t_shift;

        const Factorization fac = cyclotomic_split(factor(fp.poly));
        rec.t_power = fac.t_power;
        const double mx = static_cast<double>(rec.max_pq());
        for (std::size_t i = 0; i < fac.factors.size(); ++i) {
            const auto& e = fac.factors[i];
            FactorSummary s;
            s.degree = e.poly.degree();
            s.multiplicity = e.multiplicity;
            s.cyclotomic = e.cyclotomic_order != 0;
            s.order = e.cyclotomic_order;
            if (!s.cyclotomic) {
                const auto m = mahler(e.poly, plan.measure);
                s.mahler = m.value;
                s.mahler_error = m.abs_error;
                rec.ratios.push_back(static_cast<double>(s.degree) / mx);
                if (m.upper() < 1 + 1e-9) {
                    throw Error(ErrorCode::InternalCheckFailed, "non-cyclotomic factor with measure 1");
                }
            }
            rec.factors.push_back(s);
        }
        std::int64_t total = static_cast<std::int64_t>(fac.t_power);
        for (const auto& f : rec.factors) total += static_cast<std::int64_t>(f.degree) * f.multiplicity;
        if (total != rec.degree_total) throw Error(ErrorCode::InternalCheckFailed, "factor degrees do not add up");
        if (!rec.collision && rec.degree_total != rec.predicted_degree) {
            throw Error(ErrorCode::InternalCheckFailed, "degree differs from the Newton-polygon prediction");
        }

        if (plan.root_geometry && fp.poly.degree() >= 1) {
            const auto geo = root_geometry(fp, plan.measure.roots);
            rec.max_modulus = geo.max_modulus;
            rec.fitted_D = geo.fitted_D;
            rec.fitted_C1 = std::max(0.0, static_cast<double>(std::max<std::int64_t>(std::abs(p), 1)) * (geo.max_modulus - 1));
        }

        if (plan.strategy == SectorStrategy::BasisChange) {
            const auto& t = ctx.transforms[transform_index(ctx.np, ctx.transforms, slope)];
            if (!t.identity) {
                auto [pp, qq] = t.transform_pair(p, q);
                std::tie(pp, qq) = canonical_pair(pp, qq);
                rec.transformed = true;
                rec.p_prime = pp;
                rec.q_prime = qq;
                rec.transform = t.description;
                const auto fp2 = specialize(t.poly, pp, qq);
                rec.sector_match = degree_multiset(factor(fp2.poly)) == degree_multiset(fac);
            }
        }
    } catch (const std::exception& e) {
        rec.status = "error";
        rec.error = e.what();
    }
    return rec;
}

} // namespace detail

/// Loads and checks the fixture named in the plan.
inline detail::SurveyContext prepare_survey(const SweepPlan& plan) {
    auto fx = load_fixture(plan.fixture);
    detail::SurveyContext ctx;
    ctx.name = fx.name;
    ctx.poly = normalize(fx.poly).poly;
    if (!plan.force) {
        const auto report = validate_apoly(ctx.poly);
        if (!report.passed()) {
            std::string why;
            for (const auto& f : report.failures) why += "; " + f;
            throw Error(ErrorCode::InvalidArgument, "fixture fails validation" + why);
        }
    }
    ctx.np = newton_polygon(ctx.poly);
    ctx.transforms = sector_transform(ctx.poly, ctx.np);
    return ctx;
}

/// Sweeps the plan's cells on a worker pool. Records come back in
/// lexicographic (p, q) order whatever the worker count.
inline std::vector<SurveyRecord> run_cells(const SweepPlan& plan) {
    const auto ctx = prepare_survey(plan);
    const auto cells = plan_cells(plan);
    std::vector<SurveyRecord> out(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < cells.size(); i = next++) out[i] = detail::survey_cell(ctx, cells[i].first, cells[i].second, plan);
    };
    const unsigned jobs = std::max(1u, plan.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return out;
}

// ---------------------------------------------------------------------------
// aggregation

struct Band {
    double lo = 0, hi = 0;
    std::size_t count = 0;
};

struct DegreeBand {
    double c1_hat = 0;
    double c2_hat = 0;
    std::size_t records = 0;   // records with at least one non-cyclotomic factor
    std::size_t factors = 0;
    std::map<std::string, Band> by_sector;
    double lower_half_min = 0;  // min ratio for |p|+|q| at or below the median
    double upper_half_min = 0;
    bool trend_flag = false;    // upper-half minimum below half the lower-half minimum
};

inline DegreeBand degree_band(const std::vector<SurveyRecord>& records) {
    std::vector<const SurveyRecord*> use;
    for (const auto& r : records) {
        if (r.status != "error" && r.has_noncyclotomic()) use.push_back(&r);
    }
    if (use.size() < 5) {
        throw Error(ErrorCode::InsufficientData,
                    "degree band needs at least 5 records with non-cyclotomic factors, got " + std::to_string(use.size()));
    }
    DegreeBand b;
    b.records = use.size();
    b.c1_hat = INFINITY;
    b.c2_hat = 0;
    for (const auto* r : use) {
        auto& sb = b.by_sector[to_string(r->sector)];
        for (double x : r->ratios) {
            b.c1_hat = std::min(b.c1_hat, x);
            b.c2_hat = std::max(b.c2_hat, x);
            if (sb.count == 0) sb.lo = sb.hi = x;
            sb.lo = std::min(sb.lo, x);
            sb.hi = std::max(sb.hi, x);
            ++sb.count;
            ++b.factors;
        }
    }
    std::vector<std::int64_t> sizes;
    for (const auto* r : use) sizes.push_back(std::abs(r->p) + std::abs(r->q));
    std::sort(sizes.begin(), sizes.end());
    const auto median = sizes[(sizes.size() - 1) / 2];
    b.lower_half_min = b.upper_half_min = INFINITY;
    for (const auto* r : use) {
        const double m = *std::min_element(r->ratios.begin(), r->ratios.end());
        auto& slot = (std::abs(r->p) + std::abs(r->q) <= median) ? b.lower_half_min : b.upper_half_min;
        slot = std::min(slot, m);
    }
    if (!std::isfinite(b.upper_half_min)) b.upper_half_min = b.lower_half_min;
    b.trend_flag = b.upper_half_min < 0.5 * b.lower_half_min;
    return b;
}

// ---------------------------------------------------------------------------
// serialization

namespace detail {

inline std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace detail

inline nlohmann::ordered_json to_json(const SurveyRecord& r) {
    nlohmann::ordered_json j;
    j["fixture"] = r.fixture;
    j["p"] = r.p;
    j["q"] = r.q;
    j["sector"] = to_string(r.sector);
    j["edge"] = r.edge;
    j["status"] = r.status;
    if (!r.error.empty()) j["error"] = r.error;
    j["collision"] = r.collision;
    j["degree_total"] = r.degree_total;
    j["predicted_degree"] = r.predicted_degree;
    j["leading_coeff"] = r.leading_coeff;
    j["t_shift"] = r.t_shift;
    j["t_power"] = r.t_power;
    auto& fs = j["factors"] = nlohmann::ordered_json::array();
    for (const auto& f : r.factors) {
        nlohmann::ordered_json e;
        e["degree"] = f.degree;
        e["multiplicity"] = f.multiplicity;
        e["cyclotomic"] = f.cyclotomic;
        if (f.cyclotomic) e["order"] = f.order;
        e["mahler"] = detail::fmt(f.mahler);
        e["mahler_error"] = detail::fmt(f.mahler_error);
        fs.push_back(e);
    }
    auto& rs = j["ratios"] = nlohmann::ordered_json::array();
    for (double x : r.ratios) rs.push_back(detail::fmt(x));
    j["max_modulus"] = detail::fmt(r.max_modulus);
    j["fitted_D"] = detail::fmt(r.fitted_D);
    j["fitted_C1"] = detail::fmt(r.fitted_C1);
    if (r.transformed) {
        j["p_prime"] = r.p_prime;
        j["q_prime"] = r.q_prime;
        j["transform"] = r.transform;
        if (r.sector_match) j["sector_match"] = *r.sector_match;
    }
    return j;
}

inline const char* records_csv_header() {
    return "fixture,p,q,sector,edge,status,collision,degree_total,predicted_degree,leading_coeff,t_shift,t_power,"
           "n_factors,n_cyclotomic,noncyclotomic_degrees,min_ratio,max_ratio,max_modulus,fitted_D,fitted_C1,"
           "p_prime,q_prime,sector_match,error";
}

inline std::string to_csv_row(const SurveyRecord& r) {
    using detail::csv_field;
    using detail::fmt;
    std::size_t cyc = 0;
    std::string degs;
    for (const auto& f : r.factors) {
        if (f.cyclotomic) {
            ++cyc;
            continue;
        }
        if (!degs.empty()) degs += ';';
        degs += std::to_string(f.degree);
        if (f.multiplicity > 1) degs += "^" + std::to_string(f.multiplicity);
    }
    std::ostringstream os;
    os << csv_field(r.fixture) << ',' << r.p << ',' << r.q << ',' << to_string(r.sector) << ',' << r.edge << ',' << r.status
       << ',' << (r.collision ? 1 : 0) << ',' << r.degree_total << ',' << r.predicted_degree << ',' << r.leading_coeff << ','
       << r.t_shift << ',' << r.t_power << ',' << r.factors.size() << ',' << cyc << ',' << degs << ',';
    if (r.ratios.empty()) {
        os << ",,";
    } else {
        os << fmt(*std::min_element(r.ratios.begin(), r.ratios.end())) << ','
           << fmt(*std::max_element(r.ratios.begin(), r.ratios.end())) << ',';
    }
    os << fmt(r.max_modulus) << ',' << fmt(r.fitted_D) << ',' << fmt(r.fitted_C1) << ',';
    if (r.transformed) os << r.p_prime << ',' << r.q_prime << ',' << (r.sector_match ? (*r.sector_match ? "1" : "0") : "");
    else os << ",,";
    os << ',' << csv_field(r.error);
    return os.str();
}

inline std::string records_csv(const std::vector<SurveyRecord>& records) {
    std::string out = records_csv_header();
    out += '\n';
    for (const auto& r : records) out += to_csv_row(r) + '\n';
    return out;
}

inline nlohmann::ordered_json to_json(const DegreeBand& b) {
    nlohmann::ordered_json j;
    j["c1_hat"] = detail::fmt(b.c1_hat);
    j["c2_hat"] = detail::fmt(b.c2_hat);
    j["records"] = b.records;
    j["factors"] = b.factors;
    auto& s = j["by_sector"] = nlohmann::ordered_json::object();
    for (const auto& [name, band] : b.by_sector) {
        s[name] = {{"lo", detail::fmt(band.lo)}, {"hi", detail::fmt(band.hi)}, {"count", band.count}};
    }
    j["lower_half_min"] = detail::fmt(b.lower_half_min);
    j["upper_half_min"] = detail::fmt(b.upper_half_min);
    j["trend_flag"] = b.trend_flag;
    return j;
}

enum class PlotKind { RatioVsMax, ModulusVsQ, MeasureHist };

inline std::string to_string(PlotKind k) {
    switch (k) {
    case PlotKind::RatioVsMax: return "ratio_vs_max";
    case PlotKind::ModulusVsQ: return "modulus_vs_q";
    case PlotKind::MeasureHist: return "measure_hist";
    }
    return "?";
}

inline std::string emit_plotdata(const std::vector<SurveyRecord>& records, PlotKind kind) {
    using detail::fmt;
    std::ostringstream os;
    switch (kind) {
    case PlotKind::RatioVsMax:
        os << "p,q,max_pq,deg_g,ratio\n";
        for (const auto& r : records) {
            for (const auto& f : r.factors) {
                if (f.cyclotomic) continue;
                os << r.p << ',' << r.q << ',' << r.max_pq() << ',' << f.degree << ','
                   << fmt(static_cast<double>(f.degree) / static_cast<double>(r.max_pq())) << '\n';
            }
        }
        break;
    case PlotKind::ModulusVsQ:
        os << "p,q,max_modulus,fitted_D\n";
        for (const auto& r : records) {
            if (r.status == "error" || r.degree_total < 1) continue;
            os << r.p << ',' << r.q << ',' << fmt(r.max_modulus) << ',' << fmt(r.fitted_D) << '\n';
        }
        break;
    case PlotKind::MeasureHist:
        os << "p,q,deg_g,mahler,mahler_error\n";
        for (const auto& r : records) {
            for (const auto& f : r.factors) {
                if (f.cyclotomic) continue;
                os << r.p << ',' << r.q << ',' << f.degree << ',' << fmt(f.mahler) << ',' << fmt(f.mahler_error) << '\n';
            }
        }
        break;
    }
    return os.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << body;
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

/// Writes records.jsonl, records.csv, band.json and the plot CSVs.
inline void persist_survey(const std::vector<SurveyRecord>& records, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    std::string jsonl;
    for (const auto& r : records) jsonl += to_json(r).dump() + '\n';
    write_text(dir / "records.jsonl", jsonl);
    write_text(dir / "records.csv", records_csv(records));
    nlohmann::ordered_json band;
    try {
        band = to_json(degree_band(records));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::InsufficientData) throw;
        band = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    }
    write_text(dir / "band.json", band.dump(2) + '\n');
    for (auto kind : {PlotKind::RatioVsMax, PlotKind::ModulusVsQ, PlotKind::MeasureHist}) {
        write_text(dir / (to_string(kind) + ".csv"), emit_plotdata(records, kind));
    }
}

/// Direct sweep: one record per coprime cell; persisted when plan.output is set.
inline std::vector<SurveyRecord> run_survey(SweepPlan plan) {
    plan.strategy = SectorStrategy::Direct;
    auto records = run_cells(plan);
    if (!plan.output.empty()) persist_survey(records, plan.output);
    return records;
}

/// Sweep with the basis-change cross-check for cells below the top slope.
inline std::vector<SurveyRecord> sector_survey(SweepPlan plan) {
    plan.strategy = SectorStrategy::BasisChange;
    auto records = run_cells(plan);
    if (!plan.output.empty()) persist_survey(records, plan.output);
    return records;
}

} // namespace dehnfill
