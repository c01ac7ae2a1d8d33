#include <CLI11.hpp>
#include <json.hpp>

#include <dehnfill/dehnfill.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace dehnfill;

namespace {

std::string slurp_if_file(const std::string& arg) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(arg, ec)) return arg;
    std::ifstream in(arg, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + arg);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Polynomial from a file or inline text: "x^2-x-1", "[c0, c1, ...]" or {"coeffs": [...]}.
UniIntPoly load_unipoly(const std::string& arg) {
    std::string text = slurp_if_file(arg);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        auto j = nlohmann::json::parse(text);
        if (!j.contains("coeffs")) throw Error(ErrorCode::MalformedTerm, "JSON polynomial needs a 'coeffs' array");
        std::vector<Integer> v;
        for (const auto& c : j["coeffs"]) v.push_back(c.is_string() ? parse_integer(c.get<std::string>()) : Integer(c.get<long>()));
        return UniIntPoly(std::move(v));
    }
    return parse_unipoly(text);
}

void emit(const ojson& j, bool pretty = true) { std::cout << (pretty ? j.dump(2) : j.dump()) << '\n'; }

RootOptions root_options(int bits) {
    RootOptions ro;
    ro.min_bits = bits > 0 ? bits : env_precision_floor(53);
    return ro;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dehn-filling polynomials: specialization, exact factoring, Mahler measures and sweeps"};
    app.require_subcommand(1);

    std::string fixture, poly_arg, config;
    std::int64_t p = 0, q = 0;
    double eps = 0;
    bool raw = false, json_out = false, pretty_out = false, sector_aware = false, force = false, no_geometry = false;
    std::string method = "roots", p_range = "1..60", q_range = "1..12", quadrants, out_dir;
    int bits = 0, iterations = 48;
    unsigned jobs = 1;
    double model_d = -1, model_C = -1;

    auto* newton = app.add_subcommand("newton", "Newton polygon of a fixture as JSON");
    newton->add_option("fixture", fixture, "fixture file or inline polynomial")->required();

    auto* validate = app.add_subcommand("validate", "A-polynomial structure checks as JSON");
    validate->add_option("fixture", fixture)->required();

    auto* spec = app.add_subcommand("specialize", "A_{p,q}(t) from m -> t^-q, l -> t^p");
    spec->add_option("fixture", fixture)->required();
    spec->add_option("-p", p)->required()->allow_extra_args(false);
    spec->add_option("-q", q)->required()->allow_extra_args(false);
    spec->add_flag("--raw", raw, "keep the substitution's sign");

    auto* fac = app.add_subcommand("factor", "exact factorization over the integers");
    fac->add_option("poly", poly_arg, "coefficient file or inline polynomial")->required();
    fac->add_flag("--json", json_out, "compact JSON");
    fac->add_flag("--pretty", pretty_out, "human-readable factors");

    auto* mah = app.add_subcommand("mahler", "Mahler measure with an error bound");
    mah->add_option("poly", poly_arg)->required();
    mah->add_option("--method", method)->check(CLI::IsMember({"roots", "graeffe", "both"}));
    mah->add_option("--bits", bits, "precision floor for the root finder");
    mah->add_option("--iterations", iterations, "root-squaring steps for graeffe")->check(CLI::Range(0, 64));

    auto* roots = app.add_subcommand("roots", "root moduli of A_{p,q}");
    roots->add_option("fixture", fixture)->required();
    roots->add_option("-p", p)->required()->allow_extra_args(false);
    roots->add_option("-q", q)->required()->allow_extra_args(false);
    roots->add_option("--eps", eps, "also classify roots near the unit circle");
    roots->add_option("--bits", bits);

    auto* model = app.add_subcommand("model", "solutions of z^q (1+z)^p = 1 with |z| < eps, |1+z| > 1");
    model->add_option("-p", p)->required()->allow_extra_args(false);
    model->add_option("-q", q)->required()->allow_extra_args(false);
    model->add_option("--eps", eps)->required();
    model->add_option("--d", model_d, "constant for product bound rows");
    model->add_option("--C", model_C, "count constant; sets the number of product rows");

    auto* survey = app.add_subcommand("survey", "sweep coprime (p,q) and persist records");
    survey->add_option("fixture", fixture);
    survey->add_option("--p", p_range, "range a..b");
    survey->add_option("--q", q_range, "range a..b");
    survey->add_option("--quadrants", quadrants, "comma list from 1,2,3,4");
    survey->add_flag("--sector-aware", sector_aware, "cross-check cells below the top slope in a changed basis");
    survey->add_option("--jobs", jobs)->check(CLI::Range(1u, 256u));
    survey->add_option("-o,--output", out_dir);
    survey->add_option("--config", config, "JSON file with the same keys as the flags");
    survey->add_flag("--force", force, "run even if the fixture fails validation");
    survey->add_flag("--no-geometry", no_geometry, "skip root moduli");
    survey->add_option("--bits", bits);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*newton) {
            const auto fx = load_fixture(fixture);
            const auto np = newton_polygon(normalize(fx.poly).poly);
            auto j = to_json(np);
            j["name"] = fx.name;
            emit(j);
        } else if (*validate) {
            const auto fx = load_fixture(fixture);
            const auto rep = validate_apoly(normalize(fx.poly).poly);
            auto j = to_json(rep);
            j["name"] = fx.name;
            emit(j);
            return rep.passed() ? 0 : 1;
        } else if (*spec) {
            const auto fx = load_fixture(fixture);
            emit(to_json(specialize(normalize(fx.poly).poly, p, q), raw));
        } else if (*fac) {
            const auto f = cyclotomic_split(factor(load_unipoly(poly_arg)));
            if (pretty_out) std::cout << pretty(f);
            else emit(to_json(f), !json_out);
        } else if (*mah) {
            const auto f = load_unipoly(poly_arg);
            MeasureOptions mo;
            mo.roots = root_options(bits);
            MahlerEstimate m;
            if (method == "roots") m = mahler(f, mo);
            else if (method == "graeffe") m = mahler_graeffe(f, iterations);
            else m = mahler_both(f, iterations, mo);
            auto j = to_json(m);
            j["length"] = to_decimal(length(f));
            emit(j);
        } else if (*roots) {
            const auto src = normalize(load_fixture(fixture).poly).poly;
            const auto fp = specialize(src, p, q);
            const auto ro = root_options(bits);
            auto j = to_json(root_geometry(fp, ro));
            if (eps > 0) j["threshold"] = to_json(near_unit_threshold_stats(fp, src, eps, ro));
            emit(j);
        } else if (*model) {
            const auto r = solve_model(p, q, eps);
            auto j = to_json(r);
            j["C_needed"] = model_constant_needed(r);
            if (model_d >= 0) {
                const double C = model_C >= 0 ? model_C : model_constant_needed(r);
                j["product_bound"] = to_json(product_bound_check(r, model_d, model_k_max(p, q, C)));
            }
            emit(j);
        } else if (*survey) {
            SweepPlan plan;
            if (!config.empty()) plan = plan_from_json(nlohmann::json::parse(slurp_if_file(config)));
            if (!fixture.empty()) plan.fixture = fixture;
            if (survey->count("--p")) plan.p_range = parse_range(p_range);
            else if (config.empty()) plan.p_range = parse_range(p_range);
            if (survey->count("--q")) plan.q_range = parse_range(q_range);
            else if (config.empty()) plan.q_range = parse_range(q_range);
            if (!quadrants.empty()) {
                plan.quadrants.clear();
                std::stringstream ss(quadrants);
                for (std::string tok; std::getline(ss, tok, ',');) plan.quadrants.insert(std::stoi(tok));
            }
            if (sector_aware) plan.strategy = SectorStrategy::BasisChange;
            if (survey->count("--jobs")) plan.jobs = jobs;
            if (!out_dir.empty()) plan.output = out_dir;
            if (force) plan.force = true;
            if (no_geometry) plan.root_geometry = false;
            plan.measure.roots.min_bits = env_precision_floor(plan.measure.roots.min_bits);
            if (bits > 0) plan.measure.roots.min_bits = bits;
            if (plan.fixture.empty()) throw Error(ErrorCode::InvalidArgument, "survey needs a fixture");

            const auto records = plan.strategy == SectorStrategy::BasisChange ? sector_survey(plan) : run_survey(plan);
            ojson summary;
            summary["records"] = records.size();
            std::size_t errors = 0, degenerate = 0, mismatches = 0;
            for (const auto& r : records) {
                errors += r.status == "error";
                degenerate += r.status == "degenerate";
                mismatches += r.sector_match && !*r.sector_match;
            }
            summary["errors"] = errors;
            summary["degenerate"] = degenerate;
            if (plan.strategy == SectorStrategy::BasisChange) summary["sector_mismatches"] = mismatches;
            try {
                summary["band"] = to_json(degree_band(records));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::InsufficientData) throw;
                summary["band"] = nullptr;
            }
            if (!plan.output.empty()) summary["output"] = plan.output;
            emit(summary);
        }
    } catch (const Error& e) {
        std::cerr << ojson{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << ojson{{"error", "Exception"}, {"message", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
