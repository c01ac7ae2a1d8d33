// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <dehnfill/dehnfill.hpp>

#include <unistd.h>

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"

using namespace dehnfill;

namespace {

// pinned tolerances and budgets
constexpr double kSalemPublished = 1.176280818;
constexpr double kLehmerTol = 1e-8;
constexpr double kCyclotomicTol = 1e-10;
constexpr double kMultiplicativityRel = 1e-9;
constexpr int kGraeffeIterations = 48;
constexpr double kIdentityBudget = 60;       // seconds
constexpr double kSweepBudget = 300;
constexpr double kModelBudget = 600;
constexpr double kRootCoverage = 0.99;
constexpr double kBandStability = 2.0;
constexpr double kResidualTol = 1e-9;
constexpr std::int64_t kSweepP = 60, kSweepQ = 12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %2d %s %s: %s\n", id, pass ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

UniIntPoly to_poly(const oracle::ZVec& v) { return UniIntPoly(std::vector<Integer>(v.begin(), v.end())); }

std::string fixture_path() { return std::string(DEHNFILL_FIXTURES) + "/figure_eight.json"; }

BivarLaurentPoly figure_eight() { return normalize(load_fixture(fixture_path()).poly).poly; }

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Even kinds: dense random with coefficients in [-bound, bound]. Odd kinds:
/// products of small random pieces (sometimes squared, sometimes times t^2)
/// with coefficients at most cap.
oracle::ZVec random_input(std::mt19937_64& rng, int max_degree, long bound, int kind, long cap = 1000000) {
    std::uniform_int_distribution<int> deg(1, max_degree);
    if (kind % 2 == 0) return oracle::random_poly(rng, deg(rng), bound);
    for (;;) {
        oracle::ZVec acc{1};
        int total = 0;
        const int pieces = 2 + kind % 3;
        for (int k = 0; k < pieces; ++k) {
            const int d = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::max(1, max_degree / pieces)));
            auto piece = oracle::random_poly(rng, d, kind % 5 == 1 ? 3 : 9);
            acc = oracle::mul(acc, piece);
            total += d;
            if (kind % 7 == 3 && total + d <= max_degree) {  // repeated factor
                acc = oracle::mul(acc, piece);
                total += d;
            }
        }
        if (kind % 11 == 5) acc.insert(acc.begin(), 2, 0);  // power of t
        bool ok = static_cast<int>(acc.size()) - 1 <= max_degree;
        for (const auto& c : acc) ok = ok && abs(c) <= cap;
        if (ok) return acc;
    }
}

// ---------------------------------------------------------------------------

void criterion_identity() {
    std::mt19937_64 rng(1001);
    const auto t0 = Clock::now();
    int bad = 0, cases = 0, coprime_bad = 0;
    for (int k = 0; k < 500; ++k) {
        const auto v = random_input(rng, 30, 1000000, k);
        const auto f = to_poly(v);
        ++cases;
        const auto fac = factor(f);
        if (fac.expand() != f) ++bad;
        const auto sq = squarefree_decompose(f);
        for (std::size_t a = 0; a < sq.parts.size(); ++a)
            for (std::size_t b = a + 1; b < sq.parts.size(); ++b)
                if (gcd(sq.parts[a].first, sq.parts[b].first).degree() > 0) ++coprime_bad;
    }
    const double dt = seconds_since(t0);
    report(1, "exact-identity", bad == 0 && coprime_bad == 0 && dt < kIdentityBudget,
           fmt("%d polys, %d re-multiplication mismatches, %d non-coprime squarefree pairs, %.1f s (budget %.0f s)", cases, bad,
               coprime_bad, dt, kIdentityBudget));
}

void criterion_oracle() {
    std::mt19937_64 rng(2002);
    int agree = 0;
    const int n = 200;
    std::string first_bad;
    for (int k = 0; k < n; ++k) {
        const auto v = random_input(rng, 12, 9, k);
        const auto want = oracle::factor(v);
        const auto got = factor(to_poly(v));
        std::map<oracle::ZVec, int> mine;
        for (const auto& e : got.factors) mine[oracle::ZVec(e.poly.coeffs().begin(), e.poly.coeffs().end())] += e.multiplicity;
        const bool same = mine == want.factors && got.t_power == want.t_power && Integer(got.unit) * got.content == want.scalar;
        agree += same;
        if (!same && first_bad.empty()) first_bad = to_poly(v).to_string('x');
    }
    report(2, "oracle-equivalence", agree == n,
           fmt("%d/%d agree with root-subset divisor enumeration%s%s", agree, n, first_bad.empty() ? "" : "; first mismatch ",
               first_bad.c_str()));
}

void criterion_mahler() {
    const auto lehmer = parse_unipoly("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1");
    const auto r = mahler(lehmer);
    const auto g = mahler_graeffe(lehmer, kGraeffeIterations);
    const bool lehmer_ok = std::abs(r.value - kSalemPublished) <= kLehmerTol && std::abs(g.value - kSalemPublished) <= kLehmerTol;

    double worst_cyc = 0;
    for (std::uint64_t n = 1; n <= 100; ++n) worst_cyc = std::max(worst_cyc, std::abs(mahler(cyclotomic::polynomial(n)).value - 1));

    std::mt19937_64 rng(3003);
    int mult_bad = 0, length_bad = 0;
    double worst_rel = 0;
    for (int k = 0; k < 200; ++k) {
        const auto f = to_poly(random_input(rng, 10, 1000, k));
        const auto h = to_poly(random_input(rng, 10, 1000, k + 1));
        const auto mf = mahler(f), mh = mahler(h), mfh = mahler(f * h);
        const double rel = std::abs(mfh.value - mf.value * mh.value) / mfh.value;
        worst_rel = std::max(worst_rel, rel);
        if (rel > kMultiplicativityRel) ++mult_bad;
        if (mf.lower() > length(f).get_d() || mh.lower() > length(h).get_d()) ++length_bad;
    }
    report(3, "mahler-accuracy", lehmer_ok && worst_cyc <= kCyclotomicTol && mult_bad == 0 && length_bad == 0,
           fmt("Lehmer roots %.12f (+-%.1e) graeffe[k=%d] %.12f (+-%.1e) vs %.9f tol %.0e; max |M(Phi_n)-1| n<=100 %.1e; "
               "200 pairs: worst rel multiplicativity gap %.1e, %d failures, %d M>L",
               r.value, r.abs_error, kGraeffeIterations, g.value, g.abs_error, kSalemPublished, kLehmerTol, worst_cyc, worst_rel,
               mult_bad, length_bad));
}

void criterion_validators() {
    const auto f = figure_eight();
    const auto rep = validate_apoly(f);
    const auto np = newton_polygon(f);
    std::vector<std::pair<std::int64_t, std::int64_t>> support;
    for (const auto& e : f.support()) support.emplace_back(e.i, e.j);
    const auto brute = oracle::max_pair_slope(support);
    const bool sA_ok = np.top_slope && *np.top_slope == Rational(4) && brute && Rational(brute->first, brute->second) == Rational(4);
    report(4, "validators", rep.passed() && sA_ok,
           fmt("reciprocity %d (sign %+d), unit corners %d, cyclotomic edges %d, f(1,1)=0 %d; s_A = %s (brute force %lld/%lld)",
               rep.reciprocal, rep.reciprocity_sign, rep.corner_units, rep.edges_cyclotomic, rep.vanishes_at_one,
               np.top_slope ? to_string(*np.top_slope).c_str() : "none", brute ? static_cast<long long>(brute->first) : 0LL,
               brute ? static_cast<long long>(brute->second) : 0LL));
}

SweepPlan acceptance_plan(const std::filesystem::path& out, unsigned jobs) {
    SweepPlan plan;
    plan.fixture = fixture_path();
    plan.p_range = {1, kSweepP};
    plan.q_range = {1, kSweepQ};
    plan.quadrants = {1, 2, 3, 4};
    plan.jobs = jobs;
    plan.output = out.string();
    return plan;
}

void criterion_specialization(const std::vector<SurveyRecord>& recs, double dt) {
    const auto f = figure_eight();
    const auto np = newton_polygon(f);
    const auto collide = collision_slopes(f);
    int errors = 0, term_bad = 0, degree_bad = 0, lead_bad = 0, checked = 0, flag_bad = 0;
    for (const auto& r : recs) {
        if (r.status == "error") {
            ++errors;
            continue;
        }
        if (r.collision != (collide.count(slope_of(r.p, r.q)) > 0)) ++flag_bad;
        if (r.collision) continue;
        ++checked;
        const auto fp = specialize(f, r.p, r.q);
        if (fp.poly.term_count() != f.term_count()) ++term_bad;
        std::int64_t lo = INT64_MAX, hi = INT64_MIN;
        for (const auto& e : f.support()) {
            lo = std::min(lo, -r.q * e.i + r.p * e.j);
            hi = std::max(hi, -r.q * e.i + r.p * e.j);
        }
        if (r.degree_total != hi - lo || r.degree_total != predicted_degree(np, r.p, r.q)) ++degree_bad;
        if (r.q > 0 && Rational(r.p, r.q) > Rational(4) && r.leading_coeff != "1" && r.leading_coeff != "-1") ++lead_bad;
    }
    report(5, "specialization-laws",
           errors == 0 && term_bad == 0 && degree_bad == 0 && lead_bad == 0 && flag_bad == 0 && dt < kSweepBudget,
           fmt("%zu cells (|p|<=%lld, |q|<=%lld, all quadrants), %d off-collision checked; term-count %d, degree %d, "
               "leading-unit %d, collision-flag %d violations; %d cell errors; %.1f s with factorization (budget %.0f s)",
               recs.size(), static_cast<long long>(kSweepP), static_cast<long long>(kSweepQ), checked, term_bad, degree_bad,
               lead_bad, flag_bad, errors, dt, kSweepBudget));
}

void criterion_band(const std::vector<SurveyRecord>& recs) {
    std::vector<SurveyRecord> half;
    for (const auto& r : recs)
        if (r.p <= kSweepP / 2 && std::abs(r.q) <= kSweepQ / 2) half.push_back(r);
    try {
        const auto full = degree_band(recs);
        const auto small = degree_band(half);
        bool inside = true;
        for (const auto& r : recs)
            for (double x : r.ratios) inside = inside && x > 0 && x >= full.c1_hat && x <= full.c2_hat;
        const double ratio = std::max(full.c1_hat, small.c1_hat) / std::min(full.c1_hat, small.c1_hat);
        std::string sectors;
        for (const auto& [name, b] : full.by_sector) sectors += fmt(" %s[%.4g,%.4g]", name.c_str(), b.lo, b.hi);
        report(6, "degree-band",
               inside && full.c1_hat > 0 && ratio <= kBandStability && !full.trend_flag && !small.trend_flag,
               fmt("full c1=%.6g c2=%.6g (%zu factors); half-range c1=%.6g c2=%.6g; c1 ratio %.3f (limit %.1f); "
                   "min ratio lower/upper half %.4g/%.4g, trend flag %d;%s",
                   full.c1_hat, full.c2_hat, full.factors, small.c1_hat, small.c2_hat, ratio, kBandStability,
                   full.lower_half_min, full.upper_half_min, full.trend_flag, sectors.c_str()));
    } catch (const Error& e) {
        report(6, "degree-band", false, e.what());
    }
}

void criterion_root_moduli(const std::vector<SurveyRecord>& recs) {
    std::vector<const SurveyRecord*> cells;
    for (const auto& r : recs)
        if (r.status != "error" && !r.collision && r.q > 0 && Rational(r.p, r.q) > Rational(4) && r.degree_total > 0) cells.push_back(&r);
    double D = 0;
    for (std::size_t k = 0; k < cells.size(); k += 2) D = std::max(D, cells[k]->fitted_D);
    std::size_t validated = 0, ok = 0;
    std::string violations;
    for (std::size_t k = 1; k < cells.size(); k += 2) {
        ++validated;
        const auto* r = cells[k];
        if (r->max_modulus <= 1 + D / static_cast<double>(r->q) + 1e-12) ++ok;
        else violations += fmt(" (%lld,%lld)", static_cast<long long>(r->p), static_cast<long long>(r->q));
    }
    const double coverage = validated ? static_cast<double>(ok) / static_cast<double>(validated) : 0;
    report(7, "root-moduli", validated > 0 && coverage >= kRootCoverage,
           fmt("D fitted on %zu training cells = %.6g; validation %zu/%zu within 1+D/q (%.2f%%, need %.0f%%); violations:%s",
               (cells.size() + 1) / 2, D, ok, validated, 100 * coverage, 100 * kRootCoverage,
               violations.empty() ? " none" : violations.c_str()));
}

void criterion_model() {
    const auto t0 = Clock::now();
    const double grid[] = {0.02, 0.05, 0.1, 0.2};
    bool pass = true;
    std::string detail;
    std::size_t solves = 0;
    double worst_residual = 0;
    for (double eps : grid) {
        std::vector<ModelSolveReport> train, test;
        for (std::int64_t q = 1; q <= 3; ++q) {
            std::size_t idx = 0;
            for (std::int64_t p = 1; p <= 300; ++p) {
                if (gcd64(p, q) != 1 || !(static_cast<double>(p) / static_cast<double>(q) > 1 / eps)) continue;
                auto r = solve_model(p, q, eps);
                ++solves;
                worst_residual = std::max(worst_residual, r.max_residual);
                if (r.expanded_residual) worst_residual = std::max(worst_residual, *r.expanded_residual);
                if (!r.converged) pass = false;
                (idx++ % 2 == 0 ? train : test).push_back(std::move(r));
            }
        }
        const double C = fit_model_constant(train);
        const double d = fit_product_d(train, C);
        std::size_t count_bad = 0, rows = 0, rows_bad = 0;
        std::size_t max_count = 0;
        for (const auto& r : test) {
            max_count = std::max(max_count, r.count);
            if (r.count > model_count_bound(r.p, r.q, C)) ++count_bad;
            for (const auto& row : product_bound_check(r, d, model_k_max(r.p, r.q, C))) {
                ++rows;
                rows_bad += !row.pass;
            }
        }
        if (count_bad || rows_bad) pass = false;
        detail += fmt(" eps=%.2f: C=%.5g d=%.5g, held-out %zu cells count violations %zu, product rows %zu/%zu pass, max count %zu;",
                      eps, C, d, test.size(), count_bad, rows - rows_bad, rows, max_count);
    }
    const double dt = seconds_since(t0);
    pass = pass && worst_residual < kResidualTol && dt < kModelBudget;
    report(8, "model-equation", pass,
           fmt("%zu solves, worst residual %.1e (tol %.0e), %.1f s (budget %.0f s);", solves, worst_residual, kResidualTol, dt,
               kModelBudget) +
               detail);
}

void criterion_sector() {
    const auto f = figure_eight();
    const auto np = newton_polygon(f);
    const auto transforms = sector_transform(f, np);
    const auto collide = collision_slopes(f);
    std::vector<std::pair<std::int64_t, std::int64_t>> candidates;
    for (std::int64_t q = 1; q <= 12; ++q)
        for (std::int64_t p = -40; p < 4 * q; ++p)
            if (gcd64(p, q) == 1 && !collide.count(Rational(p, q))) candidates.emplace_back(p, q);
    std::vector<std::pair<std::int64_t, std::int64_t>> chosen;
    const std::size_t stride = std::max<std::size_t>(1, candidates.size() / 50);
    for (std::size_t k = 0; k < candidates.size() && chosen.size() < 50; k += stride) chosen.push_back(candidates[k]);

    int same = 0, formula_ok = 0, transformed = 0;
    std::string first_bad;
    for (auto [p, q] : chosen) {
        const auto fs = classify(np, p, q);
        const auto& t = transforms[transform_index(np, transforms, fs)];
        const auto [pp, qq] = t.transform_pair(p, q);
        if (!t.identity) ++transformed;
        if (t.identity || (pp == t.r * p + t.s * q && qq == -t.b * p + t.a * q && t.a * t.r + t.b * t.s == 1)) ++formula_ok;
        auto degrees = [](const UniIntPoly& g) {
            std::multiset<std::pair<int, int>> m;
            for (const auto& e : factor(g).factors) m.insert({e.poly.degree(), e.multiplicity});
            return m;
        };
        const bool eq = degrees(specialize(f, p, q).poly) == degrees(specialize(t.poly, pp, qq).poly);
        same += eq;
        if (!eq && first_bad.empty()) first_bad = fmt(" first mismatch (%lld,%lld)", static_cast<long long>(p), static_cast<long long>(q));
    }
    const int n = static_cast<int>(chosen.size());
    report(9, "sector-consistency", n == 50 && same == n && formula_ok == n && transformed == n,
           fmt("%d sub-s_A slopes, %d basis-changed, %d with p'=rp+sq, q'=-bp+aq, %d identical factor-degree multisets%s", n,
               transformed, formula_ok, same, first_bad.c_str()));
}

void criterion_determinism(const std::filesystem::path& a, const std::filesystem::path& b) {
    const auto x = slurp(a / "records.csv"), y = slurp(b / "records.csv");
    report(10, "determinism", !x.empty() && x == y,
           fmt("records.csv %zu bytes (1 worker) vs %zu bytes (4 workers): %s", x.size(), y.size(), x == y ? "identical" : "differ"));
}

void guarded(int id, const char* name, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("exception: ") + e.what());
    }
}

} // namespace

int main() {
    const auto work = std::filesystem::temp_directory_path() / ("dehnfill_acceptance_" + std::to_string(::getpid()));
    std::filesystem::remove_all(work);

    guarded(1, "exact-identity", criterion_identity);
    guarded(2, "oracle-equivalence", criterion_oracle);
    guarded(3, "mahler-accuracy", criterion_mahler);
    guarded(4, "validators", criterion_validators);

    std::vector<SurveyRecord> sweep;
    double sweep_time = 0;
    try {
        const auto t0 = Clock::now();
        sweep = run_survey(acceptance_plan(work / "run1", 1));
        sweep_time = seconds_since(t0);
    } catch (const std::exception& e) {
        report(5, "specialization-laws", false, std::string("sweep failed: ") + e.what());
    }
    if (!sweep.empty()) {
        guarded(5, "specialization-laws", [&] { criterion_specialization(sweep, sweep_time); });
        guarded(6, "degree-band", [&] { criterion_band(sweep); });
        guarded(7, "root-moduli", [&] { criterion_root_moduli(sweep); });
    } else {
        report(6, "degree-band", false, "no sweep records");
        report(7, "root-moduli", false, "no sweep records");
    }
    guarded(8, "model-equation", criterion_model);
    guarded(9, "sector-consistency", criterion_sector);
    guarded(10, "determinism", [&] {
        run_survey(acceptance_plan(work / "run2", 4));
        criterion_determinism(work / "run1", work / "run2");
    });

    std::filesystem::remove_all(work);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
