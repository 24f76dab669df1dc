#pragma once

/*
 * Reproducible experiments. Each experiment takes a JSON parameter object
 * (defaults merged with user overrides), runs its sweep and returns a report
 * that embeds the parameters, the raw results, a CSV table and a list of
 * pass/fail checks. Reports are deterministic in (parameters, seed): random
 * inputs are drawn from per-item generators seeded by (seed, index), so the
 * --jobs setting never changes the output.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sclab/compactness.hpp"
#include "sclab/io.hpp"
#include "sclab/lagrangian.hpp"
#include "sclab/loops.hpp"
#include "sclab/paths.hpp"
#include "sclab/sampling.hpp"
#include "sclab/shift_calculus.hpp"
#include "sclab/weights.hpp"

namespace sclab::experiments {

using nlohmann::json;

/// Invalid experiment name or parameter object.
class ConfigError : public ContractError {
public:
    explicit ConfigError(const std::string& what) : ContractError(what) {}
};

struct Check {
    std::string name;
    bool pass = false;
    json detail;
};

struct Report {
    std::string experiment;
    json params;
    json results;
    std::vector<Check> checks;
    std::string csv;

    bool pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }

    json to_json() const
    {
        json cs = json::array();
        for (const auto& c : checks)
            cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        return json{{"experiment", experiment}, {"config", params}, {"results", results}, {"checks", cs},
                    {"pass", pass()}};
    }

    void check(std::string name, bool ok, json detail = json::object())
    {
        checks.push_back({std::move(name), ok, std::move(detail)});
    }
};

struct Experiment {
    std::string name;
    std::string summary;
    json defaults;
    std::function<Report(const json& params, int jobs)> run;
};

namespace detail {

/// Runs f(0..n-1) on up to `jobs` threads; results are stored by index.
template <typename F>
auto parallel_map(std::size_t n, int jobs, F f) -> std::vector<decltype(f(std::size_t{}))>
{
    using R = decltype(f(std::size_t{}));
    std::vector<std::optional<R>> slots(n);
    auto collect = [&] {
        std::vector<R> out;
        out.reserve(n);
        for (auto& s : slots)
            out.push_back(std::move(*s));
        return out;
    };
    const auto workers = static_cast<std::size_t>(std::clamp(jobs, 1, 64));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            slots[i].emplace(f(i));
        return collect();
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < n; i = next++)
                    slots[i].emplace(f(i));
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return collect();
}

inline sampling::Rng item_rng(std::uint64_t seed, std::size_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return sampling::Rng(seq);
}

inline double rel_dev(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline std::vector<double> powers_of_two(int first, int last)
{
    std::vector<double> out;
    for (int j = first; j <= last; ++j)
        out.push_back(std::ldexp(1.0, -j));
    return out;
}

inline std::string csv_number(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline WeightPtr weight_param(const json& p, const char* key)
{
    return make_weight(io::weight_from_json(p.at(key)));
}

} // namespace detail

// ---------------------------------------------------------------------------

inline Report run_discontinuity(const json& p, int)
{
    Report r;
    const auto taus = p.at("taus").get<std::vector<double>>();
    const auto resolution = p.at("resolution").get<std::size_t>();
    json rows = json::array();
    std::string csv = "tau,norm,defect\n";
    double worst_norm = 0.0, worst_defect = 0.0;
    for (double tau : taus) {
        const auto w = discontinuity_witness(tau, resolution);
        rows.push_back({{"tau", tau}, {"norm", w.norm}, {"defect", w.defect}});
        csv += detail::csv_number(tau) + "," + detail::csv_number(w.norm) + "," + detail::csv_number(w.defect) + "\n";
        worst_norm = std::max(worst_norm, std::abs(w.norm - 1.0));
        worst_defect = std::max(worst_defect, std::abs(w.defect - std::numbers::sqrt2));
    }
    r.results = {{"rows", rows}};
    r.csv = csv;
    r.check("witness has unit norm (abs err <= 1e-9)", worst_norm <= 1e-9, {{"max_abs_error", worst_norm}});
    r.check("shift defect equals sqrt(2) (abs err <= 1e-9)", worst_defect <= 1e-9,
            {{"max_abs_error", worst_defect}});
    return r;
}

inline Report run_compact_open(const json& p, int jobs)
{
    Report r;
    const auto count = p.at("loops").get<std::size_t>();
    const int bandwidth = p.at("bandwidth").get<int>();
    const int jmax = p.at("j_max").get<int>();
    const auto seed = p.at("seed").get<std::uint64_t>();
    const auto taus = detail::powers_of_two(1, jmax);

    struct Row {
        std::vector<ShiftDecayRow> rows;
        bool bounded = true;
        bool monotone_tail = true;
    };
    const double monotone_from = 0.5 / std::max(bandwidth, 1);
    auto results = detail::parallel_map(count, jobs, [&](std::size_t i) {
        auto rng = detail::item_rng(seed, i);
        const auto v = sampling::random_loop(rng, bandwidth);
        Row out;
        out.rows = compact_open_decay(v, taus);
        for (std::size_t k = 0; k < out.rows.size(); ++k) {
            const auto& row = out.rows[k];
            out.bounded = out.bounded && row.defect <= row.lipschitz_bound * (1.0 + 1e-12);
            if (k > 0 && row.tau <= monotone_from)
                out.monotone_tail = out.monotone_tail && row.defect <= out.rows[k - 1].defect;
        }
        return out;
    });

    bool bounded = true, monotone = true;
    double last_max = 0.0, first_max = 0.0;
    json table = json::array();
    std::string csv = "loop,tau,defect,lipschitz_bound\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        bounded = bounded && results[i].bounded;
        monotone = monotone && results[i].monotone_tail;
        first_max = std::max(first_max, results[i].rows.front().defect);
        last_max = std::max(last_max, results[i].rows.back().defect);
        for (const auto& row : results[i].rows) {
            table.push_back({{"loop", i}, {"tau", row.tau}, {"defect", row.defect}, {"bound", row.lipschitz_bound}});
            csv += std::to_string(i) + "," + detail::csv_number(row.tau) + "," + detail::csv_number(row.defect) + "," +
                   detail::csv_number(row.lipschitz_bound) + "\n";
        }
    }
    r.results = {{"rows", table}, {"max_defect_smallest_tau", last_max}, {"max_defect_largest_tau", first_max}};
    r.csv = csv;
    r.check("||tau_* v - v|| <= 2 pi tau ||v'|| for all loops and tau", bounded);
    r.check("defects decrease monotonically once tau <= 1/(2M)", monotone, {{"from_tau", monotone_from}});
    r.check("defects shrink toward zero", last_max < 0.05 * std::max(first_max, 1e-300) || last_max < 1e-12,
            {{"largest_tau", first_max}, {"smallest_tau", last_max}});
    return r;
}

inline Report run_isometry(const json& p, int jobs)
{
    Report r;
    const auto count = p.at("loops").get<std::size_t>();
    const int bandwidth = p.at("bandwidth").get<int>();
    const int levels = p.at("levels").get<int>();
    const auto seed = p.at("seed").get<std::uint64_t>();
    auto devs = detail::parallel_map(count, jobs, [&](std::size_t i) {
        auto rng = detail::item_rng(seed, i);
        std::uniform_real_distribution<double> tau_dist(-2.0, 2.0);
        const auto v = sampling::random_loop(rng, bandwidth);
        const double tau = tau_dist(rng);
        const auto w = shift_fourier(v, tau);
        double worst = 0.0;
        for (int k = 0; k <= levels; ++k)
            worst = std::max(worst, detail::rel_dev(sobolev_norm(w, k), sobolev_norm(v, k)));
        return worst;
    });
    const double worst = *std::max_element(devs.begin(), devs.end());
    r.results = {{"max_relative_deviation", worst}, {"per_loop", devs}};
    std::string csv = "loop,max_relative_deviation\n";
    for (std::size_t i = 0; i < devs.size(); ++i)
        csv += std::to_string(i) + "," + detail::csv_number(devs[i]) + "\n";
    r.csv = csv;
    r.check("shift preserves every level norm (rel err <= 1e-12)", worst <= 1e-12, {{"max", worst}});
    return r;
}

inline Report run_sc_diff(const json& p, int jobs)
{
    Report r;
    const auto orders = p.at("orders").get<std::vector<int>>();
    const int bandwidth = p.at("bandwidth").get<int>();
    const auto eps = p.at("eps").get<std::vector<double>>();
    const auto trials = p.at("symmetry_trials").get<std::size_t>();
    const auto seed = p.at("seed").get<std::uint64_t>();
    const int max_level = p.at("max_level").get<int>();

    using Tv = TangentVector<FourierLoop>;
    json reports = json::array();
    std::string csv = "case,m,j,eps,error,order\n";
    double min_order = INFINITY;
    double worst_linear = 0.0;
    for (int m : orders) {
        if (m < 1 || m > 6)
            throw ConfigError("sc-diff: orders must lie in 1..6");
        auto rng = detail::item_rng(seed, static_cast<std::size_t>(m));
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const ShiftPoint<FourierLoop> point{u(rng), sampling::random_loop(rng, bandwidth)};
        std::vector<Tv> full, pure_v;
        for (int i = 0; i < m; ++i) {
            full.push_back({u(rng), sampling::random_loop(rng, bandwidth)});
            pure_v.push_back({0.0, full.back().direction});
        }
        FDOptions opt;
        opt.max_level = max_level;
        const auto general = fd_verify(point, m, full, eps, opt);
        const auto linear = fd_verify(point, 1, std::vector<Tv>{pure_v.front()}, eps, opt);
        for (const auto& [label, rep] : {std::pair{"mixed", &general}, std::pair{"pure_v", &linear}}) {
            for (const auto& lvl : rep->levels)
                for (std::size_t i = 0; i < eps.size(); ++i)
                    csv += std::string(label) + "," + std::to_string(rep->m) + "," + std::to_string(lvl.level) + "," +
                           detail::csv_number(eps[i]) + "," + detail::csv_number(lvl.errors[i]) + "," +
                           (lvl.order ? detail::csv_number(*lvl.order) : std::string()) + "\n";
        }
        for (const auto& lvl : general.levels)
            min_order = std::min(min_order, lvl.order.value_or(-INFINITY));
        // Errors relative to the exact first differential tau_* V, whose level
        // norms equal those of V.
        for (const auto& lvl : linear.levels)
            for (double e : lvl.errors)
                worst_linear = std::max(worst_linear, e / sobolev_norm(pure_v.front().direction, lvl.level));
        reports.push_back({{"m", m}, {"mixed", io::to_json(general)}, {"pure_v_m1", io::to_json(linear)}});
    }

    // Symmetry of D^2 and permutation symmetry of D^3.
    auto sym = detail::parallel_map(trials, jobs, [&](std::size_t i) {
        auto rng = detail::item_rng(seed + 1000, i);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const ShiftPoint<FourierLoop> point{u(rng), sampling::random_loop(rng, bandwidth)};
        const Tv a{u(rng), sampling::random_loop(rng, bandwidth)};
        const Tv b{u(rng), sampling::random_loop(rng, bandwidth)};
        const Tv c{u(rng), sampling::random_loop(rng, bandwidth)};
        const auto ab = shift_d2(point, a, b);
        const auto ba = shift_d2(point, b, a);
        double d2 = sobolev_norm(ab - ba, 0) / std::max(sobolev_norm(ab, 0), 1e-300);
        std::vector<Tv> tvs{a, b, c};
        const auto ref = shift_dk(point, tvs);
        const double scale = std::max(sobolev_norm(ref, 0), 1e-300);
        double d3 = 0.0;
        std::vector<int> perm{0, 1, 2};
        while (std::next_permutation(perm.begin(), perm.end())) {
            std::vector<Tv> permuted{tvs[perm[0]], tvs[perm[1]], tvs[perm[2]]};
            d3 = std::max(d3, sobolev_norm(shift_dk(point, permuted) - ref, 0) / scale);
        }
        return std::pair{d2, d3};
    });
    double worst_d2 = 0.0, worst_d3 = 0.0;
    for (auto [a, b] : sym) {
        worst_d2 = std::max(worst_d2, a);
        worst_d3 = std::max(worst_d3, b);
    }

    r.results = {{"fd", reports},
                 {"min_order", min_order},
                 {"pure_v_max_rel_error", worst_linear},
                 {"d2_symmetry_max_rel", worst_d2},
                 {"d3_permutation_max_rel", worst_d3}};
    r.csv = csv;
    r.check("finite-difference convergence order >= 1.9 at every measured level", min_order >= 1.9,
            {{"min_order", min_order}});
    r.check("pure-V first differences exact (rel <= 1e-12)", worst_linear <= 1e-12, {{"max_rel_error", worst_linear}});
    r.check("D^2 symmetric (rel <= 1e-12)", worst_d2 <= 1e-12, {{"max", worst_d2}});
    r.check("D^3 permutation symmetric (rel <= 1e-12)", worst_d3 <= 1e-12, {{"max", worst_d3}});
    return r;
}

inline Report run_chain_rule(const json& p, int jobs)
{
    Report r;
    const auto count = p.at("triples").get<std::size_t>();
    const int bandwidth = p.at("bandwidth").get<int>();
    const auto seed = p.at("seed").get<std::uint64_t>();
    auto disc = detail::parallel_map(count, jobs, [&](std::size_t i) {
        auto rng = detail::item_rng(seed, i);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double sigma = u(rng);
        const ShiftPoint<FourierLoop> point{u(rng), sampling::random_loop(rng, bandwidth)};
        const TangentVector<FourierLoop> tv{u(rng), sampling::random_loop(rng, bandwidth)};
        return chain_rule_check(sigma, point, tv);
    });
    const double worst = *std::max_element(disc.begin(), disc.end());
    std::string csv = "triple,discrepancy\n";
    for (std::size_t i = 0; i < disc.size(); ++i)
        csv += std::to_string(i) + "," + detail::csv_number(disc[i]) + "\n";
    r.results = {{"discrepancies", disc}, {"max", worst}};
    r.csv = csv;
    r.check("T(Psi_sigma o Psi) = T Psi_sigma o T Psi (<= 1e-10)", worst <= 1e-10, {{"max", worst}});
    return r;
}

inline Report run_compactness_rank(const json& p, int)
{
    Report r;
    const auto weight = detail::weight_param(p, "weight");
    const auto ranks = p.at("ranks").get<std::vector<std::size_t>>();
    const auto cert = rank_certificate(ranks, weight);
    const auto cauchy = cauchy_differences(ranks, weight);

    // Cross-check the diagonal formula against the generic sampled estimator.
    double worst_cross = 0.0;
    json comparison = json::array();
    for (std::size_t n : ranks) {
        const auto op = tail_projection(n, 2 * n + 4, weight);
        const auto sampled = operator_norm_estimate([&](const ScaleVector& x) { return op.apply(x); }, weight,
                                                    2 * n + 4, 1, 0, 16);
        const auto d = projection_defect_norm(n, weight);
        worst_cross = std::max(worst_cross, detail::rel_dev(sampled.value, d.exact));
        comparison.push_back({{"N", n},
                              {"exact", d.exact},
                              {"quoted_1_over_f_N", d.quoted_bound},
                              {"exceeds_quoted", d.exceeds_quoted}});
    }
    bool strictly = true;
    for (std::size_t i = 1; i < cert.measured.size(); ++i)
        strictly = strictly && cert.measured[i] < cert.measured[i - 1];

    r.results = {{"certificate", io::to_json(cert)}, {"cauchy_differences", cauchy}, {"comparison", comparison}};
    r.csv = io::certificate_csv(cert);
    r.check("defects within derived bound f(N+1)^{-1/2}", cert.pass);
    r.check("defects strictly decreasing", strictly);
    r.check("sampled estimator reproduces the diagonal formula", worst_cross <= 1e-12, {{"max_rel", worst_cross}});
    return r;
}

inline Report run_compactness_tail(const json& p, int jobs)
{
    Report r;
    const auto count = p.at("paths").get<std::size_t>();
    const auto deltas = p.at("deltas").get<std::vector<double>>();
    const auto cutoffs = p.at("cutoffs").get<std::vector<double>>();
    const double sob_p = p.at("p").get<double>();
    const double half_width = p.at("L").get<double>();
    const auto points = p.at("P").get<std::size_t>();
    const auto dim = p.at("dim").get<std::size_t>();
    const auto seed = p.at("seed").get<std::uint64_t>();

    json certs = json::array();
    std::string csv = "delta,T,measured,bound\n";
    bool all_pass = true;
    for (double delta : deltas) {
        auto samples = detail::parallel_map(count, jobs, [&](std::size_t i) {
            auto rng = detail::item_rng(seed, i);
            auto v = sampling::random_bump_path(rng, half_width, points, dim);
            v *= 1.0 / wkp_delta_norm(v, 1, sob_p, delta, 0);
            return v;
        });
        const auto cert = truncation_defect(cutoffs, delta, sob_p, samples);
        all_pass = all_pass && cert.pass;
        for (std::size_t i = 0; i < cert.params.size(); ++i)
            csv += detail::csv_number(delta) + "," + detail::csv_number(cert.params[i]) + "," +
                   detail::csv_number(cert.measured[i]) + "," + detail::csv_number(cert.bound_derived[i]) + "\n";
        certs.push_back({{"delta", delta}, {"certificate", io::to_json(cert)}});
    }
    r.results = {{"certificates", certs}};
    r.csv = csv;
    r.check("tail mass <= e^{-delta T} on unit W^{1,p}_delta paths (slack 1e-9)", all_pass);
    return r;
}

inline Report run_floer_compactness(const json& p, int jobs)
{
    Report r;
    const auto count = p.at("samples").get<std::size_t>();
    const auto ranks = p.at("ranks").get<std::vector<std::size_t>>();
    const auto truncation = p.at("truncation").get<std::size_t>();
    const double delta = p.at("delta").get<double>();
    const double sob_p = p.at("p").get<double>();
    const double half_width = p.at("L").get<double>();
    const auto points = p.at("P").get<std::size_t>();
    const auto seed = p.at("seed").get<std::uint64_t>();
    const auto weight = detail::weight_param(p, "weight");

    auto samples = detail::parallel_map(count, jobs, [&](std::size_t i) {
        auto rng = detail::item_rng(seed, i);
        auto v = sampling::random_bump_path(rng, half_width, points, truncation, weight);
        // Unit ball of E_1: max of the two constituent norms equals 1.
        const double n = std::max(wkp_delta_norm(v, 1, sob_p, delta, 0), wkp_delta_norm(v, 0, sob_p, delta, 1));
        v *= 1.0 / n;
        return v;
    });
    const auto cert = floer_projection_defect(ranks, delta, sob_p, samples);
    bool strictly = true;
    for (std::size_t i = 1; i < cert.measured.size(); ++i)
        strictly = strictly && cert.measured[i] < cert.measured[i - 1];
    r.results = {{"certificate", io::to_json(cert)}};
    r.csv = io::certificate_csv(cert);
    r.check("defect <= f(N+1)^{-1/2} ||v||_{L^p_delta(H_1)} for every sample", cert.pass);
    r.check("worst defect strictly decreasing in N", strictly);
    return r;
}

inline Report run_doubling(const json& p, int jobs)
{
    Report r;
    const auto count = p.at("paths").get<std::size_t>();
    const int bandwidth = p.at("bandwidth").get<int>();
    const auto points = p.at("points").get<std::size_t>();
    const int loop_bandwidth = p.at("loop_bandwidth").get<int>();
    const auto seed = p.at("seed").get<std::uint64_t>();

    struct Out {
        double halve_double = 0.0;
        double double_halve = 0.0;
        double symmetry = 0.0;
        double residual = 0.0;
    };
    auto outs = detail::parallel_map(count, jobs, [&](std::size_t i) {
        auto rng = detail::item_rng(seed, i);
        Out o;
        const auto gamma = sampling::random_compliant_path(rng, bandwidth, points, 2);
        const auto doubled = double_path(gamma, loop_bandwidth);
        o.symmetry = symmetry_defect(doubled.loop);
        const auto back = halve(doubled, points, gamma.level());
        for (std::size_t k = 0; k < points; ++k)
            o.halve_double = std::max(o.halve_double, std::abs(back[k] - gamma[k]));

        const SymLoop loop{sampling::random_real_loop(rng, bandwidth)};
        const auto again = double_path(halve(loop, points), loop_bandwidth);
        const auto padded = loop.loop.with_bandwidth(again.loop.bandwidth());
        for (std::size_t k = 0; k < padded.modes().size(); ++k)
            o.double_halve = std::max(o.double_halve, std::abs(padded.modes()[k] - again.loop.modes()[k]));

        for (const auto& res : boundary_residuals(gamma, 1))
            o.residual = std::max(o.residual, res.residual);
        return o;
    });
    Out worst;
    std::string csv = "path,halve_double,double_halve,symmetry_defect,max_residual\n";
    for (std::size_t i = 0; i < outs.size(); ++i) {
        const auto& o = outs[i];
        worst.halve_double = std::max(worst.halve_double, o.halve_double);
        worst.double_halve = std::max(worst.double_halve, o.double_halve);
        worst.symmetry = std::max(worst.symmetry, o.symmetry);
        worst.residual = std::max(worst.residual, o.residual);
        csv += std::to_string(i) + "," + detail::csv_number(o.halve_double) + "," +
               detail::csv_number(o.double_halve) + "," + detail::csv_number(o.symmetry) + "," +
               detail::csv_number(o.residual) + "\n";
    }

    // Sorted symmetric-loop weights against f(nu) = nu^2.
    const auto sorted = symmetric_loop_weight(200);
    const auto eq = weights_equivalent(WeightFunction::power(2.0), sorted, 401);

    r.results = {{"max_halve_double", worst.halve_double},
                 {"max_double_halve", worst.double_halve},
                 {"max_symmetry_defect", worst.symmetry},
                 {"max_boundary_residual_l_le_1", worst.residual},
                 {"weight_equivalence", {{"constant", eq.constant}, {"growth_slope", eq.growth_slope}}}};
    r.csv = csv;
    r.check("halve o double = id on samples (<= 1e-9)", worst.halve_double <= 1e-9, {{"max", worst.halve_double}});
    r.check("double o halve = id on coefficients (<= 1e-9)", worst.double_halve <= 1e-9,
            {{"max", worst.double_halve}});
    r.check("doubled compliant paths have real coefficients (<= 1e-8)", worst.symmetry <= 1e-8,
            {{"max", worst.symmetry}});
    r.check("sorted (1+l^2) weights equivalent to nu^2 on the sampled range", eq.likely_equivalent,
            {{"constant", eq.constant}});
    return r;
}

/// The growth type of each Floer theory's fractal scale.
struct GrowthRow {
    std::string floer_homology;
    std::string order;
    std::string mapping_space;
    std::string growth_type;
    double exponent;
};

inline std::vector<GrowthRow> growth_table()
{
    return {{"periodic", "1st", "loop space", "nu^2", 2.0},
            {"lagrangian", "1st", "path space", "nu^2", 2.0},
            {"hyperkahler", "1st", "Map(M^3, R^2n)", "nu^(2/3)", 2.0 / 3.0},
            {"heat", "2nd", "loop space", "nu^4", 4.0}};
}

inline Report run_growth_table(const json&, int)
{
    Report r;
    json rows = json::array();
    std::string csv = "floer_homology,order,mapping_space,growth_type\n";
    bool ok = true;
    for (const auto& g : growth_table()) {
        const auto w = WeightFunction::power(g.exponent);
        rows.push_back({{"floer_homology", g.floer_homology},
                        {"order", g.order},
                        {"mapping_space", g.mapping_space},
                        {"growth_type", g.growth_type},
                        {"weight", io::to_json(w)}});
        csv += g.floer_homology + "," + g.order + "," + g.mapping_space + "," + g.growth_type + "\n";
        ok = ok && w(1) == 1.0;
    }
    r.results = {{"rows", rows}};
    r.csv = csv;
    r.check("four growth types emitted", rows.size() == 4 && ok);
    return r;
}

inline Report run_scale_axioms(const json& p, int jobs)
{
    Report r;
    const auto weight = detail::weight_param(p, "weight");
    const auto nvec = p.at("vectors").get<std::size_t>();
    const auto npath = p.at("paths").get<std::size_t>();
    const auto truncation = p.at("truncation").get<std::size_t>();
    const int levels = p.at("levels").get<int>();
    const auto merges = p.at("merges").get<std::size_t>();
    const auto seed = p.at("seed").get<std::uint64_t>();

    struct VecOut {
        bool monotone = true;
        double isometry = 0.0;
    };
    auto vec = detail::parallel_map(nvec, jobs, [&](std::size_t i) {
        auto rng = detail::item_rng(seed, i);
        const ScaleVector x(weight, sampling::random_coefficients(rng, truncation));
        VecOut o;
        for (int k = 0; k < levels; ++k)
            o.monotone = o.monotone && level_norm(x, k + 1) >= level_norm(x, k);
        for (int k = 0; k <= levels; ++k)
            for (int j = 0; j + k <= levels; ++j)
                o.isometry =
                    std::max(o.isometry, detail::rel_dev(level_norm(level_isomorphism(x, k), j + k), level_norm(x, j)));
        return o;
    });
    bool vec_monotone = true;
    double isometry = 0.0;
    for (const auto& o : vec) {
        vec_monotone = vec_monotone && o.monotone;
        isometry = std::max(isometry, o.isometry);
    }

    const auto spec = LevelSpec::with_default_deltas(weight, 2.0, levels);
    auto path_ok = detail::parallel_map(npath, jobs, [&](std::size_t i) {
        auto rng = detail::item_rng(seed + 7919, i);
        const auto v = sampling::random_bump_path(rng, 6.0, 241, truncation, weight);
        bool ok = true;
        double prev = ek_norm(v, 0, spec);
        for (int k = 1; k <= levels; ++k) {
            const double cur = ek_norm(v, k, spec);
            ok = ok && cur >= prev;
            prev = cur;
        }
        return ok ? 1 : 0;
    });
    const bool path_monotone = std::all_of(path_ok.begin(), path_ok.end(), [](int b) { return b == 1; });

    // Merge against an independent brute-force oracle: concatenate then sort.
    bool merge_ok = true;
    for (std::size_t i = 0; i < merges; ++i) {
        auto rng = detail::item_rng(seed + 104729, i);
        std::uniform_real_distribution<double> e(0.2, 3.0);
        std::uniform_int_distribution<std::size_t> len(1, 24);
        const auto f = WeightFunction::power(e(rng));
        const auto g = WeightFunction::power(e(rng));
        const std::size_t n = len(rng);
        const auto merged = merge_weights(f, g, n);
        std::vector<double> brute;
        for (std::size_t nu = 1; nu <= n; ++nu) {
            brute.push_back(f(static_cast<std::int64_t>(nu)));
            brute.push_back(g(static_cast<std::int64_t>(nu)));
        }
        std::sort(brute.begin(), brute.end());
        for (std::size_t k = 0; k < brute.size(); ++k)
            merge_ok = merge_ok && merged(static_cast<std::int64_t>(k + 1)) == brute[k];
    }

    r.results = {{"vector_norms_monotone", vec_monotone},
                 {"path_norms_monotone", path_monotone},
                 {"level_isomorphism_max_rel", isometry},
                 {"merge_matches_bruteforce", merge_ok}};
    r.csv = "check,value\nvector_norms_monotone," + std::to_string(vec_monotone) + "\npath_norms_monotone," +
            std::to_string(path_monotone) + "\nlevel_isomorphism_max_rel," + detail::csv_number(isometry) +
            "\nmerge_matches_bruteforce," + std::to_string(merge_ok) + "\n";
    r.check("level norms nondecreasing in k (vectors)", vec_monotone);
    r.check("E_k norms nondecreasing in k (paths)", path_monotone);
    r.check("level isomorphism is a levelwise isometry (rel <= 1e-12)", isometry <= 1e-12, {{"max", isometry}});
    r.check("merged weight equals brute-force sort-merge", merge_ok);
    return r;
}

/// Observed convergence order of a sequence of approximations on grids whose
/// step halves each time. Returns the order of the finest pair, or +inf when
/// the differences are already at roundoff.
inline double refinement_order(const std::vector<double>& values)
{
    const std::size_t n = values.size();
    const double a = std::abs(values[n - 3] - values[n - 2]);
    const double b = std::abs(values[n - 2] - values[n - 1]);
    const double floor = 1e-13 * std::max(std::abs(values.back()), 1.0);
    if (b <= floor)
        return INFINITY;
    return std::log2(a / b);
}

inline Report run_refinement(const json& p, int)
{
    Report r;
    const auto resolutions = p.at("resolutions").get<std::vector<std::size_t>>();
    const double half_width = p.at("L").get<double>();
    const auto dim = p.at("dim").get<std::size_t>();
    if (resolutions.size() < 3)
        throw ConfigError("refinement: need at least three resolutions");
    for (std::size_t i = 1; i < resolutions.size(); ++i)
        if (resolutions[i] - 1 != 2 * (resolutions[i - 1] - 1))
            throw ConfigError("refinement: each resolution must halve the step (P_{i+1} - 1 = 2 (P_i - 1))");

    const auto weight = make_weight(WeightFunction::power(2.0));
    const auto spec = LevelSpec::with_default_deltas(weight, 2.0, 2);
    auto make = [&](std::size_t points) {
        return GridPath::sample(half_width, points, dim, weight, [](double t, std::span<double> out) {
            for (std::size_t k = 0; k < out.size(); ++k)
                out[k] = std::exp(-(t - 0.3 * static_cast<double>(k)) * (t - 0.3 * static_cast<double>(k))) /
                         static_cast<double>(k + 1);
        });
    };
    struct Quantity {
        std::string name;
        std::function<double(const GridPath&)> eval;
    };
    std::vector<Quantity> qs;
    for (int k = 0; k <= 2; ++k)
        for (double delta : {0.0, 0.5})
            for (int level = 0; level <= 1; ++level)
                qs.push_back({"wkp(k=" + std::to_string(k) + ",delta=" + detail::csv_number(delta) +
                                  ",j=" + std::to_string(level) + ")",
                              [=](const GridPath& v) { return wkp_delta_norm(v, k, 2.0, delta, level); }});
    for (int k = 0; k <= 2; ++k)
        qs.push_back({"ek(k=" + std::to_string(k) + ")", [=, &spec](const GridPath& v) { return ek_norm(v, k, spec); }});
    qs.push_back({"tail(T=2)", [](const GridPath& v) { return tail_mass(v, 2.0, 2.0); }});
    qs.push_back({"lp(p=3)", [](const GridPath& v) { return lp_norm(v, 3.0, 1); }});

    std::vector<GridPath> paths;
    for (auto pts : resolutions)
        paths.push_back(make(pts));

    json rows = json::array();
    std::string csv = "quantity,P,value,order\n";
    double min_order = INFINITY;
    for (const auto& q : qs) {
        std::vector<double> values;
        for (const auto& v : paths)
            values.push_back(q.eval(v));
        const double order = refinement_order(values);
        min_order = std::min(min_order, order);
        rows.push_back({{"quantity", q.name}, {"values", values}, {"order", std::isinf(order) ? json("converged") : json(order)}});
        for (std::size_t i = 0; i < values.size(); ++i)
            csv += q.name + "," + std::to_string(resolutions[i]) + "," + detail::csv_number(values[i]) + "," +
                   (i + 1 == values.size() ? (std::isinf(order) ? std::string("converged") : detail::csv_number(order))
                                           : std::string()) +
                   "\n";
    }
    r.results = {{"rows", rows}, {"min_order", std::isinf(min_order) ? json("converged") : json(min_order)}};
    r.csv = csv;
    r.check("grid norms converge at order >= 1.9 under step halving", min_order >= 1.9);
    return r;
}

// ---------------------------------------------------------------------------

inline const std::vector<Experiment>& registry()
{
    static const std::vector<Experiment> all = [] {
        const json power2 = {{"name", "power(2)"}, {"rule", "power"}, {"exponent", 2.0}};
        std::vector<Experiment> e;
        e.push_back({"discontinuity", "shift defect of the step witness equals sqrt(2) for every tau",
                     {{"taus", {0.5, 0.25, 0.125}}, {"resolution", 64}}, run_discontinuity});
        e.push_back({"compact-open", "pointwise decay ||tau_* v - v|| -> 0 with the 2 pi tau ||v'|| bound",
                     {{"loops", 20}, {"bandwidth", 16}, {"j_max", 10}, {"seed", 1}}, run_compact_open});
        e.push_back({"isometry", "the shift preserves every Sobolev level norm",
                     {{"loops", 100}, {"bandwidth", 16}, {"levels", 3}, {"seed", 2}}, run_isometry});
        e.push_back({"sc-diff", "finite-difference verification of the iterated differentials",
                     {{"orders", {1, 2, 3}},
                      {"bandwidth", 4},
                      {"eps", detail::powers_of_two(3, 10)},
                      {"symmetry_trials", 100},
                      {"max_level", 4},
                      {"seed", 3}},
                     run_sc_diff});
        e.push_back({"chain-rule", "tangent map of a composition equals the composition of tangent maps",
                     {{"triples", 50}, {"bandwidth", 8}, {"seed", 4}}, run_chain_rule});
        e.push_back({"compactness-rank", "finite-rank approximation defects on the fractal scale",
                     {{"weight", power2}, {"ranks", {1, 2, 4, 8, 16}}}, run_compactness_rank});
        e.push_back({"compactness-tail", "exponential-weight domain truncation defects",
                     {{"paths", 100},
                      {"deltas", {0.5, 1.0}},
                      {"cutoffs", {1.0, 2.0, 4.0}},
                      {"p", 2.0},
                      {"L", 8.0},
                      {"P", 801},
                      {"dim", 4},
                      {"seed", 5}},
                     run_compactness_tail});
        e.push_back({"floer-compactness", "finite-rank defects on the Floer level E_1",
                     {{"samples", 50},
                      {"ranks", {2, 4, 8}},
                      {"truncation", 16},
                      {"delta", 0.1},
                      {"p", 2.0},
                      {"L", 8.0},
                      {"P", 401},
                      {"weight", power2},
                      {"seed", 6}},
                     run_floer_compactness});
        e.push_back({"doubling", "doubling/halving round trips and real Fourier coefficients",
                     {{"paths", 50}, {"bandwidth", 8}, {"points", 512}, {"loop_bandwidth", 32}, {"seed", 7}},
                     run_doubling});
        e.push_back({"growth-table", "growth types of the fractal scales of several Floer theories", json::object(),
                     run_growth_table});
        e.push_back({"scale-axioms", "norm monotonicity, level isomorphisms and weight merging",
                     {{"weight", power2},
                      {"vectors", 100},
                      {"paths", 100},
                      {"truncation", 12},
                      {"levels", 4},
                      {"merges", 20},
                      {"seed", 8}},
                     run_scale_axioms});
        e.push_back({"refinement", "second-order consistency of grid norms under step halving",
                     {{"resolutions", {201, 401, 801, 1601}}, {"L", 8.0}, {"dim", 3}}, run_refinement});
        return e;
    }();
    return all;
}

inline const Experiment* find(const std::string& name)
{
    for (const auto& e : registry())
        if (e.name == name)
            return &e;
    return nullptr;
}

namespace detail {

inline bool same_kind(const json& def, const json& value)
{
    if (def.is_number_integer())
        return value.is_number_integer() && (!def.is_number_unsigned() || value.get<long long>() >= 0);
    if (def.is_number())
        return value.is_number();
    if (def.is_array()) {
        if (!value.is_array() || value.empty())
            return false;
        if (def.empty())
            return true;
        return std::all_of(value.begin(), value.end(), [&](const json& v) { return same_kind(def.front(), v); });
    }
    return def.type() == value.type();
}

} // namespace detail

/// Defaults overlaid with `overrides`; unknown keys and type mismatches are
/// ConfigErrors. "seed" is accepted by every experiment that draws samples.
inline json merge_params(const Experiment& e, const json& overrides)
{
    if (!overrides.is_object())
        throw ConfigError("parameters must be a JSON object");
    json out = e.defaults;
    for (const auto& [key, value] : overrides.items()) {
        if (!e.defaults.contains(key))
            throw ConfigError("experiment '" + e.name + "' has no parameter '" + key + "'");
        if (key == "weight") {
            try {
                (void)io::weight_from_json(value);
            } catch (const std::exception& ex) {
                throw ConfigError("parameter 'weight': " + std::string(ex.what()));
            }
        } else if (!detail::same_kind(e.defaults.at(key), value)) {
            throw ConfigError("parameter '" + key + "' has the wrong type (expected like " +
                              e.defaults.at(key).dump() + ")");
        }
        out[key] = value;
    }
    return out;
}

/// Validates and runs an experiment. Numerical contract violations raised while
/// running (e.g. a misaligned tau) are reported as ConfigErrors.
inline Report run(const std::string& name, const json& overrides, int jobs = 1)
{
    const Experiment* e = find(name);
    if (!e)
        throw ConfigError("unknown experiment '" + name + "'");
    const json params = merge_params(*e, overrides);
    Report r;
    try {
        r = e->run(params, jobs);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::logic_error& ex) {
        throw ConfigError(ex.what());
    } catch (const json::exception& ex) {
        throw ConfigError(ex.what());
    }
    r.experiment = name;
    r.params = params;
    return r;
}

} // namespace sclab::experiments
