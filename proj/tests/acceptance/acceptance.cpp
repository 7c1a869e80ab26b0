// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.
// Usage: acceptance [criterion numbers...]

#include "support.hpp"

#include "volwin/cli.hpp"
#include "volwin/diagnostics.hpp"
#include "volwin/estimate.hpp"
#include "volwin/rng.hpp"
#include "volwin/sim.hpp"
#include "volwin/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace volwin;
using models::Family;
using models::ParamVector;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

ParamVector make(double mu, double omega, double alpha, double beta, double gamma, double tail) {
    ParamVector p;
    p.mu = mu;
    p.omega = omega;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.tail = tail;
    return p;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------
// 1. Persistence of the published TGARCH rows.

Outcome persistence_reproduction() {
    struct Row {
        const char* label;
        double alpha, beta, gamma, persistence;
    };
    const Row rows[] = {
        {"IDN taper", 2.03e-7, 0.892561098, 0.180174617, 0.98264861},
        {"IDN post_taper", 0.00381579, 0.934689087, 0.080644444, 0.978827099},
        {"IDN covid", 0.08754383, 0.720965967, 0.19193058, 0.904475087},
        {"IDN post_covid", 5.09e-5, 0.999977603, -0.008259868, 0.995898615},
        {"IDN hike", 1.46e-7, 0.857711407, 0.116714895, 0.916069001},
        {"MYS taper", 2.09e-6, 0.740703089, 0.376551128, 0.928980739},
        {"MYS post_taper", 0.0444755, 0.911225137, 0.058873965, 0.985137619},
        {"MYS covid", 0.037530096, 0.922848547, 0.029672365, 0.975214826},
        {"MYS post_covid", 0.001131858, 0.999988605, -0.091586584, 0.955327171},
        {"MYS hike", 0.063340229, 0.837720566, 0.131352838, 0.966737214},
        {"PHL taper", 8.72e-9, 0.822884348, 0.305960894, 0.975864804},
        {"PHL post_taper", 0.018295883, 0.927474732, 0.056479035, 0.974010132},
        {"PHL covid", 0.099674483, 0.824505791, 0.092787988, 0.970574268},
        {"PHL hike", 1.54e-4, 0.983013853, 0.027015817, 0.996676065},
    };
    int ok = 0;
    double worst = 0.0;
    std::string bad;
    for (const auto& r : rows) {
        const double got = models::persistence(Family::tgarch, make(0, 1, r.alpha, r.beta, r.gamma, 8));
        const double err = std::abs(got - r.persistence);
        worst = std::max(worst, err);
        if (err <= 1e-5) ++ok;
        else bad += std::string(" ") + r.label;
    }
    return {ok == 14, std::to_string(ok) + "/14 rows within 1e-5, max error " + fmt("%.2e", worst) + bad};
}

// ---------------------------------------------------------------------------
// 2. Parameter recovery.

Outcome parameter_recovery() {
    const auto law = dists::InnovationLaw::student_t(6.0);
    struct Case {
        Family family;
        ParamVector truth;
        double tolerance;
        std::optional<double> init;
    };
    const Case cases[] = {
        {Family::garch, make(0, 1e-6, 0.08, 0.90, 0.0, 6), 0.05, std::nullopt},
        // alpha + beta + gamma/2 = 1.03: no unconditional variance, so the
        // path starts from the garch value 1e-6 / (1 - 0.08 - 0.90).
        {Family::tgarch, make(0, 1e-6, 0.08, 0.90, 0.10, 6), 0.05, 5e-5},
        {Family::egarch, make(0, -0.3, 0.15, 0.96, -0.08, 6), 0.10, std::nullopt},
    };
    bool all = true;
    std::ostringstream detail;
    for (const auto& c : cases) {
        std::vector<double> ea, eb, eg, enu;
        int converged = 0;
        for (int s = 0; s < 20; ++s) {
            const auto seed = derive_seed(2, std::string(models::to_string(c.family)) + "-" + std::to_string(s));
            const auto path = sim::simulate_path(c.family, c.truth, law, 5000, seed, c.init);
            estimate::FitConfig cfg;
            cfg.seed = seed;
            const auto fit = estimate::fit({c.family, law}, path.returns, cfg);
            converged += fit.converged;
            ea.push_back(std::abs(fit.params.alpha - c.truth.alpha));
            eb.push_back(std::abs(fit.params.beta - c.truth.beta));
            eg.push_back(std::abs(fit.params.gamma - c.truth.gamma));
            enu.push_back(std::abs(fit.params.tail - 6.0));
        }
        const double ma = median(ea), mb = median(eb), mg = median(eg), mnu = median(enu);
        bool ok = ma <= c.tolerance && mb <= c.tolerance && mnu <= 2.0 && converged >= 18;
        if (c.family == Family::egarch) ok = ok && mg <= c.tolerance;
        all = all && ok;
        detail << models::to_string(c.family) << (ok ? " ok" : " FAIL") << " (med|da|=" << fmt("%.4f", ma)
               << " med|db|=" << fmt("%.4f", mb) << " med|dg|=" << fmt("%.4f", mg) << " med|dnu|=" << fmt("%.2f", mnu)
               << " conv=" << converged << "/20, true persistence "
               << fmt("%.3f", models::persistence(c.family, c.truth)) << "); ";
    }
    return {all, detail.str()};
}

// ---------------------------------------------------------------------------
// 3. Diagnostic contract.

Outcome diagnostic_contract() {
    const auto p = make(0, 1e-5, 0.1, 0.85, 0.0, 0.0);
    const auto law = dists::InnovationLaw::normal();
    int raw_reject = 0, lm_pass = 0, lb_pass = 0, both = 0;
    for (int s = 0; s < 100; ++s) {
        const auto path = sim::simulate_path(Family::garch, p, law, 5000, derive_seed(3, std::to_string(s)));
        raw_reject += diag::arch_lm(path.returns.values(), 12).p_value.value < 1e-4;
        const auto z = models::standardized_residuals(path.returns.values(), p.mu, path.variance);
        const bool lm = diag::arch_lm(z, 12).p_value.value > 0.05;
        const bool lb = diag::ljung_box(z, 20).p_value.value > 0.05;
        lm_pass += lm;
        lb_pass += lb;
        both += lm && lb;
    }
    const bool ok = raw_reject >= 90 && lm_pass >= 90 && lb_pass >= 90;
    return {ok, "raw arch_lm p<1e-4 in " + std::to_string(raw_reject) + "/100; residual arch_lm p>0.05 in " +
                    std::to_string(lm_pass) + "/100; residual ljung_box p>0.05 in " + std::to_string(lb_pass) +
                    "/100 (both: " + std::to_string(both) + "/100)"};
}

// ---------------------------------------------------------------------------
// 4. GED robustness.

Outcome ged_robustness() {
    const auto law = dists::InnovationLaw::student_t(6.0);
    const auto truth = make(0, 1e-6, 0.08, 0.90, 0.0, 6);
    int shape_ok = 0, ll_ok = 0;
    double max_shape = 0, max_rel = 0;
    for (int s = 0; s < 10; ++s) {
        const auto seed = derive_seed(4, std::to_string(s));
        const auto path = sim::simulate_path(Family::garch, truth, law, 5000, seed);
        estimate::FitConfig cfg;
        cfg.seed = seed;
        const auto t_fit = estimate::fit({Family::garch, law}, path.returns, cfg);
        if (!t_fit.converged) continue;
        const auto g_fit = estimate::refit_with_law(t_fit, dists::InnovationLaw::ged(1.5), path.returns, cfg);
        const double rel = std::abs(g_fit.log_likelihood - t_fit.log_likelihood) / std::abs(t_fit.log_likelihood);
        shape_ok += g_fit.converged && g_fit.params.tail < 2.0;
        ll_ok += rel < 0.01;
        max_shape = std::max(max_shape, g_fit.params.tail);
        max_rel = std::max(max_rel, rel);
    }
    return {shape_ok == 10 && ll_ok == 10, "shape<2 in " + std::to_string(shape_ok) + "/10 (max " +
                                               fmt("%.3f", max_shape) + "); |dLL|<1% in " + std::to_string(ll_ok) +
                                               "/10 (max " + fmt("%.5f", 100 * max_rel) + "%)"};
}

// ---------------------------------------------------------------------------
// 5. ADF size and power.

Outcome adf_size_power() {
    int rw_ok = 0, iid_ok = 0, labels_ok = 0;
    for (int s = 0; s < 50; ++s) {
        Rng a(derive_seed(5, "rw" + std::to_string(s)));
        Rng b(derive_seed(5, "iid" + std::to_string(s)));
        std::vector<double> walk(1000), noise(1000);
        double level = 0.0;
        for (std::size_t i = 0; i < 1000; ++i) {
            level += a.normal();
            walk[i] = level;
            noise[i] = b.normal();
        }
        const auto rw = diag::adf_test(walk, 15);
        const auto st = diag::adf_test(noise, 15);
        const bool rw_fail_to_reject = !rw.p_value.below(0.05);
        const bool iid_reject = st.p_value.below(0.01) || st.statistic < diag::adf_critical_value(0.01, st.n_obs);
        rw_ok += rw_fail_to_reject;
        iid_ok += iid_reject;
        labels_ok += (rw.conclusion == (rw_fail_to_reject ? "NonStationary" : "Stationary")) &&
                     (st.conclusion == (st.p_value.below(0.05) ? "Stationary" : "NonStationary"));
    }
    return {rw_ok >= 45 && iid_ok >= 48 && labels_ok == 50,
            "random walk not rejected at 5% in " + std::to_string(rw_ok) + "/50; iid rejected at 1% in " +
                std::to_string(iid_ok) + "/50; labels consistent in " + std::to_string(labels_ok) + "/50"};
}

// ---------------------------------------------------------------------------
// 6. VaR coverage.

/// Exact two-sided (1 - conf) interval for Binomial(n, p) hit counts.
std::pair<int, int> binomial_interval(int n, double p, double conf) {
    const double tail = 0.5 * (1.0 - conf);
    std::vector<double> pmf(n + 1);
    for (int k = 0; k <= n; ++k) {
        pmf[k] = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
                          (n - k) * std::log1p(-p));
    }
    int lo = 0;
    double cum = 0.0;
    while (lo <= n && cum + pmf[lo] < tail) cum += pmf[lo++];
    int hi = n;
    cum = 0.0;
    while (hi >= 0 && cum + pmf[hi] < tail) cum += pmf[hi--];
    return {lo, hi};
}

Outcome var_coverage() {
    const auto law = dists::InnovationLaw::student_t(6.0);
    const auto truth = make(0, 1e-6, 0.08, 0.90, 0.0, 6);
    const auto [lo, hi] = binomial_interval(5000, 0.01, 0.99);
    int inside = 0;
    std::string counts;
    for (int s = 0; s < 10; ++s) {
        const auto seed = derive_seed(6, std::to_string(s));
        const auto sample = sim::simulate_path(Family::garch, truth, law, 5000, seed);
        estimate::FitConfig cfg;
        cfg.seed = seed;
        const auto fitted = estimate::fit({Family::garch, law}, sample.returns, cfg);
        const auto fresh = sim::simulate_path(Family::garch, fitted.params, fitted.spec.law, 5000,
                                              derive_seed(seed, "fresh"), fitted.variance_path.init_value);
        const auto eval = estimate::evaluate(fitted.spec, fitted.params, fresh.returns);
        const auto bt = diag::var_backtest(fresh.returns, eval, 0.99);
        const int hits = static_cast<int>(bt.hit_count);
        inside += hits >= lo && hits <= hi;
        counts += (s ? "," : "") + std::to_string(hits);
    }
    return {inside >= 9, std::to_string(inside) + "/10 hit counts inside [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "] of 5000 (counts " + counts + ")"};
}

// ---------------------------------------------------------------------------
// 7. Brute-force oracles.

Outcome brute_force_oracles() {
    const std::vector<double> y{0.5, -1.2, 0.3, 2.2, -0.7, 0.1, 1.4, -0.9, -0.2, 0.8, -1.5, 0.6};
    const std::size_t lags = 4;
    double mean = 0;
    for (const double v : y) mean += v / 12.0;
    double c0 = 0;
    for (const double v : y) c0 += (v - mean) * (v - mean);
    double q = 0;
    for (std::size_t k = 1; k <= lags; ++k) {
        double ck = 0;
        for (std::size_t t = k; t < 12; ++t) ck += (y[t] - mean) * (y[t - k] - mean);
        q += (ck / c0) * (ck / c0) / (12.0 - k);
    }
    q *= 12.0 * 14.0;
    const double lb_err = std::abs(diag::ljung_box(y, lags).statistic - q);

    const auto law = dists::InnovationLaw::student_t(6.0);
    const models::ModelSpec spec{Family::garch, law};
    const auto truth = make(0, 1e-6, 0.08, 0.90, 0.0, 6);
    const auto path = sim::simulate_path(Family::garch, truth, law, 3000, derive_seed(7, "grid"));
    estimate::FitControl control;
    control.start = truth;
    control.hold(estimate::Param::mu).hold(estimate::Param::omega).hold(estimate::Param::tail);
    const estimate::FitConfig cfg;
    const auto fit = estimate::fit(spec, path.returns, cfg, control);

    const auto r = path.returns.values();
    const double init = models::sample_variance(r);
    double grid_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i) {
        for (int j = 0; j < 200; ++j) {
            auto p = truth;
            p.alpha = i / 199.0;
            p.beta = j / 199.0;
            grid_min = std::min(grid_min, estimate::negative_log_likelihood(spec, p, r, init));
        }
    }
    const double fitted_nll = -fit.log_likelihood;
    const bool ok = lb_err <= 1e-10 && fit.converged && fitted_nll <= grid_min + cfg.function_tolerance;
    return {ok, "ljung_box |Q - brute force| = " + fmt("%.1e", lb_err) + "; restricted fit NLL " +
                    fmt("%.6f", fitted_nll) + " vs 200x200 grid min " + fmt("%.6f", grid_min)};
}

// ---------------------------------------------------------------------------
// 8. Crisis contrast on regime-injected panels.

Outcome crisis_contrast() {
    const auto law = dists::InnovationLaw::student_t(8.0);
    const auto tranquil = make(0, 2e-6, 0.05, 0.88, 0.05, 12.0);
    const auto crisis = make(0, 2e-6, 0.03, 0.86, 0.20, 5.0);
    const std::size_t len = 1500;
    int gamma_ok = 0, nu_ok = 0, both = 0;
    for (int s = 0; s < 20; ++s) {
        const auto seed = derive_seed(8, std::to_string(s));
        const sim::RegimeSchedule schedule{Family::tgarch, {{len, tranquil}, {len, crisis}}};
        const auto path = sim::simulate_regimes(schedule, law, seed, std::nullopt, "SIM");
        const auto& d = path.returns.dates();
        study::StudyConfig cfg;
        cfg.families = {Family::tgarch};
        cfg.law = law;
        cfg.fit_config.seed = seed;
        cfg.windows = {{"tranquil", d.front(), d[len - 1], false}, {"crisis", d[len], d.back(), true}};
        const auto table = study::run_study(cfg, {path.returns});
        const auto deltas = study::compare_windows(table, cfg.windows);
        const bool g = !deltas.empty() && deltas[0].delta_gamma > 0.0;
        const bool n = !deltas.empty() && deltas[0].delta_nu < 0.0;
        gamma_ok += g;
        nu_ok += n;
        both += g && n;
    }
    return {both >= 16, "both signs recovered in " + std::to_string(both) + "/20 (gamma " + std::to_string(gamma_ok) +
                            "/20, nu " + std::to_string(nu_ok) + "/20)"};
}

// ---------------------------------------------------------------------------
// 9. Study determinism.

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = testing::read_text(e.path());
    }
    return files;
}

Outcome study_determinism() {
    const auto dir = testing::scratch_dir("determinism");
    const std::string config = std::string(VOLWIN_SOURCE_DIR) + "/config/default_study.yaml";
    std::ostringstream sink;
    const int a = cli::run({"study", config, "--out", (dir / "a").string(), "--threads", "1"}, sink, sink);
    const int b = cli::run({"study", config, "--out", (dir / "b").string(), "--threads", "1"}, sink, sink);
    const int c = cli::run({"study", config, "--out", (dir / "c").string(), "--threads", "4"}, sink, sink);
    if (a != 0 || b != 0 || c != 0) {
        fs::remove_all(dir);
        return {false, "study command failed: " + sink.str()};
    }
    const auto sa = snapshot(dir / "a");
    const auto sb = snapshot(dir / "b");
    const auto sc = snapshot(dir / "c");
    fs::remove_all(dir);
    return {sa == sb && sa == sc && !sa.empty(),
            std::to_string(sa.size()) + " files; run-to-run identical: " + (sa == sb ? "yes" : "no") +
                "; 1 vs 4 threads identical: " + (sa == sc ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"persistence formula reproduces the published TGARCH column", persistence_reproduction},
        {"parameter recovery, 20 seeds per family", parameter_recovery},
        {"diagnostic contract, 100 trials", diagnostic_contract},
        {"GED robustness, 10 seeds", ged_robustness},
        {"ADF size and power, 50 seeds", adf_size_power},
        {"VaR coverage, 10 seeds", var_coverage},
        {"brute-force oracles", brute_force_oracles},
        {"crisis contrast, 20 seeds", crisis_contrast},
        {"study determinism", study_determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k + 1);
        if (!selected.empty() && !selected.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[k].first << " | "
                  << o.detail << " [" << fmt("%.1f", secs) << " s]" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
