#include "volwin/report.hpp"

#include "volwin/error.hpp"
#include "volwin/ingest.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace volwin::report {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

const char* tail_key(dists::LawKind kind) { return kind == dists::LawKind::ged ? "shape" : "nu"; }

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file '" + path.string() + "'");
    return out;
}

}  // namespace

std::string fit_json(const estimate::FitResult& fit, const std::string& market, const Provenance& provenance) {
    json doc;
    doc["provenance"] = {{"tool", "volwin"},
                         {"version", VOLWIN_VERSION},
                         {"config_hash", provenance.config_hash},
                         {"seed", provenance.seed}};
    doc["market"] = market;
    doc["model"] = models::to_string(fit.spec.family);
    doc["law"] = dists::to_string(fit.spec.law.kind);
    json params;
    params["mu"] = fit.params.mu;
    params["omega"] = fit.params.omega;
    params["alpha"] = fit.params.alpha;
    params["beta"] = fit.params.beta;
    params["gamma"] = fit.params.gamma;
    if (fit.spec.law.has_tail()) params[tail_key(fit.spec.law.kind)] = fit.params.tail;
    doc["params"] = params;
    if (fit.spec.family == models::Family::egarch) {
        doc["labels"] = {{"alpha", "magnitude-coefficient"}, {"gamma", "sign-coefficient"}};
    }
    doc["persistence"] = models::persistence(fit.spec.family, fit.params);
    doc["log_likelihood"] = fit.log_likelihood;
    doc["converged"] = fit.converged;
    doc["iterations"] = fit.iterations;
    doc["n_obs"] = fit.n_obs;
    doc["init_variance"] = fit.variance_path.init_value;
    return doc.dump(2) + "\n";
}

FitDocument parse_fit_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("fit JSON does not parse: ") + e.what());
    }
    FitDocument out;
    try {
        out.market = doc.value("market", std::string());
        const auto fam = models::parse_family(doc.at("model").get<std::string>());
        if (!fam) throw DataError("fit JSON: unknown model");
        const auto law = dists::parse_law_kind(doc.at("law").get<std::string>());
        if (!law) throw DataError("fit JSON: unknown law");
        out.spec.family = *fam;
        out.spec.law.kind = *law;
        const auto& p = doc.at("params");
        out.params.mu = p.at("mu").get<double>();
        out.params.omega = p.at("omega").get<double>();
        out.params.alpha = p.at("alpha").get<double>();
        out.params.beta = p.at("beta").get<double>();
        out.params.gamma = p.value("gamma", 0.0);
        out.params.tail = out.spec.law.has_tail() ? p.at(tail_key(*law)).get<double>() : 0.0;
        out.spec.law.tail = out.params.tail;
        out.log_likelihood = doc.value("log_likelihood", 0.0);
        out.converged = doc.value("converged", false);
    } catch (const json::exception& e) {
        throw DataError(std::string("fit JSON is missing fields: ") + e.what());
    }
    models::validate(out.spec, out.params);
    return out;
}

FitDocument read_fit_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open fit file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_fit_json(text.str());
}

void write_stationarity_csv(std::ostream& out, const std::vector<StationarityRow>& rows, const Provenance& provenance) {
    out << provenance.comment_line() << '\n' << kStationarityCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.country << ',' << format_double(r.adf.statistic) << ',' << r.adf.lags << ',' << r.adf.p_value.text()
            << ',' << r.adf.conclusion << '\n';
    }
}

std::string interpretation(const diag::TestResult& ljung_box, const diag::TestResult& arch_lm) {
    const bool lb = ljung_box.p_value.below(0.05);
    const bool lm = arch_lm.p_value.below(0.05);
    if (!lb && !lm) return "residuals adequate";
    if (lb && lm) return "residual autocorrelation; remaining ARCH effect";
    return lb ? "residual autocorrelation" : "remaining ARCH effect";
}

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRow>& rows, const Provenance& provenance) {
    out << provenance.comment_line() << '\n' << kDiagnosticsCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.country << ',' << r.ljung_box.p_value.text() << ',' << r.arch_lm.p_value.text() << ','
            << interpretation(r.ljung_box, r.arch_lm) << '\n';
    }
}

void write_var_csv(std::ostream& out, const std::vector<VarSummaryRow>& rows, const Provenance& provenance) {
    out << provenance.comment_line() << '\n' << kVarCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.country << ',' << format_double(r.level) << ',' << r.n_obs << ',' << r.hits << ','
            << format_double(r.hit_rate) << '\n';
    }
}

void write_plot_data(const std::string& dir, const std::string& market, const ReturnSeries& returns,
                     const estimate::FitResult& fit, const diag::VarBacktest& backtest, const PlotOptions& options,
                     const Provenance& provenance) {
    const fs::path base(dir);
    const auto& z = fit.std_residuals;
    const auto& dates = returns.dates();
    {
        auto out = open_out(base / (market + ".std_residuals.csv"));
        ingest::write_series_csv(out, dates, z, "std_residual", provenance);
    }
    {
        auto out = open_out(base / (market + ".acf.csv"));
        const std::size_t lags = std::min(options.acf_lags, z.size() - 1);
        const auto rho = diag::autocorrelations(z, lags);
        const double band = 1.96 / std::sqrt(static_cast<double>(z.size()));
        out << provenance.comment_line() << "\nlag,acf,lower_band,upper_band\n";
        for (std::size_t k = 0; k < rho.size(); ++k) {
            out << (k + 1) << ',' << format_double(rho[k]) << ',' << format_double(-band) << ','
                << format_double(band) << '\n';
        }
    }
    {
        auto out = open_out(base / (market + ".qq.csv"));
        dists::InnovationLaw law = fit.spec.law;
        if (law.has_tail()) law.tail = fit.params.tail;
        out << provenance.comment_line() << "\ntheoretical,sample\n";
        for (const auto& [q, s] : diag::qq_points(z, law)) out << format_double(q) << ',' << format_double(s) << '\n';
    }
    {
        auto out = open_out(base / (market + ".volatility_track.csv"));
        out << provenance.comment_line() << "\ndate,sigma,abs_residual\n";
        for (std::size_t t = 0; t < returns.size(); ++t) {
            out << dates[t].iso() << ',' << format_double(std::sqrt(fit.variance_path.sigma2[t])) << ','
                << format_double(std::abs(returns[t] - fit.params.mu)) << '\n';
        }
    }
    {
        auto out = open_out(base / (market + ".var_hits.csv"));
        out << provenance.comment_line() << "\ndate,return,var,hit\n";
        for (std::size_t t = 0; t < returns.size(); ++t) {
            out << dates[t].iso() << ',' << format_double(returns[t]) << ',' << format_double(backtest.var_series[t])
                << ',' << static_cast<int>(backtest.hits[t]) << '\n';
        }
    }
    (void)options.var_level;
}

std::vector<std::string> write_study_bundle(const study::StudyConfig& config, const std::string& out_dir) {
    config.validate();
    return write_study_bundle(config, study::load_markets(config), out_dir);
}

std::vector<std::string> write_study_bundle(const study::StudyConfig& config, const std::vector<ReturnSeries>& markets,
                                            const std::string& out_dir) {
    config.validate();
    fs::create_directories(out_dir);
    const fs::path base(out_dir);
    const Provenance prov{config.hash(), config.fit_config.seed};
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, auto&& writer) {
        auto out = open_out(base / name);
        writer(out);
        written.push_back(name);
    };

    std::vector<StationarityRow> stationarity;
    for (const auto& m : markets) stationarity.push_back({m.market_id(), diag::adf_test(m.values(), config.adf_lags)});
    emit("stationarity.csv", [&](std::ostream& o) { write_stationarity_csv(o, stationarity, prov); });

    const auto table = study::run_study(config, markets);
    emit("study.csv", [&](std::ostream& o) { study::write_study_csv(o, table); });
    emit("study.json", [&](std::ostream& o) { o << study::study_json(table) << '\n'; });

    std::vector<study::WindowDelta> deltas;
    for (const auto& m : markets) {
        study::StudyTable one;
        for (const auto& r : table.rows) {
            if (r.country == m.market_id()) one.rows.push_back(r);
        }
        try {
            const auto d = study::compare_windows(one, config.windows);
            deltas.insert(deltas.end(), d.begin(), d.end());
        } catch (const DataError&) {
            // No complete crisis/tranquil pair for this market; it is simply absent.
        }
    }
    emit("window_deltas.csv", [&](std::ostream& o) { study::write_window_deltas_csv(o, deltas, prov); });

    const auto fits = study::full_sample_fits(config, markets);
    std::vector<DiagnosticsRow> diagnostics;
    std::vector<VarSummaryRow> var_rows;
    fs::create_directories(base / "plots");
    fs::create_directories(base / "fits");
    for (std::size_t i = 0; i < markets.size(); ++i) {
        const auto& m = markets[i];
        const auto& f = fits[i];
        diagnostics.push_back({m.market_id(), diag::ljung_box(f.std_residuals, config.ljung_box_lags),
                               diag::arch_lm(f.std_residuals, config.arch_lm_lags)});
        const auto bt = diag::var_backtest(m, f, config.var_level);
        var_rows.push_back({m.market_id(), config.var_level, m.size(), bt.hit_count, bt.hit_rate});
        write_plot_data((base / "plots").string(), m.market_id(), m, f, bt,
                        {config.ljung_box_lags, config.var_level}, prov);
        for (const char* kind : {"std_residuals", "acf", "qq", "volatility_track", "var_hits"}) {
            written.push_back("plots/" + m.market_id() + "." + kind + ".csv");
        }
        emit("fits/" + m.market_id() + ".fit.json", [&](std::ostream& o) { o << fit_json(f, m.market_id(), prov); });
    }
    emit("diagnostics.csv", [&](std::ostream& o) { write_diagnostics_csv(o, diagnostics, prov); });
    emit("var_backtest.csv", [&](std::ostream& o) { write_var_csv(o, var_rows, prov); });

    std::vector<ReturnSeries> ok_markets;
    std::vector<estimate::FitResult> ok_fits;
    std::vector<study::RobustnessRow> robustness;
    for (std::size_t i = 0; i < markets.size(); ++i) {
        if (fits[i].converged) {
            ok_markets.push_back(markets[i]);
            ok_fits.push_back(fits[i]);
        }
    }
    const auto refits = study::ged_robustness(config, ok_markets, ok_fits);
    for (const auto& m : markets) {
        const auto it = std::find_if(refits.begin(), refits.end(),
                                     [&](const study::RobustnessRow& r) { return r.country == m.market_id(); });
        if (it != refits.end()) {
            robustness.push_back(*it);
        } else {
            study::RobustnessRow failed;
            failed.country = m.market_id();
            robustness.push_back(failed);
        }
    }
    emit("robustness.csv", [&](std::ostream& o) { study::write_robustness_csv(o, robustness, prov); });
    return written;
}

}  // namespace volwin::report
