#include "volwin/cli.hpp"

#include "volwin/diagnostics.hpp"
#include "volwin/error.hpp"
#include "volwin/estimate.hpp"
#include "volwin/ingest.hpp"
#include "volwin/report.hpp"
#include "volwin/sim.hpp"
#include "volwin/study.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace volwin::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string default_out_dir() {
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return "volwin_out";
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file '" + path.string() + "'");
    return out;
}

models::Family family_arg(const std::string& name) {
    const auto f = models::parse_family(name);
    if (!f) throw UsageError("unknown model '" + name + "' (expected garch, egarch or tgarch)");
    return *f;
}

dists::InnovationLaw law_arg(const std::string& name) {
    const auto k = dists::parse_law_kind(name);
    if (!k) throw UsageError("unknown law '" + name + "' (expected t, ged or normal)");
    switch (*k) {
        case dists::LawKind::student_t: return dists::InnovationLaw::student_t(8.0);
        case dists::LawKind::ged: return dists::InnovationLaw::ged(1.5);
        case dists::LawKind::normal_limit: return dists::InnovationLaw::normal();
    }
    return {};
}

/// `mu=0,omega=1e-6,alpha=0.08,beta=0.9,gamma=0.1,nu=6`
models::ParamVector params_arg(const std::string& text, const dists::InnovationLaw& law) {
    models::ParamVector p;
    p.tail = law.kind == dists::LawKind::ged ? 1.5 : law.kind == dists::LawKind::student_t ? 8.0 : 0.0;
    if (text.empty()) return p;
    for (const auto& item : split_csv_line(text)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("parameter '" + item + "' is not key=value");
        const std::string key = trim(item.substr(0, eq));
        double v = 0.0;
        if (!parse_double(item.substr(eq + 1), v)) throw UsageError("parameter '" + key + "' is not a number");
        if (key == "mu") p.mu = v;
        else if (key == "omega") p.omega = v;
        else if (key == "alpha") p.alpha = v;
        else if (key == "beta") p.beta = v;
        else if (key == "gamma") p.gamma = v;
        else if (key == "nu" || key == "shape" || key == "tail") p.tail = v;
        else throw UsageError("unknown parameter '" + key + "'");
    }
    return p;
}

models::ParamVector params_from_yaml(const YAML::Node& node, const dists::InnovationLaw& law) {
    std::ostringstream text;
    bool first = true;
    for (const auto& kv : node) {
        text << (first ? "" : ",") << kv.first.as<std::string>() << "=" << kv.second.as<std::string>();
        first = false;
    }
    return params_arg(text.str(), law);
}

nlohmann::ordered_json params_json(const models::ParamVector& p, const dists::InnovationLaw& law) {
    nlohmann::ordered_json j;
    j["mu"] = p.mu;
    j["omega"] = p.omega;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["gamma"] = p.gamma;
    if (law.has_tail()) j[law.kind == dists::LawKind::ged ? "shape" : "nu"] = p.tail;
    return j;
}

// --- ingest ------------------------------------------------------------------

struct IngestArgs {
    std::string input;
    std::string column = "Close";
    std::string market;
    std::string out_dir;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
    const auto raw = ingest::load_price_csv(a.input, a.column, a.market);
    const auto repaired = ingest::interpolate_missing(raw);
    const auto returns = ingest::log_returns(repaired);
    fs::create_directories(a.out_dir);
    Provenance prov;
    prov.config_hash = hex64(fnv1a64("ingest;" + a.column));
    const auto id = repaired.market_id();
    const auto prices_path = fs::path(a.out_dir) / (id + ".prices.csv");
    const auto returns_path = fs::path(a.out_dir) / (id + ".returns.csv");
    ingest::write_prices_csv(prices_path.string(), repaired, prov);
    ingest::write_returns_csv(returns_path.string(), returns, prov);
    out << id << ": " << repaired.size() << " prices, " << raw.gap_count() << " gaps repaired (longest run "
        << raw.max_gap_run() << "), " << returns.size() << " returns\n"
        << prices_path.string() << "\n" << returns_path.string() << "\n";
    return kOk;
}

// --- adf ---------------------------------------------------------------------

struct AdfArgs {
    std::string input;
    std::size_t lags = diag::kDefaultAdfLags;
    std::string market;
    std::string out_file;
};

int cmd_adf(const AdfArgs& a, std::ostream& out) {
    const auto r = ingest::read_returns_csv(a.input, a.market);
    const auto res = diag::adf_test(r.values(), a.lags);
    Provenance prov;
    prov.config_hash = hex64(fnv1a64("adf;" + std::to_string(a.lags)));
    const std::vector<report::StationarityRow> rows{{r.market_id(), res}};
    if (a.out_file.empty()) {
        report::write_stationarity_csv(out, rows, prov);
    } else {
        auto f = open_out(a.out_file);
        report::write_stationarity_csv(f, rows, prov);
    }
    return kOk;
}

// --- fit ---------------------------------------------------------------------

struct FitArgs {
    std::string input;
    std::string model = "egarch";
    std::string law = "t";
    std::uint64_t seed = 0;
    int starts = 5;
    int max_iterations = 5000;
    double tolerance = 1e-8;
    std::string market;
    std::string out_file;
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
    const auto spec = models::ModelSpec{family_arg(a.model), law_arg(a.law)};
    const auto r = ingest::read_returns_csv(a.input, a.market);
    estimate::FitConfig cfg;
    cfg.seed = a.seed;
    cfg.starts = a.starts;
    cfg.max_iterations = a.max_iterations;
    cfg.function_tolerance = a.tolerance;
    const auto result = estimate::fit(spec, r, cfg);
    Provenance prov;
    prov.config_hash = hex64(fnv1a64("fit;" + a.model + ";" + a.law + ";" + std::to_string(a.starts) + ";" +
                                     std::to_string(a.max_iterations) + ";" + format_double(a.tolerance)));
    prov.seed = a.seed;
    const auto doc = report::fit_json(result, r.market_id(), prov);
    if (a.out_file.empty()) {
        out << doc;
    } else {
        auto f = open_out(a.out_file);
        f << doc;
    }
    return result.converged ? kOk : kNumericalFailure;
}

// --- study -------------------------------------------------------------------

struct StudyArgs {
    std::string config;
    std::string out_dir;
    int threads = -1;
};

int cmd_study(const StudyArgs& a, std::ostream& out) {
    auto cfg = study::load_study_config(a.config);
    if (a.threads >= 0) cfg.threads = static_cast<unsigned>(a.threads);
    const auto files = report::write_study_bundle(cfg, a.out_dir);
    for (const auto& f : files) out << (fs::path(a.out_dir) / f).string() << "\n";
    return kOk;
}

// --- diagnose ----------------------------------------------------------------

struct DiagnoseArgs {
    std::string returns;
    std::string fit;
    std::size_t lb_lags = diag::kDefaultLjungBoxLags;
    std::size_t lm_lags = diag::kDefaultArchLmLags;
    double var_level = diag::kDefaultVarLevel;
    std::string market;
    std::string out_dir;
};

int cmd_diagnose(const DiagnoseArgs& a, std::ostream& out) {
    const auto doc = report::read_fit_json(a.fit);
    std::string market = a.market.empty() ? doc.market : a.market;
    const auto r = ingest::read_returns_csv(a.returns, market);
    market = r.market_id();
    const auto fit = estimate::evaluate(doc.spec, doc.params, r);
    Provenance prov;
    prov.config_hash = hex64(fnv1a64("diagnose;" + std::to_string(a.lb_lags) + ";" + std::to_string(a.lm_lags) +
                                     ";" + format_double(a.var_level)));
    fs::create_directories(a.out_dir);
    const fs::path base(a.out_dir);
    const std::vector<report::DiagnosticsRow> rows{
        {market, diag::ljung_box(fit.std_residuals, a.lb_lags), diag::arch_lm(fit.std_residuals, a.lm_lags)}};
    {
        auto f = open_out(base / "diagnostics.csv");
        report::write_diagnostics_csv(f, rows, prov);
    }
    const auto bt = diag::var_backtest(r, fit, a.var_level);
    {
        auto f = open_out(base / "var_backtest.csv");
        report::write_var_csv(f, {{market, a.var_level, r.size(), bt.hit_count, bt.hit_rate}}, prov);
    }
    report::write_plot_data(a.out_dir, market, r, fit, bt, {a.lb_lags, a.var_level}, prov);
    out << market << ": ljung_box_p=" << rows[0].ljung_box.p_value.text()
        << " arch_lm_p=" << rows[0].arch_lm.p_value.text() << " var_hit_rate=" << format_double(bt.hit_rate)
        << "\n";
    return kOk;
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
    std::string model = "garch";
    std::string params;
    std::string law = "t";
    std::size_t n = 5000;
    std::uint64_t seed = 0;
    std::string regimes;
    double init = 0.0;
    std::string market = "sim";
    bool vendor_prices = false;
    std::string out_dir;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    const auto law = law_arg(a.law);
    auto family = family_arg(a.model);
    const std::optional<double> init = a.init > 0.0 ? std::optional<double>(a.init) : std::nullopt;

    sim::RegimeSchedule schedule;
    if (!a.regimes.empty()) {
        YAML::Node root;
        try {
            root = YAML::LoadFile(a.regimes);
        } catch (const YAML::Exception& e) {
            throw DataError("cannot read regimes file '" + a.regimes + "': " + e.what());
        }
        if (root["model"]) family = family_arg(root["model"].as<std::string>());
        schedule.family = family;
        for (const auto& seg : root["segments"]) {
            sim::RegimeSegment s;
            s.length = seg["length"].as<std::size_t>();
            s.params = params_from_yaml(seg["params"], law);
            schedule.segments.push_back(s);
        }
        if (schedule.segments.empty()) throw DataError("regimes file has no segments");
    } else {
        schedule.family = family;
        schedule.segments.push_back({a.n, params_arg(a.params, law)});
    }

    const auto path = sim::simulate_regimes(schedule, law, a.seed, init, a.market);
    fs::create_directories(a.out_dir);
    const fs::path base(a.out_dir);
    Provenance prov;
    prov.config_hash = hex64(fnv1a64("simulate;" + a.model + ";" + a.law + ";" + a.params + ";" + a.regimes));
    prov.seed = a.seed;
    ingest::write_returns_csv((base / (a.market + ".returns.csv")).string(), path.returns, prov, "return");

    nlohmann::ordered_json truth;
    truth["provenance"] = {{"tool", "volwin"}, {"version", VOLWIN_VERSION}, {"config_hash", prov.config_hash},
                           {"seed", prov.seed}};
    truth["model"] = models::to_string(schedule.family);
    truth["law"] = dists::to_string(law.kind);
    auto segs = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
        segs.push_back({{"start", path.boundaries[k]},
                        {"length", schedule.segments[k].length},
                        {"params", params_json(schedule.segments[k].params, law)}});
    }
    if (schedule.segments.size() == 1) truth["params"] = params_json(schedule.segments[0].params, law);
    truth["segments"] = segs;
    truth["boundaries"] = path.boundaries;
    truth["init_variance"] = path.variance.init_value;
    truth["sigma2"] = path.variance.sigma2;
    {
        auto f = open_out(base / (a.market + ".truth.json"));
        f << truth.dump(2) << "\n";
    }
    out << (base / (a.market + ".returns.csv")).string() << "\n" << (base / (a.market + ".truth.json")).string() << "\n";
    if (a.vendor_prices) {
        const auto file = base / (a.market + ".vendor.csv");
        ingest::write_vendor_csv(file.string(), sim::prices_from_returns(path.returns));
        out << file.string() << "\n";
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"volwin: by-window GARCH-family volatility toolkit", "volwin"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(VOLWIN_VERSION));

    IngestArgs ia;
    ia.out_dir = default_out_dir();
    auto* ingest_cmd = app.add_subcommand("ingest", "Repair a vendor price CSV and write prices + log returns");
    ingest_cmd->add_option("input", ia.input, "Vendor CSV (Date,Open,High,Low,Close,Adj Close,Volume)")->required();
    ingest_cmd->add_option("--column", ia.column, "Price column (Close, adjclose, ...)");
    ingest_cmd->add_option("--market", ia.market, "Market id (default: file stem)");
    ingest_cmd->add_option("--out", ia.out_dir, "Output directory");

    AdfArgs aa;
    auto* adf_cmd = app.add_subcommand("adf", "Augmented Dickey-Fuller test on a return file");
    adf_cmd->add_option("returns", aa.input, "date,value CSV")->required();
    adf_cmd->add_option("--lags", aa.lags, "Augmentation lags")->capture_default_str();
    adf_cmd->add_option("--market", aa.market, "Market id (default: file stem)");
    adf_cmd->add_option("--out", aa.out_file, "Write the row to this file instead of stdout");

    FitArgs fa;
    auto* fit_cmd = app.add_subcommand("fit", "Maximum-likelihood fit of one model");
    fit_cmd->add_option("returns", fa.input, "date,value CSV")->required();
    fit_cmd->add_option("--model", fa.model, "garch | egarch | tgarch")->capture_default_str();
    fit_cmd->add_option("--law", fa.law, "t | ged | normal")->capture_default_str();
    fit_cmd->add_option("--seed", fa.seed, "Multi-start seed")->capture_default_str();
    fit_cmd->add_option("--starts", fa.starts, "Number of starts")->capture_default_str();
    fit_cmd->add_option("--max-iterations", fa.max_iterations, "Simplex iteration cap")->capture_default_str();
    fit_cmd->add_option("--tolerance", fa.tolerance, "Simplex function-spread tolerance")->capture_default_str();
    fit_cmd->add_option("--market", fa.market, "Market id (default: file stem)");
    fit_cmd->add_option("--out", fa.out_file, "Write JSON here instead of stdout");

    StudyArgs sa;
    sa.out_dir = default_out_dir();
    auto* study_cmd = app.add_subcommand("study", "Run the by-window study and write the report bundle");
    study_cmd->add_option("config", sa.config, "YAML study configuration")->required();
    study_cmd->add_option("--out", sa.out_dir, "Output directory");
    study_cmd->add_option("--threads", sa.threads, "Worker threads (0 = all cores; default from config)");

    DiagnoseArgs da;
    da.out_dir = default_out_dir();
    auto* diag_cmd = app.add_subcommand("diagnose", "Residual diagnostics, VaR backtest and plot data for a fit");
    diag_cmd->add_option("returns", da.returns, "date,value CSV")->required();
    diag_cmd->add_option("fit", da.fit, "Fit JSON from `volwin fit`")->required();
    diag_cmd->add_option("--lb-lags", da.lb_lags, "Ljung-Box lags")->capture_default_str();
    diag_cmd->add_option("--lm-lags", da.lm_lags, "ARCH-LM lags")->capture_default_str();
    diag_cmd->add_option("--var-level", da.var_level, "VaR confidence level")->capture_default_str();
    diag_cmd->add_option("--market", da.market, "Market id (default: from fit JSON)");
    diag_cmd->add_option("--out", da.out_dir, "Output directory");

    SimulateArgs ma;
    ma.out_dir = default_out_dir();
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate a return path from known parameters");
    sim_cmd->add_option("--model", ma.model, "garch | egarch | tgarch")->capture_default_str();
    sim_cmd->add_option("--params", ma.params, "mu=..,omega=..,alpha=..,beta=..,gamma=..,nu=..");
    sim_cmd->add_option("--law", ma.law, "t | ged | normal")->capture_default_str();
    sim_cmd->add_option("--n", ma.n, "Observations")->capture_default_str();
    sim_cmd->add_option("--seed", ma.seed, "Seed")->capture_default_str();
    sim_cmd->add_option("--regimes", ma.regimes, "YAML regime schedule (overrides --params/--n)");
    sim_cmd->add_option("--init", ma.init, "Initial variance (required when nonstationary)");
    sim_cmd->add_option("--market", ma.market, "Output file prefix / market id")->capture_default_str();
    sim_cmd->add_flag("--vendor-prices", ma.vendor_prices, "Also write a vendor-layout price CSV");
    sim_cmd->add_option("--out", ma.out_dir, "Output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        if (*ingest_cmd) return cmd_ingest(ia, out);
        if (*adf_cmd) return cmd_adf(aa, out);
        if (*fit_cmd) return cmd_fit(fa, out);
        if (*study_cmd) return cmd_study(sa, out);
        if (*diag_cmd) return cmd_diagnose(da, out);
        if (*sim_cmd) return cmd_simulate(ma, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const YAML::Exception& e) {
        err << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        err << "data error: " << e.what() << "\n";
        return kDataError;
    }
    return kUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace volwin::cli
