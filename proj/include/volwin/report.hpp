#pragma once

#include "volwin/csv.hpp"
#include "volwin/diagnostics.hpp"
#include "volwin/estimate.hpp"
#include "volwin/study.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace volwin::report {

// --- fit documents -----------------------------------------------------------

/// JSON for a single fit: model, law, named params, log-likelihood, convergence.
std::string fit_json(const estimate::FitResult& fit, const std::string& market, const Provenance& provenance);

struct FitDocument {
    std::string market;
    models::ModelSpec spec;
    models::ParamVector params;
    double log_likelihood = 0.0;
    bool converged = false;
};

FitDocument parse_fit_json(const std::string& text);
FitDocument read_fit_json(const std::string& path);

// --- stationarity / diagnostics tables ----------------------------------------

struct StationarityRow {
    std::string country;
    diag::TestResult adf;
};
inline constexpr const char* kStationarityCsvHeader = "country,statistic,lag,p_value,conclusion";
void write_stationarity_csv(std::ostream& out, const std::vector<StationarityRow>& rows, const Provenance& provenance);

struct DiagnosticsRow {
    std::string country;
    diag::TestResult ljung_box;
    diag::TestResult arch_lm;
};
inline constexpr const char* kDiagnosticsCsvHeader = "country,ljung_box_p,arch_lm_p,interpretation";

/// `residuals adequate` when both p >= 0.05; otherwise names the failing test(s).
std::string interpretation(const diag::TestResult& ljung_box, const diag::TestResult& arch_lm);
void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRow>& rows, const Provenance& provenance);

struct VarSummaryRow {
    std::string country;
    double level = 0.0;
    std::size_t n_obs = 0;
    std::size_t hits = 0;
    double hit_rate = 0.0;
};
inline constexpr const char* kVarCsvHeader = "country,level,n_obs,hits,hit_rate";
void write_var_csv(std::ostream& out, const std::vector<VarSummaryRow>& rows, const Provenance& provenance);

// --- plot data ---------------------------------------------------------------

struct PlotOptions {
    std::size_t acf_lags = 20;
    double var_level = diag::kDefaultVarLevel;
};

/// Writes `<market>.std_residuals.csv`, `.acf.csv`, `.qq.csv`,
/// `.volatility_track.csv` and `.var_hits.csv` into `dir`.
void write_plot_data(const std::string& dir, const std::string& market, const ReturnSeries& returns,
                     const estimate::FitResult& fit, const diag::VarBacktest& backtest, const PlotOptions& options,
                     const Provenance& provenance);

// --- bundle -----------------------------------------------------------------

/// Full study run: stationarity, by-window table, full-sample diagnostics,
/// GED robustness, VaR backtest, window deltas and per-market plot data,
/// all written into `out_dir`. Returns the list of files written.
std::vector<std::string> write_study_bundle(const study::StudyConfig& config, const std::string& out_dir);
std::vector<std::string> write_study_bundle(const study::StudyConfig& config, const std::vector<ReturnSeries>& markets,
                                            const std::string& out_dir);

}  // namespace volwin::report
