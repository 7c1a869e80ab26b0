#pragma once

#include "volwin/csv.hpp"
#include "volwin/estimate.hpp"
#include "volwin/study_config.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace volwin::study {

struct WindowSlice {
    WindowDef window;
    ReturnSeries returns;

    [[nodiscard]] bool empty() const { return returns.empty(); }
};

/// One slice per window holding exactly the observations dated inside it.
std::vector<WindowSlice> partition(const ReturnSeries& returns, const std::vector<WindowDef>& windows);

enum class RowStatus { converged, failed, skipped_short };
std::string_view to_string(RowStatus s);

struct RowValues {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double nu = 0.0;
    double persistence = 0.0;
};

struct StudyRow {
    std::string country;
    std::string window;
    models::Family model = models::Family::garch;
    RowStatus status = RowStatus::skipped_short;
    /// Present iff status == converged.
    std::optional<RowValues> values;
    std::size_t n_obs = 0;
    double log_likelihood = 0.0;
};

struct StudyTable {
    std::vector<StudyRow> rows;
    Provenance provenance;
};

inline constexpr const char* kStudyCsvHeader = "country,window,model,alpha,beta,gamma,nu,persistence,status";

/// Runs `fn(i)` for i in [0, n) on `threads` workers (0 = hardware concurrency).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Loads one market: prices are gap-repaired and differenced; return files are read as-is.
ReturnSeries load_market(const MarketInput& market);
std::vector<ReturnSeries> load_markets(const StudyConfig& config);

/// Seed for one (country, window, model) fit, derived from the master seed.
std::uint64_t cell_seed(std::uint64_t master, const std::string& country, const std::string& window,
                        models::Family family);

/// Fits every (market, window, family) cell. Rows are sorted by country,
/// configured window order, then family.
StudyTable run_study(const StudyConfig& config);
StudyTable run_study(const StudyConfig& config, const std::vector<ReturnSeries>& markets);

struct RobustnessRow {
    std::string country;
    models::Family model = models::Family::egarch;
    bool converged = false;
    double shape = 0.0;
    double log_likelihood = 0.0;
    double baseline_log_likelihood = 0.0;
};

inline constexpr const char* kRobustnessCsvHeader = "country,shape,log_likelihood";

/// Family used for full-sample fits: egarch when configured, else the first family.
models::Family baseline_family(const StudyConfig& config);

/// Full-sample fits under the configured law, one per market.
std::vector<estimate::FitResult> full_sample_fits(const StudyConfig& config, const std::vector<ReturnSeries>& markets);

/// GED refit of each full-sample baseline fit, warm-started from it.
std::vector<RobustnessRow> ged_robustness(const StudyConfig& config, const std::vector<ReturnSeries>& markets,
                                          const std::vector<estimate::FitResult>& baseline);

struct WindowDelta {
    std::string country;
    models::Family model = models::Family::garch;
    double delta_persistence = 0.0;
    double delta_gamma = 0.0;
    double delta_nu = 0.0;
    std::size_t n_crisis = 0;
    std::size_t n_tranquil = 0;
};

inline constexpr const char* kWindowDeltaCsvHeader =
    "country,model,delta_persistence,delta_gamma,delta_nu,n_crisis,n_tranquil";

/// Mean(crisis windows) - mean(tranquil windows) of persistence, gamma and nu
/// over converged rows, per country and family. Groups lacking either side
/// are omitted; throws DataError when a country has no complete group.
std::vector<WindowDelta> compare_windows(const StudyTable& table, const std::vector<WindowDef>& windows);

void write_study_csv(std::ostream& out, const StudyTable& table);
std::string study_json(const StudyTable& table, int indent = 2);
StudyTable read_study_csv(std::istream& in);

void write_robustness_csv(std::ostream& out, const std::vector<RobustnessRow>& rows, const Provenance& provenance);
void write_window_deltas_csv(std::ostream& out, const std::vector<WindowDelta>& rows, const Provenance& provenance);

}  // namespace volwin::study
