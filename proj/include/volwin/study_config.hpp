#pragma once

#include "volwin/dists.hpp"
#include "volwin/estimate.hpp"
#include "volwin/models.hpp"
#include "volwin/series.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace volwin::study {

struct MarketInput {
    enum class Kind { prices, returns };

    std::string market_id;
    std::string path;
    Kind kind = Kind::prices;
    std::string column = "Close";
};

struct StudyConfig {
    std::vector<MarketInput> markets;
    std::vector<WindowDef> windows;
    std::vector<models::Family> families{models::Family::egarch, models::Family::tgarch};
    dists::InnovationLaw law = dists::InnovationLaw::student_t(8.0);
    estimate::FitConfig fit_config;
    std::size_t min_window_obs = 100;

    std::size_t adf_lags = 15;
    std::size_t ljung_box_lags = 20;
    std::size_t arch_lm_lags = 12;
    double var_level = 0.99;
    /// Worker threads for cell fits; 0 uses the hardware concurrency. Does
    /// not affect results.
    unsigned threads = 1;

    /// Throws DomainError on an empty window list, duplicate window names,
    /// inverted windows, min_window_obs < 50 or an invalid fit config.
    void validate() const;
    /// Deterministic text over every result-affecting field (threads excluded).
    [[nodiscard]] std::string canonical_text() const;
    /// 16-hex-digit FNV-1a of canonical_text().
    [[nodiscard]] std::string hash() const;
};

/// Pre-Taper, Taper, Post-Taper, COVID, Post-COVID and Rate-hike windows.
std::vector<WindowDef> default_windows();

/// Parses the YAML study file. Relative market paths resolve against the
/// config file's directory.
StudyConfig load_study_config(const std::string& path);
StudyConfig parse_study_config(const std::string& yaml_text, const std::string& base_dir = ".");

}  // namespace volwin::study
