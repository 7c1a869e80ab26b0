#pragma once

#include "volwin/dists.hpp"
#include "volwin/estimate.hpp"
#include "volwin/series.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace volwin::diag {

/// p-value that may be censored at a table boundary.
struct PValue {
    enum class Censor { none, below, above };
    double value = 1.0;  // the bound itself when censored
    Censor censor = Censor::none;

    [[nodiscard]] bool is_censored() const { return censor != Censor::none; }
    /// `0.0123`, `<0.01` or `>0.1`.
    [[nodiscard]] std::string text() const;
    /// True when the p-value is certainly below `alpha`.
    [[nodiscard]] bool below(double alpha) const;
};

struct TestResult {
    double statistic = 0.0;
    PValue p_value;
    std::size_t lags = 0;
    std::size_t n_obs = 0;
    std::string conclusion;
};

inline constexpr std::size_t kDefaultAdfLags = 15;
inline constexpr std::size_t kDefaultLjungBoxLags = 20;
inline constexpr std::size_t kDefaultArchLmLags = 12;
inline constexpr double kDefaultVarLevel = 0.99;

/// Augmented Dickey-Fuller test with constant and no trend.
///
/// Fits dy_t = c + rho y_{t-1} + sum_i phi_i dy_{t-i} + e_t by least squares;
/// the statistic is the t-ratio of rho. The p-value interpolates linearly in
/// the Dickey-Fuller critical values (1%, 2.5%, 5%, 10%) for the effective
/// sample size and is censored outside that range. Conclusion is
/// `Stationary` when p < 0.05, else `NonStationary`.
TestResult adf_test(std::span<const double> series, std::size_t lags = kDefaultAdfLags);
inline TestResult adf_test(const ReturnSeries& s, std::size_t lags = kDefaultAdfLags) {
    return adf_test(s.values(), lags);
}

/// Dickey-Fuller critical value (constant, no trend) at probability `p` in
/// {0.01, 0.025, 0.05, 0.10} for effective sample size `n`.
double adf_critical_value(double p, std::size_t n);

/// Sample autocorrelations rho_1..rho_max_lag (denominator: full sum of squares).
std::vector<double> autocorrelations(std::span<const double> series, std::size_t max_lag);

/// Q = n(n+2) sum_k rho_k^2 / (n-k), chi-square(lags) p-value.
TestResult ljung_box(std::span<const double> series, std::size_t lags = kDefaultLjungBoxLags);

/// Engle's LM test: n R^2 from regressing e_t^2 on a constant and `lags` lags.
TestResult arch_lm(std::span<const double> series, std::size_t lags = kDefaultArchLmLags);

/// Upper-tail chi-square probability.
double chi_square_sf(double x, double dof);

/// (theoretical quantile, sorted sample value) at plotting positions (i - 0.5)/n.
std::vector<std::pair<double, double>> qq_points(std::span<const double> std_resid, const dists::InnovationLaw& law);

struct VarBacktest {
    double level = kDefaultVarLevel;
    std::vector<double> var_series;
    std::vector<std::uint8_t> hits;
    std::size_t hit_count = 0;
    double hit_rate = 0.0;
};

/// VaR_t = mu + sigma_t q_law(1 - level); a hit is r_t < VaR_t.
VarBacktest var_backtest(const ReturnSeries& returns, const estimate::FitResult& fit, double level = kDefaultVarLevel);

}  // namespace volwin::diag
