#pragma once

#include "volwin/models.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace volwin::sim {

inline constexpr std::size_t kBurnIn = 500;

/// First synthetic trading day (a Monday); later days are consecutive weekdays.
Date synthetic_epoch();
std::vector<Date> synthetic_dates(std::size_t n, Date epoch = synthetic_epoch());

/// Model-implied unconditional variance, or nullopt when the recursion is not
/// covariance stationary (garch/tgarch persistence >= 1).
std::optional<double> unconditional_variance(models::Family family, const models::ParamVector& params);

struct SimulatedPath {
    ReturnSeries returns;
    models::VariancePath variance;
};

/// r_t = mu + sigma_t z_t with z_t drawn from `law.kind` using `params.tail`.
///
/// The recursion starts at the unconditional variance (or `init` when given),
/// runs kBurnIn discarded steps, then emits n observations. Throws
/// DomainError for a nonstationary garch/tgarch without `init`.
SimulatedPath simulate_path(models::Family family, const models::ParamVector& params,
                            const dists::InnovationLaw& law, std::size_t n, std::uint64_t seed,
                            std::optional<double> init = std::nullopt, const std::string& market_id = "sim");

struct RegimeSegment {
    std::size_t length = 0;
    models::ParamVector params;
};

struct RegimeSchedule {
    models::Family family = models::Family::garch;
    std::vector<RegimeSegment> segments;
};

struct RegimePath {
    ReturnSeries returns;
    models::VariancePath variance;
    /// Index of the first observation of each segment.
    std::vector<std::size_t> boundaries;
};

/// Concatenated segments with sigma^2 and eps carried across boundaries; the
/// first step of a segment is computed with that segment's parameters.
RegimePath simulate_regimes(const RegimeSchedule& schedule, const dists::InnovationLaw& law, std::uint64_t seed,
                            std::optional<double> init = std::nullopt, const std::string& market_id = "sim");

/// Price path 100 * exp(cumsum r) dated one weekday before the first return.
PriceSeries prices_from_returns(const ReturnSeries& returns, double start_price = 100.0);

}  // namespace volwin::sim
