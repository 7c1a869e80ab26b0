#pragma once

#include "volwin/date.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace volwin {

struct PriceObservation {
    Date date;
    std::optional<double> price;  // nullopt marks a gap awaiting repair
    bool was_interpolated = false;

    [[nodiscard]] bool is_gap() const { return !price.has_value(); }
};

/// Date-indexed price series for one market.
///
/// Dates are strictly increasing, every present price is positive, and only
/// repaired observations carry `was_interpolated`.
class PriceSeries {
public:
    PriceSeries() = default;
    PriceSeries(std::string market_id, std::vector<PriceObservation> observations);

    [[nodiscard]] const std::string& market_id() const { return market_id_; }
    [[nodiscard]] const std::vector<PriceObservation>& observations() const { return obs_; }
    [[nodiscard]] std::size_t size() const { return obs_.size(); }
    [[nodiscard]] bool empty() const { return obs_.empty(); }

    [[nodiscard]] std::size_t gap_count() const;
    /// Longest run of consecutive gaps (0 when gap-free).
    [[nodiscard]] std::size_t max_gap_run() const;
    [[nodiscard]] std::size_t interpolated_count() const;

    [[nodiscard]] std::vector<Date> dates() const;
    /// Throws DataError if any gap remains.
    [[nodiscard]] std::vector<double> prices() const;

private:
    std::string market_id_;
    std::vector<PriceObservation> obs_;
};

/// Log-return series r_t dated at the later day of each differenced pair.
class ReturnSeries {
public:
    ReturnSeries() = default;
    ReturnSeries(std::string market_id, std::vector<Date> dates, std::vector<double> values);

    [[nodiscard]] const std::string& market_id() const { return market_id_; }
    [[nodiscard]] const std::vector<Date>& dates() const { return dates_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] bool empty() const { return values_.empty(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

    /// Observations [first, last).
    [[nodiscard]] ReturnSeries slice(std::size_t first, std::size_t last) const;

    friend bool operator==(const ReturnSeries&, const ReturnSeries&) = default;

private:
    std::string market_id_;
    std::vector<Date> dates_;
    std::vector<double> values_;
};

struct WindowDef {
    std::string name;
    Date start;  // inclusive
    Date end;    // inclusive
    bool is_crisis = false;

    [[nodiscard]] bool contains(Date d) const { return start <= d && d <= end; }
};

struct DummySeries {
    std::string name;
    std::vector<Date> dates;
    std::vector<std::uint8_t> values;  // each 0 or 1
};

}  // namespace volwin
