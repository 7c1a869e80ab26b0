#pragma once

#include "volwin/csv.hpp"
#include "volwin/series.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace volwin::ingest {

/// Loads one price column from a vendor CSV (`Date,Open,High,Low,Close,Adj Close,Volume`).
///
/// `column` is matched case-insensitively ignoring spaces, so `adjclose`
/// selects `Adj Close`. Empty, `null` or non-numeric cells are kept as gaps.
/// Rows are sorted by date; duplicate dates are rejected. The market id
/// defaults to the file stem.
PriceSeries load_price_csv(const std::string& path, const std::string& column = "Close",
                           std::string market_id = {});
PriceSeries parse_price_csv(std::istream& in, const std::string& column, std::string market_id,
                            const std::string& source_name = "<stream>");

/// Linear interpolation of interior gaps on the observation index.
PriceSeries interpolate_missing(const PriceSeries& series);

/// r_t = ln P_t - ln P_{t-1}, dated at the later day.
ReturnSeries log_returns(const PriceSeries& series);

/// Re-indexes `source` onto `target_dates`, interpolating linearly in calendar
/// days between bracketing source observations.
PriceSeries align_calendar(const std::vector<Date>& target_dates, const PriceSeries& source);

/// One indicator series per crisis window; crisis windows must not overlap.
std::vector<DummySeries> build_crisis_dummies(const std::vector<Date>& dates,
                                              const std::vector<WindowDef>& windows);

/// Two-column `date,<value_name>` CSV with a provenance comment line.
void write_series_csv(std::ostream& out, const std::vector<Date>& dates,
                      const std::vector<double>& values, const std::string& value_name,
                      const Provenance& provenance);
void write_prices_csv(const std::string& path, const PriceSeries& series, const Provenance& provenance);
void write_returns_csv(const std::string& path, const ReturnSeries& series,
                       const Provenance& provenance, const std::string& value_name = "value");

/// Reads a two-column `date,<name>` return file written by this toolkit (or by hand).
ReturnSeries read_returns_csv(const std::string& path, std::string market_id = {});
ReturnSeries parse_returns_csv(std::istream& in, std::string market_id,
                               const std::string& source_name = "<stream>");

/// Vendor-layout CSV with every price column set to the series values
/// (Volume 0); used for synthetic panels.
void write_vendor_csv(const std::string& path, const PriceSeries& series);

std::string stem_of(const std::string& path);

}  // namespace volwin::ingest
