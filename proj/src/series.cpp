#include "volwin/series.hpp"

#include "volwin/error.hpp"

#include <algorithm>

namespace volwin {

PriceSeries::PriceSeries(std::string market_id, std::vector<PriceObservation> observations)
    : market_id_(std::move(market_id)), obs_(std::move(observations)) {
    for (std::size_t i = 0; i < obs_.size(); ++i) {
        const auto& o = obs_[i];
        if (i > 0 && !(obs_[i - 1].date < o.date)) {
            throw DataError(market_id_ + ": dates not strictly increasing at " + o.date.iso());
        }
        if (o.price && !(*o.price > 0.0)) {
            throw DataError(market_id_ + ": non-positive price at " + o.date.iso());
        }
        if (o.is_gap() && o.was_interpolated) {
            throw DataError(market_id_ + ": gap flagged as interpolated at " + o.date.iso());
        }
    }
}

std::size_t PriceSeries::gap_count() const {
    return static_cast<std::size_t>(
        std::count_if(obs_.begin(), obs_.end(), [](const auto& o) { return o.is_gap(); }));
}

std::size_t PriceSeries::max_gap_run() const {
    std::size_t best = 0, run = 0;
    for (const auto& o : obs_) {
        run = o.is_gap() ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

std::size_t PriceSeries::interpolated_count() const {
    return static_cast<std::size_t>(
        std::count_if(obs_.begin(), obs_.end(), [](const auto& o) { return o.was_interpolated; }));
}

std::vector<Date> PriceSeries::dates() const {
    std::vector<Date> out;
    out.reserve(obs_.size());
    for (const auto& o : obs_) out.push_back(o.date);
    return out;
}

std::vector<double> PriceSeries::prices() const {
    std::vector<double> out;
    out.reserve(obs_.size());
    for (const auto& o : obs_) {
        if (o.is_gap()) throw DataError(market_id_ + ": unrepaired gap at " + o.date.iso());
        out.push_back(*o.price);
    }
    return out;
}

ReturnSeries::ReturnSeries(std::string market_id, std::vector<Date> dates, std::vector<double> values)
    : market_id_(std::move(market_id)), dates_(std::move(dates)), values_(std::move(values)) {
    if (dates_.size() != values_.size()) {
        throw DataError(market_id_ + ": return dates and values differ in length");
    }
    for (std::size_t i = 1; i < dates_.size(); ++i) {
        if (!(dates_[i - 1] < dates_[i])) {
            throw DataError(market_id_ + ": return dates not strictly increasing at " + dates_[i].iso());
        }
    }
}

ReturnSeries ReturnSeries::slice(std::size_t first, std::size_t last) const {
    last = std::min(last, size());
    first = std::min(first, last);
    return ReturnSeries(market_id_, {dates_.begin() + static_cast<std::ptrdiff_t>(first),
                                     dates_.begin() + static_cast<std::ptrdiff_t>(last)},
                        {values_.begin() + static_cast<std::ptrdiff_t>(first),
                         values_.begin() + static_cast<std::ptrdiff_t>(last)});
}

}  // namespace volwin
