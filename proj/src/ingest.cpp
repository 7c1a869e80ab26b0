#include "volwin/ingest.hpp"

#include "volwin/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace volwin::ingest {

namespace {

std::string normalize_column(std::string_view name) {
    std::string out;
    for (const char c : name) {
        if (c == ' ' || c == '_' || c == '-') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file '" + path + "'");
    return out;
}

}  // namespace

std::string stem_of(const std::string& path) {
    std::string stem = std::filesystem::path(path).filename().string();
    // "IDN.prices.csv" -> "IDN"
    if (const auto dot = stem.find('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    return stem;
}

PriceSeries parse_price_csv(std::istream& in, const std::string& column, std::string market_id,
                            const std::string& source_name) {
    const CsvTable table = read_csv(in);
    if (table.header.empty()) throw DataError(source_name + ": missing header row");

    const std::string wanted = normalize_column(column);
    std::ptrdiff_t date_col = -1, price_col = -1;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        const std::string h = normalize_column(table.header[i]);
        if (h == "date") date_col = static_cast<std::ptrdiff_t>(i);
        if (h == wanted) price_col = static_cast<std::ptrdiff_t>(i);
    }
    if (date_col < 0) throw DataError(source_name + ": header has no Date column");
    if (price_col < 0) throw DataError(source_name + ": header has no column '" + column + "'");

    std::vector<PriceObservation> obs;
    obs.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (row.size() <= static_cast<std::size_t>(std::max(date_col, price_col))) {
            // A short row still carries a date; a missing price cell is a gap.
            if (row.size() <= static_cast<std::size_t>(date_col)) {
                throw DataError(source_name + ": row without a date cell");
            }
        }
        PriceObservation o;
        o.date = Date::from_iso(row[static_cast<std::size_t>(date_col)]);
        double value = 0.0;
        if (static_cast<std::size_t>(price_col) < row.size() &&
            parse_double(row[static_cast<std::size_t>(price_col)], value)) {
            if (!(value > 0.0)) {
                throw DataError(source_name + ": non-positive price on " + o.date.iso());
            }
            o.price = value;
        }
        obs.push_back(o);
    }
    std::stable_sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < obs.size(); ++i) {
        if (obs[i].date == obs[i - 1].date) {
            throw DataError(source_name + ": duplicate date " + obs[i].date.iso());
        }
    }
    if (std::none_of(obs.begin(), obs.end(), [](const auto& o) { return !o.is_gap(); })) {
        throw DataError(source_name + ": no usable price rows");
    }
    return PriceSeries(std::move(market_id), std::move(obs));
}

PriceSeries load_price_csv(const std::string& path, const std::string& column, std::string market_id) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open price file '" + path + "'");
    if (market_id.empty()) market_id = stem_of(path);
    return parse_price_csv(in, column, std::move(market_id), path);
}

PriceSeries interpolate_missing(const PriceSeries& series) {
    const auto& src = series.observations();
    if (src.empty() || series.gap_count() == src.size()) {
        throw DataError(series.market_id() + ": series has no non-gap observations");
    }
    if (src.front().is_gap()) {
        throw DataError(series.market_id() + ": leading gap at " + src.front().date.iso());
    }
    if (src.back().is_gap()) {
        throw DataError(series.market_id() + ": trailing gap at " + src.back().date.iso());
    }

    std::vector<PriceObservation> out = src;
    std::size_t left = 0;
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i].is_gap()) continue;
        if (i - left > 1) {
            const double p0 = *out[left].price;
            const double p1 = *out[i].price;
            const double span = static_cast<double>(i - left);
            for (std::size_t k = left + 1; k < i; ++k) {
                const double w = static_cast<double>(k - left) / span;
                out[k].price = p0 + w * (p1 - p0);
                out[k].was_interpolated = true;
            }
        }
        left = i;
    }
    return PriceSeries(series.market_id(), std::move(out));
}

ReturnSeries log_returns(const PriceSeries& series) {
    if (series.size() < 2) throw DataError(series.market_id() + ": need at least two prices for returns");
    const auto& obs = series.observations();
    std::vector<Date> dates;
    std::vector<double> values;
    dates.reserve(obs.size() - 1);
    values.reserve(obs.size() - 1);
    for (std::size_t i = 1; i < obs.size(); ++i) {
        if (obs[i - 1].is_gap() || obs[i].is_gap()) {
            throw DataError(series.market_id() + ": unrepaired gap near " + obs[i].date.iso());
        }
        const double p0 = *obs[i - 1].price;
        const double p1 = *obs[i].price;
        if (!(p0 > 0.0) || !(p1 > 0.0)) {
            throw DataError(series.market_id() + ": non-positive price near " + obs[i].date.iso());
        }
        dates.push_back(obs[i].date);
        values.push_back(std::log(p1) - std::log(p0));
    }
    return ReturnSeries(series.market_id(), std::move(dates), std::move(values));
}

PriceSeries align_calendar(const std::vector<Date>& target_dates, const PriceSeries& source) {
    const auto& src = source.observations();
    if (src.empty()) throw DataError(source.market_id() + ": empty source series");
    if (source.gap_count() > 0) {
        throw DataError(source.market_id() + ": source has unrepaired gaps; interpolate first");
    }
    std::vector<PriceObservation> out;
    out.reserve(target_dates.size());
    std::size_t j = 0;
    for (const Date d : target_dates) {
        if (d < src.front().date || src.back().date < d) {
            throw DataError(source.market_id() + ": target date " + d.iso() + " outside source span " +
                            src.front().date.iso() + ".." + src.back().date.iso());
        }
        while (j + 1 < src.size() && src[j + 1].date <= d) ++j;
        PriceObservation o;
        o.date = d;
        if (src[j].date == d) {
            o.price = *src[j].price;
        } else {
            const auto& a = src[j];
            const auto& b = src[j + 1];
            const double w = static_cast<double>(d.days() - a.date.days()) /
                             static_cast<double>(b.date.days() - a.date.days());
            o.price = *a.price + w * (*b.price - *a.price);
            o.was_interpolated = true;
        }
        out.push_back(o);
    }
    return PriceSeries(source.market_id(), std::move(out));
}

std::vector<DummySeries> build_crisis_dummies(const std::vector<Date>& dates,
                                              const std::vector<WindowDef>& windows) {
    std::vector<const WindowDef*> crisis;
    for (const auto& w : windows) {
        if (w.end < w.start) throw DataError("window '" + w.name + "' ends before it starts");
        if (w.is_crisis) crisis.push_back(&w);
    }
    for (std::size_t a = 0; a < crisis.size(); ++a) {
        for (std::size_t b = a + 1; b < crisis.size(); ++b) {
            if (crisis[a]->start <= crisis[b]->end && crisis[b]->start <= crisis[a]->end) {
                throw DataError("crisis windows '" + crisis[a]->name + "' and '" + crisis[b]->name +
                                "' overlap");
            }
        }
    }
    std::vector<DummySeries> out;
    out.reserve(crisis.size());
    for (const WindowDef* w : crisis) {
        DummySeries s;
        s.name = w->name;
        s.dates = dates;
        s.values.reserve(dates.size());
        for (const Date d : dates) s.values.push_back(w->contains(d) ? 1 : 0);
        out.push_back(std::move(s));
    }
    return out;
}

void write_series_csv(std::ostream& out, const std::vector<Date>& dates, const std::vector<double>& values,
                      const std::string& value_name, const Provenance& provenance) {
    out << provenance.comment_line() << '\n';
    out << "date," << value_name << '\n';
    for (std::size_t i = 0; i < dates.size(); ++i) {
        out << dates[i].iso() << ',' << format_double(values[i]) << '\n';
    }
}

void write_prices_csv(const std::string& path, const PriceSeries& series, const Provenance& provenance) {
    auto out = open_out(path);
    write_series_csv(out, series.dates(), series.prices(), "value", provenance);
}

void write_returns_csv(const std::string& path, const ReturnSeries& series, const Provenance& provenance,
                       const std::string& value_name) {
    auto out = open_out(path);
    const auto v = series.values();
    write_series_csv(out, series.dates(), std::vector<double>(v.begin(), v.end()), value_name, provenance);
}

ReturnSeries parse_returns_csv(std::istream& in, std::string market_id, const std::string& source_name) {
    const CsvTable table = read_csv(in);
    if (table.header.size() < 2 || trim(table.header[0]) != "date") {
        throw DataError(source_name + ": expected header 'date,<value>'");
    }
    std::vector<Date> dates;
    std::vector<double> values;
    dates.reserve(table.rows.size());
    values.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (row.size() < 2) throw DataError(source_name + ": short row");
        double v = 0.0;
        const Date d = Date::from_iso(row[0]);
        if (!parse_double(row[1], v)) throw DataError(source_name + ": non-numeric value on " + d.iso());
        dates.push_back(d);
        values.push_back(v);
    }
    if (values.empty()) throw DataError(source_name + ": no rows");
    return ReturnSeries(std::move(market_id), std::move(dates), std::move(values));
}

ReturnSeries read_returns_csv(const std::string& path, std::string market_id) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open returns file '" + path + "'");
    if (market_id.empty()) market_id = stem_of(path);
    return parse_returns_csv(in, std::move(market_id), path);
}

void write_vendor_csv(const std::string& path, const PriceSeries& series) {
    auto out = open_out(path);
    out << "Date,Open,High,Low,Close,Adj Close,Volume\n";
    for (const auto& o : series.observations()) {
        out << o.date.iso();
        const std::string p = o.price ? format_double(*o.price) : "null";
        for (int k = 0; k < 5; ++k) out << ',' << p;
        out << ",0\n";
    }
}

}  // namespace volwin::ingest
