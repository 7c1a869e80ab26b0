#include "volwin/study.hpp"

#include "volwin/error.hpp"
#include "volwin/ingest.hpp"
#include "volwin/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

namespace volwin::study {

using models::Family;

std::vector<WindowSlice> partition(const ReturnSeries& returns, const std::vector<WindowDef>& windows) {
    std::vector<WindowSlice> out;
    out.reserve(windows.size());
    const auto& dates = returns.dates();
    for (const auto& w : windows) {
        const auto first = std::lower_bound(dates.begin(), dates.end(), w.start);
        const auto last = std::upper_bound(dates.begin(), dates.end(), w.end);
        const auto i0 = static_cast<std::size_t>(first - dates.begin());
        const auto i1 = static_cast<std::size_t>(std::max(first, last) - dates.begin());
        out.push_back({w, returns.slice(i0, i1)});
    }
    return out;
}

std::string_view to_string(RowStatus s) {
    switch (s) {
        case RowStatus::converged: return "converged";
        case RowStatus::failed: return "failed";
        case RowStatus::skipped_short: return "skipped_short";
    }
    return "?";
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

ReturnSeries load_market(const MarketInput& market) {
    if (market.kind == MarketInput::Kind::returns) return ingest::read_returns_csv(market.path, market.market_id);
    const auto raw = ingest::load_price_csv(market.path, market.column, market.market_id);
    return ingest::log_returns(ingest::interpolate_missing(raw));
}

std::vector<ReturnSeries> load_markets(const StudyConfig& config) {
    std::vector<ReturnSeries> out;
    out.reserve(config.markets.size());
    for (const auto& m : config.markets) out.push_back(load_market(m));
    return out;
}

std::uint64_t cell_seed(std::uint64_t master, const std::string& country, const std::string& window, Family family) {
    return derive_seed(master, country + "|" + window + "|" + std::string(models::to_string(family)));
}

StudyTable run_study(const StudyConfig& config) {
    config.validate();
    return run_study(config, load_markets(config));
}

StudyTable run_study(const StudyConfig& config, const std::vector<ReturnSeries>& markets) {
    config.validate();
    struct Cell {
        std::size_t market;
        std::size_t window;
        std::size_t family;
    };
    std::vector<std::vector<WindowSlice>> slices;
    slices.reserve(markets.size());
    for (const auto& m : markets) slices.push_back(partition(m, config.windows));

    std::vector<Cell> cells;
    for (std::size_t m = 0; m < markets.size(); ++m)
        for (std::size_t w = 0; w < config.windows.size(); ++w)
            for (std::size_t f = 0; f < config.families.size(); ++f) cells.push_back({m, w, f});

    std::vector<StudyRow> rows(cells.size());
    parallel_for(cells.size(), config.threads, [&](std::size_t i) {
        const Cell& c = cells[i];
        const auto& slice = slices[c.market][c.window];
        const Family family = config.families[c.family];
        StudyRow row;
        row.country = markets[c.market].market_id();
        row.window = slice.window.name;
        row.model = family;
        row.n_obs = slice.returns.size();
        if (slice.returns.size() < config.min_window_obs) {
            row.status = RowStatus::skipped_short;
            rows[i] = std::move(row);
            return;
        }
        estimate::FitConfig fc = config.fit_config;
        fc.seed = cell_seed(config.fit_config.seed, row.country, row.window, family);
        try {
            const auto fit = estimate::fit({family, config.law}, slice.returns, fc);
            if (fit.converged) {
                row.status = RowStatus::converged;
                RowValues v;
                v.alpha = fit.params.alpha;
                v.beta = fit.params.beta;
                v.gamma = fit.params.gamma;
                v.nu = config.law.has_tail() ? fit.params.tail : std::nan("");
                v.persistence = models::persistence(family, fit.params);
                row.values = v;
                row.log_likelihood = fit.log_likelihood;
            } else {
                row.status = RowStatus::failed;
            }
        } catch (const NumericalError&) {
            row.status = RowStatus::failed;
        }
        rows[i] = std::move(row);
    });

    std::map<std::string, std::size_t> window_rank;
    for (std::size_t w = 0; w < config.windows.size(); ++w) window_rank[config.windows[w].name] = w;
    std::stable_sort(rows.begin(), rows.end(), [&](const StudyRow& a, const StudyRow& b) {
        if (a.country != b.country) return a.country < b.country;
        if (a.window != b.window) return window_rank[a.window] < window_rank[b.window];
        return static_cast<int>(a.model) < static_cast<int>(b.model);
    });

    StudyTable table;
    table.rows = std::move(rows);
    table.provenance = {config.hash(), config.fit_config.seed};
    return table;
}

Family baseline_family(const StudyConfig& config) {
    const bool has_egarch = std::find(config.families.begin(), config.families.end(), Family::egarch) !=
                            config.families.end();
    return has_egarch ? Family::egarch : config.families.front();
}

std::vector<estimate::FitResult> full_sample_fits(const StudyConfig& config, const std::vector<ReturnSeries>& markets) {
    const Family family = baseline_family(config);
    std::vector<estimate::FitResult> out(markets.size());
    parallel_for(markets.size(), config.threads, [&](std::size_t i) {
        estimate::FitConfig fc = config.fit_config;
        fc.seed = cell_seed(config.fit_config.seed, markets[i].market_id(), "full_sample", family);
        out[i] = estimate::fit({family, config.law}, markets[i], fc);
    });
    return out;
}

std::vector<RobustnessRow> ged_robustness(const StudyConfig& config, const std::vector<ReturnSeries>& markets,
                                          const std::vector<estimate::FitResult>& baseline) {
    if (baseline.size() != markets.size()) throw DataError("GED robustness: one baseline fit per market required");
    std::vector<RobustnessRow> out(markets.size());
    parallel_for(markets.size(), config.threads, [&](std::size_t i) {
        const auto& base = baseline[i];
        RobustnessRow row;
        row.country = markets[i].market_id();
        row.model = base.spec.family;
        row.baseline_log_likelihood = base.log_likelihood;
        if (!base.converged) {
            throw NumericalError("GED robustness: baseline fit for " + row.country + " did not converge");
        }
        estimate::FitConfig fc = config.fit_config;
        fc.seed = cell_seed(config.fit_config.seed, row.country, "ged_robustness", base.spec.family);
        const auto refit = estimate::refit_with_law(base, dists::InnovationLaw::ged(1.5), markets[i], fc);
        row.converged = refit.converged;
        row.shape = refit.params.tail;
        row.log_likelihood = refit.log_likelihood;
        out[i] = row;
    });
    return out;
}

std::vector<WindowDelta> compare_windows(const StudyTable& table, const std::vector<WindowDef>& windows) {
    std::map<std::string, bool> crisis;
    for (const auto& w : windows) crisis[w.name] = w.is_crisis;

    struct Acc {
        double p[2] = {0, 0}, g[2] = {0, 0}, nu[2] = {0, 0};
        std::size_t n[2] = {0, 0};
    };
    std::vector<std::string> countries;
    std::map<std::pair<std::string, int>, Acc> groups;
    for (const auto& row : table.rows) {
        if (std::find(countries.begin(), countries.end(), row.country) == countries.end()) {
            countries.push_back(row.country);
        }
        if (row.status != RowStatus::converged || !row.values) continue;
        const auto it = crisis.find(row.window);
        if (it == crisis.end()) continue;
        const int side = it->second ? 0 : 1;
        auto& acc = groups[{row.country, static_cast<int>(row.model)}];
        acc.p[side] += row.values->persistence;
        acc.g[side] += row.values->gamma;
        acc.nu[side] += row.values->nu;
        ++acc.n[side];
    }

    std::vector<WindowDelta> out;
    for (const auto& country : countries) {
        bool any = false;
        for (int f = 0; f < 3; ++f) {
            const auto it = groups.find({country, f});
            if (it == groups.end()) continue;
            const Acc& a = it->second;
            if (a.n[0] == 0 || a.n[1] == 0) continue;
            const double nc = static_cast<double>(a.n[0]);
            const double nt = static_cast<double>(a.n[1]);
            WindowDelta d;
            d.country = country;
            d.model = static_cast<Family>(f);
            d.delta_persistence = a.p[0] / nc - a.p[1] / nt;
            d.delta_gamma = a.g[0] / nc - a.g[1] / nt;
            d.delta_nu = a.nu[0] / nc - a.nu[1] / nt;
            d.n_crisis = a.n[0];
            d.n_tranquil = a.n[1];
            out.push_back(d);
            any = true;
        }
        if (!any) {
            throw DataError("compare_windows: " + country +
                            " lacks converged rows in both crisis and tranquil windows");
        }
    }
    return out;
}

namespace {

std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }

Provenance parse_provenance(const std::vector<std::string>& comments) {
    Provenance p;
    for (const auto& line : comments) {
        const auto c = line.find("config=");
        const auto s = line.find("seed=");
        if (c == std::string::npos || s == std::string::npos) continue;
        p.config_hash = line.substr(c + 7, line.find(' ', c) - (c + 7));
        p.seed = std::stoull(line.substr(s + 5));
        break;
    }
    return p;
}

}  // namespace

void write_study_csv(std::ostream& out, const StudyTable& table) {
    out << table.provenance.comment_line() << '\n' << kStudyCsvHeader << '\n';
    for (const auto& r : table.rows) {
        out << r.country << ',' << r.window << ',' << models::to_string(r.model) << ',';
        if (r.values) {
            out << cell(r.values->alpha) << ',' << cell(r.values->beta) << ',' << cell(r.values->gamma) << ','
                << cell(r.values->nu) << ',' << cell(r.values->persistence);
        } else {
            out << ",,,,";
        }
        out << ',' << to_string(r.status) << '\n';
    }
}

StudyTable read_study_csv(std::istream& in) {
    const CsvTable csv = read_csv(in);
    std::string header;
    for (std::size_t i = 0; i < csv.header.size(); ++i) header += (i ? "," : "") + csv.header[i];
    if (header != kStudyCsvHeader) throw DataError("study CSV header mismatch: '" + header + "'");
    StudyTable table;
    table.provenance = parse_provenance(csv.comments);
    for (const auto& cells : csv.rows) {
        if (cells.size() != 9) throw DataError("study CSV row with " + std::to_string(cells.size()) + " cells");
        StudyRow r;
        r.country = cells[0];
        r.window = cells[1];
        const auto fam = models::parse_family(cells[2]);
        if (!fam) throw DataError("study CSV: unknown model '" + cells[2] + "'");
        r.model = *fam;
        if (cells[8] == "converged") r.status = RowStatus::converged;
        else if (cells[8] == "failed") r.status = RowStatus::failed;
        else if (cells[8] == "skipped_short") r.status = RowStatus::skipped_short;
        else throw DataError("study CSV: unknown status '" + cells[8] + "'");
        if (r.status == RowStatus::converged) {
            auto num = [&](std::size_t k) {
                double v = std::nan("");
                if (!cells[k].empty() && !parse_double(cells[k], v)) {
                    throw DataError("study CSV: bad number '" + cells[k] + "'");
                }
                return v;
            };
            r.values = RowValues{num(3), num(4), num(5), num(6), num(7)};
        }
        table.rows.push_back(std::move(r));
    }
    return table;
}

std::string study_json(const StudyTable& table, int indent) {
    nlohmann::ordered_json doc;
    doc["provenance"] = {{"tool", "volwin"},
                         {"version", VOLWIN_VERSION},
                         {"config_hash", table.provenance.config_hash},
                         {"seed", table.provenance.seed}};
    doc["columns"] = {"country", "window", "model", "alpha", "beta", "gamma", "nu", "persistence", "status"};
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : table.rows) {
        nlohmann::ordered_json j;
        j["country"] = r.country;
        j["window"] = r.window;
        j["model"] = models::to_string(r.model);
        if (r.values) {
            j["alpha"] = r.values->alpha;
            j["beta"] = r.values->beta;
            j["gamma"] = r.values->gamma;
            if (std::isnan(r.values->nu)) j["nu"] = nullptr;
            else j["nu"] = r.values->nu;
            j["persistence"] = r.values->persistence;
        }
        j["status"] = to_string(r.status);
        j["n_obs"] = r.n_obs;
        if (r.model == Family::egarch) {
            j["alpha_role"] = "magnitude-coefficient";
            j["gamma_role"] = "sign-coefficient";
        }
        rows.push_back(std::move(j));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(indent);
}

void write_robustness_csv(std::ostream& out, const std::vector<RobustnessRow>& rows, const Provenance& provenance) {
    out << provenance.comment_line() << '\n' << kRobustnessCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.country << ',';
        if (r.converged) out << format_double(r.shape) << ',' << format_double(r.log_likelihood);
        else out << ',';
        out << '\n';
    }
}

void write_window_deltas_csv(std::ostream& out, const std::vector<WindowDelta>& rows, const Provenance& provenance) {
    out << provenance.comment_line() << '\n' << kWindowDeltaCsvHeader << '\n';
    for (const auto& d : rows) {
        out << d.country << ',' << models::to_string(d.model) << ',' << cell(d.delta_persistence) << ','
            << cell(d.delta_gamma) << ',' << cell(d.delta_nu) << ',' << d.n_crisis << ',' << d.n_tranquil << '\n';
    }
}

}  // namespace volwin::study
