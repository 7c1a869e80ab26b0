#include "volwin/sim.hpp"

#include "volwin/error.hpp"
#include "volwin/rng.hpp"

#include <cmath>
#include <string>

namespace volwin::sim {

using models::Family;
using models::ParamVector;

Date synthetic_epoch() { return Date{2010, 1, 4}; }

std::vector<Date> synthetic_dates(std::size_t n, Date epoch) {
    std::vector<Date> out;
    out.reserve(n);
    Date d = epoch.is_weekend() ? epoch.next_weekday() : epoch;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(d);
        d = d.next_weekday();
    }
    return out;
}

std::optional<double> unconditional_variance(Family family, const ParamVector& p) {
    switch (family) {
        case Family::garch: {
            const double pers = p.alpha + p.beta;
            if (pers >= 1.0) return std::nullopt;
            return p.omega / (1.0 - pers);
        }
        case Family::tgarch: {
            const double pers = p.alpha + p.beta + 0.5 * p.gamma;
            if (pers >= 1.0) return std::nullopt;
            return p.omega / (1.0 - pers);
        }
        case Family::egarch: return std::exp(p.omega / (1.0 - p.beta));
    }
    return std::nullopt;
}

namespace {

dists::InnovationLaw law_for(const dists::InnovationLaw& law, const ParamVector& p) {
    dists::InnovationLaw out = law;
    if (out.has_tail()) out.tail = p.tail;
    out.validate();
    return out;
}

double starting_variance(Family family, const ParamVector& p, std::optional<double> init) {
    if (init) {
        if (!(*init > 0.0)) throw DomainError("explicit initial variance must be positive");
        return *init;
    }
    const auto v = unconditional_variance(family, p);
    if (!v) {
        throw DomainError(std::string(models::to_string(family)) +
                          " parameters are not covariance stationary; supply an explicit initial variance");
    }
    return *v;
}

}  // namespace

RegimePath simulate_regimes(const RegimeSchedule& schedule, const dists::InnovationLaw& law, std::uint64_t seed,
                            std::optional<double> init, const std::string& market_id) {
    if (schedule.segments.empty()) throw DomainError("regime schedule has no segments");
    std::size_t total = 0;
    for (const auto& seg : schedule.segments) {
        if (seg.length < 1) throw DomainError("regime segment length must be at least 1");
        models::validate({schedule.family, law_for(law, seg.params)}, seg.params);
        total += seg.length;
    }
    if (total < 2) throw DomainError("simulated path needs at least 2 observations");

    std::vector<double> returns;
    returns.reserve(total);
    RegimePath out;
    out.variance.sigma2.reserve(total);

    double sigma2 = 0.0;
    double eps_prev = 0.0;
    for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
        const auto& seg = schedule.segments[k];
        const auto& p = seg.params;
        const auto seg_law = law_for(law, p);
        const std::uint64_t seg_seed = k == 0 ? seed : derive_seed(seed, "segment-" + std::to_string(k));
        const std::size_t burn = k == 0 ? kBurnIn : 0;
        const auto z = dists::sample(seg_law, seg.length + burn, seg_seed);

        std::size_t zi = 0;
        if (k == 0) {
            models::VarianceRecursion warm(schedule.family, p, starting_variance(schedule.family, p, init));
            double s2 = warm.sigma2();
            double e = 0.0;
            for (; zi < burn; ++zi) {
                if (zi > 0) s2 = warm.advance(e);
                e = std::sqrt(s2) * z[zi];
            }
            sigma2 = warm.advance(e);
            out.variance.init_value = sigma2;
        }
        out.boundaries.push_back(returns.size());

        // A fresh recursion per segment so the emitted path is exactly what the
        // filter reproduces from (init, eps).
        models::VarianceRecursion rec(schedule.family, p, sigma2);
        for (std::size_t t = 0; t < seg.length; ++t, ++zi) {
            if (!returns.empty()) sigma2 = rec.advance(eps_prev);
            const double r = p.mu + std::sqrt(sigma2) * z[zi];
            // The filter only sees r, so feed the recursion r - mu rather than the raw shock.
            eps_prev = r - p.mu;
            out.variance.sigma2.push_back(sigma2);
            returns.push_back(r);
        }
        out.variance.clamp_events += rec.clamp_events();
    }

    out.returns = ReturnSeries(market_id, synthetic_dates(total), std::move(returns));
    return out;
}

SimulatedPath simulate_path(Family family, const ParamVector& params, const dists::InnovationLaw& law,
                            std::size_t n, std::uint64_t seed, std::optional<double> init,
                            const std::string& market_id) {
    if (n < 2) throw DomainError("simulated path needs at least 2 observations");
    RegimeSchedule schedule{family, {{n, params}}};
    auto path = simulate_regimes(schedule, law, seed, init, market_id);
    return {std::move(path.returns), std::move(path.variance)};
}

PriceSeries prices_from_returns(const ReturnSeries& returns, double start_price) {
    if (!(start_price > 0.0)) throw DomainError("start price must be positive");
    std::vector<PriceObservation> obs;
    obs.reserve(returns.size() + 1);
    Date first = returns.empty() ? synthetic_epoch() : returns.dates().front();
    Date prev = first.plus_days(-1);
    while (prev.is_weekend()) prev = prev.plus_days(-1);
    double log_price = std::log(start_price);
    obs.push_back({prev, start_price, false});
    for (std::size_t i = 0; i < returns.size(); ++i) {
        log_price += returns[i];
        obs.push_back({returns.dates()[i], std::exp(log_price), false});
    }
    return PriceSeries(returns.market_id(), std::move(obs));
}

}  // namespace volwin::sim
