#include "volwin/estimate.hpp"

#include "volwin/error.hpp"
#include "volwin/optimizer.hpp"
#include "volwin/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace volwin::estimate {

using models::Family;
using models::ModelSpec;
using models::ParamVector;

namespace {

constexpr double kExpLimit = 700.0;

double softplus(double u) { return u > 30.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u)); }

double inverse_softplus(double y) {
    y = std::max(y, 1e-300);
    return y > 30.0 ? y + std::log(-std::expm1(-y)) : std::log(std::expm1(y));
}

double bounded_exp(double u) { return std::exp(std::clamp(u, -kExpLimit, kExpLimit)); }

/// Initial simplex edge in unconstrained coordinates.
double simplex_step(const ModelSpec& spec, Param which, double sd) {
    switch (which) {
        case Param::mu: return 0.1 * sd;
        case Param::omega: return spec.family == Family::egarch ? 0.1 : 0.5;
        case Param::alpha: return spec.family == Family::egarch ? 0.05 : 0.5;
        case Param::beta: return spec.family == Family::egarch ? 0.5 : 0.2;
        case Param::gamma: return spec.family == Family::egarch ? 0.05 : 0.5;
        case Param::tail: return 0.3;
    }
    return 0.1;
}

struct Evaluation {
    double nll;
    models::VariancePath path;
};

}  // namespace

void FitConfig::validate() const {
    if (max_iterations < 100) throw DomainError("max_iterations must be at least 100");
    if (!(function_tolerance > 0.0)) throw DomainError("function_tolerance must be positive");
    if (starts < 1) throw DomainError("starts must be at least 1");
}

std::string_view param_name(Param p) {
    switch (p) {
        case Param::mu: return "mu";
        case Param::omega: return "omega";
        case Param::alpha: return "alpha";
        case Param::beta: return "beta";
        case Param::gamma: return "gamma";
        case Param::tail: return "tail";
    }
    return "?";
}

std::vector<Param> active_params(const ModelSpec& spec) {
    std::vector<Param> out{Param::mu, Param::omega, Param::alpha, Param::beta};
    if (spec.family != Family::garch) out.push_back(Param::gamma);
    if (spec.law.has_tail()) out.push_back(Param::tail);
    return out;
}

std::vector<double> to_unconstrained(const ModelSpec& spec, const ParamVector& p) {
    models::validate(spec, p);
    std::vector<double> u;
    u.reserve(kParamCount);
    const bool eg = spec.family == Family::egarch;
    u.push_back(p.mu);
    u.push_back(eg ? p.omega : std::log(p.omega));
    u.push_back(eg ? p.alpha : inverse_softplus(p.alpha));
    u.push_back(eg ? 2.0 * std::atanh(p.beta) : inverse_softplus(p.beta));
    if (spec.family == Family::egarch) u.push_back(p.gamma);
    if (spec.family == Family::tgarch) u.push_back(inverse_softplus(p.alpha + p.gamma));
    if (spec.law.kind == dists::LawKind::student_t) u.push_back(std::log(p.tail - 2.0));
    if (spec.law.kind == dists::LawKind::ged) u.push_back(std::log(p.tail));
    return u;
}

ParamVector from_unconstrained(const ModelSpec& spec, std::span<const double> u) {
    const auto names = active_params(spec);
    if (u.size() != names.size()) {
        throw DomainError("unconstrained vector has " + std::to_string(u.size()) + " entries, expected " +
                          std::to_string(names.size()));
    }
    for (const double v : u) {
        if (!std::isfinite(v)) throw DomainError("non-finite unconstrained coordinate");
    }
    ParamVector p;
    p.gamma = 0.0;
    p.tail = spec.law.kind == dists::LawKind::normal_limit ? 0.0 : spec.law.tail;
    const bool eg = spec.family == Family::egarch;
    p.mu = u[0];
    p.omega = eg ? u[1] : std::max(bounded_exp(u[1]), std::numeric_limits<double>::min());
    p.alpha = eg ? u[2] : softplus(u[2]);
    // |u/2| <= 18 keeps tanh strictly inside (-1, 1) in double precision.
    p.beta = eg ? std::tanh(std::clamp(0.5 * u[3], -18.0, 18.0)) : softplus(u[3]);
    std::size_t next = 4;
    if (spec.family == Family::egarch) p.gamma = u[next++];
    if (spec.family == Family::tgarch) p.gamma = softplus(u[next++]) - p.alpha;
    if (spec.law.kind == dists::LawKind::student_t) p.tail = 2.0 + std::exp(std::clamp(u[next++], -30.0, kExpLimit));
    if (spec.law.kind == dists::LawKind::ged) p.tail = std::exp(std::clamp(u[next++], -30.0, kExpLimit));
    return p;
}

double negative_log_likelihood(const ModelSpec& spec, const ParamVector& params, std::span<const double> returns,
                               double init) {
    models::validate(spec, params);
    dists::InnovationLaw law = spec.law;
    if (law.has_tail()) law.tail = params.tail;
    const dists::LogDensity log_density(law);
    models::VarianceRecursion rec(spec.family, params, init);
    double sum = 0.0;
    for (std::size_t t = 0; t < returns.size(); ++t) {
        const double s2 = t == 0 ? rec.sigma2() : rec.advance(returns[t - 1] - params.mu);
        const double z = (returns[t] - params.mu) / std::sqrt(s2);
        sum += log_density(z) - 0.5 * std::log(s2);
    }
    return -sum + kClampPenalty * static_cast<double>(rec.clamp_events());
}

double negative_log_likelihood(const ModelSpec& spec, const ParamVector& params, const ReturnSeries& returns) {
    return negative_log_likelihood(spec, params, returns.values(), models::sample_variance(returns.values()));
}

ParamVector default_start(const ModelSpec& spec, std::span<const double> returns) {
    const double mean = models::sample_mean(returns);
    const double var = models::sample_variance(returns);
    if (!(var > 0.0)) throw NumericalError("zero sample variance: cannot fit a variance model");
    ParamVector p;
    p.mu = mean;
    p.alpha = 0.05;
    p.beta = 0.90;
    p.gamma = spec.family == Family::garch ? 0.0 : 0.05;
    switch (spec.family) {
        case Family::garch: p.omega = var * (1.0 - p.alpha - p.beta); break;
        case Family::tgarch: p.omega = var * (1.0 - p.alpha - p.beta - 0.5 * p.gamma); break;
        case Family::egarch: {
            dists::InnovationLaw law = spec.law;
            if (law.kind == dists::LawKind::student_t) law.tail = 8.0;
            if (law.kind == dists::LawKind::ged) law.tail = 1.5;
            p.omega = (1.0 - p.beta) * std::log(var) - p.alpha * dists::abs_moment(law);
            break;
        }
    }
    switch (spec.law.kind) {
        case dists::LawKind::student_t: p.tail = 8.0; break;
        case dists::LawKind::ged: p.tail = 1.5; break;
        case dists::LawKind::normal_limit: p.tail = 0.0; break;
    }
    return p;
}

FitResult evaluate(const ModelSpec& spec, const ParamVector& params, const ReturnSeries& returns) {
    models::validate(spec, params);
    if (returns.empty()) throw DataError("cannot evaluate a model on an empty series");
    const double init = models::sample_variance(returns.values());
    if (!(init > 0.0)) throw NumericalError("zero sample variance");
    FitResult r;
    r.spec = spec;
    if (r.spec.law.has_tail()) r.spec.law.tail = params.tail;
    r.params = params;
    r.log_likelihood = -negative_log_likelihood(spec, params, returns.values(), init);
    r.converged = std::isfinite(r.log_likelihood);
    r.variance_path = models::filter(spec.family, params, returns.values(), init);
    r.std_residuals = models::standardized_residuals(returns.values(), params.mu, r.variance_path);
    r.n_obs = returns.size();
    return r;
}

FitResult fit(const ModelSpec& spec, const ReturnSeries& returns, const FitConfig& config, const FitControl& control) {
    config.validate();
    spec.law.validate();
    if (returns.size() < kMinFitObservations) {
        throw DataError("series too short to fit: " + std::to_string(returns.size()) + " observations, need " +
                        std::to_string(kMinFitObservations));
    }
    const auto r = returns.values();
    const double init = models::sample_variance(r);
    const bool constant = std::all_of(r.begin(), r.end(), [&](double v) { return v == r[0]; });
    if (constant || !(init > 0.0) || !std::isfinite(init)) {
        throw NumericalError("zero sample variance: cannot fit a variance model");
    }
    const double sd = std::sqrt(init);

    const ParamVector start = control.start ? *control.start : default_start(spec, r);
    models::validate(spec, start);
    const auto names = active_params(spec);
    const std::vector<double> u_start = to_unconstrained(spec, start);

    std::vector<std::size_t> free_idx;
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (!control.fixed[static_cast<std::size_t>(names[k])]) free_idx.push_back(k);
    }
    if (free_idx.empty()) return evaluate(spec, start, returns);

    std::vector<double> full(u_start);
    auto objective = [&](std::span<const double> x) {
        for (std::size_t k = 0; k < free_idx.size(); ++k) full[free_idx[k]] = x[k];
        const ParamVector p = from_unconstrained(spec, full);
        if (!models::in_domain(spec, p)) return std::numeric_limits<double>::infinity();
        return negative_log_likelihood(spec, p, r, init);
    };

    std::vector<double> steps;
    std::vector<double> x0;
    for (const std::size_t k : free_idx) {
        steps.push_back(simplex_step(spec, names[k], sd));
        x0.push_back(u_start[k]);
    }

    optim::NelderMeadOptions opts;
    opts.max_iterations = config.max_iterations;
    opts.function_tolerance = config.function_tolerance;

    std::optional<optim::NelderMeadResult> best_converged;
    std::optional<optim::NelderMeadResult> best_any;
    int total_iterations = 0;
    for (int s = 0; s < config.starts; ++s) {
        std::vector<double> xs = x0;
        if (s > 0) {
            Rng rng(derive_seed(config.seed, "start-" + std::to_string(s)));
            for (std::size_t k = 0; k < xs.size(); ++k) {
                // mu lives in return units; perturb it on the scale of its step.
                const double scale = names[free_idx[k]] == Param::mu ? 5.0 * steps[k] : 0.5;
                xs[k] += scale * rng.normal();
            }
        }
        auto res = optim::nelder_mead(objective, xs, steps, opts);
        total_iterations += res.iterations;
        if (!best_any || res.value < best_any->value) best_any = res;
        if (res.converged && (!best_converged || res.value < best_converged->value)) best_converged = res;
    }

    const auto& chosen = best_converged ? *best_converged : *best_any;
    for (std::size_t k = 0; k < free_idx.size(); ++k) full[free_idx[k]] = chosen.x[k];
    FitResult result = evaluate(spec, from_unconstrained(spec, full), returns);
    result.converged = best_converged.has_value() && std::isfinite(result.log_likelihood);
    result.iterations = total_iterations;
    return result;
}

FitResult refit_with_law(const FitResult& prior, const dists::InnovationLaw& new_law, const ReturnSeries& returns,
                         const FitConfig& config) {
    if (!prior.converged) throw DomainError("refit_with_law requires a converged prior fit");
    ModelSpec spec{prior.spec.family, new_law};
    spec.law.validate();
    ParamVector start = prior.params;
    if (new_law.kind != prior.spec.law.kind) {
        start.tail = default_start(spec, returns.values()).tail;
    }
    FitControl control;
    control.start = start;
    return fit(spec, returns, config, control);
}

}  // namespace volwin::estimate
