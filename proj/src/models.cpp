#include "volwin/models.hpp"

#include "volwin/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace volwin::models {

std::string_view to_string(Family f) {
    switch (f) {
        case Family::garch: return "garch";
        case Family::egarch: return "egarch";
        case Family::tgarch: return "tgarch";
    }
    return "?";
}

std::optional<Family> parse_family(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "garch" || lower == "sgarch") return Family::garch;
    if (lower == "egarch") return Family::egarch;
    if (lower == "tgarch" || lower == "gjr" || lower == "gjrgarch") return Family::tgarch;
    return std::nullopt;
}

namespace {

std::optional<std::string> family_violation(Family family, const ParamVector& p) {
    const bool finite = std::isfinite(p.mu) && std::isfinite(p.omega) && std::isfinite(p.alpha) &&
                        std::isfinite(p.beta) && std::isfinite(p.gamma);
    if (!finite) return "non-finite parameter";
    switch (family) {
        case Family::garch:
        case Family::tgarch:
            if (!(p.omega > 0.0)) return "omega must be positive";
            if (p.alpha < 0.0) return "alpha must be non-negative";
            if (p.beta < 0.0) return "beta must be non-negative";
            if (family == Family::tgarch && p.alpha + p.gamma < 0.0) {
                return "alpha + gamma must be non-negative";
            }
            break;
        case Family::egarch:
            if (!(std::abs(p.beta) < 1.0)) return "|beta| must be below 1";
            break;
    }
    return std::nullopt;
}

}  // namespace

bool in_domain(const ModelSpec& spec, const ParamVector& p) {
    return !family_violation(spec.family, p) && spec.law.tail_in_domain(p.tail);
}

void validate_family(Family family, const ParamVector& p) {
    if (auto why = family_violation(family, p)) {
        throw DomainError(std::string(to_string(family)) + " parameters out of domain: " + *why);
    }
}

void validate(const ModelSpec& spec, const ParamVector& p) {
    validate_family(spec.family, p);
    if (!spec.law.tail_in_domain(p.tail)) {
        throw DomainError("tail parameter " + std::to_string(p.tail) + " outside the " +
                          std::string(dists::to_string(spec.law.kind)) + " domain");
    }
}

VarianceRecursion::VarianceRecursion(Family family, const ParamVector& params, double init)
    : family_(family), p_(params), sigma2_(init), log_sigma2_(0.0) {
    if (!(init > 0.0) || !std::isfinite(init)) {
        throw DomainError("pre-sample variance must be positive and finite");
    }
    validate_family(family, params);
    log_sigma2_ = std::log(init);
}

double VarianceRecursion::advance(double eps) {
    switch (family_) {
        case Family::garch: {
            const double e2 = eps * eps;
            sigma2_ = p_.omega + p_.alpha * e2 + p_.beta * sigma2_;
            break;
        }
        case Family::tgarch: {
            const double e2 = eps * eps;
            const double d = eps < 0.0 ? 1.0 : 0.0;
            sigma2_ = p_.omega + p_.alpha * e2 + p_.gamma * d * e2 + p_.beta * sigma2_;
            break;
        }
        case Family::egarch: {
            const double sigma = std::sqrt(sigma2_);
            double next = p_.omega + p_.beta * log_sigma2_ + p_.alpha * (std::abs(eps) / sigma) +
                          p_.gamma * (eps / sigma);
            if (!(next <= kLogVarianceBound && next >= -kLogVarianceBound)) {
                next = std::isnan(next) ? kLogVarianceBound : std::clamp(next, -kLogVarianceBound, kLogVarianceBound);
                ++clamps_;
            }
            log_sigma2_ = next;
            sigma2_ = std::exp(next);
            break;
        }
    }
    return sigma2_;
}

VariancePath filter(Family family, const ParamVector& params, std::span<const double> returns, double init) {
    VarianceRecursion rec(family, params, init);
    VariancePath path;
    path.init_value = init;
    path.sigma2.reserve(returns.size());
    if (!returns.empty()) path.sigma2.push_back(init);
    for (std::size_t t = 1; t < returns.size(); ++t) {
        path.sigma2.push_back(rec.advance(returns[t - 1] - params.mu));
    }
    path.clamp_events = rec.clamp_events();
    return path;
}

VariancePath garch_filter(const ParamVector& params, std::span<const double> returns, double init) {
    return filter(Family::garch, params, returns, init);
}

VariancePath egarch_filter(const ParamVector& params, std::span<const double> returns, double init) {
    return filter(Family::egarch, params, returns, init);
}

VariancePath tgarch_filter(const ParamVector& params, std::span<const double> returns, double init) {
    return filter(Family::tgarch, params, returns, init);
}

std::vector<double> standardized_residuals(std::span<const double> returns, double mu, const VariancePath& path) {
    if (returns.size() != path.sigma2.size()) {
        throw DataError("variance path length " + std::to_string(path.sigma2.size()) +
                        " does not match return length " + std::to_string(returns.size()));
    }
    std::vector<double> z(returns.size());
    for (std::size_t t = 0; t < returns.size(); ++t) {
        z[t] = (returns[t] - mu) / std::sqrt(path.sigma2[t]);
    }
    return z;
}

double persistence(Family family, const ParamVector& p) {
    switch (family) {
        case Family::garch: return p.alpha + p.beta;
        case Family::tgarch: return p.alpha + p.beta + 0.5 * p.gamma;
        case Family::egarch: return p.beta;
    }
    return 0.0;
}

double sample_mean(std::span<const double> values) {
    if (values.empty()) throw DataError("mean of an empty series");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
    const double m = sample_mean(values);
    double ss = 0.0;
    for (const double v : values) ss += (v - m) * (v - m);
    return ss / static_cast<double>(values.size());
}

}  // namespace volwin::models
