#include "volwin/dists.hpp"

#include "volwin/error.hpp"
#include "volwin/rng.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <array>
#include <cmath>
#include <numbers>

namespace volwin::dists {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

void require_nu(double nu) {
    if (!(nu > 2.0) || !std::isfinite(nu)) {
        throw DomainError("Student-t degrees of freedom must exceed 2 (got " + std::to_string(nu) + ")");
    }
}

void require_shape(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("GED shape must be positive (got " + std::to_string(s) + ")");
    }
}

void require_probability(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("probability must lie in (0, 1) (got " + std::to_string(p) + ")");
    }
}

}  // namespace

InnovationLaw InnovationLaw::student_t(double nu) {
    require_nu(nu);
    return {LawKind::student_t, nu};
}

InnovationLaw InnovationLaw::ged(double shape) {
    require_shape(shape);
    return {LawKind::ged, shape};
}
InnovationLaw InnovationLaw::normal() { return {LawKind::normal_limit, 0.0}; }

bool InnovationLaw::tail_in_domain(double value) const {
    switch (kind) {
        case LawKind::student_t: return value > 2.0 && std::isfinite(value);
        case LawKind::ged: return value > 0.0 && std::isfinite(value);
        case LawKind::normal_limit: return true;
    }
    return false;
}

void InnovationLaw::validate() const {
    if (kind == LawKind::student_t) require_nu(tail);
    if (kind == LawKind::ged) require_shape(tail);
}

std::string_view to_string(LawKind kind) {
    switch (kind) {
        case LawKind::student_t: return "t";
        case LawKind::ged: return "ged";
        case LawKind::normal_limit: return "normal";
    }
    return "?";
}

std::optional<LawKind> parse_law_kind(std::string_view name) {
    if (name == "t" || name == "student_t" || name == "std") return LawKind::student_t;
    if (name == "ged") return LawKind::ged;
    if (name == "normal" || name == "norm" || name == "normal_limit") return LawKind::normal_limit;
    return std::nullopt;
}

double log_gamma(double x) {
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    if (!(x > 0.0)) throw DomainError("log_gamma requires x > 0");
    if (x < 0.5) {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
    }
    const double xm = x - 1.0;
    double a = c[0];
    const double t = xm + 7.5;
    for (std::size_t i = 1; i < c.size(); ++i) a += c[i] / (xm + static_cast<double>(i));
    return kHalfLog2Pi + (xm + 0.5) * std::log(t) - t + std::log(a);
}

// --- Student-t ---------------------------------------------------------------

double std_t_logpdf(double z, double nu) {
    require_nu(nu);
    const double c = log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) -
                     0.5 * std::log(std::numbers::pi * (nu - 2.0));
    return c - 0.5 * (nu + 1.0) * std::log1p(z * z / (nu - 2.0));
}

double std_t_cdf(double z, double nu) {
    require_nu(nu);
    const boost::math::students_t_distribution<double> dist(nu);
    return boost::math::cdf(dist, z * std::sqrt(nu / (nu - 2.0)));
}

double std_t_quantile(double p, double nu) {
    require_probability(p);
    require_nu(nu);
    if (p == 0.5) return 0.0;
    const boost::math::students_t_distribution<double> dist(nu);
    return boost::math::quantile(dist, p) * std::sqrt((nu - 2.0) / nu);
}

std::vector<double> std_t_sample(std::size_t n, double nu, std::uint64_t seed) {
    require_nu(nu);
    if (n == 0) throw DomainError("sample size must be at least 1");
    Rng rng(seed);
    const double scale = std::sqrt((nu - 2.0) / nu);
    std::vector<double> out(n);
    for (auto& z : out) {
        const double normal = rng.normal();
        const double chi2 = 2.0 * rng.gamma(0.5 * nu);
        z = normal / std::sqrt(chi2 / nu) * scale;
    }
    return out;
}

// --- GED ---------------------------------------------------------------------

double ged_lambda(double shape) {
    require_shape(shape);
    return std::sqrt(std::exp(-2.0 / shape * std::numbers::ln2 + log_gamma(1.0 / shape) -
                              log_gamma(3.0 / shape)));
}

double ged_logpdf(double z, double shape) {
    const double lambda = ged_lambda(shape);
    return std::log(shape) - 0.5 * std::pow(std::abs(z / lambda), shape) - std::log(lambda) -
           (1.0 + 1.0 / shape) * std::numbers::ln2 - log_gamma(1.0 / shape);
}

double ged_cdf(double z, double shape) {
    const double lambda = ged_lambda(shape);
    const double u = 0.5 * std::pow(std::abs(z) / lambda, shape);
    const double half_mass = 0.5 * boost::math::gamma_p(1.0 / shape, u);
    return z >= 0.0 ? 0.5 + half_mass : 0.5 - half_mass;
}

double ged_quantile(double p, double shape) {
    require_probability(p);
    require_shape(shape);
    if (p == 0.5) return 0.0;
    const double lambda = ged_lambda(shape);
    const double mass = std::abs(2.0 * p - 1.0);
    const double u = boost::math::gamma_p_inv(1.0 / shape, mass);
    const double magnitude = lambda * std::pow(2.0 * u, 1.0 / shape);
    return p > 0.5 ? magnitude : -magnitude;
}

std::vector<double> ged_sample(std::size_t n, double shape, std::uint64_t seed) {
    require_shape(shape);
    if (n == 0) throw DomainError("sample size must be at least 1");
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& z : out) z = ged_quantile(rng.uniform(), shape);
    return out;
}

// --- Normal ------------------------------------------------------------------

double normal_logpdf(double z) { return -kHalfLog2Pi - 0.5 * z * z; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
    require_probability(p);
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

// --- Dispatch ----------------------------------------------------------------

double logpdf(const InnovationLaw& law, double z) {
    switch (law.kind) {
        case LawKind::student_t: return std_t_logpdf(z, law.tail);
        case LawKind::ged: return ged_logpdf(z, law.tail);
        case LawKind::normal_limit: return normal_logpdf(z);
    }
    return 0.0;
}

double cdf(const InnovationLaw& law, double z) {
    switch (law.kind) {
        case LawKind::student_t: return std_t_cdf(z, law.tail);
        case LawKind::ged: return ged_cdf(z, law.tail);
        case LawKind::normal_limit: return normal_cdf(z);
    }
    return 0.0;
}

double quantile(const InnovationLaw& law, double p) {
    switch (law.kind) {
        case LawKind::student_t: return std_t_quantile(p, law.tail);
        case LawKind::ged: return ged_quantile(p, law.tail);
        case LawKind::normal_limit: return normal_quantile(p);
    }
    return 0.0;
}

std::vector<double> sample(const InnovationLaw& law, std::size_t n, std::uint64_t seed) {
    switch (law.kind) {
        case LawKind::student_t: return std_t_sample(n, law.tail, seed);
        case LawKind::ged: return ged_sample(n, law.tail, seed);
        case LawKind::normal_limit: {
            if (n == 0) throw DomainError("sample size must be at least 1");
            Rng rng(seed);
            std::vector<double> out(n);
            for (auto& z : out) z = rng.normal();
            return out;
        }
    }
    return {};
}

double abs_moment(const InnovationLaw& law) {
    law.validate();
    switch (law.kind) {
        case LawKind::student_t: {
            const double nu = law.tail;
            return std::sqrt((nu - 2.0) / std::numbers::pi) *
                   std::exp(log_gamma(0.5 * (nu - 1.0)) - log_gamma(0.5 * nu));
        }
        case LawKind::ged: {
            const double s = law.tail;
            return ged_lambda(s) * std::exp(std::numbers::ln2 / s + log_gamma(2.0 / s) - log_gamma(1.0 / s));
        }
        case LawKind::normal_limit: return std::sqrt(2.0 / std::numbers::pi);
    }
    return 0.0;
}

LogDensity::LogDensity(const InnovationLaw& law) : kind_(law.kind) {
    law.validate();
    switch (kind_) {
        case LawKind::student_t: {
            const double nu = law.tail;
            constant_ = log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) -
                        0.5 * std::log(std::numbers::pi * (nu - 2.0));
            a_ = 1.0 / (nu - 2.0);
            b_ = 0.5 * (nu + 1.0);
            break;
        }
        case LawKind::ged: {
            const double s = law.tail;
            const double lambda = ged_lambda(s);
            constant_ = std::log(s) - std::log(lambda) - (1.0 + 1.0 / s) * std::numbers::ln2 -
                        log_gamma(1.0 / s);
            a_ = 1.0 / lambda;
            b_ = s;
            break;
        }
        case LawKind::normal_limit: constant_ = -kHalfLog2Pi; break;
    }
}

double LogDensity::operator()(double z) const {
    switch (kind_) {
        case LawKind::student_t: return constant_ - b_ * std::log1p(z * z * a_);
        case LawKind::ged: return constant_ - 0.5 * std::pow(std::abs(z * a_), b_);
        case LawKind::normal_limit: return constant_ - 0.5 * z * z;
    }
    return 0.0;
}

}  // namespace volwin::dists
