#pragma once

#include "volwin/dists.hpp"
#include "volwin/series.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace volwin::models {

enum class Family { garch, egarch, tgarch };

std::string_view to_string(Family f);
std::optional<Family> parse_family(std::string_view name);

struct ModelSpec {
    Family family = Family::garch;
    dists::InnovationLaw law;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Mean and variance-equation coefficients.
///
/// For egarch, `alpha` multiplies |eps|/sigma (magnitude term) and `gamma`
/// multiplies eps/sigma (sign term); omega is in log-variance units.
/// `gamma` is ignored (and kept at 0) for garch. `tail` is nu (Student-t) or
/// the GED shape; unused for the normal limit.
struct ParamVector {
    double mu = 0.0;
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double tail = 8.0;

    friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

struct VariancePath {
    std::vector<double> sigma2;
    double init_value = 0.0;
    /// Number of egarch steps whose log-variance hit the [-50, 50] guard.
    std::size_t clamp_events = 0;
};

inline constexpr double kLogVarianceBound = 50.0;

[[nodiscard]] bool in_domain(const ModelSpec& spec, const ParamVector& p);
/// Throws DomainError describing the first violated constraint.
void validate(const ModelSpec& spec, const ParamVector& p);
/// Variance-equation constraints only (tail ignored).
void validate_family(Family family, const ParamVector& p);

/// One-step conditional-variance recursion shared by filters and simulators,
/// so both produce bit-identical paths.
class VarianceRecursion {
public:
    VarianceRecursion(Family family, const ParamVector& params, double init);

    [[nodiscard]] double sigma2() const { return sigma2_; }
    /// Advances from sigma2_{t-1} and eps_{t-1} to sigma2_t.
    double advance(double eps);
    [[nodiscard]] std::size_t clamp_events() const { return clamps_; }

private:
    Family family_;
    ParamVector p_;
    double sigma2_;
    double log_sigma2_;
    std::size_t clamps_ = 0;
};

VariancePath filter(Family family, const ParamVector& params, std::span<const double> returns, double init);

VariancePath garch_filter(const ParamVector& params, std::span<const double> returns, double init);
VariancePath egarch_filter(const ParamVector& params, std::span<const double> returns, double init);
VariancePath tgarch_filter(const ParamVector& params, std::span<const double> returns, double init);

inline VariancePath garch_filter(const ParamVector& p, const ReturnSeries& r, double init) {
    return garch_filter(p, r.values(), init);
}
inline VariancePath egarch_filter(const ParamVector& p, const ReturnSeries& r, double init) {
    return egarch_filter(p, r.values(), init);
}
inline VariancePath tgarch_filter(const ParamVector& p, const ReturnSeries& r, double init) {
    return tgarch_filter(p, r.values(), init);
}

/// z_t = (r_t - mu) / sigma_t.
std::vector<double> standardized_residuals(std::span<const double> returns, double mu, const VariancePath& path);

/// garch: alpha + beta; tgarch: alpha + beta + gamma/2; egarch: beta.
double persistence(Family family, const ParamVector& params);

/// Mean of (r - mean)^2; the pre-sample variance used to start every filter.
double sample_variance(std::span<const double> values);
double sample_mean(std::span<const double> values);

}  // namespace volwin::models
