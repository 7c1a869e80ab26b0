#pragma once

#include "volwin/models.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace volwin::estimate {

struct FitConfig {
    int max_iterations = 5000;
    double function_tolerance = 1e-8;
    int starts = 5;
    std::uint64_t seed = 0;

    /// Throws DomainError unless max_iterations >= 100, tolerance > 0, starts >= 1.
    void validate() const;
};

enum class Param : std::size_t { mu = 0, omega, alpha, beta, gamma, tail };
inline constexpr std::size_t kParamCount = 6;
std::string_view param_name(Param p);

/// Optional overrides: an explicit first start and parameters held fixed at it.
struct FitControl {
    std::optional<models::ParamVector> start;
    std::array<bool, kParamCount> fixed{};

    FitControl& hold(Param p) {
        fixed[static_cast<std::size_t>(p)] = true;
        return *this;
    }
};

struct FitResult {
    models::ModelSpec spec;
    models::ParamVector params;
    double log_likelihood = 0.0;
    bool converged = false;
    int iterations = 0;
    models::VariancePath variance_path;
    std::vector<double> std_residuals;
    std::size_t n_obs = 0;
};

/// Parameters active for a spec, in unconstrained-vector order:
/// mu, omega, alpha, beta, [gamma], [tail].
std::vector<Param> active_params(const models::ModelSpec& spec);

std::vector<double> to_unconstrained(const models::ModelSpec& spec, const models::ParamVector& params);
models::ParamVector from_unconstrained(const models::ModelSpec& spec, std::span<const double> u);

/// -sum_t [log f(z_t) - 0.5 log sigma2_t] plus 1e6 per egarch clamp event.
/// `init` is the pre-sample variance; the overload without it uses the
/// sample variance of `returns`.
double negative_log_likelihood(const models::ModelSpec& spec, const models::ParamVector& params,
                               std::span<const double> returns, double init);
double negative_log_likelihood(const models::ModelSpec& spec, const models::ParamVector& params,
                               const ReturnSeries& returns);

inline constexpr double kClampPenalty = 1e6;
inline constexpr std::size_t kMinFitObservations = 100;

/// First multi-start point: sample mean, omega matched to the sample variance,
/// alpha 0.05, beta 0.90, gamma 0.05, nu 8 / GED shape 1.5.
models::ParamVector default_start(const models::ModelSpec& spec, std::span<const double> returns);

FitResult fit(const models::ModelSpec& spec, const ReturnSeries& returns, const FitConfig& config,
              const FitControl& control = {});

/// Same family, new innovation law, warm-started from `prior`.
FitResult refit_with_law(const FitResult& prior, const dists::InnovationLaw& new_law, const ReturnSeries& returns,
                         const FitConfig& config);

/// FitResult for fixed parameters (no optimization); converged iff the
/// likelihood is finite.
FitResult evaluate(const models::ModelSpec& spec, const models::ParamVector& params, const ReturnSeries& returns);

}  // namespace volwin::estimate
