#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace volwin::dists {

enum class LawKind { student_t, ged, normal_limit };

/// Innovation distribution, always standardized to zero mean and unit variance.
///
/// Student-t needs nu > 2 so the unit-variance rescaling exists; GED needs
/// shape > 0. normal_limit carries no tail parameter.
struct InnovationLaw {
    LawKind kind = LawKind::student_t;
    double tail = 8.0;

    static InnovationLaw student_t(double nu);
    static InnovationLaw ged(double shape);
    static InnovationLaw normal();

    [[nodiscard]] bool has_tail() const { return kind != LawKind::normal_limit; }
    /// Throws DomainError when the tail parameter is outside the law's domain.
    void validate() const;
    [[nodiscard]] bool tail_in_domain(double value) const;

    friend bool operator==(const InnovationLaw&, const InnovationLaw&) = default;
};

std::string_view to_string(LawKind kind);
/// Accepts `t`, `student_t`, `ged`, `normal`.
std::optional<LawKind> parse_law_kind(std::string_view name);

/// log Gamma(x) for x > 0 via the Lanczos approximation (g = 7, 9 terms).
double log_gamma(double x);

double std_t_logpdf(double z, double nu);
double std_t_cdf(double z, double nu);
double std_t_quantile(double p, double nu);
std::vector<double> std_t_sample(std::size_t n, double nu, std::uint64_t seed);

/// GED scale lambda so that the density has unit variance.
double ged_lambda(double shape);
double ged_logpdf(double z, double shape);
double ged_cdf(double z, double shape);
double ged_quantile(double p, double shape);
std::vector<double> ged_sample(std::size_t n, double shape, std::uint64_t seed);

double normal_logpdf(double z);
double normal_cdf(double z);
double normal_quantile(double p);

double logpdf(const InnovationLaw& law, double z);
double cdf(const InnovationLaw& law, double z);
double quantile(const InnovationLaw& law, double p);
std::vector<double> sample(const InnovationLaw& law, std::size_t n, std::uint64_t seed);
/// E|z| under the law.
double abs_moment(const InnovationLaw& law);

/// Log-density with the normalizing constant precomputed, for likelihood loops.
class LogDensity {
public:
    explicit LogDensity(const InnovationLaw& law);
    double operator()(double z) const;

private:
    LawKind kind_;
    double constant_ = 0.0;
    double a_ = 0.0;  // t: 1/(nu-2); ged: 1/lambda
    double b_ = 0.0;  // t: (nu+1)/2; ged: shape
};

}  // namespace volwin::dists
