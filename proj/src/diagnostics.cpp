#include "volwin/diagnostics.hpp"

#include "volwin/csv.hpp"
#include "volwin/error.hpp"

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace volwin::diag {

namespace {

struct OlsFit {
    Eigen::VectorXd coef;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd xtx_inv;
    double ssr = 0.0;
};

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const char* what) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < X.cols()) throw NumericalError(std::string(what) + ": singular regression matrix");
    OlsFit out;
    out.coef = qr.solve(y);
    out.residuals = y - X * out.coef;
    out.ssr = out.residuals.squaredNorm();
    const Eigen::MatrixXd xtx = X.transpose() * X;
    out.xtx_inv = xtx.ldlt().solve(Eigen::MatrixXd::Identity(X.cols(), X.cols()));
    return out;
}

double centered_sum_of_squares(std::span<const double> x, double& mean) {
    mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double ss = 0.0;
    for (const double v : x) ss += (v - mean) * (v - mean);
    return ss;
}

// Dickey-Fuller tau_mu critical values (constant, no trend).
constexpr std::array<double, 4> kAdfProbs = {0.01, 0.025, 0.05, 0.10};
constexpr std::array<double, 6> kAdfSizes = {25, 50, 100, 250, 500, 100000};
constexpr std::array<std::array<double, 4>, 6> kAdfTable = {{
    {-3.75, -3.33, -3.00, -2.63},
    {-3.58, -3.22, -2.93, -2.60},
    {-3.51, -3.17, -2.89, -2.58},
    {-3.46, -3.14, -2.88, -2.57},
    {-3.44, -3.13, -2.87, -2.57},
    {-3.43, -3.12, -2.86, -2.57},
}};

std::array<double, 4> adf_row(std::size_t n) {
    const double t = std::clamp(static_cast<double>(n), kAdfSizes.front(), kAdfSizes.back());
    std::size_t i = 0;
    while (i + 2 < kAdfSizes.size() && t > kAdfSizes[i + 1]) ++i;
    const double w = (t - kAdfSizes[i]) / (kAdfSizes[i + 1] - kAdfSizes[i]);
    std::array<double, 4> row{};
    for (std::size_t k = 0; k < 4; ++k) row[k] = kAdfTable[i][k] + w * (kAdfTable[i + 1][k] - kAdfTable[i][k]);
    return row;
}

}  // namespace

std::string PValue::text() const {
    switch (censor) {
        case Censor::below: return "<" + format_double(value);
        case Censor::above: return ">" + format_double(value);
        case Censor::none: break;
    }
    return format_double(value);
}

bool PValue::below(double alpha) const {
    if (censor == Censor::below) return value <= alpha;
    if (censor == Censor::above) return false;
    return value < alpha;
}

double adf_critical_value(double p, std::size_t n) {
    const auto row = adf_row(n);
    for (std::size_t k = 0; k < kAdfProbs.size(); ++k) {
        if (std::abs(kAdfProbs[k] - p) < 1e-12) return row[k];
    }
    throw DomainError("ADF critical values are tabulated only at 1%, 2.5%, 5% and 10%");
}

TestResult adf_test(std::span<const double> y, std::size_t lags) {
    if (y.size() <= lags + 10) {
        throw DataError("ADF: series of length " + std::to_string(y.size()) + " too short for " +
                        std::to_string(lags) + " lags");
    }
    const std::size_t n_diff = y.size() - 1;
    const std::size_t n_reg = n_diff - lags;
    const auto cols = static_cast<Eigen::Index>(2 + lags);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n_reg), cols);
    Eigen::VectorXd dy(static_cast<Eigen::Index>(n_reg));
    auto diff = [&](std::size_t t) { return y[t + 1] - y[t]; };  // dy indexed from 0
    for (std::size_t r = 0; r < n_reg; ++r) {
        const std::size_t t = r + lags;  // index into differences
        const auto row = static_cast<Eigen::Index>(r);
        dy(row) = diff(t);
        X(row, 0) = 1.0;
        X(row, 1) = y[t];
        for (std::size_t i = 1; i <= lags; ++i) X(row, static_cast<Eigen::Index>(1 + i)) = diff(t - i);
    }
    const OlsFit f = ols(X, dy, "ADF");
    const double dof = static_cast<double>(n_reg) - static_cast<double>(cols);
    const double s2 = f.ssr / dof;
    const double se = std::sqrt(s2 * f.xtx_inv(1, 1));
    if (!(se > 0.0)) throw NumericalError("ADF: degenerate standard error");

    TestResult out;
    out.statistic = f.coef(1) / se;
    out.lags = lags;
    out.n_obs = n_reg;
    const auto row = adf_row(n_reg);
    if (out.statistic < row.front()) {
        out.p_value = {kAdfProbs.front(), PValue::Censor::below};
    } else if (out.statistic > row.back()) {
        out.p_value = {kAdfProbs.back(), PValue::Censor::above};
    } else {
        std::size_t k = 0;
        while (k + 2 < row.size() && out.statistic > row[k + 1]) ++k;
        const double w = (out.statistic - row[k]) / (row[k + 1] - row[k]);
        out.p_value = {kAdfProbs[k] + w * (kAdfProbs[k + 1] - kAdfProbs[k]), PValue::Censor::none};
    }
    out.conclusion = out.p_value.below(0.05) ? "Stationary" : "NonStationary";
    return out;
}

std::vector<double> autocorrelations(std::span<const double> x, std::size_t max_lag) {
    if (x.size() <= max_lag) throw DataError("autocorrelations: series shorter than the lag count");
    double mean = 0.0;
    const double denom = centered_sum_of_squares(x, mean);
    if (!(denom > 0.0)) throw NumericalError("autocorrelations: zero-variance series");
    std::vector<double> rho(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = k; t < x.size(); ++t) num += (x[t] - mean) * (x[t - k] - mean);
        rho[k - 1] = num / denom;
    }
    return rho;
}

double chi_square_sf(double x, double dof) {
    if (!(dof > 0.0)) throw DomainError("chi-square degrees of freedom must be positive");
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

TestResult ljung_box(std::span<const double> x, std::size_t lags) {
    if (lags < 1) throw DomainError("Ljung-Box needs at least one lag");
    if (x.size() <= lags) throw DataError("Ljung-Box: series too short for " + std::to_string(lags) + " lags");
    const auto rho = autocorrelations(x, lags);
    const double n = static_cast<double>(x.size());
    double q = 0.0;
    for (std::size_t k = 1; k <= lags; ++k) q += rho[k - 1] * rho[k - 1] / (n - static_cast<double>(k));
    q *= n * (n + 2.0);
    TestResult out;
    out.statistic = q;
    out.lags = lags;
    out.n_obs = x.size();
    out.p_value = {chi_square_sf(q, static_cast<double>(lags)), PValue::Censor::none};
    out.conclusion = out.p_value.below(0.05) ? "autocorrelated" : "no_autocorrelation";
    return out;
}

TestResult arch_lm(std::span<const double> x, std::size_t lags) {
    if (lags < 1) throw DomainError("ARCH-LM needs at least one lag");
    if (x.size() <= 2 * lags) throw DataError("ARCH-LM: series too short for " + std::to_string(lags) + " lags");
    double mean = 0.0;
    if (!(centered_sum_of_squares(x, mean) > 0.0)) throw NumericalError("ARCH-LM: zero-variance series");
    std::vector<double> e2(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) e2[t] = (x[t] - mean) * (x[t] - mean);

    const std::size_t n_reg = x.size() - lags;
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n_reg), static_cast<Eigen::Index>(lags + 1));
    Eigen::VectorXd y(static_cast<Eigen::Index>(n_reg));
    for (std::size_t r = 0; r < n_reg; ++r) {
        const std::size_t t = r + lags;
        const auto row = static_cast<Eigen::Index>(r);
        y(row) = e2[t];
        X(row, 0) = 1.0;
        for (std::size_t i = 1; i <= lags; ++i) X(row, static_cast<Eigen::Index>(i)) = e2[t - i];
    }
    const OlsFit f = ols(X, y, "ARCH-LM");
    const double ybar = y.mean();
    const double sst = (y.array() - ybar).square().sum();
    if (!(sst > 0.0)) throw NumericalError("ARCH-LM: squared residuals have zero variance");
    const double r2 = 1.0 - f.ssr / sst;

    TestResult out;
    out.statistic = static_cast<double>(n_reg) * r2;
    out.lags = lags;
    out.n_obs = n_reg;
    out.p_value = {chi_square_sf(out.statistic, static_cast<double>(lags)), PValue::Censor::none};
    out.conclusion = out.p_value.below(0.05) ? "arch_effect" : "no_arch_effect";
    return out;
}

std::vector<std::pair<double, double>> qq_points(std::span<const double> std_resid, const dists::InnovationLaw& law) {
    if (std_resid.size() < 10) throw DataError("QQ data needs at least 10 residuals");
    law.validate();
    std::vector<double> sorted(std_resid.begin(), std_resid.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<std::pair<double, double>> out;
    out.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double p = (static_cast<double>(i) + 0.5) / n;
        out.emplace_back(dists::quantile(law, p), sorted[i]);
    }
    return out;
}

VarBacktest var_backtest(const ReturnSeries& returns, const estimate::FitResult& fit, double level) {
    if (!(level > 0.5 && level < 1.0)) throw DomainError("VaR level must lie in (0.5, 1)");
    if (fit.variance_path.sigma2.size() != returns.size()) {
        throw DataError("VaR backtest: fit has " + std::to_string(fit.variance_path.sigma2.size()) +
                        " variances for " + std::to_string(returns.size()) + " returns");
    }
    dists::InnovationLaw law = fit.spec.law;
    if (law.has_tail()) law.tail = fit.params.tail;
    const double q = dists::quantile(law, 1.0 - level);
    VarBacktest out;
    out.level = level;
    out.var_series.resize(returns.size());
    out.hits.resize(returns.size());
    for (std::size_t t = 0; t < returns.size(); ++t) {
        out.var_series[t] = fit.params.mu + std::sqrt(fit.variance_path.sigma2[t]) * q;
        out.hits[t] = returns[t] < out.var_series[t] ? 1 : 0;
        out.hit_count += out.hits[t];
    }
    out.hit_rate = returns.empty() ? 0.0 : static_cast<double>(out.hit_count) / static_cast<double>(returns.size());
    return out;
}

}  // namespace volwin::diag
