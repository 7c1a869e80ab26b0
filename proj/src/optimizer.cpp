#include "volwin/optimizer.hpp"

#include "volwin/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace volwin::optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Simplex {
    std::vector<std::vector<double>> x;
    std::vector<double> f;
};

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0, const std::vector<double>& steps,
                             const NelderMeadOptions& options) {
    const std::size_t n = x0.size();
    if (n == 0) throw DomainError("nelder_mead: empty parameter vector");
    if (steps.size() != n) throw DomainError("nelder_mead: step vector size mismatch");

    NelderMeadResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        const double v = objective(x);
        return std::isfinite(v) ? v : kInf;
    };

    Simplex s;
    auto build = [&](const std::vector<double>& center, double fcenter) {
        s.x.assign(n + 1, center);
        s.f.assign(n + 1, fcenter);
        for (std::size_t i = 0; i < n; ++i) {
            s.x[i + 1][i] += steps[i];
            s.f[i + 1] = eval(s.x[i + 1]);
        }
    };

    build(x0, eval(x0));
    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    int restarts_left = options.restarts;
    double last_converged = kInf;

    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.f[a] < s.f[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[n - 1];

        if (s.f[worst] - s.f[best] < options.function_tolerance) {
            const bool stalled = last_converged - s.f[best] < options.function_tolerance;
            if (stalled || restarts_left == 0) {
                result.converged = true;
                break;
            }
            last_converged = s.f[best];
            --restarts_left;
            const auto center = s.x[best];
            build(center, s.f[best]);
            continue;
        }
        if (result.iterations >= options.max_iterations) break;
        ++result.iterations;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& v = s.x[order[k]];
            for (std::size_t i = 0; i < n; ++i) centroid[i] += v[i];
        }
        for (auto& c : centroid) c /= static_cast<double>(n);

        const auto& xw = s.x[worst];
        for (std::size_t i = 0; i < n; ++i) xr[i] = centroid[i] + (centroid[i] - xw[i]);
        const double fr = eval(xr);

        if (fr < s.f[best]) {
            for (std::size_t i = 0; i < n; ++i) xe[i] = centroid[i] + 2.0 * (centroid[i] - xw[i]);
            const double fe = eval(xe);
            if (fe < fr) {
                s.x[worst] = xe;
                s.f[worst] = fe;
            } else {
                s.x[worst] = xr;
                s.f[worst] = fr;
            }
            continue;
        }
        if (fr < s.f[second_worst]) {
            s.x[worst] = xr;
            s.f[worst] = fr;
            continue;
        }
        // Contraction: outside when the reflection improved on the worst vertex.
        const bool outside = fr < s.f[worst];
        for (std::size_t i = 0; i < n; ++i) {
            xc[i] = outside ? centroid[i] + 0.5 * (xr[i] - centroid[i]) : centroid[i] + 0.5 * (xw[i] - centroid[i]);
        }
        const double fc = eval(xc);
        if (fc < (outside ? fr : s.f[worst])) {
            s.x[worst] = xc;
            s.f[worst] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for (std::size_t k = 1; k <= n; ++k) {
            const std::size_t j = order[k];
            for (std::size_t i = 0; i < n; ++i) s.x[j][i] = s.x[best][i] + 0.5 * (s.x[j][i] - s.x[best][i]);
            s.f[j] = eval(s.x[j]);
        }
    }

    const auto best_it = std::min_element(s.f.begin(), s.f.end());
    const auto idx = static_cast<std::size_t>(best_it - s.f.begin());
    result.x = s.x[idx];
    result.value = s.f[idx];
    if (!std::isfinite(result.value)) result.converged = false;
    return result;
}

}  // namespace volwin::optim
