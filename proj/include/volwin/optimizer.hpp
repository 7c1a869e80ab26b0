#pragma once

#include <functional>
#include <span>
#include <vector>

namespace volwin::optim {

struct NelderMeadOptions {
    int max_iterations = 5000;
    /// Converged once max f - min f over the simplex drops below this.
    double function_tolerance = 1e-8;
    /// Fresh simplices built around the best vertex after convergence, to
    /// escape collapsed simplices.
    int restarts = 2;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    int evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex minimization. Non-finite objective values are
/// treated as +infinity. `steps` gives the initial simplex edge per coordinate.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const std::vector<double>& steps,
                             const NelderMeadOptions& options = {});

}  // namespace volwin::optim
