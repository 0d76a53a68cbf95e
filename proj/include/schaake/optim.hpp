#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace schaake {

struct NelderMeadOptions {
    /// Converged when the spread of objective values across the simplex,
    /// relative to the best value, drops below this.
    double rel_tolerance = 1e-8;
    std::size_t max_iterations = 500;
    /// Initial simplex edge length along each coordinate.
    double initial_step = 0.1;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Derivative-free minimization. Non-finite objective values are treated as +inf.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace schaake
