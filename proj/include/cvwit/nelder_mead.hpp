#pragma once

// Derivative-free simplex minimization.

#include <functional>
#include <span>
#include <vector>

namespace cvwit {

struct NelderMeadOptions {
  double f_tol = 1e-8;  // stop when the simplex's function values span less than this
  int max_iter = 200;
  /// Initial simplex edge per coordinate; a single entry is broadcast.
  std::vector<double> step{0.1};
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opt = {});

}  // namespace cvwit
