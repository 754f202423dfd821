#include "cvwit/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cvwit/errors.hpp"

namespace cvwit {

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opt) {
  const std::size_t n = x0.size();
  if (n == 0) throw PreconditionError("nelder_mead: empty start point");
  if (opt.step.empty()) throw PreconditionError("nelder_mead: empty step");

  std::vector<std::vector<double>> pts(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = opt.step.size() == 1 ? opt.step[0] : opt.step.at(i);
    pts[i + 1][i] += h;
  }
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto eval_at = [&](double coef, std::vector<double>& out) {
    const auto& worst = pts[order[n]];
    for (std::size_t k = 0; k < n; ++k) out[k] = centroid[k] + coef * (worst[k] - centroid[k]);
    return f(out);
  };

  NelderMeadResult res;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    std::iota(order.begin(), order.end(), 0);
    // Stable sort keeps ties in index order so runs are reproducible.
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
    if (vals[order[n]] - vals[order[0]] <= opt.f_tol) {
      res.converged = true;
      break;
    }
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[order[i]][k] / static_cast<double>(n);

    const double fr = eval_at(-1.0, trial);
    if (fr < vals[order[0]]) {
      const double fe = eval_at(-2.0, trial2);
      if (fe < fr) {
        pts[order[n]] = trial2;
        vals[order[n]] = fe;
      } else {
        pts[order[n]] = trial;
        vals[order[n]] = fr;
      }
      continue;
    }
    if (fr < vals[order[n - 1]]) {
      pts[order[n]] = trial;
      vals[order[n]] = fr;
      continue;
    }
    const bool outside = fr < vals[order[n]];
    const double fc = eval_at(outside ? -0.5 : 0.5, trial2);
    if (fc < std::min(fr, vals[order[n]])) {
      pts[order[n]] = trial2;
      vals[order[n]] = fc;
      continue;
    }
    // shrink toward best
    const auto best = pts[order[0]];
    for (std::size_t i = 1; i <= n; ++i) {
      auto& p = pts[order[i]];
      for (std::size_t k = 0; k < n; ++k) p[k] = best[k] + 0.5 * (p[k] - best[k]);
      vals[order[i]] = f(p);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  res.x = pts[best];
  res.f = vals[best];
  res.iterations = it;
  if (!res.converged) {
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    res.converged = (*hi - *lo) <= opt.f_tol;
  }
  return res;
}

}  // namespace cvwit
