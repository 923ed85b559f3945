#include "irvol/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace irvol {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start, const NelderMeadOptions& options) {
  const Eigen::Index n = start.size();
  std::vector<Eigen::VectorXd> simplex(static_cast<std::size_t>(n + 1), start);
  std::vector<double> values(static_cast<std::size_t>(n + 1));
  for (Eigen::Index k = 0; k < n; ++k) simplex[static_cast<std::size_t>(k + 1)][k] += options.initial_step;
  for (std::size_t k = 0; k < simplex.size(); ++k) values[k] = objective(simplex[k]);

  std::vector<std::size_t> order(simplex.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<Eigen::VectorXd> s2;
    std::vector<double> v2;
    for (auto k : order) {
      s2.push_back(simplex[k]);
      v2.push_back(values[k]);
    }
    simplex = std::move(s2);
    values = std::move(v2);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t k = 1; k < simplex.size(); ++k) d = std::max(d, (simplex[k] - simplex[0]).norm());
    return d;
  };

  NelderMeadResult result;
  sort_simplex();
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (diameter() < options.diameter_tolerance) {
      result.converged = true;
      break;
    }
    const std::size_t worst = simplex.size() - 1;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < worst; ++k) centroid += simplex[k];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double fr = objective(reflected);
    if (fr < values[0]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = objective(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
    } else if (fr < values[worst - 1]) {
      simplex[worst] = reflected;
      values[worst] = fr;
    } else {
      const bool outside = fr < values[worst];
      const Eigen::VectorXd contracted =
          outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                  : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
      const double fc = objective(contracted);
      if (fc < (outside ? fr : values[worst])) {
        simplex[worst] = contracted;
        values[worst] = fc;
      } else {
        for (std::size_t k = 1; k < simplex.size(); ++k) {
          simplex[k] = simplex[0] + 0.5 * (simplex[k] - simplex[0]);
          values[k] = objective(simplex[k]);
        }
      }
    }
    sort_simplex();
  }
  result.x = simplex[0];
  result.value = values[0];
  result.iterations = it;
  result.diameter = diameter();
  if (!result.converged && result.diameter < options.diameter_tolerance) result.converged = true;
  return result;
}

}  // namespace irvol
