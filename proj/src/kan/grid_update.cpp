#include <algorithm>
#include <cmath>
#include <limits>

#include "kanbench/kan/kan.hpp"

namespace kanbench {

std::size_t detect_and_extend(KanNetwork& net, std::span<const KanCache> caches,
                              const GridUpdateOptions& options) {
  std::size_t widened = 0;
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const std::size_t in_dim = net.layer(l).in_dim();
    const std::size_t out_dim = net.layer(l).out_dim();
    for (std::size_t p = 0; p < in_dim; ++p) {
      std::vector<double> observed;
      observed.reserve(caches.size());
      for (const auto& cache : caches) {
        if (l >= cache.layer_inputs.size() || p >= cache.layer_inputs[l].size()) continue;
        const double v = cache.layer_inputs[l][p];
        if (std::isfinite(v)) observed.push_back(v);
      }
      if (observed.empty()) continue;
      const auto [mn_it, mx_it] = std::minmax_element(observed.begin(), observed.end());
      const double obs_lo = *mn_it;
      const double obs_hi = *mx_it;

      for (std::size_t q = 0; q < out_dim; ++q) {
        const EdgeActivation& edge = net.layer(l).edge(q, p);
        const KnotGrid& grid = edge.spline.grid();
        if (obs_lo >= grid.lo() && obs_hi <= grid.hi()) continue;

        const double width = std::max(grid.hi(), obs_hi) - std::min(grid.lo(), obs_lo);
        const double want_lo = obs_lo < grid.lo() ? obs_lo - options.margin * width : grid.lo();
        const double want_hi = obs_hi > grid.hi() ? obs_hi + options.margin * width : grid.hi();
        const KnotGrid target = widened_grid(grid, want_lo, want_hi, options.policy);

        // A uniform sweep of the new range keeps the refit well posed even
        // when the recorded inputs cluster (e.g. a constant input).
        const std::size_t sweep = 2 * target.basis_count() + 1;
        std::vector<double> samples;
        samples.reserve(sweep + observed.size());
        for (std::size_t i = 0; i < sweep; ++i) {
          samples.push_back(target.lo() + (target.hi() - target.lo()) * static_cast<double>(i) /
                                              static_cast<double>(sweep - 1));
        }
        samples.insert(samples.end(), observed.begin(), observed.end());

        SplineFunction refit = extend_grid(edge.spline, target, samples);
        net.edge_mut(l, q, p).spline = std::move(refit);
        ++widened;
      }
    }
  }
  return widened;
}

}  // namespace kanbench
