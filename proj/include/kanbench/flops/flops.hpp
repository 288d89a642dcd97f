#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kanbench/model/model.hpp"

namespace kanbench {

/// d_in * d_out * (9K(G + 1.5K) + 2G - 2.5K - 1), rounded to the nearest
/// integer: the spline cost of a de Boor evaluation per edge.
std::int64_t flops_kan_layer(std::size_t d_in, std::size_t d_out, int grid, int degree);

/// Per-edge term of flops_kan_layer before rounding.
double flops_kan_edge(int grid, int degree) noexcept;

/// Per-output elementwise cost charged for an activation.
int activation_flops(Activation a) noexcept;

/// 2 d_in d_out (multiply-add) + d_out (bias) + activation_flops * d_out.
std::int64_t flops_mlp_layer(std::size_t d_in, std::size_t d_out, Activation a);

struct CostBreakdown {
  struct Layer {
    std::size_t index;
    std::string description;
    std::int64_t flops;
  };
  std::vector<Layer> per_layer;
  std::int64_t total = 0;

  double total_kflops() const noexcept { return static_cast<double>(total) / 1000.0; }
};

/// KAN layers sum the per-edge term over their edges (edges may carry
/// different grids after widening) and round once per layer.
CostBreakdown cost_of(const KanNetwork& net);
CostBreakdown cost_of(const MlpNetwork& net);
CostBreakdown cost_of(const Model& model);

/// Cost of a freshly built KAN with uniform grids.
CostBreakdown cost_of_kan(const std::vector<std::size_t>& arch, int grid, int degree);
CostBreakdown cost_of_mlp(const std::vector<std::size_t>& arch, Activation hidden);

/// Aligned text table, one row per layer plus a total.
void print_cost_table(const CostBreakdown& cost, std::ostream& out);
/// CSV with header layer,description,flops,kflops and a trailing total row.
void print_cost_csv(const CostBreakdown& cost, std::ostream& out);

}  // namespace kanbench
