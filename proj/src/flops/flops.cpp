#include "kanbench/flops/flops.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace kanbench {

double flops_kan_edge(int grid, int degree) noexcept {
  const double g = grid;
  const double k = degree;
  return 9.0 * k * (g + 1.5 * k) + 2.0 * g - 2.5 * k - 1.0;
}

std::int64_t flops_kan_layer(std::size_t d_in, std::size_t d_out, int grid, int degree) {
  return std::llround(static_cast<double>(d_in * d_out) * flops_kan_edge(grid, degree));
}

int activation_flops(Activation a) noexcept {
  switch (a) {
    case Activation::identity: return 0;
    case Activation::relu: return 1;
    case Activation::silu: return 4;
    case Activation::tanh: return 5;
  }
  return 0;
}

std::int64_t flops_mlp_layer(std::size_t d_in, std::size_t d_out, Activation a) {
  const auto in = static_cast<std::int64_t>(d_in);
  const auto out = static_cast<std::int64_t>(d_out);
  return 2 * in * out + out + activation_flops(a) * out;
}

namespace {

std::string dims(std::size_t in, std::size_t out) {
  return std::to_string(in) + "->" + std::to_string(out);
}

}  // namespace

CostBreakdown cost_of(const KanNetwork& net) {
  CostBreakdown cost;
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const auto& layer = net.layers()[l];
    double sum = 0.0;
    bool uniform = true;
    const KnotGrid& first = layer.edges().front().spline.grid();
    for (const auto& e : layer.edges()) {
      const KnotGrid& g = e.spline.grid();
      sum += flops_kan_edge(g.intervals(), g.degree());
      uniform = uniform && g.intervals() == first.intervals() && g.degree() == first.degree();
    }
    std::string desc = "kan " + dims(layer.in_dim(), layer.out_dim());
    desc += uniform ? " G=" + std::to_string(first.intervals()) + " k=" + std::to_string(first.degree())
                    : " mixed grids";
    const std::int64_t flops = std::llround(sum);
    cost.per_layer.push_back({l, std::move(desc), flops});
    cost.total += flops;
  }
  return cost;
}

CostBreakdown cost_of(const MlpNetwork& net) {
  CostBreakdown cost;
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const auto& layer = net.layers()[l];
    const std::int64_t flops = flops_mlp_layer(layer.in_dim(), layer.out_dim(), layer.activation);
    cost.per_layer.push_back(
        {l, "dense " + dims(layer.in_dim(), layer.out_dim()) + " " + std::string(to_string(layer.activation)),
         flops});
    cost.total += flops;
  }
  return cost;
}

CostBreakdown cost_of(const Model& model) {
  return std::visit([](const auto& net) { return cost_of(net); }, model);
}

CostBreakdown cost_of_kan(const std::vector<std::size_t>& arch, int grid, int degree) {
  CostBreakdown cost;
  for (std::size_t l = 0; l + 1 < arch.size(); ++l) {
    const std::int64_t flops = flops_kan_layer(arch[l], arch[l + 1], grid, degree);
    cost.per_layer.push_back({l,
                              "kan " + dims(arch[l], arch[l + 1]) + " G=" + std::to_string(grid) +
                                  " k=" + std::to_string(degree),
                              flops});
    cost.total += flops;
  }
  return cost;
}

CostBreakdown cost_of_mlp(const std::vector<std::size_t>& arch, Activation hidden) {
  CostBreakdown cost;
  for (std::size_t l = 0; l + 1 < arch.size(); ++l) {
    const Activation a = (l + 2 == arch.size()) ? Activation::identity : hidden;
    const std::int64_t flops = flops_mlp_layer(arch[l], arch[l + 1], a);
    cost.per_layer.push_back(
        {l, "dense " + dims(arch[l], arch[l + 1]) + " " + std::string(to_string(a)), flops});
    cost.total += flops;
  }
  return cost;
}

void print_cost_table(const CostBreakdown& cost, std::ostream& out) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-6s %-28s %12s %10s\n", "layer", "description", "flops", "kflops");
  out << buf;
  for (const auto& l : cost.per_layer) {
    std::snprintf(buf, sizeof buf, "%-6zu %-28s %12lld %10.3f\n", l.index, l.description.c_str(),
                  static_cast<long long>(l.flops), static_cast<double>(l.flops) / 1000.0);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-6s %-28s %12lld %10.3f\n", "total", "",
                static_cast<long long>(cost.total), cost.total_kflops());
  out << buf;
}

void print_cost_csv(const CostBreakdown& cost, std::ostream& out) {
  out << "layer,description,flops,kflops\n";
  char buf[160];
  for (const auto& l : cost.per_layer) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%lld,%.3f\n", l.index, l.description.c_str(),
                  static_cast<long long>(l.flops), static_cast<double>(l.flops) / 1000.0);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "total,,%lld,%.3f\n", static_cast<long long>(cost.total),
                cost.total_kflops());
  out << buf;
}

}  // namespace kanbench
