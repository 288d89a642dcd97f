#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "kanbench/flops/flops.hpp"

using namespace kanbench;

namespace {

// The closed form evaluated term by term, independent of the library.
double edge_reference(double g, double k) { return 9 * k * (g + 1.5 * k) + 2 * g - 2.5 * k - 1; }

}  // namespace

TEST_CASE("KAN layer cost: worked examples") {
  CHECK(flops_kan_layer(1, 1, 2, 3) == 171);
  CHECK(flops_kan_layer(1, 1, 5, 3) == 258);
  CHECK(flops_kan_layer(2, 3, 2, 3) == 1026);
  CHECK(flops_kan_edge(2, 3) == 171.0);
}

TEST_CASE("KAN layer cost is d_in * d_out times the closed form") {
  CHECK(flops_kan_edge(1, 1) == 21.0);
  CHECK(flops_kan_edge(1, 2) == 68.0);
  for (int g = 1; g <= 10; ++g) {
    for (int k = 1; k <= 5; ++k) {
      CHECK(flops_kan_edge(g, k) == doctest::Approx(edge_reference(g, k)));
      CHECK(flops_kan_layer(2, 3, g, k) == std::llround(6 * edge_reference(g, k)));
    }
  }
}

TEST_CASE("KAN cost is monotone in every argument") {
  for (int g = 1; g <= 12; ++g) {
    for (int k = 1; k <= 5; ++k) {
      for (std::size_t d = 1; d <= 4; ++d) {
        const auto base = flops_kan_layer(d, d, g, k);
        CHECK(flops_kan_layer(d + 1, d, g, k) >= base);
        CHECK(flops_kan_layer(d, d + 1, g, k) >= base);
        CHECK(flops_kan_layer(d, d, g + 1, k) >= base);
        CHECK(flops_kan_layer(d, d, g, k + 1) >= base);
      }
    }
  }
}

TEST_CASE("MLP layer cost: worked examples") {
  CHECK(flops_mlp_layer(1, 10, Activation::identity) == 30);
  CHECK(flops_mlp_layer(10, 1, Activation::relu) == 22);
  CHECK(flops_mlp_layer(1, 1, Activation::identity) == 3);
  CHECK(flops_mlp_layer(4, 2, Activation::silu) == 16 + 2 + 8);
  CHECK(flops_mlp_layer(4, 2, Activation::tanh) == 16 + 2 + 10);
  CHECK(activation_flops(Activation::relu) == 1);
}

TEST_CASE("network cost sums its layers") {
  const CostBreakdown kan = cost_of_kan({1, 1}, 2, 3);
  CHECK(kan.total == 171);
  CHECK(kan.total_kflops() == doctest::Approx(0.171));
  CHECK(cost_of_kan({1, 2, 1}, 2, 3).total == 684);
  CHECK(cost_of_mlp({1, 1}, Activation::relu).total == 3);

  const CostBreakdown mlp = cost_of_mlp({3, 16, 16, 1}, Activation::tanh);
  REQUIRE(mlp.per_layer.size() == 3);
  CHECK(mlp.per_layer[0].flops == flops_mlp_layer(3, 16, Activation::tanh));
  CHECK(mlp.per_layer[2].flops == flops_mlp_layer(16, 1, Activation::identity));
  std::int64_t sum = 0;
  for (const auto& l : mlp.per_layer) sum += l.flops;
  CHECK(mlp.total == sum);
}

TEST_CASE("cost of built models matches the architecture formulas") {
  Rng rng(1);
  const KanNetwork kan = init_kan(std::vector<std::size_t>{1, 1}, 2, 3, -1, 1, rng);
  CHECK(cost_of(kan).total == 171);
  const Model m = init_kan(std::vector<std::size_t>{3, 4, 1}, 5, 3, -1, 1, rng);
  CHECK(cost_of(m).total == cost_of_kan({3, 4, 1}, 5, 3).total);
  const Model mlp = init_mlp(std::vector<std::size_t>{13, 16, 3}, Activation::relu, rng);
  CHECK(cost_of(mlp).total == cost_of_mlp({13, 16, 3}, Activation::relu).total);
  const MlpNetwork one({DenseLayer{Matrix(1, 1, {1}), {0}, Activation::identity}});
  CHECK(cost_of(one).total == 3);
}

TEST_CASE("widened edges are charged for their actual grid") {
  Rng rng(2);
  KanNetwork net = init_kan(std::vector<std::size_t>{2, 1}, 5, 3, -1, 1, rng);
  net.edge_mut(0, 0, 0).spline = SplineFunction(KnotGrid(-2.2, 2.2, 11, 3));
  const CostBreakdown c = cost_of(net);
  CHECK(c.total == std::llround(edge_reference(11, 3) + edge_reference(5, 3)));
  CHECK(c.per_layer[0].description.find("mixed") != std::string::npos);
}

TEST_CASE("cost table and CSV") {
  const CostBreakdown c = cost_of_kan({1, 2, 1}, 2, 3);
  std::ostringstream csv;
  print_cost_csv(c, csv);
  CHECK(csv.str() == "layer,description,flops,kflops\n0,kan 1->2 G=2 k=3,342,0.342\n1,kan 2->1 G=2 k=3,342,0.342\n"
                     "total,,684,0.684\n");
  std::ostringstream table;
  print_cost_table(c, table);
  CHECK(table.str().find("0.684") != std::string::npos);
  CHECK(table.str().find("total") != std::string::npos);
}
