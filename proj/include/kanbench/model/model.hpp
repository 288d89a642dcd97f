#pragma once

#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "kanbench/kan/kan.hpp"
#include "kanbench/mlp/mlp.hpp"

namespace kanbench {

using Model = std::variant<KanNetwork, MlpNetwork>;

inline std::string_view model_kind(const Model& m) noexcept {
  return std::holds_alternative<KanNetwork>(m) ? "kan" : "mlp";
}

inline std::vector<double> predict(const KanNetwork& net, std::span<const double> x) {
  return kan_predict(net, x);
}
inline std::vector<double> predict(const MlpNetwork& net, std::span<const double> x) {
  return mlp_predict(net, x);
}
inline std::vector<double> predict(const Model& m, std::span<const double> x) {
  return std::visit([&](const auto& net) { return predict(net, x); }, m);
}

}  // namespace kanbench
