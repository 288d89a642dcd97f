#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace kanbench {

/// Mean of squared differences. Throws on empty or mismatched input.
double mse(std::span<const double> pred, std::span<const double> target);

/// Max-shifted softmax.
std::vector<double> softmax(std::span<const double> logits);

struct SoftmaxCrossEntropy {
  double loss;
  std::vector<double> grad;  // softmax(logits) - onehot(label)
};

SoftmaxCrossEntropy cross_entropy_softmax(std::span<const double> logits, std::size_t label);

std::size_t argmax(std::span<const double> values);

/// Percentage of positions where the two label vectors agree.
double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> truth);

}  // namespace kanbench
