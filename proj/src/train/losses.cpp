#include "kanbench/train/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kanbench {

double mse(std::span<const double> pred, std::span<const double> target) {
  if (pred.empty()) throw std::invalid_argument("mse: empty input");
  if (pred.size() != target.size()) throw std::invalid_argument("mse: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    s += d * d;
  }
  return s / static_cast<double>(pred.size());
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax: empty input");
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) z += (p[i] = std::exp(logits[i] - mx));
  for (auto& v : p) v /= z;
  return p;
}

SoftmaxCrossEntropy cross_entropy_softmax(std::span<const double> logits, std::size_t label) {
  if (logits.size() < 2) throw std::invalid_argument("cross_entropy_softmax: need >= 2 classes");
  if (label >= logits.size()) throw std::invalid_argument("cross_entropy_softmax: label out of range");
  const double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double l : logits) z += std::exp(l - mx);
  const double log_z = std::log(z);
  SoftmaxCrossEntropy out;
  out.loss = -(logits[label] - mx - log_z);
  out.grad.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out.grad[i] = std::exp(logits[i] - mx - log_z) - (i == label ? 1.0 : 0.0);
  }
  return out;
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax: empty input");
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> truth) {
  if (predicted.empty()) throw std::invalid_argument("accuracy: empty input");
  if (predicted.size() != truth.size()) throw std::invalid_argument("accuracy: length mismatch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == truth[i];
  return 100.0 * static_cast<double>(hits) / static_cast<double>(predicted.size());
}

}  // namespace kanbench
