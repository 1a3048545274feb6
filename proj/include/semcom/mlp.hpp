// Copyright 2026 The semcom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small fully connected network for the Q-function: affine layers with ReLU
// on hidden layers and a linear output, hand-written backpropagation and
// momentum SGD.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

namespace semcom {

struct DenseLayer {
  int inputs = 0;
  int outputs = 0;
  std::vector<double> weights;  // outputs x inputs, row-major
  std::vector<double> biases;   // outputs

  DenseLayer() = default;
  DenseLayer(int in, int out)
      : inputs(in),
        outputs(out),
        weights(static_cast<std::size_t>(in) * out, 0.0),
        biases(static_cast<std::size_t>(out), 0.0) {}

  double& w(int o, int i) { return weights[static_cast<std::size_t>(o) * inputs + i]; }
  double w(int o, int i) const { return weights[static_cast<std::size_t>(o) * inputs + i]; }
};

// Per-layer gradients shaped like the network.
struct MlpGradients {
  std::vector<DenseLayer> layers;

  void scale(double s) {
    for (auto& l : layers) {
      for (double& v : l.weights) v *= s;
      for (double& v : l.biases) v *= s;
    }
  }
};

class Mlp {
 public:
  // Activations of every layer for one input; needed by backward().
  struct Trace {
    std::vector<std::vector<double>> activations;  // [0] = input, back() = output
  };

  Mlp() = default;

  explicit Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw ShapeError("network needs at least one layer");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      const auto& l = layers_[i];
      if (l.inputs < 1 || l.outputs < 1 ||
          l.weights.size() != static_cast<std::size_t>(l.inputs) * l.outputs ||
          l.biases.size() != static_cast<std::size_t>(l.outputs)) {
        throw ShapeError("layer " + std::to_string(i) + " has inconsistent shape");
      }
      if (i > 0 && layers_[i - 1].outputs != l.inputs) {
        throw ShapeError("layer " + std::to_string(i) + " input size does not match previous output");
      }
    }
  }

  // Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], zero biases.
  static Mlp random(std::span<const int> sizes, Rng& rng) {
    if (sizes.size() < 2) throw ShapeError("network needs input and output sizes");
    std::vector<DenseLayer> layers;
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
      if (sizes[i] < 1 || sizes[i + 1] < 1) throw ShapeError("layer sizes must be >= 1");
      DenseLayer l(sizes[i], sizes[i + 1]);
      const double bound = 1.0 / std::sqrt(static_cast<double>(sizes[i]));
      for (double& w : l.weights) w = rng.uniform(-bound, bound);
      layers.push_back(std::move(l));
    }
    return Mlp(std::move(layers));
  }

  int input_size() const { return layers_.front().inputs; }
  int output_size() const { return layers_.back().outputs; }
  std::vector<int> sizes() const {
    std::vector<int> s{layers_.front().inputs};
    for (const auto& l : layers_) s.push_back(l.outputs);
    return s;
  }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  Trace forward_trace(std::span<const double> input) const {
    if (static_cast<int>(input.size()) != input_size()) {
      throw ShapeError("network input has " + std::to_string(input.size()) + " values, expected " +
                       std::to_string(input_size()));
    }
    Trace t;
    t.activations.emplace_back(input.begin(), input.end());
    for (std::size_t li = 0; li < layers_.size(); ++li) {
      const auto& l = layers_[li];
      const auto& x = t.activations.back();
      std::vector<double> y(l.biases);
      for (int o = 0; o < l.outputs; ++o) {
        double s = 0.0;
        for (int i = 0; i < l.inputs; ++i) s += l.w(o, i) * x[i];
        y[o] += s;
      }
      if (li + 1 < layers_.size()) {
        for (double& v : y) v = v > 0.0 ? v : 0.0;
      }
      t.activations.push_back(std::move(y));
    }
    return t;
  }

  std::vector<double> forward(std::span<const double> input) const {
    return std::move(forward_trace(input).activations.back());
  }

  MlpGradients zero_gradients() const {
    MlpGradients g;
    for (const auto& l : layers_) g.layers.emplace_back(l.inputs, l.outputs);
    return g;
  }

  // Accumulates dLoss/dparams into `grads` given dLoss/doutput for the traced
  // input.
  void backward(const Trace& trace, std::span<const double> output_grad, MlpGradients& grads) const {
    if (static_cast<int>(output_grad.size()) != output_size()) {
      throw ShapeError("output gradient has wrong length");
    }
    if (grads.layers.size() != layers_.size() || trace.activations.size() != layers_.size() + 1) {
      throw ShapeError("gradient buffer or trace does not match the network");
    }
    std::vector<double> delta(output_grad.begin(), output_grad.end());
    for (std::size_t li = layers_.size(); li-- > 0;) {
      const auto& l = layers_[li];
      auto& g = grads.layers[li];
      const auto& x = trace.activations[li];
      for (int o = 0; o < l.outputs; ++o) {
        g.biases[o] += delta[o];
        for (int i = 0; i < l.inputs; ++i) g.w(o, i) += delta[o] * x[i];
      }
      if (li == 0) break;
      std::vector<double> prev(l.inputs, 0.0);
      for (int o = 0; o < l.outputs; ++o) {
        for (int i = 0; i < l.inputs; ++i) prev[i] += l.w(o, i) * delta[o];
      }
      // ReLU derivative of the hidden layer that produced x (1 where x > 0).
      for (int i = 0; i < l.inputs; ++i) {
        if (!(x[i] > 0.0)) prev[i] = 0.0;
      }
      delta = std::move(prev);
    }
  }

 private:
  std::vector<DenseLayer> layers_;
};

// One regression sample for the TD objective: drive Q(state)[action] to target.
struct TdSample {
  std::span<const double> state;
  std::size_t action = 0;
  double target = 0.0;
};

// Mean squared TD error over the batch; gradients are written to `grads`
// (overwritten) when non-null.
inline double td_loss(const Mlp& net, std::span<const TdSample> batch, MlpGradients* grads) {
  if (batch.empty()) return 0.0;
  if (grads) *grads = net.zero_gradients();
  const double n = static_cast<double>(batch.size());
  double loss = 0.0;
  std::vector<double> out_grad(static_cast<std::size_t>(net.output_size()), 0.0);
  for (const auto& s : batch) {
    if (s.action >= out_grad.size()) throw ShapeError("TD sample action out of range");
    const auto trace = net.forward_trace(s.state);
    const double err = trace.activations.back()[s.action] - s.target;
    loss += err * err / n;
    if (grads) {
      std::fill(out_grad.begin(), out_grad.end(), 0.0);
      out_grad[s.action] = 2.0 * err / n;
      net.backward(trace, out_grad, *grads);
    }
  }
  return loss;
}

// v <- momentum * v - lr * g;  w <- w + v
class MomentumSgd {
 public:
  MomentumSgd(double learning_rate, double momentum)
      : learning_rate_(learning_rate), momentum_(momentum) {}

  void step(Mlp& net, const MlpGradients& grads) {
    auto& layers = net.layers();
    if (velocity_.layers.empty()) velocity_ = net.zero_gradients();
    for (std::size_t li = 0; li < layers.size(); ++li) {
      auto update = [&](std::vector<double>& w, std::vector<double>& v, const std::vector<double>& g) {
        for (std::size_t i = 0; i < w.size(); ++i) {
          v[i] = momentum_ * v[i] - learning_rate_ * g[i];
          w[i] += v[i];
        }
      };
      update(layers[li].weights, velocity_.layers[li].weights, grads.layers[li].weights);
      update(layers[li].biases, velocity_.layers[li].biases, grads.layers[li].biases);
    }
  }

 private:
  double learning_rate_;
  double momentum_;
  MlpGradients velocity_;
};

}  // namespace semcom
