#pragma once

#include <span>
#include <vector>

#include "cbim/rng.hpp"
#include "cbim/types.hpp"

namespace cbim {

enum class OutputSquash {
  kLinear,    // critic head
  kLogistic,  // actor head, output in (0,1)
};

// Fully connected feedforward network with rectified-linear hidden units.
// Layer t maps dims[t] -> dims[t+1]; the final layer is linear or logistic.
struct Mlp {
  std::vector<Matrix> weights;  // weights[t] is dims[t+1] x dims[t]
  std::vector<Vector> biases;
  OutputSquash squash = OutputSquash::kLinear;

  int layer_count() const { return static_cast<int>(weights.size()); }
  int input_dim() const { return static_cast<int>(weights.front().cols()); }
  int output_dim() const { return static_cast<int>(weights.back().rows()); }
  long parameter_count() const;

  Vector flatten() const;
  void unflatten(const Vector& params);
  bool all_finite() const;

  // Uniform init in +-1/sqrt(fan_in), drawn in a fixed layer order.
  static Mlp random(std::span<const int> dims, OutputSquash squash, Rng& rng);
  static Mlp zeros(std::span<const int> dims, OutputSquash squash);
};

// Intermediate activations kept for backprop. act[0] is the input,
// act[t+1] the output of layer t; pre[t] the pre-activation of layer t.
struct ForwardTrace {
  std::vector<Vector> pre;
  std::vector<Vector> act;
};

Vector forward(const Mlp& net, const Vector& input);
Vector forward(const Mlp& net, const Vector& input, ForwardTrace& trace);

struct MlpGrads {
  std::vector<Matrix> d_weights;
  std::vector<Vector> d_biases;

  explicit MlpGrads(const Mlp& net);
  void set_zero();
  Vector flatten() const;
};

// Backpropagates the output cotangent through the trace, accumulating
// parameter gradients into `grads` and returning the input gradient.
Vector backward(const Mlp& net, const ForwardTrace& trace, const Vector& d_output,
                MlpGrads& grads);

// Gradient of the scalar output with respect to the input; only valid for
// single-output networks.
Vector input_gradient(const Mlp& net, const Vector& input);

// Smallest |pre-activation| over the hidden layers for this input; used by
// gradient-check drivers to stay clear of the rectifier kink.
Scalar min_hidden_preactivation(const Mlp& net, const Vector& input);

// Adaptive-moment gradient descent over a flat parameter vector.
struct Adam {
  Scalar learning_rate = 0.01;
  Scalar beta1 = 0.9;
  Scalar beta2 = 0.999;
  Scalar epsilon = 1e-8;
  Vector m, v;
  long step_count = 0;

  explicit Adam(long parameter_count, Scalar lr = 0.01)
      : learning_rate(lr), m(Vector::Zero(parameter_count)), v(Vector::Zero(parameter_count)) {}

  void step(Vector& params, const Vector& grad);
};

}  // namespace cbim
