#include "cbim/net.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cbim {

namespace {

Scalar logistic(Scalar z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_dims(std::span<const int> dims) {
  if (dims.size() < 2) throw std::invalid_argument("Mlp: need at least input and output dims");
  for (const int d : dims) {
    if (d <= 0) throw std::invalid_argument("Mlp: dims must be positive");
  }
}

}  // namespace

long Mlp::parameter_count() const {
  long total = 0;
  for (int t = 0; t < layer_count(); ++t) total += weights[t].size() + biases[t].size();
  return total;
}

Vector Mlp::flatten() const {
  Vector flat(parameter_count());
  long at = 0;
  for (int t = 0; t < layer_count(); ++t) {
    flat.segment(at, weights[t].size()) = Eigen::Map<const Vector>(weights[t].data(), weights[t].size());
    at += weights[t].size();
    flat.segment(at, biases[t].size()) = biases[t];
    at += biases[t].size();
  }
  return flat;
}

void Mlp::unflatten(const Vector& params) {
  if (params.size() != parameter_count()) throw std::invalid_argument("Mlp: parameter size mismatch");
  long at = 0;
  for (int t = 0; t < layer_count(); ++t) {
    Eigen::Map<Vector>(weights[t].data(), weights[t].size()) = params.segment(at, weights[t].size());
    at += weights[t].size();
    biases[t] = params.segment(at, biases[t].size());
    at += biases[t].size();
  }
}

bool Mlp::all_finite() const {
  for (int t = 0; t < layer_count(); ++t) {
    if (!weights[t].allFinite() || !biases[t].allFinite()) return false;
  }
  return true;
}

Mlp Mlp::random(std::span<const int> dims, OutputSquash squash, Rng& rng) {
  check_dims(dims);
  Mlp net;
  net.squash = squash;
  for (std::size_t t = 0; t + 1 < dims.size(); ++t) {
    const int rows = dims[t + 1], cols = dims[t];
    const Scalar bound = 1.0 / std::sqrt(static_cast<Scalar>(cols));
    Matrix w(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) w(r, c) = rng.uniform(-bound, bound);
    }
    Vector b(rows);
    for (int r = 0; r < rows; ++r) b[r] = rng.uniform(-bound, bound);
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

Mlp Mlp::zeros(std::span<const int> dims, OutputSquash squash) {
  check_dims(dims);
  Mlp net;
  net.squash = squash;
  for (std::size_t t = 0; t + 1 < dims.size(); ++t) {
    net.weights.push_back(Matrix::Zero(dims[t + 1], dims[t]));
    net.biases.push_back(Vector::Zero(dims[t + 1]));
  }
  return net;
}

Vector forward(const Mlp& net, const Vector& input) {
  ForwardTrace trace;
  return forward(net, input, trace);
}

Vector forward(const Mlp& net, const Vector& input, ForwardTrace& trace) {
  if (input.size() != net.input_dim()) throw std::invalid_argument("forward: input size mismatch");
  const int layers = net.layer_count();
  trace.pre.resize(layers);
  trace.act.resize(layers + 1);
  trace.act[0] = input;
  for (int t = 0; t < layers; ++t) {
    trace.pre[t] = net.weights[t] * trace.act[t] + net.biases[t];
    if (t + 1 < layers) {
      trace.act[t + 1] = trace.pre[t].cwiseMax(0.0);
    } else if (net.squash == OutputSquash::kLogistic) {
      trace.act[t + 1] = trace.pre[t].unaryExpr([](Scalar z) { return logistic(z); });
    } else {
      trace.act[t + 1] = trace.pre[t];
    }
  }
  return trace.act[layers];
}

MlpGrads::MlpGrads(const Mlp& net) {
  for (int t = 0; t < net.layer_count(); ++t) {
    d_weights.push_back(Matrix::Zero(net.weights[t].rows(), net.weights[t].cols()));
    d_biases.push_back(Vector::Zero(net.biases[t].size()));
  }
}

void MlpGrads::set_zero() {
  for (auto& w : d_weights) w.setZero();
  for (auto& b : d_biases) b.setZero();
}

Vector MlpGrads::flatten() const {
  long total = 0;
  for (std::size_t t = 0; t < d_weights.size(); ++t) {
    total += d_weights[t].size() + d_biases[t].size();
  }
  Vector flat(total);
  long at = 0;
  for (std::size_t t = 0; t < d_weights.size(); ++t) {
    flat.segment(at, d_weights[t].size()) =
        Eigen::Map<const Vector>(d_weights[t].data(), d_weights[t].size());
    at += d_weights[t].size();
    flat.segment(at, d_biases[t].size()) = d_biases[t];
    at += d_biases[t].size();
  }
  return flat;
}

Vector backward(const Mlp& net, const ForwardTrace& trace, const Vector& d_output,
                MlpGrads& grads) {
  const int layers = net.layer_count();
  Vector dz;
  if (net.squash == OutputSquash::kLogistic) {
    const Vector& y = trace.act[layers];
    dz = d_output.cwiseProduct(y.cwiseProduct(Vector::Ones(y.size()) - y));
  } else {
    dz = d_output;
  }
  for (int t = layers - 1; t >= 0; --t) {
    grads.d_weights[t].noalias() += dz * trace.act[t].transpose();
    grads.d_biases[t] += dz;
    Vector da = net.weights[t].transpose() * dz;
    if (t == 0) return da;
    // rectifier derivative: 1 where the pre-activation was positive
    dz = da.cwiseProduct(
        trace.pre[t - 1].unaryExpr([](Scalar z) { return z > 0.0 ? Scalar{1} : Scalar{0}; }));
  }
  return dz;  // unreachable for layer_count >= 1
}

Vector input_gradient(const Mlp& net, const Vector& input) {
  if (net.output_dim() != 1) throw std::invalid_argument("input_gradient: scalar output required");
  ForwardTrace trace;
  forward(net, input, trace);
  MlpGrads grads(net);
  return backward(net, trace, Vector::Ones(1), grads);
}

Scalar min_hidden_preactivation(const Mlp& net, const Vector& input) {
  ForwardTrace trace;
  forward(net, input, trace);
  Scalar min_abs = std::numeric_limits<Scalar>::infinity();
  for (int t = 0; t + 1 < net.layer_count(); ++t) {
    min_abs = std::min(min_abs, trace.pre[t].cwiseAbs().minCoeff());
  }
  return min_abs;
}

void Adam::step(Vector& params, const Vector& grad) {
  if (params.size() != m.size() || grad.size() != m.size()) {
    throw std::invalid_argument("Adam: size mismatch");
  }
  ++step_count;
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
  const Scalar bias1 = 1.0 - std::pow(beta1, static_cast<Scalar>(step_count));
  const Scalar bias2 = 1.0 - std::pow(beta2, static_cast<Scalar>(step_count));
  const Vector m_hat = m / bias1;
  const Vector v_hat = v / bias2;
  params -= learning_rate *
            m_hat.cwiseQuotient(v_hat.cwiseSqrt() + Vector::Constant(m.size(), epsilon));
}

}  // namespace cbim
