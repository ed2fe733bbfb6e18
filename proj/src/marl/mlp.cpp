#include "mahc/marl/mlp.hpp"

#include <cmath>

#include "mahc/errors.hpp"

namespace mahc::marl {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::Linear: return "linear";
    case Activation::Relu: return "relu";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "linear";
}

Activation activation_from_string(const std::string& name) {
  if (name == "linear") return Activation::Linear;
  if (name == "relu") return Activation::Relu;
  if (name == "sigmoid") return Activation::Sigmoid;
  throw InvalidInput("unknown activation '" + name + "'");
}

void MlpGradient::set_zero() {
  for (auto& w : weight) w.setZero();
  for (auto& b : bias) b.setZero();
}

MlpGradient& MlpGradient::operator+=(const MlpGradient& other) {
  for (std::size_t l = 0; l < weight.size(); ++l) {
    weight[l] += other.weight[l];
    bias[l] += other.bias[l];
  }
  return *this;
}

MlpGradient& MlpGradient::operator*=(double s) {
  for (std::size_t l = 0; l < weight.size(); ++l) {
    weight[l] *= s;
    bias[l] *= s;
  }
  return *this;
}

namespace {

Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation a) {
  switch (a) {
    case Activation::Linear: return z;
    case Activation::Relu: return z.cwiseMax(0.0);
    case Activation::Sigmoid: return (1.0 + (-z.array()).exp()).inverse().matrix();
  }
  return z;
}

// Derivative expressed through the activation output y.
Eigen::MatrixXd activation_grad(const Eigen::MatrixXd& y, const Eigen::MatrixXd& upstream, Activation a) {
  switch (a) {
    case Activation::Linear: return upstream;
    case Activation::Relu: return (y.array() > 0.0).select(upstream, 0.0);
    case Activation::Sigmoid: return (upstream.array() * y.array() * (1.0 - y.array())).matrix();
  }
  return upstream;
}

}  // namespace

Mlp::Mlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw InvalidInput("Mlp: no layers");
  for (std::size_t l = 1; l < layers_.size(); ++l) {
    if (layers_[l].weight.cols() != layers_[l - 1].weight.rows()) throw InvalidInput("Mlp: layer shapes do not chain");
  }
  for (const auto& layer : layers_) {
    if (layer.bias.size() != layer.weight.rows()) throw InvalidInput("Mlp: bias length mismatch");
  }
}

Mlp::Mlp(const std::vector<Eigen::Index>& dims, Activation hidden, Activation output, RngStream& rng) {
  if (dims.size() < 2) throw InvalidInput("Mlp: need at least input and output dimensions");
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    DenseLayer layer;
    const double bound = 1.0 / std::sqrt(static_cast<double>(dims[l]));
    layer.weight.resize(dims[l + 1], dims[l]);
    layer.bias.resize(dims[l + 1]);
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = sample_uniform(-bound, bound, rng);
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = sample_uniform(-bound, bound, rng);
    layer.activation = l + 2 == dims.size() ? output : hidden;
    layers_.push_back(std::move(layer));
  }
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x) const {
  if (x.rows() != input_dim()) {
    throw InvalidInput("Mlp::forward: input has " + std::to_string(x.rows()) + " rows, expected " +
                       std::to_string(input_dim()));
  }
  Eigen::MatrixXd h = x;
  for (const auto& layer : layers_) {
    Eigen::MatrixXd z = layer.weight * h;
    z.colwise() += layer.bias;
    h = activate(z, layer.activation);
  }
  return h;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, ForwardTape& tape) const {
  if (x.rows() != input_dim()) {
    throw InvalidInput("Mlp::forward: input has " + std::to_string(x.rows()) + " rows, expected " +
                       std::to_string(input_dim()));
  }
  tape.inputs.clear();
  tape.outputs.clear();
  Eigen::MatrixXd h = x;
  for (const auto& layer : layers_) {
    tape.inputs.push_back(h);
    Eigen::MatrixXd z = layer.weight * h;
    z.colwise() += layer.bias;
    h = activate(z, layer.activation);
    tape.outputs.push_back(h);
  }
  return h;
}

Eigen::MatrixXd Mlp::backward(const ForwardTape& tape, const Eigen::MatrixXd& grad_output, MlpGradient* grads) const {
  Eigen::MatrixXd upstream = grad_output;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Eigen::MatrixXd dz = activation_grad(tape.outputs[l], upstream, layers_[l].activation);
    if (grads) {
      grads->weight[l].noalias() += dz * tape.inputs[l].transpose();
      grads->bias[l] += dz.rowwise().sum();
    }
    upstream = layers_[l].weight.transpose() * dz;
  }
  return upstream;
}

MlpGradient Mlp::zero_gradient() const {
  MlpGradient g;
  for (const auto& layer : layers_) {
    g.weight.push_back(Eigen::MatrixXd::Zero(layer.weight.rows(), layer.weight.cols()));
    g.bias.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
  }
  return g;
}

Eigen::Index Mlp::parameter_count() const {
  Eigen::Index n = 0;
  for (const auto& layer : layers_) n += layer.weight.size() + layer.bias.size();
  return n;
}

Eigen::VectorXd Mlp::flatten() const {
  Eigen::VectorXd out(parameter_count());
  Eigen::Index k = 0;
  for (const auto& layer : layers_) {
    out.segment(k, layer.weight.size()) = layer.weight.reshaped();
    k += layer.weight.size();
    out.segment(k, layer.bias.size()) = layer.bias;
    k += layer.bias.size();
  }
  return out;
}

void Mlp::unflatten(const Eigen::VectorXd& params) {
  if (params.size() != parameter_count()) throw InvalidInput("Mlp::unflatten: parameter count mismatch");
  Eigen::Index k = 0;
  for (auto& layer : layers_) {
    layer.weight.reshaped() = params.segment(k, layer.weight.size());
    k += layer.weight.size();
    layer.bias = params.segment(k, layer.bias.size());
    k += layer.bias.size();
  }
}

Eigen::VectorXd Mlp::flatten(const MlpGradient& g) {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < g.weight.size(); ++l) n += g.weight[l].size() + g.bias[l].size();
  Eigen::VectorXd out(n);
  Eigen::Index k = 0;
  for (std::size_t l = 0; l < g.weight.size(); ++l) {
    out.segment(k, g.weight[l].size()) = g.weight[l].reshaped();
    k += g.weight[l].size();
    out.segment(k, g.bias[l].size()) = g.bias[l];
    k += g.bias[l].size();
  }
  return out;
}

Mlp make_actor(Eigen::Index state_dim, Eigen::Index hidden, RngStream& rng) {
  return Mlp({state_dim, hidden, hidden, hidden, 1}, Activation::Relu, Activation::Sigmoid, rng);
}

Mlp make_critic(Eigen::Index input_dim, Eigen::Index hidden, RngStream& rng) {
  return Mlp({input_dim, hidden, hidden, hidden, 1}, Activation::Relu, Activation::Linear, rng);
}

Optimizer::Optimizer(const Mlp& net, OptimizerConfig cfg) : cfg_(cfg), m_(net.zero_gradient()), v_(net.zero_gradient()) {}

void Optimizer::step(Mlp& net, const MlpGradient& grad) {
  auto& layers = net.layers();
  if (cfg_.kind == OptimizerKind::Sgd) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
      layers[l].weight -= cfg_.learning_rate * grad.weight[l];
      layers[l].bias -= cfg_.learning_rate * grad.bias[l];
    }
    return;
  }
  ++step_count_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_count_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_count_));
  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g;
    v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g.cwiseProduct(g);
    param.array() -= cfg_.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg_.epsilon);
  };
  for (std::size_t l = 0; l < layers.size(); ++l) {
    update(layers[l].weight, m_.weight[l], v_.weight[l], grad.weight[l]);
    update(layers[l].bias, m_.bias[l], v_.bias[l], grad.bias[l]);
  }
}

void polyak_update(Mlp& target, const Mlp& online, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidInput("polyak_update: tau must lie in (0, 1)");
  auto& t = target.layers();
  const auto& o = online.layers();
  if (t.size() != o.size()) throw InvalidInput("polyak_update: network shapes differ");
  for (std::size_t l = 0; l < t.size(); ++l) {
    t[l].weight = tau * t[l].weight + (1.0 - tau) * o[l].weight;
    t[l].bias = tau * t[l].bias + (1.0 - tau) * o[l].bias;
  }
}

}  // namespace mahc::marl
