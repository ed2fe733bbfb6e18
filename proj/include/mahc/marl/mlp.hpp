#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mahc/rng.hpp"

namespace mahc::marl {

enum class Activation { Linear, Relu, Sigmoid };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
  Activation activation = Activation::Linear;
};

/// Parameter-shaped gradient (or moment) buffers.
struct MlpGradient {
  std::vector<Eigen::MatrixXd> weight;
  std::vector<Eigen::VectorXd> bias;

  void set_zero();
  MlpGradient& operator+=(const MlpGradient& other);
  MlpGradient& operator*=(double s);
};

/// Intermediate values kept by a forward pass for backpropagation.
struct ForwardTape {
  std::vector<Eigen::MatrixXd> inputs;   // input to each layer
  std::vector<Eigen::MatrixXd> outputs;  // post-activation output of each layer
};

/// Fully-connected network evaluated column-wise: each column is one sample.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<DenseLayer> layers);
  /// Weights and biases uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  Mlp(const std::vector<Eigen::Index>& dims, Activation hidden, Activation output, RngStream& rng);

  Eigen::Index input_dim() const { return layers_.front().weight.cols(); }
  Eigen::Index output_dim() const { return layers_.back().weight.rows(); }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, ForwardTape& tape) const;

  /// Backpropagates dL/d(output) through a recorded pass. Accumulates
  /// parameter gradients into `grads` when non-null and returns dL/d(input).
  Eigen::MatrixXd backward(const ForwardTape& tape, const Eigen::MatrixXd& grad_output, MlpGradient* grads) const;

  MlpGradient zero_gradient() const;

  Eigen::Index parameter_count() const;
  Eigen::VectorXd flatten() const;
  void unflatten(const Eigen::VectorXd& params);
  static Eigen::VectorXd flatten(const MlpGradient& g);

 private:
  std::vector<DenseLayer> layers_;
};

/// Four dense layers: in -> hidden -> hidden -> hidden -> 1, ReLU hidden units.
Mlp make_actor(Eigen::Index state_dim, Eigen::Index hidden, RngStream& rng);
Mlp make_critic(Eigen::Index input_dim, Eigen::Index hidden, RngStream& rng);

enum class OptimizerKind { Adam, Sgd };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Descent step on a network given the gradient of a loss to minimize.
class Optimizer {
 public:
  Optimizer() = default;
  Optimizer(const Mlp& net, OptimizerConfig cfg);

  void step(Mlp& net, const MlpGradient& grad);
  const OptimizerConfig& config() const { return cfg_; }

 private:
  OptimizerConfig cfg_;
  MlpGradient m_;
  MlpGradient v_;
  long step_count_ = 0;
};

/// target <- tau * target + (1 - tau) * online, element-wise.
void polyak_update(Mlp& target, const Mlp& online, double tau);

}  // namespace mahc::marl
