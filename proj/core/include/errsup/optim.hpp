#ifndef ERRSUP_OPTIM_HPP
#define ERRSUP_OPTIM_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "errsup/tape.hpp"

namespace errsup {

void zero_grads(std::span<Parameter* const> params);
double global_grad_norm(std::span<Parameter* const> params);

// Global-norm clipping: if ||g||_2 > max_norm, every gradient is scaled by
// max_norm / ||g||_2. Returns the pre-clip norm.
double clip_gradients(std::span<Parameter* const> params, double max_norm = 1.0);

enum class OptimizerKind { kSgdMomentum, kAdam, kAdamW };

const char* to_string(OptimizerKind kind);
OptimizerKind optimizer_kind_from_string(const std::string& name);

struct OptimizerOptions {
  double lr = 1e-3;
  double weight_decay = 0.0;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// kSgdMomentum and kAdam apply weight decay through the gradient; kAdamW
// decouples it and applies it to the value directly.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, std::vector<Parameter*> params, OptimizerOptions opts);

  void step();
  void zero_grad() { zero_grads(params_); }

  double lr() const { return opts_.lr; }
  void set_lr(double lr) { opts_.lr = lr; }
  long step_count() const { return t_; }
  OptimizerKind kind() const { return kind_; }
  const OptimizerOptions& options() const { return opts_; }

  // Moment buffers and the step counter, keyed for checkpointing.
  std::map<std::string, Tensor> state_tensors() const;
  void load_state_tensors(const std::map<std::string, Tensor>& state);

 private:
  OptimizerKind kind_;
  std::vector<Parameter*> params_;
  OptimizerOptions opts_;
  long t_ = 0;
  std::vector<Tensor> m_;  // momentum buffer / first moment
  std::vector<Tensor> v_;  // second moment (Adam variants)
};

}  // namespace errsup

#endif
