#include "errsup/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace errsup {

void zero_grads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->zero_grad();
}

double global_grad_norm(std::span<Parameter* const> params) {
  double sq = 0.0;
  for (const Parameter* p : params) {
    for (double g : p->grad.data) sq += g * g;
  }
  return std::sqrt(sq);
}

double clip_gradients(std::span<Parameter* const> params, double max_norm) {
  if (max_norm <= 0.0) throw std::invalid_argument("clip_gradients: max_norm must be positive");
  const double norm = global_grad_norm(params);
  if (norm > max_norm) {
    const double f = max_norm / norm;
    for (Parameter* p : params) {
      for (double& g : p->grad.data) g *= f;
    }
  }
  return norm;
}

const char* to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kSgdMomentum: return "sgd_momentum";
    case OptimizerKind::kAdam: return "adam";
    case OptimizerKind::kAdamW: return "adamw";
  }
  return "unknown";
}

OptimizerKind optimizer_kind_from_string(const std::string& name) {
  if (name == "sgd_momentum") return OptimizerKind::kSgdMomentum;
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "adamw") return OptimizerKind::kAdamW;
  throw std::invalid_argument("unknown optimizer kind: " + name);
}

Optimizer::Optimizer(OptimizerKind kind, std::vector<Parameter*> params, OptimizerOptions opts)
    : kind_(kind), params_(std::move(params)), opts_(opts) {
  if (opts_.lr <= 0.0) throw std::invalid_argument("optimizer lr must be positive");
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const Parameter* p : params_) {
    m_.push_back(Tensor::zeros(p->value.shape));
    if (kind_ != OptimizerKind::kSgdMomentum) v_.push_back(Tensor::zeros(p->value.shape));
  }
}

void Optimizer::step() {
  ++t_;
  const double lr = opts_.lr;
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Parameter& p = *params_[k];
    switch (kind_) {
      case OptimizerKind::kSgdMomentum: {
        for (long i = 0; i < p.value.numel(); ++i) {
          double g = p.grad[i];
          if (opts_.weight_decay != 0.0) g += opts_.weight_decay * p.value[i];
          m_[k][i] = opts_.momentum * m_[k][i] + g;
          p.value[i] -= lr * m_[k][i];
        }
        break;
      }
      case OptimizerKind::kAdam:
      case OptimizerKind::kAdamW: {
        const double bc1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
        for (long i = 0; i < p.value.numel(); ++i) {
          double g = p.grad[i];
          if (kind_ == OptimizerKind::kAdam && opts_.weight_decay != 0.0) {
            g += opts_.weight_decay * p.value[i];
          }
          m_[k][i] = opts_.beta1 * m_[k][i] + (1.0 - opts_.beta1) * g;
          v_[k][i] = opts_.beta2 * v_[k][i] + (1.0 - opts_.beta2) * g * g;
          const double mhat = m_[k][i] / bc1;
          const double vhat = v_[k][i] / bc2;
          double update = mhat / (std::sqrt(vhat) + opts_.eps);
          if (kind_ == OptimizerKind::kAdamW) update += opts_.weight_decay * p.value[i];
          p.value[i] -= lr * update;
        }
        break;
      }
    }
  }
}

std::map<std::string, Tensor> Optimizer::state_tensors() const {
  std::map<std::string, Tensor> out;
  out.emplace("__opt.t", Tensor::scalar(static_cast<double>(t_)));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    out.emplace("__opt.m." + params_[k]->name, m_[k]);
    if (kind_ != OptimizerKind::kSgdMomentum) out.emplace("__opt.v." + params_[k]->name, v_[k]);
  }
  return out;
}

void Optimizer::load_state_tensors(const std::map<std::string, Tensor>& state) {
  auto it = state.find("__opt.t");
  if (it == state.end()) throw std::runtime_error("optimizer state missing step counter");
  t_ = static_cast<long>(it->second.scalar_value());
  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto im = state.find("__opt.m." + params_[k]->name);
    if (im == state.end() || !im->second.same_shape(m_[k])) {
      throw std::runtime_error("optimizer state mismatch for " + params_[k]->name);
    }
    m_[k] = im->second;
    if (kind_ != OptimizerKind::kSgdMomentum) {
      auto iv = state.find("__opt.v." + params_[k]->name);
      if (iv == state.end() || !iv->second.same_shape(v_[k])) {
        throw std::runtime_error("optimizer state mismatch for " + params_[k]->name);
      }
      v_[k] = iv->second;
    }
  }
}

}  // namespace errsup
