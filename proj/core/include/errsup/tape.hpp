#ifndef ERRSUP_TAPE_HPP
#define ERRSUP_TAPE_HPP

#include <array>
#include <span>
#include <vector>

#include "errsup/tensor.hpp"

namespace errsup {

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string name_, Tensor value_)
      : name(std::move(name_)), value(std::move(value_)), grad(Tensor::zeros(value.shape)) {}

  void zero_grad() { grad.fill(0.0); }
};

// Reverse-mode tape. Forward ops append nodes; backward() walks the tape in
// reverse and accumulates dLoss/dParam into each Parameter's grad slot. With
// recording off the same ops run forward-only (inference mode).
class Tape {
 public:
  using Id = std::int32_t;

  explicit Tape(bool recording = true) : recording_(recording) {}

  bool recording() const { return recording_; }
  std::size_t size() const { return nodes_.size(); }

  Id constant(Tensor value);
  Id param(Parameter& p);  // one node per Parameter per tape

  Id matmul(Id a, Id b);   // (m,k)x(k,n)->(m,n) or (m,k)x(k)->(m)
  Id add(Id a, Id b);
  Id sub(Id a, Id b);
  Id mul(Id a, Id b);      // elementwise
  Id scale(Id a, double s);
  Id tanh_op(Id a);
  Id sigmoid(Id a);
  Id relu(Id a);
  Id softplus(Id a);       // log(1 + exp(x)), stable
  Id softmax(Id a);        // rank-1
  Id log_softmax(Id a);    // rank-1
  Id pick(Id v, int index);              // vector -> scalar
  Id slice(Id v, int start, int len);    // vector -> vector
  Id concat(std::span<const Id> parts);  // vectors -> vector
  Id sum(Id a);            // all elements -> scalar
  Id mean(Id a);
  Id add_n(std::span<const Id> terms);   // same-shaped n-ary sum
  Id dot(Id a, Id b);      // vectors -> scalar
  Id max_over_time(std::span<const Id> steps);          // per-dim max of vectors
  Id weighted_sum(Id weights, std::span<const Id> vecs);  // sum_i w[i] * v_i
  Id lookup_row(Id table, int row);      // matrix -> vector copy of a row

  const Tensor& value(Id id) const { return nodes_[id].value; }
  // Gradient w.r.t. a node, valid after backward().
  const Tensor& grad(Id id) const { return grads_[id]; }

  void backward(Id loss);

 private:
  enum class Op : std::uint8_t {
    kConst, kParam, kMatMul, kAdd, kSub, kMul, kScale, kTanh, kSigmoid, kRelu,
    kSoftplus, kSoftmax, kLogSoftmax, kPick, kSlice, kConcat, kSum, kMean,
    kAddN, kDot, kMaxOverTime, kWeightedSum, kLookupRow,
  };

  struct Node {
    Op op;
    std::array<Id, 2> in{-1, -1};
    int aux0 = 0, aux1 = 0;
    double factor = 0.0;
    int multi_begin = -1, multi_count = 0;
    Parameter* parameter = nullptr;
    std::vector<int> winners;  // max_over_time argmax routing
    Tensor value;
  };

  Id push(Node node) {
    nodes_.push_back(std::move(node));
    return static_cast<Id>(nodes_.size() - 1);
  }
  const Tensor& val(Id id) const { return nodes_[id].value; }

  bool recording_;
  std::vector<Node> nodes_;
  std::vector<Id> multi_inputs_;
  std::vector<Tensor> grads_;
  std::vector<std::pair<Parameter*, Id>> param_nodes_;
};

}  // namespace errsup

#endif
