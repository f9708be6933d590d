#include "errsup/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace errsup {

namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " +
                                b.shape_str());
  }
}

void check_rank1(const Tensor& a, const char* op) {
  if (a.rank() != 1) throw std::invalid_argument(std::string(op) + ": expects a vector");
}

}  // namespace

Tape::Id Tape::constant(Tensor value) {
  Node n;
  n.op = Op::kConst;
  n.value = std::move(value);
  return push(std::move(n));
}

Tape::Id Tape::param(Parameter& p) {
  for (const auto& [ptr, id] : param_nodes_) {
    if (ptr == &p) return id;
  }
  Node n;
  n.op = Op::kParam;
  n.parameter = &p;
  n.value = p.value;
  const Id id = push(std::move(n));
  param_nodes_.emplace_back(&p, id);
  return id;
}

Tape::Id Tape::matmul(Id a, Id b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  if (A.rank() != 2) throw std::invalid_argument("matmul: left operand must be a matrix");
  const int m = A.rows(), k = A.cols();
  Node n;
  n.op = Op::kMatMul;
  n.in = {a, b};
  if (B.rank() == 1) {
    if (B.dim(0) != k) throw std::invalid_argument("matmul: inner dimension mismatch");
    Tensor out = Tensor::zeros({m});
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      const double* row = &A.data[static_cast<std::size_t>(i) * k];
      for (int l = 0; l < k; ++l) acc += row[l] * B.data[l];
      out[i] = acc;
    }
    n.value = std::move(out);
  } else if (B.rank() == 2) {
    if (B.rows() != k) throw std::invalid_argument("matmul: inner dimension mismatch");
    const int c = B.cols();
    Tensor out = Tensor::zeros({m, c});
    for (int i = 0; i < m; ++i) {
      for (int l = 0; l < k; ++l) {
        const double av = A.at(i, l);
        if (av == 0.0) continue;
        for (int j = 0; j < c; ++j) out.at(i, j) += av * B.at(l, j);
      }
    }
    n.value = std::move(out);
  } else {
    throw std::invalid_argument("matmul: right operand must be a vector or matrix");
  }
  return push(std::move(n));
}

Tape::Id Tape::add(Id a, Id b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  check_same_shape(A, B, "add");
  Node n;
  n.op = Op::kAdd;
  n.in = {a, b};
  n.value = A;
  for (long i = 0; i < B.numel(); ++i) n.value[i] += B[i];
  return push(std::move(n));
}

Tape::Id Tape::sub(Id a, Id b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  check_same_shape(A, B, "sub");
  Node n;
  n.op = Op::kSub;
  n.in = {a, b};
  n.value = A;
  for (long i = 0; i < B.numel(); ++i) n.value[i] -= B[i];
  return push(std::move(n));
}

Tape::Id Tape::mul(Id a, Id b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  check_same_shape(A, B, "mul");
  Node n;
  n.op = Op::kMul;
  n.in = {a, b};
  n.value = A;
  for (long i = 0; i < B.numel(); ++i) n.value[i] *= B[i];
  return push(std::move(n));
}

Tape::Id Tape::scale(Id a, double s) {
  Node n;
  n.op = Op::kScale;
  n.in = {a, -1};
  n.factor = s;
  n.value = val(a);
  for (long i = 0; i < n.value.numel(); ++i) n.value[i] *= s;
  return push(std::move(n));
}

Tape::Id Tape::tanh_op(Id a) {
  Node n;
  n.op = Op::kTanh;
  n.in = {a, -1};
  n.value = val(a);
  for (auto& v : n.value.data) v = std::tanh(v);
  return push(std::move(n));
}

Tape::Id Tape::sigmoid(Id a) {
  Node n;
  n.op = Op::kSigmoid;
  n.in = {a, -1};
  n.value = val(a);
  for (auto& v : n.value.data) {
    v = v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
  }
  return push(std::move(n));
}

Tape::Id Tape::relu(Id a) {
  Node n;
  n.op = Op::kRelu;
  n.in = {a, -1};
  n.value = val(a);
  for (auto& v : n.value.data) v = std::max(0.0, v);
  return push(std::move(n));
}

Tape::Id Tape::softplus(Id a) {
  Node n;
  n.op = Op::kSoftplus;
  n.in = {a, -1};
  n.value = val(a);
  for (auto& v : n.value.data) {
    v = v > 30.0 ? v : std::log1p(std::exp(std::min(v, 30.0)));
  }
  return push(std::move(n));
}

Tape::Id Tape::softmax(Id a) {
  check_rank1(val(a), "softmax");
  Node n;
  n.op = Op::kSoftmax;
  n.in = {a, -1};
  n.value = val(a);
  double mx = n.value[0];
  for (double v : n.value.data) mx = std::max(mx, v);
  double z = 0.0;
  for (auto& v : n.value.data) {
    v = std::exp(v - mx);
    z += v;
  }
  for (auto& v : n.value.data) v /= z;
  return push(std::move(n));
}

Tape::Id Tape::log_softmax(Id a) {
  check_rank1(val(a), "log_softmax");
  Node n;
  n.op = Op::kLogSoftmax;
  n.in = {a, -1};
  n.value = val(a);
  double mx = n.value[0];
  for (double v : n.value.data) mx = std::max(mx, v);
  double z = 0.0;
  for (double v : n.value.data) z += std::exp(v - mx);
  const double logz = mx + std::log(z);
  for (auto& v : n.value.data) v -= logz;
  return push(std::move(n));
}

Tape::Id Tape::pick(Id v, int index) {
  const Tensor& V = val(v);
  check_rank1(V, "pick");
  if (index < 0 || index >= V.dim(0)) throw std::out_of_range("pick: index out of range");
  Node n;
  n.op = Op::kPick;
  n.in = {v, -1};
  n.aux0 = index;
  n.value = Tensor::scalar(V[index]);
  return push(std::move(n));
}

Tape::Id Tape::slice(Id v, int start, int len) {
  const Tensor& V = val(v);
  check_rank1(V, "slice");
  if (start < 0 || len < 1 || start + len > V.dim(0)) {
    throw std::out_of_range("slice: range out of bounds");
  }
  Node n;
  n.op = Op::kSlice;
  n.in = {v, -1};
  n.aux0 = start;
  n.aux1 = len;
  n.value = Tensor({len}, std::vector<double>(V.data.begin() + start,
                                              V.data.begin() + start + len));
  return push(std::move(n));
}

Tape::Id Tape::concat(std::span<const Id> parts) {
  if (parts.empty()) throw std::invalid_argument("concat: no inputs");
  Node n;
  n.op = Op::kConcat;
  n.multi_begin = static_cast<int>(multi_inputs_.size());
  n.multi_count = static_cast<int>(parts.size());
  std::vector<double> data;
  for (Id p : parts) {
    check_rank1(val(p), "concat");
    multi_inputs_.push_back(p);
    data.insert(data.end(), val(p).data.begin(), val(p).data.end());
  }
  n.value = Tensor::vec(std::move(data));
  return push(std::move(n));
}

Tape::Id Tape::sum(Id a) {
  Node n;
  n.op = Op::kSum;
  n.in = {a, -1};
  double acc = 0.0;
  for (double v : val(a).data) acc += v;
  n.value = Tensor::scalar(acc);
  return push(std::move(n));
}

Tape::Id Tape::mean(Id a) {
  Node n;
  n.op = Op::kMean;
  n.in = {a, -1};
  double acc = 0.0;
  for (double v : val(a).data) acc += v;
  n.value = Tensor::scalar(acc / static_cast<double>(val(a).numel()));
  return push(std::move(n));
}

Tape::Id Tape::add_n(std::span<const Id> terms) {
  if (terms.empty()) throw std::invalid_argument("add_n: no inputs");
  Node n;
  n.op = Op::kAddN;
  n.multi_begin = static_cast<int>(multi_inputs_.size());
  n.multi_count = static_cast<int>(terms.size());
  Tensor out = val(terms[0]);
  multi_inputs_.push_back(terms[0]);
  for (std::size_t i = 1; i < terms.size(); ++i) {
    check_same_shape(out, val(terms[i]), "add_n");
    for (long j = 0; j < out.numel(); ++j) out[j] += val(terms[i])[j];
    multi_inputs_.push_back(terms[i]);
  }
  n.value = std::move(out);
  return push(std::move(n));
}

Tape::Id Tape::dot(Id a, Id b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  check_rank1(A, "dot");
  check_same_shape(A, B, "dot");
  Node n;
  n.op = Op::kDot;
  n.in = {a, b};
  double acc = 0.0;
  for (long i = 0; i < A.numel(); ++i) acc += A[i] * B[i];
  n.value = Tensor::scalar(acc);
  return push(std::move(n));
}

Tape::Id Tape::max_over_time(std::span<const Id> steps) {
  if (steps.empty()) throw std::invalid_argument("max_over_time: no inputs");
  const int d = val(steps[0]).dim(0);
  Node n;
  n.op = Op::kMaxOverTime;
  n.multi_begin = static_cast<int>(multi_inputs_.size());
  n.multi_count = static_cast<int>(steps.size());
  Tensor out = val(steps[0]);
  n.winners.assign(d, 0);
  multi_inputs_.push_back(steps[0]);
  for (std::size_t t = 1; t < steps.size(); ++t) {
    const Tensor& v = val(steps[t]);
    check_same_shape(out, v, "max_over_time");
    for (int j = 0; j < d; ++j) {
      if (v[j] > out[j]) {
        out[j] = v[j];
        n.winners[j] = static_cast<int>(t);
      }
    }
    multi_inputs_.push_back(steps[t]);
  }
  n.value = std::move(out);
  return push(std::move(n));
}

Tape::Id Tape::weighted_sum(Id weights, std::span<const Id> vecs) {
  const Tensor& W = val(weights);
  check_rank1(W, "weighted_sum");
  if (W.dim(0) != static_cast<int>(vecs.size())) {
    throw std::invalid_argument("weighted_sum: weight count must match vector count");
  }
  Node n;
  n.op = Op::kWeightedSum;
  n.in = {weights, -1};
  n.multi_begin = static_cast<int>(multi_inputs_.size());
  n.multi_count = static_cast<int>(vecs.size());
  Tensor out = Tensor::zeros(val(vecs[0]).shape);
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    const Tensor& v = val(vecs[i]);
    check_same_shape(out, v, "weighted_sum");
    const double w = W[static_cast<long>(i)];
    for (long j = 0; j < out.numel(); ++j) out[j] += w * v[j];
    multi_inputs_.push_back(vecs[i]);
  }
  n.value = std::move(out);
  return push(std::move(n));
}

Tape::Id Tape::lookup_row(Id table, int row) {
  const Tensor& T = val(table);
  if (T.rank() != 2) throw std::invalid_argument("lookup_row: table must be a matrix");
  if (row < 0 || row >= T.rows()) throw std::out_of_range("lookup_row: row out of range");
  Node n;
  n.op = Op::kLookupRow;
  n.in = {table, -1};
  n.aux0 = row;
  const int d = T.cols();
  n.value = Tensor({d}, std::vector<double>(T.data.begin() + static_cast<long>(row) * d,
                                            T.data.begin() + static_cast<long>(row + 1) * d));
  return push(std::move(n));
}

void Tape::backward(Id loss) {
  if (!recording_) throw std::logic_error("backward on a non-recording tape");
  if (loss < 0 || loss >= static_cast<Id>(nodes_.size())) {
    throw std::out_of_range("backward: bad node id");
  }
  if (nodes_[loss].value.numel() != 1) {
    throw std::invalid_argument("backward: loss must be a scalar");
  }

  grads_.clear();
  grads_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) grads_[i] = Tensor::zeros(nodes_[i].value.shape);
  grads_[loss].data[0] = 1.0;

  for (Id id = loss; id >= 0; --id) {
    Node& n = nodes_[id];
    const Tensor& g = grads_[id];
    bool all_zero = true;
    for (double v : g.data) {
      if (v != 0.0) {
        all_zero = false;
        break;
      }
    }
    if (all_zero) continue;

    switch (n.op) {
      case Op::kConst:
        break;
      case Op::kParam:
        for (long i = 0; i < g.numel(); ++i) n.parameter->grad[i] += g[i];
        break;
      case Op::kMatMul: {
        const Tensor& A = val(n.in[0]);
        const Tensor& B = val(n.in[1]);
        Tensor& dA = grads_[n.in[0]];
        Tensor& dB = grads_[n.in[1]];
        const int m = A.rows(), k = A.cols();
        if (B.rank() == 1) {
          for (int i = 0; i < m; ++i) {
            const double gi = g[i];
            if (gi == 0.0) continue;
            double* dArow = &dA.data[static_cast<std::size_t>(i) * k];
            const double* Arow = &A.data[static_cast<std::size_t>(i) * k];
            for (int l = 0; l < k; ++l) {
              dArow[l] += gi * B[l];
              dB[l] += gi * Arow[l];
            }
          }
        } else {
          const int c = B.cols();
          for (int i = 0; i < m; ++i) {
            for (int l = 0; l < k; ++l) {
              double acc = 0.0;
              for (int j = 0; j < c; ++j) acc += g.at(i, j) * B.at(l, j);
              dA.at(i, l) += acc;
            }
          }
          for (int l = 0; l < k; ++l) {
            for (int j = 0; j < c; ++j) {
              double acc = 0.0;
              for (int i = 0; i < m; ++i) acc += A.at(i, l) * g.at(i, j);
              dB.at(l, j) += acc;
            }
          }
        }
        break;
      }
      case Op::kAdd:
        for (long i = 0; i < g.numel(); ++i) {
          grads_[n.in[0]][i] += g[i];
          grads_[n.in[1]][i] += g[i];
        }
        break;
      case Op::kSub:
        for (long i = 0; i < g.numel(); ++i) {
          grads_[n.in[0]][i] += g[i];
          grads_[n.in[1]][i] -= g[i];
        }
        break;
      case Op::kMul: {
        const Tensor& A = val(n.in[0]);
        const Tensor& B = val(n.in[1]);
        for (long i = 0; i < g.numel(); ++i) {
          grads_[n.in[0]][i] += g[i] * B[i];
          grads_[n.in[1]][i] += g[i] * A[i];
        }
        break;
      }
      case Op::kScale:
        for (long i = 0; i < g.numel(); ++i) grads_[n.in[0]][i] += g[i] * n.factor;
        break;
      case Op::kTanh:
        for (long i = 0; i < g.numel(); ++i) {
          grads_[n.in[0]][i] += g[i] * (1.0 - n.value[i] * n.value[i]);
        }
        break;
      case Op::kSigmoid:
        for (long i = 0; i < g.numel(); ++i) {
          grads_[n.in[0]][i] += g[i] * n.value[i] * (1.0 - n.value[i]);
        }
        break;
      case Op::kRelu: {
        const Tensor& x = val(n.in[0]);
        for (long i = 0; i < g.numel(); ++i) {
          if (x[i] > 0.0) grads_[n.in[0]][i] += g[i];
        }
        break;
      }
      case Op::kSoftplus: {
        const Tensor& x = val(n.in[0]);
        for (long i = 0; i < g.numel(); ++i) {
          const double s = x[i] >= 0.0 ? 1.0 / (1.0 + std::exp(-x[i]))
                                       : std::exp(x[i]) / (1.0 + std::exp(x[i]));
          grads_[n.in[0]][i] += g[i] * s;
        }
        break;
      }
      case Op::kSoftmax: {
        double inner = 0.0;
        for (long i = 0; i < g.numel(); ++i) inner += g[i] * n.value[i];
        for (long i = 0; i < g.numel(); ++i) {
          grads_[n.in[0]][i] += n.value[i] * (g[i] - inner);
        }
        break;
      }
      case Op::kLogSoftmax: {
        double gsum = 0.0;
        for (long i = 0; i < g.numel(); ++i) gsum += g[i];
        for (long i = 0; i < g.numel(); ++i) {
          grads_[n.in[0]][i] += g[i] - std::exp(n.value[i]) * gsum;
        }
        break;
      }
      case Op::kPick:
        grads_[n.in[0]][n.aux0] += g.data[0];
        break;
      case Op::kSlice:
        for (int i = 0; i < n.aux1; ++i) grads_[n.in[0]][n.aux0 + i] += g[i];
        break;
      case Op::kConcat: {
        long offset = 0;
        for (int p = 0; p < n.multi_count; ++p) {
          const Id src = multi_inputs_[n.multi_begin + p];
          Tensor& dsrc = grads_[src];
          for (long i = 0; i < dsrc.numel(); ++i) dsrc[i] += g[offset + i];
          offset += dsrc.numel();
        }
        break;
      }
      case Op::kSum:
        for (long i = 0; i < grads_[n.in[0]].numel(); ++i) grads_[n.in[0]][i] += g.data[0];
        break;
      case Op::kMean: {
        const double f = 1.0 / static_cast<double>(grads_[n.in[0]].numel());
        for (long i = 0; i < grads_[n.in[0]].numel(); ++i) grads_[n.in[0]][i] += g.data[0] * f;
        break;
      }
      case Op::kAddN:
        for (int p = 0; p < n.multi_count; ++p) {
          const Id src = multi_inputs_[n.multi_begin + p];
          for (long i = 0; i < g.numel(); ++i) grads_[src][i] += g[i];
        }
        break;
      case Op::kDot: {
        const Tensor& A = val(n.in[0]);
        const Tensor& B = val(n.in[1]);
        const double gv = g.data[0];
        for (long i = 0; i < A.numel(); ++i) {
          grads_[n.in[0]][i] += gv * B[i];
          grads_[n.in[1]][i] += gv * A[i];
        }
        break;
      }
      case Op::kMaxOverTime:
        for (long j = 0; j < g.numel(); ++j) {
          const Id src = multi_inputs_[n.multi_begin + n.winners[j]];
          grads_[src][j] += g[j];
        }
        break;
      case Op::kWeightedSum: {
        const Tensor& W = val(n.in[0]);
        Tensor& dW = grads_[n.in[0]];
        for (int p = 0; p < n.multi_count; ++p) {
          const Id src = multi_inputs_[n.multi_begin + p];
          const Tensor& v = val(src);
          Tensor& dv = grads_[src];
          double acc = 0.0;
          for (long i = 0; i < g.numel(); ++i) {
            acc += g[i] * v[i];
            dv[i] += g[i] * W[p];
          }
          dW[p] += acc;
        }
        break;
      }
      case Op::kLookupRow: {
        const int d = val(n.in[0]).cols();
        Tensor& dT = grads_[n.in[0]];
        for (int i = 0; i < d; ++i) dT[static_cast<long>(n.aux0) * d + i] += g[i];
        break;
      }
    }
  }
}

}  // namespace errsup
