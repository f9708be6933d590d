#ifndef ERRSUP_TENSOR_HPP
#define ERRSUP_TENSOR_HPP

#include <cassert>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace errsup {

// Dense row-major tensor of doubles. Rank 0 (scalar), 1 and 2 are what the
// models use.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<int> shape_, std::vector<double> data_)
      : shape(std::move(shape_)), data(std::move(data_)) {
    if (static_cast<long>(data.size()) != numel_of(shape)) {
      throw std::invalid_argument("tensor data length does not match shape");
    }
  }

  static long numel_of(const std::vector<int>& shape) {
    long n = 1;
    for (int d : shape) {
      if (d <= 0) throw std::invalid_argument("tensor dimensions must be positive");
      n *= d;
    }
    return n;
  }

  static Tensor zeros(std::vector<int> shape) {
    const long n = numel_of(shape);
    return Tensor(std::move(shape), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  }
  static Tensor scalar(double v) { return Tensor({}, {v}); }
  static Tensor vec(std::vector<double> values) {
    const int n = static_cast<int>(values.size());
    return Tensor({n}, std::move(values));
  }

  int rank() const { return static_cast<int>(shape.size()); }
  long numel() const { return static_cast<long>(data.size()); }
  int dim(int i) const { return shape[i]; }
  int rows() const { return shape.at(0); }
  int cols() const { return shape.at(1); }

  double& operator[](long i) { return data[static_cast<std::size_t>(i)]; }
  double operator[](long i) const { return data[static_cast<std::size_t>(i)]; }
  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols() + j]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols() + j]; }

  double scalar_value() const {
    if (numel() != 1) throw std::logic_error("tensor is not a scalar");
    return data[0];
  }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  std::string shape_str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(shape[i]);
    }
    return s + ")";
  }
};

}  // namespace errsup

#endif
