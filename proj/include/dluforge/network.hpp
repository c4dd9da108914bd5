#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dluforge/activation.hpp"
#include "dluforge/error.hpp"

namespace dluforge {

/// Dense row-major matrix. Networks built here are narrow, so no sparse
/// storage; sparsity only matters to the audit.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw ShapeError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                       std::to_string(rows_ * cols_));
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Layer {
  Matrix weights;  // d_i x d_{i-1}
  std::vector<double> bias;
  Activation activation = Activation::identity();

  std::size_t width() const { return weights.rows(); }

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// (depth, width, nonzero weights) triple a construction is claimed to fit in.
struct Budget {
  long depth = 0;
  long width = 0;
  long weights = 0;
};

struct StructuralAudit {
  long depth = 0;
  long width = 0;
  long nonzero_weights = 0;
  long claimed_depth = 0;
  long claimed_width = 0;
  long claimed_weights = 0;
  bool within_budget = false;

  friend bool operator==(const StructuralAudit&, const StructuralAudit&) = default;
};

/// Fully connected network: hidden layers (affine + activation) followed by an
/// affine output layer. Depth counts hidden layers only; width is the largest
/// hidden layer; the weight count is the number of nonzero entries in all
/// weight matrices and bias vectors.
///
/// Immutable after construction, so `forward` may be called concurrently.
class Network {
 public:
  Network(std::size_t input_dim, std::vector<Layer> hidden, Layer output)
      : input_dim_(input_dim), hidden_(std::move(hidden)), output_(std::move(output)) {
    if (input_dim_ == 0) {
      throw ShapeError("network input dimension must be positive");
    }
    if (output_.activation.tag != ActivationTag::Identity) {
      throw ShapeError("output layer must be affine (Identity activation)");
    }
    std::size_t prev = input_dim_;
    for (std::size_t i = 0; i < hidden_.size(); ++i) {
      check_layer(hidden_[i], prev, "hidden layer " + std::to_string(i));
      prev = hidden_[i].width();
    }
    check_layer(output_, prev, "output layer");
    if (output_.width() == 0) {
      throw ShapeError("network must have at least one output");
    }
  }

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return output_.width(); }
  const std::vector<Layer>& hidden_layers() const { return hidden_; }
  const Layer& output_layer() const { return output_; }

  long depth() const { return static_cast<long>(hidden_.size()); }

  long width() const {
    std::size_t w = 0;
    for (const auto& layer : hidden_) w = std::max(w, layer.width());
    return static_cast<long>(w);
  }

  long nonzero_weights() const {
    long count = count_nonzero(output_);
    for (const auto& layer : hidden_) count += count_nonzero(layer);
    return count;
  }

  std::vector<double> forward(std::span<const double> x) const {
    if (x.size() != input_dim_) {
      throw ShapeError("forward: input has " + std::to_string(x.size()) + " entries, network expects " +
                       std::to_string(input_dim_));
    }
    std::vector<double> current(x.begin(), x.end());
    std::vector<double> next;
    for (const auto& layer : hidden_) {
      apply_affine(layer, current, next);
      for (double& v : next) v = activate(layer.activation, v);
      current.swap(next);
    }
    apply_affine(output_, current, next);
    return next;
  }

  std::vector<double> forward(std::initializer_list<double> x) const {
    return forward(std::span<const double>(x.begin(), x.size()));
  }

  /// Convenience for single-output networks.
  double operator()(std::span<const double> x) const {
    if (output_dim() != 1) {
      throw ShapeError("scalar evaluation requires a single-output network");
    }
    return forward(x)[0];
  }
  double operator()(std::initializer_list<double> x) const {
    return (*this)(std::span<const double>(x.begin(), x.size()));
  }

  friend bool operator==(const Network&, const Network&) = default;

 private:
  static void check_layer(const Layer& layer, std::size_t expected_cols, const std::string& name) {
    if (layer.weights.cols() != expected_cols) {
      throw ShapeError(name + " has " + std::to_string(layer.weights.cols()) + " columns, expected " +
                       std::to_string(expected_cols));
    }
    if (layer.bias.size() != layer.weights.rows()) {
      throw ShapeError(name + " bias length " + std::to_string(layer.bias.size()) + " does not match " +
                       std::to_string(layer.weights.rows()) + " rows");
    }
  }

  static long count_nonzero(const Layer& layer) {
    auto nz = [](double v) { return v != 0.0; };
    return static_cast<long>(std::count_if(layer.weights.data().begin(), layer.weights.data().end(), nz) +
                             std::count_if(layer.bias.begin(), layer.bias.end(), nz));
  }

  static void apply_affine(const Layer& layer, const std::vector<double>& in, std::vector<double>& out) {
    out.assign(layer.weights.rows(), 0.0);
    for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
      double acc = layer.bias[r];
      auto row = layer.weights.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * in[c];
      out[r] = acc;
    }
  }

  std::size_t input_dim_;
  std::vector<Layer> hidden_;
  Layer output_;
};

inline std::vector<double> forward(const Network& net, std::span<const double> x) { return net.forward(x); }

inline StructuralAudit audit(const Network& net, const Budget& claimed) {
  StructuralAudit a;
  a.depth = net.depth();
  a.width = net.width();
  a.nonzero_weights = net.nonzero_weights();
  a.claimed_depth = claimed.depth;
  a.claimed_width = claimed.width;
  a.claimed_weights = claimed.weights;
  a.within_budget = a.depth <= a.claimed_depth && a.width <= a.claimed_width && a.nonzero_weights <= a.claimed_weights;
  return a;
}

}  // namespace dluforge
