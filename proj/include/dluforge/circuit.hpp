#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dluforge/activation.hpp"
#include "dluforge/error.hpp"
#include "dluforge/network.hpp"

namespace dluforge {

/// Affine form over the neurons of one layer of a circuit under construction.
/// layer 0 is the network input, layer k >= 1 the k-th hidden layer. A signal
/// with no terms is a plain constant and can be combined with any layer.
struct Signal {
  int layer = 0;
  std::map<std::size_t, double> terms;
  double constant = 0.0;

  static Signal constant_value(double c) {
    Signal s;
    s.constant = c;
    return s;
  }

  bool is_constant() const { return terms.empty(); }

  Signal& operator+=(const Signal& o) {
    if (o.is_constant()) {
      constant += o.constant;
      return *this;
    }
    if (is_constant()) {
      layer = o.layer;
    } else if (layer != o.layer) {
      throw ConstructionError("cannot add signals from layers " + std::to_string(layer) + " and " +
                              std::to_string(o.layer));
    }
    for (const auto& [idx, c] : o.terms) {
      double v = (terms[idx] += c);
      if (v == 0.0) terms.erase(idx);
    }
    constant += o.constant;
    return *this;
  }

  Signal& operator*=(double k) {
    if (k == 0.0) {
      terms.clear();
      constant = 0.0;
      return *this;
    }
    for (auto& [idx, c] : terms) c *= k;
    constant *= k;
    return *this;
  }

  friend Signal operator+(Signal a, const Signal& b) { return a += b; }
  friend Signal operator-(Signal a, const Signal& b) { return a += b * -1.0; }
  friend Signal operator*(Signal a, double k) { return a *= k; }
  friend Signal operator*(double k, Signal a) { return a *= k; }
  friend Signal operator/(Signal a, double k) { return a *= 1.0 / k; }
  friend Signal operator-(Signal a) { return a *= -1.0; }
  friend Signal operator+(Signal a, double c) {
    a.constant += c;
    return a;
  }
  friend Signal operator+(double c, Signal a) { return a + c; }
  friend Signal operator-(Signal a, double c) { return a + (-c); }
  friend Signal operator-(double c, Signal a) { return (-a) + c; }
};

/// Incremental network builder. Neurons are created one at a time from an
/// affine pre-activation living on the previous layer; `finish` drops every
/// neuron that does not feed an output and packs the rest into a Network.
class CircuitBuilder {
 public:
  CircuitBuilder(std::size_t input_dim, Activation act) : input_dim_(input_dim), act_(act) {
    if (input_dim_ == 0) throw ShapeError("circuit input dimension must be positive");
  }

  std::size_t input_dim() const { return input_dim_; }
  const Activation& activation() const { return act_; }
  int depth() const { return static_cast<int>(layers_.size()); }

  Signal input(std::size_t i) const {
    if (i >= input_dim_) throw ShapeError("input index " + std::to_string(i) + " out of range");
    Signal s;
    s.layer = 0;
    s.terms[i] = 1.0;
    return s;
  }

  /// Adds act(pre) one layer above pre. Constants fold to constants.
  Signal neuron(const Signal& pre) {
    if (pre.is_constant()) return Signal::constant_value(activate(act_, pre.constant));
    std::size_t k = static_cast<std::size_t>(pre.layer);
    if (layers_.size() <= k) layers_.resize(k + 1);
    layers_[k].push_back(pre);
    Signal s;
    s.layer = pre.layer + 1;
    s.terms[layers_[k].size() - 1] = 1.0;
    return s;
  }

  /// Moves s up to `to_layer` through act(act(s - lb)) + lb chains. Exact
  /// whenever s >= lb since both activations used here are the identity on
  /// nonnegative inputs.
  Signal carry(Signal s, int to_layer, double lb) {
    if (s.is_constant()) return s;
    if (s.layer > to_layer) {
      throw ConstructionError("cannot carry a layer-" + std::to_string(s.layer) + " signal down to layer " +
                              std::to_string(to_layer));
    }
    while (s.layer < to_layer) s = neuron(s - lb) + lb;
    return s;
  }

  /// Copies `net` into the circuit, fed by `inputs`. Hidden activations must
  /// match the builder's.
  std::vector<Signal> embed(const Network& net, const std::vector<Signal>& inputs) {
    if (inputs.size() != net.input_dim()) throw ShapeError("embed: input count mismatch");
    std::vector<Signal> cur = inputs;
    for (const auto& layer : net.hidden_layers()) {
      if (!(layer.activation == act_)) throw UnsupportedError("embed: activation mismatch");
      auto pre = affine(layer, cur);
      cur.clear();
      for (auto& p : pre) cur.push_back(neuron(p));
    }
    return affine(net.output_layer(), cur);
  }

  Network finish(const std::vector<Signal>& outputs) const {
    if (outputs.empty()) throw ShapeError("circuit needs at least one output");
    int top = -1;
    for (const auto& s : outputs) {
      if (s.is_constant()) continue;
      if (top >= 0 && s.layer != top) {
        throw ConstructionError("outputs live on different layers (" + std::to_string(top) + " vs " +
                                std::to_string(s.layer) + ")");
      }
      top = s.layer;
    }
    const std::size_t L = top < 0 ? 0 : static_cast<std::size_t>(top);

    // keep[k] marks live neurons of hidden layer k+1
    std::vector<std::vector<char>> keep(L);
    for (std::size_t k = 0; k < L; ++k) keep[k].assign(layers_[k].size(), 0);
    if (L > 0) {
      for (const auto& s : outputs)
        for (const auto& [idx, c] : s.terms) keep[L - 1][idx] = 1;
      for (std::size_t k = L - 1; k > 0; --k) {
        for (std::size_t i = 0; i < layers_[k].size(); ++i) {
          if (!keep[k][i]) continue;
          for (const auto& [idx, c] : layers_[k][i].terms) keep[k - 1][idx] = 1;
        }
      }
    }

    // remap[k][old] -> new index in packed layer k (k = 0 is the input layer)
    std::vector<std::vector<std::size_t>> remap(L + 1);
    remap[0].resize(input_dim_);
    for (std::size_t i = 0; i < input_dim_; ++i) remap[0][i] = i;
    std::vector<std::size_t> width(L + 1, input_dim_);
    for (std::size_t k = 0; k < L; ++k) {
      remap[k + 1].assign(layers_[k].size(), 0);
      std::size_t next = 0;
      for (std::size_t i = 0; i < layers_[k].size(); ++i)
        if (keep[k][i]) remap[k + 1][i] = next++;
      width[k + 1] = next;
    }

    auto pack = [&](const std::vector<const Signal*>& rows, std::size_t k) {
      Layer layer;
      layer.weights = Matrix(rows.size(), width[k]);
      layer.bias.assign(rows.size(), 0.0);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        layer.bias[r] = rows[r]->constant;
        for (const auto& [idx, c] : rows[r]->terms) layer.weights(r, remap[k][idx]) = c;
      }
      return layer;
    };

    std::vector<Layer> hidden;
    for (std::size_t k = 0; k < L; ++k) {
      std::vector<const Signal*> rows;
      for (std::size_t i = 0; i < layers_[k].size(); ++i)
        if (keep[k][i]) rows.push_back(&layers_[k][i]);
      Layer layer = pack(rows, k);
      layer.activation = act_;
      hidden.push_back(std::move(layer));
    }
    std::vector<const Signal*> rows;
    for (const auto& s : outputs) rows.push_back(&s);
    Layer out = pack(rows, L);
    out.activation = Activation::identity();
    return Network(input_dim_, std::move(hidden), std::move(out));
  }

  Network finish(const Signal& output) const { return finish(std::vector<Signal>{output}); }

 private:
  static std::vector<Signal> affine(const Layer& layer, const std::vector<Signal>& in) {
    std::vector<Signal> out;
    for (std::size_t r = 0; r < layer.weights.rows(); ++r) {
      Signal s = Signal::constant_value(layer.bias[r]);
      for (std::size_t c = 0; c < layer.weights.cols(); ++c) {
        double w = layer.weights(r, c);
        if (w != 0.0) s += in[c] * w;
      }
      out.push_back(std::move(s));
    }
    return out;
  }

  std::size_t input_dim_;
  Activation act_;
  std::vector<std::vector<Signal>> layers_;  // layers_[k]: pre-activations of hidden layer k+1
};

}  // namespace dluforge
