#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "dluforge/error.hpp"

namespace dluforge {

enum class ActivationTag : std::uint8_t { DLU, ReLU, Identity, LeakyReLU, ELU };

/// Componentwise activation. LeakyReLU carries its negative slope and ELU its
/// alpha in `param`; the other tags ignore it.
struct Activation {
  ActivationTag tag = ActivationTag::Identity;
  double param = 0.0;

  static constexpr Activation dlu() { return {ActivationTag::DLU, 0.0}; }
  static constexpr Activation relu() { return {ActivationTag::ReLU, 0.0}; }
  static constexpr Activation identity() { return {ActivationTag::Identity, 0.0}; }
  static constexpr Activation leaky_relu(double slope) { return {ActivationTag::LeakyReLU, slope}; }
  static constexpr Activation elu(double alpha) { return {ActivationTag::ELU, alpha}; }

  bool has_param() const { return tag == ActivationTag::LeakyReLU || tag == ActivationTag::ELU; }

  friend bool operator==(const Activation&, const Activation&) = default;
};

/// DLU: x on [0, inf), x / (1 - x) on (-inf, 0). Range (-1, inf).
inline double dlu(double x) { return x >= 0.0 ? x : x / (1.0 - x); }

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

inline double activate(const Activation& act, double x) {
  if (!std::isfinite(x)) {
    throw DomainError("activation input is not finite");
  }
  switch (act.tag) {
    case ActivationTag::DLU:
      return dlu(x);
    case ActivationTag::ReLU:
      return relu(x);
    case ActivationTag::Identity:
      return x;
    case ActivationTag::LeakyReLU:
      return x >= 0.0 ? x : act.param * x;
    case ActivationTag::ELU:
      return x >= 0.0 ? x : act.param * std::expm1(x);
  }
  return x;
}

inline std::string_view to_string(ActivationTag tag) {
  switch (tag) {
    case ActivationTag::DLU:
      return "DLU";
    case ActivationTag::ReLU:
      return "ReLU";
    case ActivationTag::Identity:
      return "Identity";
    case ActivationTag::LeakyReLU:
      return "LeakyReLU";
    case ActivationTag::ELU:
      return "ELU";
  }
  return "?";
}

inline ActivationTag activation_tag_from_string(std::string_view name) {
  if (name == "DLU") return ActivationTag::DLU;
  if (name == "ReLU") return ActivationTag::ReLU;
  if (name == "Identity") return ActivationTag::Identity;
  if (name == "LeakyReLU") return ActivationTag::LeakyReLU;
  if (name == "ELU") return ActivationTag::ELU;
  throw ParameterError("unknown activation tag '" + std::string(name) + "'");
}

}  // namespace dluforge
