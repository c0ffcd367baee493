#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "npkernel/error.hpp"

namespace npkernel {

enum class BaseKernelKind { linear, gaussian, unit };

// Attribute kernel used for node attributes and, independently, edge attributes.
// For gaussian, an unset beta resolves to 1/d where d is the attribute dimension.
struct BaseKernelSpec {
  BaseKernelKind kind = BaseKernelKind::gaussian;
  std::optional<double> beta;

  friend bool operator==(const BaseKernelSpec&, const BaseKernelSpec&) = default;
};

inline std::string_view to_string(BaseKernelKind kind) {
  switch (kind) {
    case BaseKernelKind::linear: return "linear";
    case BaseKernelKind::gaussian: return "gaussian";
    case BaseKernelKind::unit: return "unit";
  }
  return "?";
}

inline BaseKernelKind parse_base_kernel_kind(std::string_view text) {
  if (text == "linear") return BaseKernelKind::linear;
  if (text == "gaussian") return BaseKernelKind::gaussian;
  if (text == "unit") return BaseKernelKind::unit;
  throw ParseError(fmt::format("unknown base kernel '{}'", text));
}

inline std::string describe(const BaseKernelSpec& spec) {
  if (spec.kind != BaseKernelKind::gaussian) return std::string(to_string(spec.kind));
  return spec.beta ? fmt::format("gaussian:beta={}", *spec.beta) : std::string("gaussian:beta=1/d");
}

// A base kernel bound to a concrete attribute dimension. Dimension 0 (no
// attributes) always evaluates to 1.
class AttributeKernel {
public:
  AttributeKernel() = default;

  AttributeKernel(const BaseKernelSpec& spec, std::size_t dim) : kind_(dim == 0 ? BaseKernelKind::unit : spec.kind), dim_(dim) {
    if (kind_ == BaseKernelKind::gaussian) {
      beta_ = spec.beta.value_or(1.0 / static_cast<double>(dim));
      if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw ComputeError(fmt::format("gaussian beta must be positive, got {}", beta_));
    }
  }

  bool is_unit() const noexcept { return kind_ == BaseKernelKind::unit; }
  BaseKernelKind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }

  double operator()(std::span<const double> x, std::span<const double> y) const {
    if (kind_ == BaseKernelKind::unit) return 1.0;
    if (x.size() != y.size() || x.size() != dim_) {
      throw ComputeError(fmt::format("attribute dimension mismatch: {} vs {}", x.size(), y.size()));
    }
    double value = 0.0;
    if (kind_ == BaseKernelKind::linear) {
      for (std::size_t i = 0; i < x.size(); ++i) value += x[i] * y[i];
    } else {
      double sq = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sq += d * d;
      }
      value = std::exp(-beta_ * sq);
    }
    if (!std::isfinite(value)) throw ComputeError("base kernel produced a non-finite value");
    return value;
  }

private:
  BaseKernelKind kind_ = BaseKernelKind::unit;
  std::size_t dim_ = 0;
  double beta_ = 0.0;
};

// linear: dot product; gaussian: exp(-beta * ||x - y||^2); unit: 1.
inline double eval_node_kernel(const BaseKernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (spec.kind == BaseKernelKind::unit) return 1.0;
  if (x.size() != y.size()) throw ComputeError(fmt::format("attribute dimension mismatch: {} vs {}", x.size(), y.size()));
  return AttributeKernel(spec, x.size())(x, y);
}

}  // namespace npkernel
