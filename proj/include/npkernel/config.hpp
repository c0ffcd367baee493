#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "npkernel/base_kernel.hpp"
#include "npkernel/error.hpp"

namespace npkernel {

enum class KernelType { npe, npo, np, nps };
enum class Scheme { pairwise, global };

struct KernelConfig {
  KernelType kernel = KernelType::np;
  std::size_t h = 2;            // WL refinement rounds
  double alpha = 0.5;           // weight of the NPE part in NP
  BaseKernelSpec base;
  bool include_level0 = false;  // also sum the unrefined level
  Scheme scheme = Scheme::global;
  bool normalize_gram = false;
  std::size_t max_path_len = 0;  // NPS only; 0 = unlimited
  bool nps_normalize = false;    // NPS only; per-address 1/(|P|*|P'|) weight

  std::size_t first_level() const noexcept { return include_level0 ? 0 : 1; }

  friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

inline std::string_view to_string(KernelType k) {
  switch (k) {
    case KernelType::npe: return "npe";
    case KernelType::npo: return "npo";
    case KernelType::np: return "np";
    case KernelType::nps: return "nps";
  }
  return "?";
}

inline std::string_view to_string(Scheme s) { return s == Scheme::global ? "global" : "pairwise"; }

inline KernelType parse_kernel_type(std::string_view text) {
  if (text == "npe") return KernelType::npe;
  if (text == "npo") return KernelType::npo;
  if (text == "np") return KernelType::np;
  if (text == "nps") return KernelType::nps;
  throw ParseError(fmt::format("unknown kernel '{}'", text));
}

inline Scheme parse_scheme(std::string_view text) {
  if (text == "global") return Scheme::global;
  if (text == "pairwise") return Scheme::pairwise;
  throw ParseError(fmt::format("unknown scheme '{}'", text));
}

inline void validate_config(const KernelConfig& c) {
  if (c.h < 1) throw ComputeError("h must be at least 1");
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) throw ComputeError(fmt::format("alpha must lie in [0, 1], got {}", c.alpha));
  if (c.base.kind == BaseKernelKind::gaussian && c.base.beta && !(*c.base.beta > 0.0)) {
    throw ComputeError("gaussian beta must be positive");
  }
}

}  // namespace npkernel
