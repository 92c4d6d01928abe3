#pragma once

#include <optional>
#include <vector>

#include "sponge/boxcount.hpp"
#include "sponge/gpm.hpp"
#include "sponge/projections.hpp"

namespace sponge {

enum class Variant { Upper, Lower };

// Everything needed to evaluate a modified singular value function: the
// system, the projection exponents, and which endpoint of each to use.
struct ModSvfContext {
  const SpongeSystem* sys = nullptr;
  ProjectionDims dims;
  Variant variant = Variant::Upper;

  double p1(const ScaledPermutation& linear) const;
  double p2() const;
};

ModSvfContext make_context(const SpongeSystem& sys, ProjectionDims dims, Variant variant);

// psi(m) = a1^p1 * a2^(p2-p1) * a3^(s-p2), exponents chosen from the
// lex-smallest ordering of m.
double mod_svf(const ModSvfContext& ctx, const ScaledPermutation& linear, double s);
double mod_svf_word(const ModSvfContext& ctx, const Word& w, double s);

// Sum of psi over all words of length k, enumerated over linear classes
// with multiplicity weights. Honors SPONGE_DIM_THREADS.
double big_psi(const ModSvfContext& ctx, int k, double s);

// Subsystem of words with diagonal products and one shared ordering, on
// which psi is exactly multiplicative. Words run over linear-class indices;
// each carries the number of plain words it stands for.
struct MultiplicativeSubsystem {
  int base_len = 0;    // N
  int suffix_len = 0;  // m
  AxisOrder ordering{0, 1, 2};
  std::vector<Word> class_words;
  std::vector<double> weights;
};

MultiplicativeSubsystem build_subsystem(const ModSvfContext& ctx, int base_len, double s);

struct PressureEstimate {
  double s = 0.0;
  Variant variant = Variant::Upper;
  std::vector<double> sequence;  // (Psi_k)^(1/k) for k = 1..k_eff
  double point_estimate = 0.0;
  double rigorous_lower = 0.0;
  bool converged = false;
};

PressureEstimate pressure(const ModSvfContext& ctx, double s, int k_max = 12);

// (Psi_k)^(1/k) at the largest affordable k <= k_max.
double pressure_point(const ModSvfContext& ctx, double s, int k_max = 12);

// Unique root of the pressure, bisection to 1e-9 on an adaptive bracket.
double root_s0(const ModSvfContext& ctx, int k_max = 12);

// Root of the plain singular-value-function pressure, clamped at 3.
double affinity_dimension(const SpongeSystem& sys, int k_max = 12);

// Sum of psi over the delta cut set.
double cut_set_psi_sum(const ModSvfContext& ctx, double s, const Rational& delta);

struct DimensionBounds {
  double s0_lower = 0.0;
  double s0_upper = 0.0;
  double affinity_dim = 0.0;
  std::optional<SlopeFit> empirical_slope;
};

DimensionBounds dimension_bounds(const SpongeSystem& sys, const ProjectionDims& dims,
                                 int k_max = 12);

}  // namespace sponge
