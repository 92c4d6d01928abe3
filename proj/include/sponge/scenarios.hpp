#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sponge/gpm.hpp"
#include "sponge/projections.hpp"

namespace sponge {

enum class CheckStatus { Pass, Fail, Assumed };
const char* to_string(CheckStatus s);

struct ScenarioCheck {
  std::string name;
  CheckStatus status = CheckStatus::Fail;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ScenarioReport {
  std::string scenario;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, double>> derived;
  std::vector<ScenarioCheck> checks;
  bool verdict = false;
};

// Exact-arithmetic verification of the two-map rotation example: the
// displayed singular values of the words 12 and 21 and the strict
// non-multiplicativity chain psi(21) < psi(1)psi(2) < psi(12).
ScenarioReport run_non_multiplicativity();

// Parameters of the stacked-column family: N slabs diag(a,b,1/N) plus one
// block diag(c,d,1/N) with 0 < 1/N < c < b < a < d = 1-b < 1 and a+c < 1.
struct DimensionDropParams {
  Rational a, b, c, d;
  long n = 0;
  double eta_prime = 0.0;
  // derived
  double t = 0.0;       // root of a^t + c^t = 1
  double q = 0.0;       // (log(b/a) + eta') / log(bc/(ad))
  double eta = 0.0;     // eta' / log N
  double Lambda1 = 0.0; // a^t log b + c^t log d
  double Lambda2 = 0.0; // a^t log a + c^t log c
  double lambda1 = 0.0; // exp(Lambda1)
  double lambda2 = 0.0; // exp(Lambda2)
};

DimensionDropParams derive_drop_params(const Rational& a, const Rational& b,
                                       const Rational& c, long n, double eta_prime);

// The sponge and planar carpet generated by the parameters.
SpongeSystem column_sponge(const DimensionDropParams& params);
PlanarCarpetSystem column_carpet(const DimensionDropParams& params);

struct LyapunovPair {
  double Lambda1 = 0.0;
  double Lambda2 = 0.0;
};

// Closed forms a^t log b + c^t log d and a^t log a + c^t log c for the
// exponent weights a^t, c^t (the displayed formulas; note Lambda1 is the
// larger of the two only when the column direction dominates).
LyapunovPair lyapunov_closed(double a, double b, double c, double d, double t);
LyapunovPair lyapunov(const DimensionDropParams& params);

struct MonteCarloLyapunov {
  double largest = 0.0;   // mean of (1/depth) log alpha1 over samples
  double smallest = 0.0;  // mean of (1/depth) log alpha2 over samples
  double se_largest = 0.0;
  double se_smallest = 0.0;
  int samples = 0;
  int depth = 0;
  std::uint64_t seed = 0;
};

// Random products of the planar pair under the (a^t, c^t) Bernoulli weights.
MonteCarloLyapunov lyapunov_monte_carlo(const DimensionDropParams& params,
                                        int samples = 100000, int depth = 1000,
                                        std::uint64_t seed = 20240917ull);

struct DimensionDropReport {
  ScenarioReport report;
  double s0_closed = 0.0;
  double s0_pressure = 0.0;
  double refined_bound = 0.0;
  double drop_margin = 0.0;
  bool conditions_pass = false;
};

// Checks the three parameter conditions, computes the pressure root by the
// closed form and by word-sum bisection, and reports the refined upper
// bound max{s0 - eta, 2 - q + log(2d)/log N} with its drop margin.
// The large-deviation condition on alpha ratios is reported ASSUMED.
DimensionDropReport run_dimension_drop(const DimensionDropParams& params);

// Deterministic grid search for parameters passing every check with a
// drop margin above 1e-3; examines at most `budget` candidates.
DimensionDropParams search_drop_params(int budget = 1000);

struct BetaPropertyEstimate {
  double gamma = 0.0;
  double beta = 0.0;
  double fraction = 0.0;
  std::size_t squares = 0;
};

// Fraction of occupied gamma-grid squares whose carpet intersection meets
// at most two width-cut cylinders (each of width <= gamma^beta), a
// conservative estimate of the two-strip covering property.
BetaPropertyEstimate estimate_beta_property(const PlanarCarpetSystem& carpet, double gamma,
                                            double beta, std::size_t sample_budget = 20000000);
BetaPropertyEstimate estimate_beta_property(const DimensionDropParams& params, double gamma,
                                            double beta, std::size_t sample_budget = 20000000);

struct PlanarDiscontinuityPoint {
  Rational eps;
  double lower_root = 0.0;  // root of 4a * 3^(1-s) = 1
  double full_root = 0.0;   // bisection root of the enumerated pressure
  double gap = 0.0;         // full_root - root at eps = 0
};

struct PlanarDiscontinuityReport {
  ScenarioReport report;
  double p = 0.0;            // shadow dimension log2/log(1/a) at eps = 0
  double root0_closed = 0.0; // p + log2/log3
  double root0_pressure = 0.0;
  std::vector<PlanarDiscontinuityPoint> points;
};

// Five planar maps: four rectangles diag(a,1/3) and one axis-swapping map
// of scale eps; the pressure root jumps as eps leaves zero.
PlanarDiscontinuityReport run_planar_discontinuity(const Rational& a,
                                                   const std::vector<Rational>& eps_list);

}  // namespace sponge
