#include "sponge/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <map>
#include <string>

#include "sponge/numeric.hpp"
#include "sponge/roots.hpp"

namespace sponge {

namespace {

int thread_budget() {
  const char* env = std::getenv("SPONGE_DIM_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

// largest k <= k_max whose class-word count stays within the budget
int affordable_k(std::size_t n_classes, int k_max, double budget = 2e7) {
  int k = 1;
  double words = static_cast<double>(n_classes);
  while (k < k_max && words * static_cast<double>(n_classes) <= budget) {
    words *= static_cast<double>(n_classes);
    ++k;
  }
  return k;
}

}  // namespace

double ModSvfContext::p1(const ScaledPermutation& linear) const {
  const AxisOrder sigma = principal_ordering(linear);
  return variant == Variant::Upper ? dims.p1_upper[sigma[0]] : dims.p1_lower[sigma[0]];
}

double ModSvfContext::p2() const {
  return variant == Variant::Upper ? dims.p2_upper : dims.p2_lower;
}

ModSvfContext make_context(const SpongeSystem& sys, ProjectionDims dims, Variant variant) {
  ModSvfContext ctx;
  ctx.sys = &sys;
  ctx.dims = std::move(dims);
  ctx.variant = variant;
  return ctx;
}

double mod_svf(const ModSvfContext& ctx, const ScaledPermutation& linear, double s) {
  if (s < 0) throw ValidationError("s must be nonnegative");
  const auto sv = singular_values(linear);
  const double a1 = to_double(sv.a1), a2 = to_double(sv.a2), a3 = to_double(sv.a3);
  const double p1 = ctx.p1(linear), p2 = ctx.p2();
  return std::pow(a1, p1) * std::pow(a2, p2 - p1) * std::pow(a3, s - p2);
}

double mod_svf_word(const ModSvfContext& ctx, const Word& w, double s) {
  return mod_svf(ctx, compose_word(*ctx.sys, w).linear, s);
}

namespace {

void psi_block(const SpongeSystem& sys, int depth_left, const ScaledPermutation& prefix,
               double weight, const std::function<double(const ScaledPermutation&)>& psi,
               PairwiseSum& acc) {
  if (depth_left == 0) {
    acc.add(weight * psi(prefix));
    return;
  }
  for (std::size_t c = 0; c < sys.linear_classes.size(); ++c)
    psi_block(sys, depth_left - 1, compose(prefix, sys.linear_classes[c]),
              weight * sys.class_multiplicity[c], psi, acc);
}

// Sum of a per-word weight function over all length-k words, split into one
// block per leading class so results never depend on the worker count.
double class_word_sum(const SpongeSystem& sys, int k,
                      const std::function<double(const ScaledPermutation&)>& psi) {
  const std::size_t n = sys.linear_classes.size();
  if (std::pow(static_cast<double>(n), k) > 2e7)
    throw BudgetError("word enumeration budget exceeded at k = " + std::to_string(k));

  std::vector<double> block_totals(n);
  const int threads = std::min<int>(thread_budget(), static_cast<int>(n));
  const auto run_block = [&](std::size_t c) {
    PairwiseSum acc;
    psi_block(sys, k - 1, sys.linear_classes[c], sys.class_multiplicity[c], psi, acc);
    return acc.total();
  };
  if (threads <= 1) {
    for (std::size_t c = 0; c < n; ++c) block_totals[c] = run_block(c);
  } else {
    std::vector<std::future<double>> futs;
    futs.reserve(n);
    for (std::size_t c = 0; c < n; ++c)
      futs.push_back(std::async(std::launch::async, run_block, c));
    for (std::size_t c = 0; c < n; ++c) block_totals[c] = futs[c].get();
  }
  PairwiseSum out;
  for (double b : block_totals) out.add(b);
  return out.total();
}

}  // namespace

double big_psi(const ModSvfContext& ctx, int k, double s) {
  if (k < 1) throw ValidationError("k must be positive");
  return class_word_sum(*ctx.sys, k,
                        [&](const ScaledPermutation& m) { return mod_svf(ctx, m, s); });
}

MultiplicativeSubsystem build_subsystem(const ModSvfContext& ctx, int base_len, double s) {
  const SpongeSystem& sys = *ctx.sys;
  const std::size_t n = sys.linear_classes.size();
  if (base_len < 1) throw ValidationError("base length must be positive");
  if (std::pow(static_cast<double>(n), base_len) > 1e6)
    throw BudgetError("subsystem base enumeration exceeds budget");

  struct Entry {
    Word cls;
    ScaledPermutation linear;
    double weight;
  };
  std::vector<Entry> all;
  {
    std::vector<Entry> frontier{{{}, ScaledPermutation::identity(), 1.0}};
    for (int d = 0; d < base_len; ++d) {
      std::vector<Entry> next;
      next.reserve(frontier.size() * n);
      for (const auto& e : frontier)
        for (std::size_t c = 0; c < n; ++c) {
          Entry ne{e.cls, compose(e.linear, sys.linear_classes[c]),
                   e.weight * sys.class_multiplicity[c]};
          ne.cls.push_back(static_cast<int>(c));
          next.push_back(std::move(ne));
        }
      frontier = std::move(next);
    }
    all = std::move(frontier);
  }

  // step 1: keep the permutation class carrying the largest share of Psi
  std::map<Perm3, double> perm_score;
  for (const auto& e : all) perm_score[e.linear.perm] += e.weight * mod_svf(ctx, e.linear, s);
  const Perm3 best_perm =
      std::max_element(perm_score.begin(), perm_score.end(),
                       [](const auto& a, const auto& b) { return a.second < b.second; })
          ->first;
  std::vector<Entry> gamma1;
  for (auto& e : all)
    if (e.linear.perm == best_perm) gamma1.push_back(std::move(e));

  // step 2: smallest uniform suffix length whose words invert the permutation
  Perm3 inv{};
  for (int j = 0; j < 3; ++j) inv[best_perm[j]] = j;
  std::vector<Entry> suffixes;
  int m = -1;
  for (int try_m = 0; try_m <= 6 && m < 0; ++try_m) {
    if (std::pow(static_cast<double>(n), try_m) > 1e6) break;
    std::vector<Entry> frontier{{{}, ScaledPermutation::identity(), 1.0}};
    for (int d = 0; d < try_m; ++d) {
      std::vector<Entry> next;
      for (const auto& e : frontier)
        for (std::size_t c = 0; c < n; ++c) {
          Entry ne{e.cls, compose(e.linear, sys.linear_classes[c]),
                   e.weight * sys.class_multiplicity[c]};
          ne.cls.push_back(static_cast<int>(c));
          next.push_back(std::move(ne));
        }
      frontier = std::move(next);
    }
    std::vector<Entry> match;
    for (auto& e : frontier)
      if (e.linear.perm == inv) match.push_back(std::move(e));
    if (!match.empty()) {
      m = try_m;
      suffixes = std::move(match);
    }
  }
  if (m < 0)
    throw std::runtime_error("no diagonalizing suffix of length <= 6 exists");

  // diagonal products of base words and suffixes
  std::vector<Entry> gamma2;
  gamma2.reserve(gamma1.size() * suffixes.size());
  for (const auto& i : gamma1)
    for (const auto& j : suffixes) {
      Entry e{i.cls, compose(i.linear, j.linear), i.weight * j.weight};
      e.cls.insert(e.cls.end(), j.cls.begin(), j.cls.end());
      gamma2.push_back(std::move(e));
    }

  // step 3: keep the best ordering class that verifies multiplicativity
  std::map<AxisOrder, double> order_score;
  for (const auto& e : gamma2)
    order_score[principal_ordering(e.linear)] += e.weight * mod_svf(ctx, e.linear, s);
  std::vector<std::pair<AxisOrder, double>> ranked(order_score.begin(), order_score.end());
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) { return a.second > b.second; });

  for (const auto& [sigma, score] : ranked) {
    std::vector<const Entry*> members;
    for (const auto& e : gamma2)
      if (principal_ordering(e.linear) == sigma) members.push_back(&e);

    // exact pairwise check: products stay diagonal with the same ordering,
    // which makes psi multiplicative on the class
    std::vector<ScaledPermutation> reps;
    for (const auto* e : members) {
      if (std::find(reps.begin(), reps.end(), e->linear) == reps.end())
        reps.push_back(e->linear);
      if (reps.size() >= 64) break;
    }
    bool ok = true;
    for (const auto& a : reps) {
      for (const auto& b : reps) {
        const ScaledPermutation prod = compose(a, b);
        if (!prod.is_diagonal() || principal_ordering(prod) != sigma) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (!ok) continue;

    MultiplicativeSubsystem out;
    out.base_len = base_len;
    out.suffix_len = m;
    out.ordering = sigma;
    for (const auto* e : members) {
      out.class_words.push_back(e->cls);
      out.weights.push_back(e->weight);
    }
    return out;
  }
  throw std::runtime_error("no ordering class passes the multiplicativity check");
}

namespace {

double subsystem_psi_sum(const ModSvfContext& ctx, const MultiplicativeSubsystem& sub,
                         double s) {
  const SpongeSystem& sys = *ctx.sys;
  PairwiseSum acc;
  for (std::size_t i = 0; i < sub.class_words.size(); ++i) {
    ScaledPermutation lin = ScaledPermutation::identity();
    for (int c : sub.class_words[i]) lin = compose(lin, sys.linear_classes[c]);
    acc.add(sub.weights[i] * mod_svf(ctx, lin, s));
  }
  return acc.total();
}

}  // namespace

PressureEstimate pressure(const ModSvfContext& ctx, double s, int k_max) {
  if (k_max < 2) throw ValidationError("k_max must be at least 2");
  PressureEstimate est;
  est.s = s;
  est.variant = ctx.variant;
  const int k_eff = affordable_k(ctx.sys->linear_classes.size(), k_max);
  for (int k = 1; k <= k_eff; ++k)
    est.sequence.push_back(std::pow(big_psi(ctx, k, s), 1.0 / static_cast<double>(k)));
  est.point_estimate = est.sequence.back();
  if (est.sequence.size() >= 2) {
    const double prev = est.sequence[est.sequence.size() - 2];
    est.converged = std::abs(est.point_estimate - prev) / est.point_estimate < 1e-4;
  }
  const auto sub = build_subsystem(ctx, 2, s);
  est.rigorous_lower = std::pow(subsystem_psi_sum(ctx, sub, s),
                                1.0 / static_cast<double>(sub.base_len + sub.suffix_len));
  return est;
}

double pressure_point(const ModSvfContext& ctx, double s, int k_max) {
  const int k_eff = affordable_k(ctx.sys->linear_classes.size(), k_max);
  return std::pow(big_psi(ctx, k_eff, s), 1.0 / static_cast<double>(k_eff));
}

double root_s0(const ModSvfContext& ctx, int k_max) {
  const auto f = [&](double s) { return pressure_point(ctx, s, k_max); };
  double hi = 6.0;
  if (f(hi) > 1.0) {
    hi = 12.0;
    if (f(hi) > 1.0) throw ValidationError("pressure stays above 1 up to s = 12");
  }
  return bisect_decreasing(f, 0.0, hi, 1.0, 1e-9);
}

namespace {

double svf(const ScaledPermutation& linear, double s) {
  const auto sv = singular_values(linear);
  const double a1 = to_double(sv.a1), a2 = to_double(sv.a2), a3 = to_double(sv.a3);
  if (s <= 1.0) return std::pow(a1, s);
  if (s <= 2.0) return a1 * std::pow(a2, s - 1.0);
  return a1 * a2 * std::pow(a3, s - 2.0);
}

}  // namespace

double affinity_dimension(const SpongeSystem& sys, int k_max) {
  const int k_eff = affordable_k(sys.linear_classes.size(), k_max);
  const auto f = [&](double s) {
    return std::pow(
        class_word_sum(sys, k_eff, [&](const ScaledPermutation& m) { return svf(m, s); }),
        1.0 / static_cast<double>(k_eff));
  };
  double hi = 6.0;
  if (f(hi) > 1.0) {
    hi = 12.0;
    if (f(hi) > 1.0) throw ValidationError("singular value pressure stays above 1 up to 12");
  }
  return std::min(3.0, bisect_decreasing(f, 0.0, hi, 1.0, 1e-9));
}

namespace {

void cut_psi_expand(const ModSvfContext& ctx, const Rational& delta, double s,
                    const ScaledPermutation& prefix, double weight, PairwiseSum& acc,
                    std::size_t& leaves) {
  const SpongeSystem& sys = *ctx.sys;
  for (std::size_t c = 0; c < sys.linear_classes.size(); ++c) {
    const ScaledPermutation next = compose(prefix, sys.linear_classes[c]);
    const double w = weight * sys.class_multiplicity[c];
    if (singular_values(next).a3 <= delta) {
      if (++leaves > 20'000'000) throw BudgetError("cut set enumeration exceeds budget");
      acc.add(w * mod_svf(ctx, next, s));
    } else {
      cut_psi_expand(ctx, delta, s, next, w, acc, leaves);
    }
  }
}

}  // namespace

double cut_set_psi_sum(const ModSvfContext& ctx, double s, const Rational& delta) {
  if (delta <= 0 || delta >= 1) throw ValidationError("delta must lie in (0,1)");
  PairwiseSum acc;
  std::size_t leaves = 0;
  cut_psi_expand(ctx, delta, s, ScaledPermutation::identity(), 1.0, acc, leaves);
  return acc.total();
}

DimensionBounds dimension_bounds(const SpongeSystem& sys, const ProjectionDims& dims,
                                 int k_max) {
  DimensionBounds out;
  out.s0_lower = root_s0(make_context(sys, dims, Variant::Lower), k_max);
  out.s0_upper = root_s0(make_context(sys, dims, Variant::Upper), k_max);
  out.affinity_dim = affinity_dimension(sys, k_max);
  return out;
}

}  // namespace sponge
