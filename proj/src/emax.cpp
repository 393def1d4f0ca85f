#include "netbound/emax.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "netbound/error.hpp"

namespace netbound::emax {

using channels::Channel;
using channels::ChannelKind;

std::string_view to_string(Method method) {
  switch (method) {
    case Method::SigmaSdp: return "sigma_sdp";
    case Method::LowerSdp: return "lower_sdp";
    case Method::UpperMarginalSdp: return "upper_marginal_sdp";
    case Method::Reduced: return "reduced";
  }
  return "sigma_sdp";
}

namespace {

void require_ppt_exact_dims(const Channel& ch) {
  if (ch.dim_in != 2 || (ch.dim_out != 2 && ch.dim_out != 3)) {
    throw Error(ErrorCode::UnsupportedDims,
                "E_max SDP needs a 2x2 or 2x3 Choi state (PPT cone equals the separable cone)");
  }
}

// Y0 = scale * pi + c * I with c = 2 d lambda_max(pi) + 1, bumped if the
// partial transpose is still not comfortably positive.
HermitianMatrix strictly_feasible_start(const BipartiteState& pi, double scale) {
  const double d = static_cast<double>(pi.dim_a());
  double c = 2.0 * d * max_eigenvalue(pi.matrix()) * scale + 1.0;
  const auto identity = HermitianMatrix::identity(pi.dim());
  HermitianMatrix y0 = pi.matrix() * scale + identity * c;
  while (min_eigenvalue(partial_transpose(y0, pi.dim_a(), pi.dim_b())) < 1e-3) {
    c *= 2.0;
    y0 = pi.matrix() * scale + identity * c;
  }
  return y0;
}

sdp::Block shifted_block(std::string name, const HermitianMatrix& shift) {
  return {std::move(name), [shift](const HermitianMatrix& y, std::span<const double>) { return y - shift; }};
}

sdp::Block ppt_block(std::size_t da, std::size_t db) {
  return {"Y^TB", [da, db](const HermitianMatrix& y, std::span<const double>) {
            return partial_transpose(y, da, db, Subsystem::B);
          }};
}

}  // namespace

EmaxResult emax_sigma_sdp(const Channel& channel, const sdp::Options& options) {
  require_ppt_exact_dims(channel);
  const BipartiteState pi = channels::choi(channel);
  const std::size_t da = pi.dim_a(), db = pi.dim_b();
  const double d = static_cast<double>(channel.dim_in);
  const HermitianMatrix target = pi.matrix() * d;

  sdp::Problem p;
  p.hermitian_dim = pi.dim();
  p.num_aux = 1;
  p.blocks.push_back(shifted_block("Y - d pi", target));
  p.blocks.push_back(ppt_block(da, db));
  p.blocks.push_back({"t I - Tr_B Y", [da, db](const HermitianMatrix& y, std::span<const double> aux) {
                        return HermitianMatrix::identity(da) * aux[0] -
                               partial_trace(y, da, db, Subsystem::B);
                      }});
  p.objective = [](const HermitianMatrix&, std::span<const double> aux) { return aux[0]; };

  const HermitianMatrix y0 = strictly_feasible_start(pi, d);
  const double t0 = max_eigenvalue(partial_trace(y0, da, db, Subsystem::B)) + 1.0;
  p.start = {y0, {t0}};

  const auto sol = sdp::solve(p, options);
  return {std::log2(sol.optimum), Method::SigmaSdp, sol.gap};
}

EmaxResult emax_lower_sdp(const Channel& channel, const sdp::Options& options) {
  require_ppt_exact_dims(channel);
  const BipartiteState pi = channels::choi(channel);
  sdp::Problem p;
  p.hermitian_dim = pi.dim();
  p.blocks.push_back(shifted_block("Y - pi", pi.matrix()));
  p.blocks.push_back(ppt_block(pi.dim_a(), pi.dim_b()));
  p.objective = [](const HermitianMatrix& y, std::span<const double>) { return y.trace(); };
  p.start = {strictly_feasible_start(pi, 1.0), {}};

  const auto sol = sdp::solve(p, options);
  return {std::log2(sol.optimum), Method::LowerSdp, sol.gap};
}

EmaxResult emax_upper_marginal_sdp(const Channel& channel, const sdp::Options& options) {
  require_ppt_exact_dims(channel);
  const BipartiteState pi = channels::choi(channel);
  const std::size_t da = pi.dim_a(), db = pi.dim_b();
  const double d = static_cast<double>(channel.dim_in);

  sdp::Problem p;
  p.hermitian_dim = pi.dim();
  p.num_aux = 1;
  p.blocks.push_back(shifted_block("Y - pi", pi.matrix()));
  p.blocks.push_back(ppt_block(da, db));
  p.objective = [d](const HermitianMatrix&, std::span<const double> aux) { return d * aux[0]; };

  // Tr_B Y = c * I_A, entry by entry.
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t j = i; j < da; ++j) {
      auto entry = [da, db, i, j](const HermitianMatrix& y) {
        return partial_trace(y, da, db, Subsystem::B)(i, j);
      };
      if (i == j) {
        p.equalities.push_back({[entry](const HermitianMatrix& y, std::span<const double> aux) {
                                  return entry(y).real() - aux[0];
                                },
                                0.0});
      } else {
        p.equalities.push_back(
            {[entry](const HermitianMatrix& y, std::span<const double>) { return entry(y).real(); }, 0.0});
        p.equalities.push_back(
            {[entry](const HermitianMatrix& y, std::span<const double>) { return entry(y).imag(); }, 0.0});
      }
    }
  }

  const HermitianMatrix y0 = strictly_feasible_start(pi, 1.0);
  const double c0 = partial_trace(y0, da, db, Subsystem::B)(0, 0).real();
  p.start = {y0, {c0}};

  const auto sol = sdp::solve(p, options);
  return {std::log2(sol.optimum), Method::UpperMarginalSdp, sol.gap};
}

// ---------------------------------------------------------------------------
// Phase-covariant separable family

HermitianMatrix PhaseCovariantSeparable::matrix() const {
  const Complex corner = std::polar(xi, phi);
  ComplexMatrix m(4, 4);
  m(0, 0) = 0.5 * alpha;
  m(1, 1) = 0.5 * gamma;
  m(2, 2) = 0.5 * delta;
  m(3, 3) = 0.5 * beta;
  m(0, 3) = 0.5 * corner;
  m(3, 0) = 0.5 * std::conj(corner);
  return HermitianMatrix(m);
}

bool PhaseCovariantSeparable::valid(double tol) const {
  if (alpha < -tol || beta < -tol || gamma < -tol || delta < -tol || xi < -tol) return false;
  if (std::abs(alpha + beta + gamma + delta - 2.0) > tol) return false;
  const double bound = std::min(std::sqrt(std::max(0.0, alpha * beta)),
                                std::sqrt(std::max(0.0, gamma * delta)));
  return xi <= bound + tol;
}

namespace {

// Search coordinates. Lower: (alpha, beta, delta, s, phi) with gamma = 2 - alpha - beta - delta.
// UpperMarginal: (alpha, beta, s, phi) with gamma = 1 - alpha, delta = 1 - beta.
// xi = s * min(sqrt(alpha beta), sqrt(gamma delta)) so the PPT bound becomes s in [0, 1].
struct Coordinates {
  std::array<double, 5> v{};
  std::size_t n = 0;
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t phi_index(ReducedVariant variant) { return variant == ReducedVariant::Lower ? 4 : 3; }

PhaseCovariantSeparable to_state(const Coordinates& c, ReducedVariant variant) {
  PhaseCovariantSeparable s;
  double frac = 0.0;
  if (variant == ReducedVariant::Lower) {
    s.alpha = c.v[0];
    s.beta = c.v[1];
    s.delta = c.v[2];
    s.gamma = std::max(0.0, 2.0 - s.alpha - s.beta - s.delta);
    frac = c.v[3];
    s.phi = c.v[4];
  } else {
    s.alpha = c.v[0];
    s.beta = c.v[1];
    s.gamma = 1.0 - s.alpha;
    s.delta = 1.0 - s.beta;
    frac = c.v[2];
    s.phi = c.v[3];
  }
  s.xi = frac * std::min(std::sqrt(s.alpha * s.beta), std::sqrt(s.gamma * s.delta));
  s.phi = std::fmod(s.phi, kTwoPi);
  if (s.phi < 0.0) s.phi += kTwoPi;
  return s;
}

// Pulls a point that drifted out through rounding back into the feasible box.
void project(Coordinates& c, ReducedVariant variant) {
  const std::size_t fixed = phi_index(variant);
  for (std::size_t i = 0; i < fixed; ++i) c.v[i] = std::max(0.0, c.v[i]);
  if (variant == ReducedVariant::Lower) {
    c.v[3] = std::min(c.v[3], 1.0);
    const double sum = c.v[0] + c.v[1] + c.v[2];
    if (sum > 2.0) {
      for (std::size_t i = 0; i < 3; ++i) c.v[i] *= 2.0 / sum;
    }
  } else {
    for (std::size_t i = 0; i < fixed; ++i) c.v[i] = std::min(c.v[i], 1.0);
  }
}

// Linear inequalities a . v <= b describing the feasible region (phi excluded).
struct Halfspace {
  std::array<double, 5> a{};
  double b = 0.0;
};

std::vector<Halfspace> feasible_region(ReducedVariant variant) {
  std::vector<Halfspace> h;
  auto bound = [&](std::size_t i, double lo, double hi) {
    Halfspace upper, lower;
    upper.a[i] = 1.0;
    upper.b = hi;
    lower.a[i] = -1.0;
    lower.b = -lo;
    h.push_back(upper);
    h.push_back(lower);
  };
  if (variant == ReducedVariant::Lower) {
    bound(0, 0.0, 2.0);
    bound(1, 0.0, 2.0);
    bound(2, 0.0, 2.0);
    bound(3, 0.0, 1.0);
    Halfspace simplex;
    simplex.a = {1.0, 1.0, 1.0, 0.0, 0.0};
    simplex.b = 2.0;
    h.push_back(simplex);
  } else {
    bound(0, 0.0, 1.0);
    bound(1, 0.0, 1.0);
    bound(2, 0.0, 1.0);
  }
  return h;
}

// Step interval [lo, hi] keeping point + t * dir feasible.
std::pair<double, double> step_interval(const Coordinates& p, const std::array<double, 5>& dir,
                                        const std::vector<Halfspace>& region, std::size_t phi_idx) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& h : region) {
    double ap = 0.0, ad = 0.0;
    for (std::size_t i = 0; i < p.n; ++i) {
      ap += h.a[i] * p.v[i];
      ad += h.a[i] * dir[i];
    }
    const double slack = std::max(0.0, h.b - ap);
    if (ad > 1e-300) hi = std::min(hi, slack / ad);
    else if (ad < -1e-300) lo = std::max(lo, slack / ad);
  }
  if (dir[phi_idx] != 0.0) {
    const double span = std::numbers::pi / std::abs(dir[phi_idx]);
    lo = std::max(lo, -span);
    hi = std::min(hi, span);
  }
  return {std::isfinite(lo) ? lo : 0.0, std::isfinite(hi) ? hi : 0.0};
}

struct LocalSearch {
  const StateObjective& objective;
  ReducedVariant variant;
  const ReducedOptions& options;
  std::vector<Halfspace> region;

  double evaluate(const Coordinates& c) const {
    const double v = objective(to_state(c, variant).matrix());
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  }

  // Golden-section search of f(p + t dir) on [lo, hi]; keeps t = 0 if nothing better is found.
  double line_search(Coordinates& p, double fp, const std::array<double, 5>& dir) const {
    const auto [lo0, hi0] = step_interval(p, dir, region, phi_index(variant));
    if (hi0 - lo0 <= options.tolerance) return fp;
    auto at = [&](double t) {
      Coordinates q = p;
      for (std::size_t i = 0; i < p.n; ++i) q.v[i] += t * dir[i];
      return q;
    };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo0, b = hi0;
    double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
    double f1 = evaluate(at(x1)), f2 = evaluate(at(x2));
    while (b - a > options.tolerance) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = evaluate(at(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = evaluate(at(x2));
      }
    }
    const double t = f1 <= f2 ? x1 : x2;
    const double ft = std::min(f1, f2);
    if (ft < fp) {
      p = at(t);
      project(p, variant);
      return std::min(ft, evaluate(p));
    }
    return fp;
  }

  ReducedOutcome run(Coordinates start, std::uint64_t stream_seed) const {
    std::mt19937_64 rng(stream_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Coordinates p = start;
    double fp = evaluate(p);
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
      const double before = fp;
      for (std::size_t i = 0; i < p.n; ++i) {
        std::array<double, 5> dir{};
        dir[i] = 1.0;
        fp = line_search(p, fp, dir);
      }
      if (variant == ReducedVariant::Lower) {
        // Mass exchanges between diagonal weights, so the search can slide
        // along the face gamma = 0 where every axis move is blocked.
        for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
          std::array<double, 5> dir{};
          dir[i] = 1.0;
          dir[j] = -1.0;
          fp = line_search(p, fp, dir);
        }
      }
      for (int r = 0; r < options.random_directions; ++r) {
        std::array<double, 5> dir{};
        double norm = 0.0;
        for (std::size_t i = 0; i < p.n; ++i) {
          dir[i] = gauss(rng);
          norm += dir[i] * dir[i];
        }
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < p.n; ++i) dir[i] /= norm;
        fp = line_search(p, fp, dir);
      }
      if (std::isfinite(before) && before - fp <= 1e-10) break;
    }
    return {fp, to_state(p, variant), -1};
  }
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<Coordinates> draw_starts(ReducedVariant variant, const ReducedOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::vector<Coordinates> starts;
  starts.reserve(static_cast<std::size_t>(std::max(options.starts, 0)));
  for (int i = 0; i < options.starts; ++i) {
    Coordinates c;
    if (variant == ReducedVariant::Lower) {
      c.n = 5;
      std::array<double, 4> w{};
      double sum = 0.0;
      for (auto& x : w) sum += (x = expo(rng));
      c.v[0] = 2.0 * w[0] / sum;
      c.v[1] = 2.0 * w[1] / sum;
      c.v[2] = 2.0 * w[2] / sum;
      c.v[3] = unit(rng);
      c.v[4] = kTwoPi * unit(rng);
    } else {
      c.n = 4;
      c.v[0] = unit(rng);
      c.v[1] = unit(rng);
      c.v[2] = unit(rng);
      c.v[3] = kTwoPi * unit(rng);
    }
    starts.push_back(c);
  }
  return starts;
}

ReducedOutcome reduce_min(const std::vector<ReducedOutcome>& results) {
  ReducedOutcome best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].value < best.value) {
      best = results[i];
      best.best_start = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

ReducedOutcome minimize_phase_covariant_serial(const StateObjective& objective,
                                               ReducedVariant variant,
                                               const ReducedOptions& options) {
  const auto starts = draw_starts(variant, options);
  const LocalSearch search{objective, variant, options, feasible_region(variant)};
  std::vector<ReducedOutcome> results(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    results[i] = search.run(starts[i], splitmix64(options.seed ^ i));
  }
  return reduce_min(results);
}

ReducedOutcome minimize_phase_covariant(const StateObjective& objective, ReducedVariant variant,
                                        const ReducedOptions& options) {
  const auto starts = draw_starts(variant, options);
  const LocalSearch search{objective, variant, options, feasible_region(variant)};
  std::vector<ReducedOutcome> results(starts.size());
  const long count = static_cast<long>(starts.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    results[idx] = search.run(starts[idx], splitmix64(options.seed ^ idx));
  }
  return reduce_min(results);
}

EmaxResult emax_reduced(const Channel& channel, ReducedVariant variant, const ReducedOptions& options) {
  if (channel.kind != ChannelKind::AmplitudeDamping && channel.kind != ChannelKind::Dephasing &&
      channel.kind != ChannelKind::Depolarizing) {
    throw Error(ErrorCode::UnsupportedKind,
                "reduced search needs a phase-covariant qubit channel with two-qubit Choi state");
  }
  const HermitianMatrix pi = channels::choi(channel).matrix();
  const auto outcome = minimize_phase_covariant(
      [&pi](const HermitianMatrix& sigma) { return dmax(pi, sigma); }, variant, options);
  return {outcome.value, Method::Reduced, 0.0};
}

EmaxResult emax_reduced(const Channel& channel, const ReducedOptions& options) {
  return emax_reduced(channel,
                      channel.choi_simulable ? ReducedVariant::Lower : ReducedVariant::UpperMarginal,
                      options);
}

}  // namespace netbound::emax
