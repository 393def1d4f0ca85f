#include "netbound/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>

#include "netbound/channels.hpp"
#include "netbound/emax.hpp"
#include "netbound/error.hpp"
#include "netbound/linalg.hpp"
#include "netbound/network.hpp"
#include "netbound/sweep.hpp"

namespace netbound::acceptance {

namespace {

using channels::ChannelKind;

constexpr double kSdpTol = 1e-4;

std::vector<double> lambda_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(i == 20 ? 1.0 : i / 20.0);
  return g;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// SDP values shared between checks within one run.
class SdpMemo {
 public:
  double sigma(ChannelKind kind, double p) { return get(sigma_, kind, p, emax::emax_sigma_sdp); }
  double lower(ChannelKind kind, double p) { return get(lower_, kind, p, emax::emax_lower_sdp); }

 private:
  using Map = std::map<std::pair<int, double>, double>;
  template <class F>
  double get(Map& m, ChannelKind kind, double p, F solve) {
    const auto key = std::make_pair(static_cast<int>(kind), p);
    if (auto it = m.find(key); it != m.end()) return it->second;
    const double v = solve(channels::make_channel(kind, p), sdp::Options{}).value;
    m.emplace(key, v);
    return v;
  }
  Map sigma_, lower_;
};

struct Context {
  const Oracles& oracles;
  SdpMemo memo;
};

using Check = CheckResult (*)(Context&);

CheckResult check_ad_sigma(Context& ctx) {
  CheckResult r{1, "amplitude damping E_max (sigma SDP) = log2(2 - lambda), under 5 s", false, {}, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  double dev = 0.0;
  for (double l : lambda_grid()) {
    dev = std::max(dev, std::abs(ctx.memo.sigma(ChannelKind::AmplitudeDamping, l) -
                                 ctx.oracles.ad_emax(l)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.passed = dev <= kSdpTol && secs <= 5.0;
  r.detail = fmt("max deviation %.3g, runtime %.2f s", dev, secs);
  return r;
}

CheckResult check_ad_lower(Context& ctx) {
  CheckResult r{2, "amplitude damping lower SDP = piecewise F(lambda), both branches", false, {}, 0.0};
  const double breakpoint = (std::sqrt(5.0) - 1.0) / 2.0;
  double dev = 0.0;
  int below = 0, above = 0;
  for (double l : lambda_grid()) {
    (l <= breakpoint ? below : above)++;
    dev = std::max(dev, std::abs(ctx.memo.lower(ChannelKind::AmplitudeDamping, l) -
                                 ctx.oracles.ad_lower(l)));
  }
  r.passed = dev <= kSdpTol && below > 0 && above > 0;
  r.detail = fmt("max deviation %.3g", dev) + ", " + std::to_string(below) + " points below and " +
             std::to_string(above) + " above the breakpoint";
  return r;
}

CheckResult check_ad_upper(Context& ctx) {
  CheckResult r{3, "amplitude damping marginal-constrained SDP = log2(2 - lambda)", false, {}, 0.0};
  double dev = 0.0;
  for (double l : lambda_grid()) {
    const double v =
        emax::emax_upper_marginal_sdp(channels::make_channel(ChannelKind::AmplitudeDamping, l))
            .value;
    dev = std::max(dev, std::abs(v - ctx.oracles.ad_emax(l)));
  }
  r.passed = dev <= kSdpTol;
  r.detail = fmt("max deviation %.3g", dev);
  return r;
}

CheckResult check_simulable_equality(Context& ctx) {
  CheckResult r{4, "sigma SDP = lower SDP on Choi-simulable channels", false, {}, 0.0};
  double dev = 0.0;
  for (auto kind : {ChannelKind::Dephasing, ChannelKind::Erasure, ChannelKind::Depolarizing})
    for (double l : lambda_grid())
      dev = std::max(dev, std::abs(ctx.memo.sigma(kind, l) - ctx.memo.lower(kind, l)));
  r.passed = dev <= kSdpTol;
  r.detail = fmt("max deviation %.3g over 63 channels", dev);
  return r;
}

CheckResult check_ordering(Context& ctx) {
  CheckResult r{5, "E_R <= E_sq upper bound <= E_max ordering, depolarizing E_max vanishes", false, {}, 0.0};
  std::string failure;
  for (double l : lambda_grid()) {
    const auto m = channels::closed_form_measures(ChannelKind::Dephasing, l);
    const double emax = ctx.memo.sigma(ChannelKind::Dephasing, l);
    if (!(m.e_r->bits <= m.e_sq_ub->bits + 1e-12 && m.e_sq_ub->bits <= emax + kSdpTol)) {
      failure = fmt("dephasing ordering violated at lambda=%.2f", l);
      break;
    }
  }
  for (auto kind : {ChannelKind::Erasure, ChannelKind::Depolarizing}) {
    for (double l : lambda_grid()) {
      const double er = channels::closed_form_measures(kind, l).e_r->bits;
      if (!(er <= ctx.memo.sigma(kind, l) + kSdpTol) && failure.empty()) {
        failure = std::string(channels::to_string(kind)) + fmt(": E_R > E_max at lambda=%.2f", l);
      }
    }
  }
  double depol_max = 0.0;
  std::vector<double> high{2.0 / 3.0};
  for (double l : lambda_grid())
    if (l >= 2.0 / 3.0) high.push_back(l);
  for (double l : high) depol_max = std::max(depol_max, ctx.memo.sigma(ChannelKind::Depolarizing, l));
  if (depol_max > kSdpTol && failure.empty()) {
    failure = fmt("depolarizing E_max reaches %.3g for lambda >= 2/3", depol_max);
  }
  r.passed = failure.empty();
  r.detail = r.passed ? fmt("max depolarizing E_max for lambda >= 2/3: %.3g", depol_max) : failure;
  return r;
}

CheckResult check_mu_sweep(Context& ctx) {
  CheckResult r{6, "mu sweep: anchor values, sign regions, monotone in k", false, {}, 0.0};
  std::string failure;
  const double origin = sweep::mu_closed_form(1, 0.0, 0.0);
  const double anchor = sweep::mu_closed_form(1, 0.5, 1.0);
  const double neg = sweep::mu_closed_form(1, 0.99, 0.2);
  const double pos = sweep::mu_closed_form(5, 0.5, 0.9);
  if (origin != 0.0) failure = fmt("mu(1,0,0) = %.3g, expected exactly 0", origin);
  if (failure.empty() && std::abs(anchor - ctx.oracles.mu_half_one) > 1e-3) {
    failure = fmt("mu(1,0.5,1) = %.6f, expected %.6f", anchor, ctx.oracles.mu_half_one);
  }
  if (failure.empty() && !(neg < 0.0)) failure = fmt("mu(1,0.99,0.2) = %.6f is not negative", neg);
  if (failure.empty() && !(pos > 0.0)) failure = fmt("mu(5,0.5,0.9) = %.6f is not positive", pos);

  const std::vector<int> ks{1, 2, 5, 10, 50};
  const auto rows = sweep::run_sweep({ks, 11});
  const std::size_t per_k = 121;
  int compared = 0;
  for (std::size_t p = 0; p < per_k && failure.empty(); ++p) {
    const double x = rows[p].x;
    const auto deph = channels::closed_form_measures(ChannelKind::Dephasing, x);
    if (deph.e_sq_ub->bits < deph.e_r->bits) continue;
    for (std::size_t ki = 1; ki < ks.size(); ++ki) {
      const double prev = rows[(ki - 1) * per_k + p].mu;
      const double next = rows[ki * per_k + p].mu;
      ++compared;
      if (next < prev - 1e-12) {
        failure = fmt("mu decreases in k at x=%.1f, lambda=%.1f", x, rows[p].lambda);
        break;
      }
    }
  }
  r.passed = failure.empty();
  r.detail = r.passed ? fmt("mu(1,0.5,1) = %.6f, %g monotone comparisons", anchor, compared)
                      : failure;
  return r;
}

network::NetworkGraph random_graph(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> mids_dist(1, 10), edges_dist(1, 30), kind_dist(0, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0), uses(0.0, 3.0);
  const int m = mids_dist(rng);
  std::vector<std::string> nodes{"A", "B"};
  for (int i = 0; i < m; ++i) nodes.push_back("C" + std::to_string(i));
  std::uniform_int_distribution<std::size_t> node_dist(0, nodes.size() - 1);
  const ChannelKind kinds[] = {ChannelKind::AmplitudeDamping, ChannelKind::Dephasing,
                               ChannelKind::Erasure, ChannelKind::Depolarizing};
  std::vector<network::Edge> edges;
  const int count = edges_dist(rng);
  for (int i = 0; i < count; ++i) {
    network::Edge e;
    e.from = nodes[node_dist(rng)];
    do e.to = nodes[node_dist(rng)];
    while (e.to == e.from);
    e.channel = channels::make_channel(kinds[kind_dist(rng)], unit(rng));
    e.avg_uses = uses(rng);
    edges.push_back(std::move(e));
  }
  return network::NetworkGraph(std::move(nodes), std::move(edges));
}

CheckResult check_min_cut(Context&) {
  CheckResult r{7, "min cut: exhaustive enumeration = max-flow on 100 random graphs", false, {}, 0.0};
  std::mt19937_64 rng(20240607);
  network::MeasureCache cache;
  double dev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto g = random_graph(rng);
    const network::Evaluator eval(g, cache);
    const auto policy = network::Policy::versatile();
    const auto ex = network::min_cut(eval, policy, network::MinCutMethod::Exhaustive);
    const auto mf = network::min_cut(eval, policy, network::MinCutMethod::MaxFlow);
    dev = std::max(dev, std::abs(ex.value - mf.value));
  }
  r.passed = dev <= 1e-9;
  r.detail = fmt("max deviation %.3g", dev);
  return r;
}

ComplexMatrix ginibre(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

HermitianMatrix random_state(std::mt19937_64& rng, std::size_t n) {
  const auto g = ginibre(rng, n);
  HermitianMatrix rho(g * g.adjoint());
  return rho * (1.0 / rho.trace());
}

ComplexMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  auto m = ginibre(rng, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      Complex dot = 0.0;
      for (std::size_t r = 0; r < n; ++r) dot += std::conj(m(r, p)) * m(r, c);
      for (std::size_t r = 0; r < n; ++r) m(r, c) -= dot * m(r, p);
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += std::norm(m(r, c));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) m(r, c) /= norm;
  }
  return m;
}

CheckResult check_divergences(Context&) {
  CheckResult r{8, "divergence properties on 1000 random state pairs", false, {}, 0.0};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_order = 0.0, worst_self = 0.0, worst_unitary = 0.0, worst_qc = 0.0;
  HermitianMatrix prev_rho, prev_sigma;
  double prev_d = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = i < 500 ? 4 : 6;
    const auto rho = random_state(rng, n);
    const auto sigma = random_state(rng, n);
    const double d = dmax(rho, sigma);
    const double s = relative_entropy(rho, sigma);
    worst_order = std::max(worst_order, s - d);
    worst_self = std::max(worst_self, std::abs(dmax(rho, rho)));
    const auto u = random_unitary(rng, n);
    worst_unitary = std::max(worst_unitary, std::abs(dmax(conjugate(rho, u), conjugate(sigma, u)) - d));
    if (prev_rho.dim() == n) {
      const double p = unit(rng);
      const double mixed = dmax(p * rho + (1.0 - p) * prev_rho, p * sigma + (1.0 - p) * prev_sigma);
      worst_qc = std::max(worst_qc, mixed - std::max(d, prev_d));
    }
    prev_rho = rho;
    prev_sigma = sigma;
    prev_d = d;
  }
  r.passed = worst_order <= 1e-9 && worst_self <= 1e-10 && worst_unitary <= 1e-9 && worst_qc <= 1e-9;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "max S - D_max %.3g, max |D_max(rho||rho)| %.3g, unitary drift %.3g, "
                "quasi-convexity excess %.3g",
                worst_order, worst_self, worst_unitary, worst_qc);
  r.detail = buf;
  return r;
}

CheckResult check_reduced(Context& ctx) {
  CheckResult r{9, "reduced phase-covariant search = SDP", false, {}, 0.0};
  double dev = 0.0;
  for (auto kind : {ChannelKind::AmplitudeDamping, ChannelKind::Dephasing, ChannelKind::Depolarizing})
    for (double l : {0.1, 0.5, 0.9}) {
      const double reduced = emax::emax_reduced(channels::make_channel(kind, l)).value;
      dev = std::max(dev, std::abs(reduced - ctx.memo.sigma(kind, l)));
    }
  r.passed = dev <= 1e-3;
  r.detail = fmt("max deviation %.3g over 9 channels", dev);
  return r;
}

CheckResult check_strong_converse(Context&) {
  CheckResult r{10, "strong converse error tends to 1 exponentially", false, {}, 0.0};
  const double e = 0.25, rate = 1.25, c = 2.0;
  const double at2 = network::strong_converse_error(rate, 2.0, e, c);
  bool increasing = true;
  double prev = network::strong_converse_error(rate, 1.0, e, c);
  for (int n = 2; n <= 60; ++n) {
    const double v = network::strong_converse_error(rate, n, e, c);
    increasing = increasing && v > prev;
    prev = v;
  }
  r.passed = std::abs(at2 - 0.5) <= 1e-12 && increasing && prev > 1.0 - 1e-9;
  r.detail = fmt("value at N=2 %.12f, at N=60 1 - %.3g", at2, 1.0 - prev) +
             (increasing ? "" : ", not strictly increasing");
  return r;
}

constexpr Check kChecks[kCheckCount] = {
    check_ad_sigma,   check_ad_lower,    check_ad_upper, check_simulable_equality,
    check_ordering,   check_mu_sweep,    check_min_cut,  check_divergences,
    check_reduced,    check_strong_converse,
};

}  // namespace

Oracles::Oracles()
    : ad_emax([](double l) { return std::log2(2.0 - l); }),
      ad_lower([](double l) {
        if (l <= (std::sqrt(5.0) - 1.0) / 2.0) return 2.0 * std::log2(1.0 + std::sqrt(1.0 - l)) - 1.0;
        return std::log2(1.0 + l) - std::log2(2.0 * l);
      }) {}

std::vector<CheckResult> run_checks(const std::vector<int>& ids, const Oracles& oracles) {
  std::vector<int> selected = ids;
  if (selected.empty())
    for (int i = 1; i <= kCheckCount; ++i) selected.push_back(i);
  std::sort(selected.begin(), selected.end());
  Context ctx{oracles, {}};
  std::vector<CheckResult> out;
  for (int id : selected) {
    if (id < 1 || id > kCheckCount) {
      throw Error(ErrorCode::InvalidArgument, "acceptance: no check " + std::to_string(id));
    }
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    try {
      res = kChecks[id - 1](ctx);
    } catch (const std::exception& e) {
      res = {id, "check " + std::to_string(id), false, std::string("exception: ") + e.what(), 0.0};
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(res));
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

void print_report(std::ostream& out, const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", r.seconds);
    out << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail
        << " (" << secs << " s)\n";
  }
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  out << passed << "/" << results.size() << " checks passed\n";
}

}  // namespace netbound::acceptance
