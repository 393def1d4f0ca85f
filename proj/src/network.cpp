#include "netbound/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <unordered_set>

#include "netbound/emax.hpp"
#include "netbound/error.hpp"

namespace netbound::network {

namespace {

std::string edge_label(std::size_t index, const Edge& e) {
  return "edge " + std::to_string(index) + " (" + e.from + "->" + e.to + ", " +
         std::string(channels::to_string(e.channel.kind)) + ")";
}

}  // namespace

NetworkGraph::NetworkGraph(std::vector<std::string> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::unordered_set<std::string> seen;
  for (const auto& n : nodes_) {
    if (n.empty()) throw Error(ErrorCode::InvalidArgument, "network: empty node name");
    if (!seen.insert(n).second) {
      throw Error(ErrorCode::InvalidArgument, "network: duplicate node '" + n + "'");
    }
    if (n != kAlice && n != kBob) intermediates_.push_back(n);
  }
  if (!seen.count(std::string(kAlice)) || !seen.count(std::string(kBob))) {
    throw Error(ErrorCode::InvalidArgument, "network: nodes must include A and B");
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (!seen.count(e.from) || !seen.count(e.to)) {
      throw Error(ErrorCode::InvalidArgument, edge_label(i, e) + ": unknown endpoint");
    }
    if (!std::isfinite(e.avg_uses) || e.avg_uses < 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  edge_label(i, e) + ": avg_uses must be finite and non-negative");
    }
    for (const auto& v : {e.overrides.e_r, e.overrides.e_max, e.overrides.e_sq_ub}) {
      if (v && (!std::isfinite(*v) || *v < 0.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    edge_label(i, e) + ": overrides must be finite and non-negative");
      }
    }
  }
}

std::optional<std::size_t> NetworkGraph::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i] == name) return i;
  return std::nullopt;
}

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::ER: return "e_r";
    case Measure::Emax: return "e_max";
    case Measure::EsqUb: return "e_sq_ub";
  }
  return "e_r";
}

std::string_view to_string(ProfileKind kind) {
  return kind == ProfileKind::ErVersatile ? "er_versatile" : "emax";
}

double MeasureCache::sdp_emax(const channels::Channel& channel) {
  if (channel.kind == channels::ChannelKind::Custom) {
    return emax::emax_sigma_sdp(channel).value;
  }
  const auto key = std::make_pair(static_cast<int>(channel.kind),
                                  static_cast<std::int64_t>(std::llround(channel.param * 1e12)));
  Slot* slot = nullptr;
  {
    std::lock_guard lock(mutex_);
    auto& p = slots_[key];
    if (!p) p = std::make_unique<Slot>();
    slot = p.get();
  }
  std::call_once(slot->once, [&] { slot->value = emax::emax_sigma_sdp(channel).value; });
  return slot->value;
}

std::size_t MeasureCache::size() const {
  std::lock_guard lock(mutex_);
  return slots_.size();
}

Evaluator::Evaluator(const NetworkGraph& graph, MeasureCache& cache)
    : graph_(graph), cache_(cache) {}

std::optional<double> Evaluator::try_measure(std::size_t edge, Measure m) const {
  const Edge& e = graph_.edges().at(edge);
  const auto& ov = e.overrides;
  switch (m) {
    case Measure::ER:
      if (ov.e_r) return ov.e_r;
      break;
    case Measure::Emax:
      if (ov.e_max) return ov.e_max;
      break;
    case Measure::EsqUb:
      if (ov.e_sq_ub) return ov.e_sq_ub;
      break;
  }
  const auto closed = channels::closed_form_measures(e.channel.kind, e.channel.param);
  const auto& value = m == Measure::ER ? closed.e_r : m == Measure::Emax ? closed.e_max : closed.e_sq_ub;
  if (value) return value->bits;
  if (m == Measure::Emax && e.channel.dim_in == 2 &&
      (e.channel.dim_out == 2 || e.channel.dim_out == 3)) {
    return cache_.sdp_emax(e.channel);
  }
  return std::nullopt;
}

double Evaluator::measure(std::size_t edge, Measure m) const {
  if (auto v = try_measure(edge, m)) return *v;
  throw Error(ErrorCode::MissingMeasure, edge_label(edge, graph_.edges().at(edge)) + ": no " +
                                             std::string(to_string(m)) + " value available");
}

double Evaluator::versatile_weight(std::size_t edge) const {
  const bool simulable = graph_.edges().at(edge).channel.choi_simulable;
  return measure(edge, simulable ? Measure::ER : Measure::Emax);
}

double Evaluator::weight(std::size_t edge, const Policy& policy) const {
  return policy.kind == Policy::Kind::Versatile ? versatile_weight(edge)
                                                : measure(edge, policy.measure);
}

namespace {

// side[i] is true when node i sits with A.
std::vector<bool> sides(const NetworkGraph& graph, const Cut& cut) {
  std::vector<bool> side(graph.nodes().size(), false);
  side[*graph.index_of(kAlice)] = true;
  for (const auto& name : cut.c_a) {
    auto idx = graph.index_of(name);
    if (!idx) throw Error(ErrorCode::InvalidArgument, "cut: unknown node '" + name + "'");
    if (name == kAlice || name == kBob) {
      throw Error(ErrorCode::InvalidArgument, "cut: A and B cannot be listed in C_A");
    }
    side[*idx] = true;
  }
  return side;
}

std::vector<std::size_t> crossing(const NetworkGraph& graph, const std::vector<bool>& side,
                                  const std::vector<std::size_t>& from,
                                  const std::vector<std::size_t>& to) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < graph.edges().size(); ++i)
    if (side[from[i]] != side[to[i]]) out.push_back(i);
  return out;
}

struct EdgeIndex {
  std::vector<std::size_t> from, to;
  explicit EdgeIndex(const NetworkGraph& g) {
    for (const auto& e : g.edges()) {
      from.push_back(*g.index_of(e.from));
      to.push_back(*g.index_of(e.to));
    }
  }
};

}  // namespace

std::vector<std::size_t> cut_edges(const NetworkGraph& graph, const Cut& cut) {
  const EdgeIndex idx(graph);
  return crossing(graph, sides(graph, cut), idx.from, idx.to);
}

double cut_entanglement(const Evaluator& eval, const Cut& cut, const Policy& policy) {
  double total = 0.0;
  for (std::size_t i : cut_edges(eval.graph(), cut)) {
    const double m = eval.graph().edges()[i].avg_uses;
    if (m == 0.0) continue;
    total += m * eval.weight(i, policy);
  }
  return total;
}

double mu_tilde(const Evaluator& eval, const Cut& cut) {
  const double sq = cut_entanglement(eval, cut, Policy::single(Measure::EsqUb));
  const double ev = cut_entanglement(eval, cut, Policy::versatile());
  if (sq + ev == 0.0) return 0.0;
  return (sq - ev) / (sq + ev);
}

ContinuityProfile ContinuityProfile::er_versatile(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "continuity profile: epsilon must lie in [0, 1)");
  }
  return {ProfileKind::ErVersatile, epsilon, 2.0 * channels::binary_entropy(epsilon),
          1.0 - 8.0 * epsilon};
}

ContinuityProfile ContinuityProfile::emax(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "continuity profile: epsilon must lie in [0, 1)");
  }
  return {ProfileKind::Emax, epsilon, -2.0 * std::log2(1.0 - epsilon / 2.0), 1.0};
}

double ebit_upper_bound(double e_cut, const ContinuityProfile& profile) {
  if (!(profile.g > 0.0)) return std::numeric_limits<double>::infinity();
  return (profile.f + e_cut) / profile.g;
}

CutBound evaluate_cut(const Evaluator& eval, const Cut& cut, double epsilon) {
  CutBound out;
  out.cut = cut;
  out.crossing_edges = cut_edges(eval.graph(), cut);

  const auto attempt = [&](const Policy& p) -> std::optional<double> {
    try {
      return cut_entanglement(eval, cut, p);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::MissingMeasure) return std::nullopt;
      throw;
    }
  };
  out.e_versatile = attempt(Policy::versatile());
  for (Measure m : {Measure::ER, Measure::Emax, Measure::EsqUb}) {
    if (auto v = attempt(Policy::single(m))) out.e_by_measure[m] = *v;
  }
  if (out.e_versatile && out.e_by_measure.count(Measure::EsqUb)) {
    const double sq = out.e_by_measure[Measure::EsqUb];
    const double ev = *out.e_versatile;
    out.mu = sq + ev == 0.0 ? 0.0 : (sq - ev) / (sq + ev);
  }
  if (out.e_versatile) {
    const auto p = ContinuityProfile::er_versatile(epsilon);
    out.ebit_bounds.push_back({p.kind, epsilon, ebit_upper_bound(*out.e_versatile, p)});
  }
  if (auto it = out.e_by_measure.find(Measure::Emax); it != out.e_by_measure.end()) {
    const auto p = ContinuityProfile::emax(epsilon);
    out.ebit_bounds.push_back({p.kind, epsilon, ebit_upper_bound(it->second, p)});
  }
  return out;
}

std::vector<Cut> all_cuts(const NetworkGraph& graph) {
  const auto& mids = graph.intermediates();
  if (mids.size() > 28) {
    throw Error(ErrorCode::TooLarge, "cut enumeration: more than 28 intermediate nodes");
  }
  std::vector<Cut> cuts;
  const std::uint64_t count = std::uint64_t{1} << mids.size();
  cuts.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Cut c;
    for (std::size_t i = 0; i < mids.size(); ++i)
      if (mask >> i & 1U) c.c_a.push_back(mids[i]);
    cuts.push_back(std::move(c));
  }
  return cuts;
}

namespace {

constexpr double kFlowEpsilon = 1e-12;

// Weight per edge; self-loops never cross and zero-use edges never count.
std::vector<double> edge_weights(const Evaluator& eval, const Policy& policy,
                                 const EdgeIndex& idx) {
  const auto& edges = eval.graph().edges();
  std::vector<double> w(edges.size(), 0.0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (idx.from[i] == idx.to[i] || edges[i].avg_uses == 0.0) continue;
    w[i] = edges[i].avg_uses * eval.weight(i, policy);
  }
  return w;
}

MinCutResult exhaustive(const Evaluator& eval, const Policy& policy) {
  const auto& g = eval.graph();
  const auto& mids = g.intermediates();
  if (mids.size() > 28) {
    throw Error(ErrorCode::TooLarge, "exhaustive min-cut: more than 28 intermediate nodes");
  }
  const EdgeIndex idx(g);
  const auto w = edge_weights(eval, policy, idx);

  // Bit position of each node in the mask; A and B are fixed.
  const std::size_t n = g.nodes().size();
  std::vector<int> bit(n, -1);
  for (std::size_t i = 0; i < mids.size(); ++i) bit[*g.index_of(mids[i])] = static_cast<int>(i);
  const std::size_t a = *g.index_of(kAlice);
  const auto on_a = [&](std::size_t node, std::uint64_t mask) {
    return node == a || (bit[node] >= 0 && (mask >> bit[node] & 1U));
  };

  std::uint64_t best_mask = 0;
  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t count = std::uint64_t{1} << mids.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double total = 0.0;
    for (std::size_t e = 0; e < w.size(); ++e)
      if (w[e] != 0.0 && on_a(idx.from[e], mask) != on_a(idx.to[e], mask)) total += w[e];
    if (total < best) {
      best = total;
      best_mask = mask;
    }
  }
  MinCutResult r;
  r.value = best;
  for (std::size_t i = 0; i < mids.size(); ++i)
    if (best_mask >> i & 1U) r.cut.c_a.push_back(mids[i]);
  return r;
}

MinCutResult max_flow(const Evaluator& eval, const Policy& policy) {
  const auto& g = eval.graph();
  const EdgeIndex idx(g);
  const auto w = edge_weights(eval, policy, idx);
  const std::size_t n = g.nodes().size();
  std::vector<std::vector<double>> residual(n, std::vector<double>(n, 0.0));
  for (std::size_t e = 0; e < w.size(); ++e) {
    residual[idx.from[e]][idx.to[e]] += w[e];
    residual[idx.to[e]][idx.from[e]] += w[e];
  }
  const std::size_t s = *g.index_of(kAlice);
  const std::size_t t = *g.index_of(kBob);

  const auto bfs = [&](std::vector<std::size_t>& parent) {
    parent.assign(n, n);
    parent[s] = s;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v = 0; v < n; ++v) {
        if (parent[v] == n && residual[u][v] > kFlowEpsilon) {
          parent[v] = u;
          q.push(v);
        }
      }
    }
  };

  std::vector<std::size_t> parent;
  for (;;) {
    bfs(parent);
    if (parent[t] == n) break;
    double push = std::numeric_limits<double>::infinity();
    for (std::size_t v = t; v != s; v = parent[v]) push = std::min(push, residual[parent[v]][v]);
    for (std::size_t v = t; v != s; v = parent[v]) {
      residual[parent[v]][v] -= push;
      residual[v][parent[v]] += push;
    }
  }

  MinCutResult r;
  for (const auto& name : g.intermediates())
    if (parent[*g.index_of(name)] != n) r.cut.c_a.push_back(name);
  // Report the cut's own weight rather than the accumulated flow.
  r.value = 0.0;
  std::vector<bool> side(n, false);
  for (std::size_t v = 0; v < n; ++v) side[v] = parent[v] != n;
  for (std::size_t e = 0; e < w.size(); ++e)
    if (side[idx.from[e]] != side[idx.to[e]]) r.value += w[e];
  return r;
}

}  // namespace

MinCutResult min_cut(const Evaluator& eval, const Policy& policy, MinCutMethod method) {
  if (method == MinCutMethod::Auto) {
    method = eval.graph().intermediates().size() <= 20 ? MinCutMethod::Exhaustive
                                                       : MinCutMethod::MaxFlow;
  }
  return method == MinCutMethod::Exhaustive ? exhaustive(eval, policy) : max_flow(eval, policy);
}

double strong_converse_error(double rate, double n_uses, double e_channel, double c) {
  if (!std::isfinite(rate) || !std::isfinite(e_channel) || !(n_uses > 0.0) || !(c > 0.0) ||
      !std::isfinite(n_uses) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument,
                "strong_converse_error: need finite rate and e, positive n and c");
  }
  return std::max(0.0, 1.0 - std::exp2(-(n_uses / c) * (rate - e_channel)));
}

}  // namespace netbound::network
