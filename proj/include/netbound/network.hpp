#pragma once

// Quantum networks as directed multigraphs of channels, and the cut bounds
// on distributable ebits built from per-channel entanglement measures.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "netbound/channels.hpp"

namespace netbound::network {

struct MeasureOverrides {
  std::optional<double> e_r;
  std::optional<double> e_max;
  std::optional<double> e_sq_ub;
};

struct Edge {
  std::string from;
  std::string to;
  channels::Channel channel;
  double avg_uses = 0.0;  // average number of uses over protocol outcomes
  MeasureOverrides overrides;
};

inline constexpr std::string_view kAlice = "A";
inline constexpr std::string_view kBob = "B";

class NetworkGraph {
 public:
  /// Validates: unique node names, "A" and "B" present, known endpoints,
  /// finite non-negative avg_uses.
  NetworkGraph(std::vector<std::string> nodes, std::vector<Edge> edges);

  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// All nodes other than A and B, in declaration order.
  const std::vector<std::string>& intermediates() const noexcept { return intermediates_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::string> intermediates_;
};

/// The intermediate nodes grouped with A; the rest go with B.
struct Cut {
  std::vector<std::string> c_a;
};

enum class Measure { ER, Emax, EsqUb };
std::string_view to_string(Measure m);

struct Policy {
  enum class Kind { Versatile, Single } kind = Kind::Versatile;
  Measure measure = Measure::ER;  // used by Single

  static Policy versatile() { return {}; }
  static Policy single(Measure m) { return {Kind::Single, m}; }
};

/// E_max values obtained from the SDP, keyed by (kind, param rounded to 1e-12).
/// Safe for concurrent use; each key is computed once.
class MeasureCache {
 public:
  double sdp_emax(const channels::Channel& channel);
  std::size_t size() const;

 private:
  struct Slot {
    std::once_flag once;
    double value = 0.0;
  };
  mutable std::mutex mutex_;
  std::map<std::pair<int, std::int64_t>, std::unique_ptr<Slot>> slots_;
};

/// Resolves per-edge measure values: override, then closed form, then (for
/// E_max on supported dimensions) the SDP.
class Evaluator {
 public:
  Evaluator(const NetworkGraph& graph, MeasureCache& cache);

  const NetworkGraph& graph() const noexcept { return graph_; }

  std::optional<double> try_measure(std::size_t edge, Measure m) const;
  /// Throws MissingMeasure naming the edge and the measure.
  double measure(std::size_t edge, Measure m) const;
  /// E_R for Choi-simulable channels, E_max otherwise.
  double versatile_weight(std::size_t edge) const;
  double weight(std::size_t edge, const Policy& policy) const;

 private:
  const NetworkGraph& graph_;
  MeasureCache& cache_;
};

/// Edges with one endpoint in {A} u C_A and the other in C_B u {B}, either
/// direction. Throws InvalidArgument for unknown nodes or A/B in the cut.
std::vector<std::size_t> cut_edges(const NetworkGraph& graph, const Cut& cut);

/// sum over crossing edges of avg_uses * weight. Edges with zero uses
/// contribute nothing and need no measure.
double cut_entanglement(const Evaluator& eval, const Cut& cut, const Policy& policy);

/// (E_sq - E') / (E_sq + E') over the cut, 0 when both sums vanish.
double mu_tilde(const Evaluator& eval, const Cut& cut);

enum class ProfileKind { ErVersatile, Emax };
std::string_view to_string(ProfileKind kind);

struct ContinuityProfile {
  ProfileKind kind = ProfileKind::Emax;
  double epsilon = 0.0;
  double f = 0.0;
  double g = 1.0;

  /// f = 2 h(eps), g = 1 - 8 eps. Throws InvalidArgument unless 0 <= eps < 1.
  static ContinuityProfile er_versatile(double epsilon);
  /// f = -2 log2(1 - eps/2), g = 1.
  static ContinuityProfile emax(double epsilon);
};

/// (f + e_cut) / g, or +infinity when g <= 0 (E_R profile with eps >= 1/8).
double ebit_upper_bound(double e_cut, const ContinuityProfile& profile);

struct EbitBound {
  ProfileKind profile;
  double epsilon;
  double value;
};

struct CutBound {
  Cut cut;
  std::vector<std::size_t> crossing_edges;
  std::optional<double> e_versatile;
  std::map<Measure, double> e_by_measure;  // only measures available on every crossing edge
  std::optional<double> mu;
  std::vector<EbitBound> ebit_bounds;
};

/// Everything computable for one cut at error epsilon.
CutBound evaluate_cut(const Evaluator& eval, const Cut& cut, double epsilon);

enum class MinCutMethod { Exhaustive, MaxFlow, Auto };

struct MinCutResult {
  Cut cut;
  double value = 0.0;
};

/// Exhaustive enumeration handles up to 28 intermediate nodes (TooLarge
/// beyond); Auto uses it up to 20 and max-flow above.
MinCutResult min_cut(const Evaluator& eval, const Policy& policy, MinCutMethod method);

/// All 2^M cuts in enumeration order (bit i of the index selects intermediate i).
std::vector<Cut> all_cuts(const NetworkGraph& graph);

/// Lower bound on eps/2 for a protocol at `rate` bits per use over n_uses
/// uses of a channel with entanglement e_channel: max(0, 1 - 2^{-(n/c)(rate - e)}).
double strong_converse_error(double rate, double n_uses, double e_channel, double c);

}  // namespace netbound::network
