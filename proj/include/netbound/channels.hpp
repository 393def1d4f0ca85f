#pragma once

// Qubit channels with Kraus representations, their normalized Choi states,
// and the closed-form entanglement quantities known for them.

#include <optional>
#include <string_view>
#include <vector>

#include "netbound/linalg.hpp"

namespace netbound::channels {

enum class ChannelKind { AmplitudeDamping, Dephasing, Erasure, Depolarizing, Custom };

std::string_view to_string(ChannelKind kind);
/// Accepts the snake_case names used on the command line and in network files.
std::optional<ChannelKind> parse_kind(std::string_view name);

struct Channel {
  ChannelKind kind = ChannelKind::Custom;
  double param = 0.0;  // lambda or x; unused for Custom
  std::vector<ComplexMatrix> kraus;  // each dim_out x dim_in
  std::size_t dim_in = 0;
  std::size_t dim_out = 0;
  bool choi_simulable = false;
};

/// Built-in channels. Erasure maps into a qutrit whose third basis vector is
/// the erasure flag. Throws InvalidArgument when param is outside [0, 1].
Channel make_channel(ChannelKind kind, double param);

/// Arbitrary Kraus list; rejects ragged shapes and non trace-preserving sets.
Channel make_custom_channel(std::vector<ComplexMatrix> kraus, bool choi_simulable);

/// max |sum K^dagger K - I|.
double trace_preservation_error(const Channel& channel);

HermitianMatrix apply(const Channel& channel, const HermitianMatrix& rho);

/// (1 (x) N)[psi] with psi maximally entangled on dim_in x dim_in.
BipartiteState choi(const Channel& channel);

enum class MeasureMethod { ClosedForm, Sdp, Reduced, Override };
std::string_view to_string(MeasureMethod method);

struct MeasureValue {
  double bits = 0.0;
  MeasureMethod method = MeasureMethod::ClosedForm;
};

struct ChannelMeasures {
  std::optional<MeasureValue> e_r;
  std::optional<MeasureValue> e_max;
  std::optional<MeasureValue> e_sq_ub;  // best known upper bound on squashed entanglement
  bool choi_simulable = false;
};

/// h(y) with h(0) = h(1) = 0.
double binary_entropy(double y);

/// Fills only the fields with a known closed form for `kind`; Custom gets none.
ChannelMeasures closed_form_measures(ChannelKind kind, double param);

/// Analytic value of min over separable sigma of D_max(pi_AD || sigma) for
/// amplitude damping, piecewise with breakpoint (sqrt 5 - 1) / 2.
double ad_lower_closed(double lambda);

/// Whether choi_simulable is fixed by the kind (true for the Pauli-like and
/// erasure channels, false for amplitude damping).
bool default_choi_simulable(ChannelKind kind);

}  // namespace netbound::channels
