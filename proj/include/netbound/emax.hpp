#pragma once

// Max-relative entropy of entanglement of qubit channels.
//
// Three semidefinite programs over the PPT cone (exact for 2x2 and 2x3
// Choi states) plus a direct search over the phase-covariant separable
// family, which is sufficient whenever the Choi state is invariant under
// exp(i t Z/2) (x) exp(-i t Z/2).

#include <cstdint>
#include <functional>

#include "netbound/channels.hpp"
#include "netbound/linalg.hpp"
#include "netbound/sdp.hpp"

namespace netbound::emax {

enum class Method { SigmaSdp, LowerSdp, UpperMarginalSdp, Reduced };
std::string_view to_string(Method method);

struct EmaxResult {
  double value = 0.0;  // bits
  Method method = Method::SigmaSdp;
  double solver_gap = 0.0;
};

/// log2 of min ||Tr_B Y||_inf over PPT Y with Y >= d * pi. Equals E_max of the
/// channel. Requires dim_in == 2 and dim_out in {2, 3}; throws UnsupportedDims
/// otherwise.
EmaxResult emax_sigma_sdp(const channels::Channel& channel, const sdp::Options& options = {});

/// log2 of min Tr Y over PPT Y >= pi, i.e. E_max of the Choi state.
EmaxResult emax_lower_sdp(const channels::Channel& channel, const sdp::Options& options = {});

/// As the lower program with the extra constraint Tr_B Y = c * I_A; returns log2(d * c).
EmaxResult emax_upper_marginal_sdp(const channels::Channel& channel,
                                   const sdp::Options& options = {});

/// Two-qubit separable state invariant under the phase rotation:
///
///   sigma = 1/2 [[alpha, 0, 0, xi e^{i phi}],
///                [0, gamma, 0, 0],
///                [0, 0, delta, 0],
///                [xi e^{-i phi}, 0, 0, beta]]
///
/// with alpha + beta + gamma + delta = 2 and 0 <= xi <= min(sqrt(alpha beta), sqrt(gamma delta)).
struct PhaseCovariantSeparable {
  double alpha = 0.5, beta = 0.5, gamma = 0.5, delta = 0.5, xi = 0.0, phi = 0.0;

  HermitianMatrix matrix() const;
  bool valid(double tol = 1e-12) const;
};

enum class ReducedVariant {
  Lower,          // all separable states
  UpperMarginal,  // additionally Tr_B sigma = I/2 (gamma = 1 - alpha, delta = 1 - beta)
};

struct ReducedOptions {
  int starts = 64;
  std::uint64_t seed = 0x9E3779B97F4A7C15ULL;
  double tolerance = 1e-8;  // per line search
  int max_sweeps = 200;
  int random_directions = 3;  // extra line searches per sweep
};

struct ReducedOutcome {
  double value = 0.0;
  PhaseCovariantSeparable sigma;
  int best_start = -1;
};

using StateObjective = std::function<double(const HermitianMatrix& sigma)>;

/// Multi-start local search, starts distributed over OpenMP threads. The
/// result equals minimize_phase_covariant_serial for the same options.
ReducedOutcome minimize_phase_covariant(const StateObjective& objective, ReducedVariant variant,
                                        const ReducedOptions& options = {});

/// Single-threaded reference implementation of the same search.
ReducedOutcome minimize_phase_covariant_serial(const StateObjective& objective,
                                               ReducedVariant variant,
                                               const ReducedOptions& options = {});

/// min D_max(pi || sigma) over the reduced family. Throws UnsupportedKind for
/// erasure and custom channels.
EmaxResult emax_reduced(const channels::Channel& channel, ReducedVariant variant,
                        const ReducedOptions& options = {});

/// Lower variant for Choi-simulable channels (where it equals E_max), the
/// marginal-constrained upper variant otherwise.
EmaxResult emax_reduced(const channels::Channel& channel, const ReducedOptions& options = {});

}  // namespace netbound::emax
