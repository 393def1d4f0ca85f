#include <doctest.h>

#include <cmath>

#include "netbound/channels.hpp"
#include "netbound/emax.hpp"
#include "netbound/error.hpp"
#include "oracles.hpp"

using namespace netbound;
using channels::ChannelKind;

namespace {

channels::Channel ch(ChannelKind k, double p) { return channels::make_channel(k, p); }

double f_oracle(double l) {
  if (l <= (std::sqrt(5.0) - 1.0) / 2.0) return 2.0 * std::log2(1.0 + std::sqrt(1.0 - l)) - 1.0;
  return std::log2((1.0 + l) / (2.0 * l));
}

}  // namespace

TEST_CASE("sigma program") {
  CHECK(emax::emax_sigma_sdp(ch(ChannelKind::AmplitudeDamping, 0.5)).value ==
        doctest::Approx(std::log2(1.5)).epsilon(1e-7));
  CHECK(emax::emax_sigma_sdp(ch(ChannelKind::AmplitudeDamping, 0.0)).value ==
        doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(emax::emax_sigma_sdp(ch(ChannelKind::Depolarizing, 0.7)).value) <= 1e-6);
  CHECK(emax::emax_sigma_sdp(ch(ChannelKind::Erasure, 0.0)).value == doctest::Approx(1.0).epsilon(1e-7));
  const auto r = emax::emax_sigma_sdp(ch(ChannelKind::Dephasing, 0.3));
  CHECK(r.method == emax::Method::SigmaSdp);
  CHECK(r.solver_gap <= 1e-9);
}

TEST_CASE("lower program") {
  CHECK(emax::emax_lower_sdp(ch(ChannelKind::AmplitudeDamping, 0.3)).value ==
        doctest::Approx(f_oracle(0.3)).epsilon(1e-7));
  CHECK(emax::emax_lower_sdp(ch(ChannelKind::AmplitudeDamping, 0.0)).value ==
        doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(emax::emax_lower_sdp(ch(ChannelKind::Dephasing, 0.5)).value -
                 emax::emax_sigma_sdp(ch(ChannelKind::Dephasing, 0.5)).value) <= 1e-4);
}

TEST_CASE("marginal-constrained program") {
  CHECK(emax::emax_upper_marginal_sdp(ch(ChannelKind::AmplitudeDamping, 0.5)).value ==
        doctest::Approx(std::log2(1.5)).epsilon(1e-7));
  CHECK(std::abs(emax::emax_upper_marginal_sdp(ch(ChannelKind::AmplitudeDamping, 1.0)).value) <= 1e-7);
  for (auto k : {ChannelKind::Dephasing, ChannelKind::Erasure, ChannelKind::Depolarizing})
    for (double l : {0.2, 0.6}) {
      CHECK(emax::emax_upper_marginal_sdp(ch(k, l)).value >= emax::emax_lower_sdp(ch(k, l)).value - 1e-6);
    }
}

TEST_CASE("amplitude damping sandwich and monotonicity") {
  double prev = INFINITY;
  for (int i = 0; i <= 10; ++i) {
    const double l = i / 10.0;
    const auto c = ch(ChannelKind::AmplitudeDamping, l);
    const double lower = emax::emax_lower_sdp(c).value;
    const double sigma = emax::emax_sigma_sdp(c).value;
    const double upper = emax::emax_upper_marginal_sdp(c).value;
    CHECK(channels::ad_lower_closed(l) - 1e-4 <= lower);
    CHECK(lower <= sigma + 1e-8);
    CHECK(sigma <= upper + 1e-4);
    CHECK(sigma <= prev + 1e-8);
    prev = sigma;
  }
}

TEST_CASE("unsupported dimensions") {
  std::vector<ComplexMatrix> wide{ComplexMatrix(4, 2)};
  wide[0](0, 0) = 1.0;
  wide[0](1, 1) = 1.0;
  const auto iso = channels::make_custom_channel(wide, false);
  try {
    emax::emax_sigma_sdp(iso);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedDims);
  }
  CHECK_THROWS_AS(emax::emax_lower_sdp(iso), Error);
  CHECK_THROWS_AS(emax::emax_upper_marginal_sdp(iso), Error);
}

TEST_CASE("phase-covariant separable family") {
  emax::PhaseCovariantSeparable s{0.7, 0.3, 0.6, 0.4, 0.4, 1.1};
  CHECK(s.valid());
  const auto m = s.matrix();
  CHECK(m.trace() == doctest::Approx(1.0));
  CHECK(min_eigenvalue(m) >= -1e-12);
  CHECK(min_eigenvalue(partial_transpose(m, 2, 2)) >= -1e-12);
  emax::PhaseCovariantSeparable bad{0.7, 0.3, 0.6, 0.4, 0.6, 0.0};
  CHECK_FALSE(bad.valid());
}

TEST_CASE("reduced search") {
  CHECK(emax::emax_reduced(ch(ChannelKind::AmplitudeDamping, 0.5), emax::ReducedVariant::UpperMarginal).value ==
        doctest::Approx(std::log2(1.5)).epsilon(1e-3));
  CHECK(emax::emax_reduced(ch(ChannelKind::AmplitudeDamping, 0.8), emax::ReducedVariant::Lower).value ==
        doctest::Approx(std::log2(1.125)).epsilon(1e-3));
  const auto id = emax::emax_reduced(ch(ChannelKind::Dephasing, 0.0));
  CHECK(id.value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(id.method == emax::Method::Reduced);
  try {
    emax::emax_reduced(ch(ChannelKind::Erasure, 0.5));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedKind);
  }
}

TEST_CASE("parallel and serial searches agree exactly") {
  const auto pi = channels::choi(ch(ChannelKind::AmplitudeDamping, 0.35)).matrix();
  const emax::StateObjective f = [&](const HermitianMatrix& s) { return dmax(pi, s); };
  emax::ReducedOptions opts;
  opts.starts = 12;
  for (auto v : {emax::ReducedVariant::Lower, emax::ReducedVariant::UpperMarginal}) {
    const auto a = emax::minimize_phase_covariant(f, v, opts);
    const auto b = emax::minimize_phase_covariant_serial(f, v, opts);
    CHECK(a.value == b.value);
    CHECK(a.best_start == b.best_start);
    CHECK(a.sigma.valid(1e-9));
  }
}

TEST_CASE("closed-form E_R matches a numeric relative-entropy minimization") {
  // For these channels the closest separable state lies in the reduced family.
  emax::ReducedOptions opts;
  opts.starts = 8;
  for (auto [kind, l] : {std::pair{ChannelKind::Depolarizing, 0.2}, std::pair{ChannelKind::Depolarizing, 0.5},
                         std::pair{ChannelKind::Dephasing, 0.5}}) {
    const auto pi = channels::choi(ch(kind, l)).matrix();
    const auto r = emax::minimize_phase_covariant(
        [&](const HermitianMatrix& s) { return relative_entropy(pi, s); }, emax::ReducedVariant::Lower, opts);
    CHECK(r.value == doctest::Approx(channels::closed_form_measures(kind, l).e_r->bits).epsilon(1e-5));
  }
}
