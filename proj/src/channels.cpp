#include "netbound/channels.hpp"

#include <cmath>
#include <string>

#include "netbound/error.hpp"

namespace netbound::channels {

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::AmplitudeDamping: return "amplitude_damping";
    case ChannelKind::Dephasing: return "dephasing";
    case ChannelKind::Erasure: return "erasure";
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::Custom: return "custom";
  }
  return "custom";
}

std::optional<ChannelKind> parse_kind(std::string_view name) {
  for (auto k : {ChannelKind::AmplitudeDamping, ChannelKind::Dephasing, ChannelKind::Erasure,
                 ChannelKind::Depolarizing, ChannelKind::Custom}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(MeasureMethod method) {
  switch (method) {
    case MeasureMethod::ClosedForm: return "closed_form";
    case MeasureMethod::Sdp: return "sdp";
    case MeasureMethod::Reduced: return "reduced";
    case MeasureMethod::Override: return "override";
  }
  return "closed_form";
}

namespace {

void check_param(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + ": parameter must lie in [0, 1], got " + std::to_string(p));
  }
}

}  // namespace

bool default_choi_simulable(ChannelKind kind) {
  return kind == ChannelKind::Dephasing || kind == ChannelKind::Erasure ||
         kind == ChannelKind::Depolarizing;
}

Channel make_channel(ChannelKind kind, double param) {
  if (kind == ChannelKind::Custom) {
    throw Error(ErrorCode::InvalidArgument, "make_channel: custom channels need a Kraus list");
  }
  check_param(param, "make_channel");
  Channel ch;
  ch.kind = kind;
  ch.param = param;
  ch.dim_in = 2;
  ch.dim_out = 2;
  ch.choi_simulable = default_choi_simulable(kind);

  switch (kind) {
    case ChannelKind::AmplitudeDamping:
      ch.kraus = {ComplexMatrix{{1.0, 0.0}, {0.0, std::sqrt(1.0 - param)}},
                  ComplexMatrix{{0.0, std::sqrt(param)}, {0.0, 0.0}}};
      break;
    case ChannelKind::Dephasing: {
      const double a = std::sqrt(1.0 - param / 2.0);
      const double b = std::sqrt(param / 2.0);
      ch.kraus = {ComplexMatrix{{a, 0.0}, {0.0, a}}, ComplexMatrix{{b, 0.0}, {0.0, -b}}};
      break;
    }
    case ChannelKind::Depolarizing: {
      const double a = std::sqrt(1.0 - param);
      const double b = std::sqrt(param / 2.0);
      ch.kraus.push_back(ComplexMatrix{{a, 0.0}, {0.0, a}});
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
          ComplexMatrix k(2, 2);
          k(i, j) = b;
          ch.kraus.push_back(k);
        }
      break;
    }
    case ChannelKind::Erasure: {
      ch.dim_out = 3;
      const double a = std::sqrt(1.0 - param);
      const double b = std::sqrt(param);
      ComplexMatrix keep(3, 2);
      keep(0, 0) = a;
      keep(1, 1) = a;
      ComplexMatrix lose0(3, 2), lose1(3, 2);
      lose0(2, 0) = b;
      lose1(2, 1) = b;
      ch.kraus = {keep, lose0, lose1};
      break;
    }
    case ChannelKind::Custom: break;
  }
  return ch;
}

double trace_preservation_error(const Channel& channel) {
  ComplexMatrix sum(channel.dim_in, channel.dim_in);
  for (const auto& k : channel.kraus) sum += k.adjoint() * k;
  return (sum - ComplexMatrix::identity(channel.dim_in)).max_abs();
}

Channel make_custom_channel(std::vector<ComplexMatrix> kraus, bool choi_simulable) {
  if (kraus.empty()) throw Error(ErrorCode::InvalidArgument, "custom channel: empty Kraus list");
  Channel ch;
  ch.kind = ChannelKind::Custom;
  ch.dim_out = kraus.front().rows();
  ch.dim_in = kraus.front().cols();
  if (ch.dim_in == 0 || ch.dim_out == 0) {
    throw Error(ErrorCode::InvalidArgument, "custom channel: empty Kraus operator");
  }
  for (const auto& k : kraus) {
    if (k.rows() != ch.dim_out || k.cols() != ch.dim_in) {
      throw Error(ErrorCode::DimensionMismatch, "custom channel: Kraus operators differ in shape");
    }
  }
  ch.kraus = std::move(kraus);
  ch.choi_simulable = choi_simulable;
  if (trace_preservation_error(ch) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "custom channel: Kraus set is not trace preserving");
  }
  return ch;
}

HermitianMatrix apply(const Channel& channel, const HermitianMatrix& rho) {
  if (rho.dim() != channel.dim_in) {
    throw Error(ErrorCode::DimensionMismatch, "apply: input dimension mismatch");
  }
  ComplexMatrix out(channel.dim_out, channel.dim_out);
  for (const auto& k : channel.kraus) out += k * rho.matrix() * k.adjoint();
  return HermitianMatrix(out);
}

BipartiteState choi(const Channel& channel) {
  const std::size_t d = channel.dim_in;
  const std::size_t dout = channel.dim_out;
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  ComplexMatrix acc(d * dout, d * dout);
  std::vector<Complex> v(d * dout);
  for (const auto& k : channel.kraus) {
    // (1 (x) K) |Phi>, |Phi> = sum_i |i>|i> / sqrt(d).
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t b = 0; b < dout; ++b) v[i * dout + b] = k(b, i) * norm;
    for (std::size_t r = 0; r < v.size(); ++r)
      for (std::size_t c = 0; c < v.size(); ++c) acc(r, c) += v[r] * std::conj(v[c]);
  }
  return BipartiteState::density(HermitianMatrix(acc), d, dout);
}

double binary_entropy(double y) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "binary_entropy: argument outside [0, 1]");
  }
  if (y == 0.0 || y == 1.0) return 0.0;
  return -y * std::log2(y) - (1.0 - y) * std::log2(1.0 - y);
}

double ad_lower_closed(double lambda) {
  check_param(lambda, "ad_lower_closed");
  const double breakpoint = (std::sqrt(5.0) - 1.0) / 2.0;
  if (lambda <= breakpoint) {
    const double s = 1.0 + std::sqrt(1.0 - lambda);
    return std::log2(0.5 * s * s);
  }
  return std::log2((1.0 + lambda) / (2.0 * lambda));
}

ChannelMeasures closed_form_measures(ChannelKind kind, double param) {
  ChannelMeasures m;
  m.choi_simulable = default_choi_simulable(kind);
  if (kind == ChannelKind::Custom) return m;
  check_param(param, "closed_form_measures");
  const auto closed = [](double v) { return MeasureValue{v, MeasureMethod::ClosedForm}; };

  switch (kind) {
    case ChannelKind::Dephasing: {
      const double p = param / 2.0;
      m.e_r = closed(1.0 - binary_entropy(p));
      m.e_sq_ub = closed(binary_entropy(std::min(1.0, std::sqrt(p * (1.0 - p)) + 0.5)));
      break;
    }
    case ChannelKind::AmplitudeDamping:
      m.e_max = closed(std::log2(2.0 - param));
      m.e_sq_ub = closed(binary_entropy(0.5 - param / 4.0) - binary_entropy(1.0 - param / 4.0));
      break;
    case ChannelKind::Erasure:
      m.e_r = closed(1.0 - param);
      m.e_sq_ub = m.e_r;
      break;
    case ChannelKind::Depolarizing: {
      // Isotropic Choi state with singlet fraction 1 - 3 lambda / 4.
      const double fidelity = 1.0 - 3.0 * param / 4.0;
      m.e_r = closed(param <= 2.0 / 3.0 ? 1.0 - binary_entropy(fidelity) : 0.0);
      break;
    }
    case ChannelKind::Custom: break;
  }
  return m;
}

}  // namespace netbound::channels
