#include "netbound/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "netbound/channels.hpp"
#include "netbound/emax.hpp"
#include "netbound/error.hpp"

namespace netbound::sweep {

namespace {

using channels::ChannelKind;

double mu_from(int k, double x, double ad_esq, double ad_emax) {
  const auto deph = channels::closed_form_measures(ChannelKind::Dephasing, x);
  const double sq = k * deph.e_sq_ub->bits + ad_esq;
  const double ev = k * deph.e_r->bits + ad_emax;
  if (sq + ev == 0.0) return 0.0;
  return (sq - ev) / (sq + ev);
}

}  // namespace

double mu_closed_form(int k, double x, double lambda) {
  const auto ad = channels::closed_form_measures(ChannelKind::AmplitudeDamping, lambda);
  return mu_from(k, x, ad.e_sq_ub->bits, ad.e_max->bits);
}

double mu_sdp(int k, double x, double lambda) {
  const auto ad = channels::closed_form_measures(ChannelKind::AmplitudeDamping, lambda);
  const double emax =
      emax::emax_sigma_sdp(channels::make_channel(ChannelKind::AmplitudeDamping, lambda)).value;
  return mu_from(k, x, ad.e_sq_ub->bits, emax);
}

void validate(const SweepSpec& spec) {
  if (spec.k_values.empty()) throw Error(ErrorCode::InvalidArgument, "sweep: no k values");
  for (int k : spec.k_values) {
    if (k <= 0) throw Error(ErrorCode::InvalidArgument, "sweep: k values must be positive");
  }
  if (spec.grid_points < 2) {
    throw Error(ErrorCode::InvalidArgument, "sweep: grid needs at least 2 points per axis");
  }
}

double grid_value(int i, int n) {
  if (i == n - 1) return 1.0;
  return static_cast<double>(i) / static_cast<double>(n - 1);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate(spec);
  const long n = spec.grid_points;
  const long per_k = n * n;
  const long total = per_k * static_cast<long>(spec.k_values.size());
  std::vector<SweepRow> rows(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < total; ++idx) {
    const int k = spec.k_values[static_cast<std::size_t>(idx / per_k)];
    const double x = grid_value(static_cast<int>(idx % per_k / n), static_cast<int>(n));
    const double lambda = grid_value(static_cast<int>(idx % n), static_cast<int>(n));
    rows[static_cast<std::size_t>(idx)] = {k, x, lambda, mu_closed_form(k, x, lambda)};
  }
  return rows;
}

std::vector<SweepRow> run_sweep_serial(const SweepSpec& spec) {
  validate(spec);
  std::vector<SweepRow> rows;
  rows.reserve(spec.k_values.size() * static_cast<std::size_t>(spec.grid_points) *
               static_cast<std::size_t>(spec.grid_points));
  for (int k : spec.k_values)
    for (int i = 0; i < spec.grid_points; ++i)
      for (int j = 0; j < spec.grid_points; ++j) {
        const double x = grid_value(i, spec.grid_points);
        const double lambda = grid_value(j, spec.grid_points);
        rows.push_back({k, x, lambda, mu_closed_form(k, x, lambda)});
      }
  return rows;
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "k,x,lambda,mu\n";
  out.reserve(rows.size() * 40 + out.size());
  for (const auto& r : rows) {
    out += std::to_string(r.k);
    out += ',';
    out += format_number(r.x);
    out += ',';
    out += format_number(r.lambda);
    out += ',';
    out += format_number(r.mu);
    out += '\n';
  }
  return out;
}

SdpCheck sdp_check(const SweepSpec& spec) {
  validate(spec);
  double ad_emax[5];
  for (int j = 0; j < 5; ++j) {
    ad_emax[j] = emax::emax_sigma_sdp(
                  channels::make_channel(ChannelKind::AmplitudeDamping, grid_value(j, 5)))
                  .value;
  }
  SdpCheck check;
  for (int k : spec.k_values)
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const double x = grid_value(i, 5);
        const double lambda = grid_value(j, 5);
        const auto ad = channels::closed_form_measures(ChannelKind::AmplitudeDamping, lambda);
        const auto deph = channels::closed_form_measures(ChannelKind::Dephasing, x);
        const double denom = k * (deph.e_sq_ub->bits + deph.e_r->bits) + ad.e_sq_ub->bits +
                             ad.e_max->bits;
        // Where both sums vanish mu is 0 by convention and the ratio of two
        // solver-sized numbers is meaningless; compare the inputs instead.
        const double dev =
            denom > 1e-6
                ? std::abs(mu_closed_form(k, x, lambda) - mu_from(k, x, ad.e_sq_ub->bits, ad_emax[j]))
                : std::abs(ad.e_max->bits - ad_emax[j]);
        check.max_deviation = std::max(check.max_deviation, dev);
        ++check.points;
      }
  return check;
}

}  // namespace netbound::sweep
