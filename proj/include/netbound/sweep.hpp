#pragma once

// mu over the single-cut family of k dephasing channels (parameter x) and
// one amplitude damping channel (parameter lambda), all used equally often.

#include <string>
#include <vector>

namespace netbound::sweep {

struct SweepSpec {
  std::vector<int> k_values;
  int grid_points = 101;  // per axis, endpoints included
};

struct SweepRow {
  int k = 1;
  double x = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
};

/// Closed-form mu for one grid point.
double mu_closed_form(int k, double x, double lambda);

/// Same quantity with the amplitude-damping E_max taken from the SDP.
double mu_sdp(int k, double x, double lambda);

/// Throws InvalidArgument for empty or non-positive k lists or fewer than two points.
void validate(const SweepSpec& spec);

/// Grid coordinate i of n, exact at both endpoints.
double grid_value(int i, int n);

/// Rows in (k, x, lambda) order; grid points split across OpenMP threads.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);
std::vector<SweepRow> run_sweep_serial(const SweepSpec& spec);

/// 9 significant digits, '.' separator, independent of the locale.
std::string format_number(double v);

/// Header `k,x,lambda,mu` and one LF-terminated line per row.
std::string to_csv(const std::vector<SweepRow>& rows);

struct SdpCheck {
  int points = 0;
  double max_deviation = 0.0;
};

/// Compares closed-form and SDP mu on a 5x5 subgrid for every k.
SdpCheck sdp_check(const SweepSpec& spec);

}  // namespace netbound::sweep
