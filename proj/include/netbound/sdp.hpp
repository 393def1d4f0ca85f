#pragma once

// Log-barrier path-following solver for small semidefinite programs whose
// constraints say that affine images of one Hermitian matrix variable Y
// (plus a few real scalars) are positive semidefinite.
//
// The problem is stated through callables; the solver recovers the affine
// coefficients by evaluating them at the origin and on each coordinate
// direction, so a block can be anything from `Y - c*pi` to a partial
// transpose or a partial trace of Y.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "netbound/linalg.hpp"

namespace netbound::sdp {

/// Real coordinates of an n x n Hermitian matrix: the n diagonal entries,
/// then (Re, Im) of each upper off-diagonal entry in row-major order.
struct HermitianCoordinates {
  static std::size_t count(std::size_t n) { return n * n; }
  static HermitianMatrix to_matrix(std::span<const double> coords, std::size_t n);
  static std::vector<double> from_matrix(const HermitianMatrix& m);
};

struct Point {
  HermitianMatrix y;
  std::vector<double> aux;
};

using AffineBlock = std::function<HermitianMatrix(const HermitianMatrix& y, std::span<const double> aux)>;
using AffineScalar = std::function<double(const HermitianMatrix& y, std::span<const double> aux)>;

struct Block {
  std::string name;
  AffineBlock map;
};

/// lhs(Y, aux) == rhs, lhs affine.
struct Equality {
  AffineScalar lhs;
  double rhs = 0.0;
};

struct Problem {
  std::size_t hermitian_dim = 0;
  std::size_t num_aux = 0;
  std::vector<Block> blocks;  // each required PSD
  AffineScalar objective;     // minimized
  std::vector<Equality> equalities;
  Point start;                // every block must be >= 1e-6 * I here
};

struct Options {
  double initial_mu = 1.0;
  double mu_factor = 0.25;
  double armijo = 1e-4;
  double gap_tolerance = 1e-9;
  int max_newton_iterations = 4000;
};

struct Solution {
  double optimum = 0.0;
  Point point;
  double gap = 0.0;                           // (total block dimension) * mu at exit
  double equality_residual = 0.0;             // max |lhs - rhs|
  std::vector<double> block_min_eigenvalues;  // per block, at the solution
  std::vector<double> objective_history;      // objective after each outer step
  int newton_iterations = 0;
};

/// Errors: Infeasible (start not strictly inside every block), NoConvergence
/// (iteration cap), IllConditioned (singular Newton system), InvalidArgument
/// (malformed problem, e.g. a non-affine block map).
Solution solve(const Problem& problem, const Options& options = {});

}  // namespace netbound::sdp
