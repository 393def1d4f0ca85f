#include "netbound/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>

#include "netbound/error.hpp"

namespace netbound::sdp {

HermitianMatrix HermitianCoordinates::to_matrix(std::span<const double> coords, std::size_t n) {
  if (coords.size() < count(n)) {
    throw Error(ErrorCode::DimensionMismatch, "HermitianCoordinates: too few coordinates");
  }
  ComplexMatrix m(n, n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) m(i, i) = coords[k++];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z(coords[k], coords[k + 1]);
      k += 2;
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  return HermitianMatrix(m);
}

std::vector<double> HermitianCoordinates::from_matrix(const HermitianMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<double> out;
  out.reserve(count(n));
  for (std::size_t i = 0; i < n; ++i) out.push_back(m(i, i).real());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      out.push_back(m(i, j).real());
      out.push_back(m(i, j).imag());
    }
  return out;
}

namespace {

using Real = long double;

// Block k evaluates to constant + sum_j x_j * coeff[j].
struct CompiledBlock {
  std::string name;
  std::size_t dim = 0;
  ComplexMatrix constant;
  std::vector<ComplexMatrix> coeff;
};

struct CompiledProblem {
  std::size_t num_vars = 0;
  std::vector<CompiledBlock> blocks;
  std::vector<double> cost;
  double cost_offset = 0.0;
  std::vector<std::vector<double>> eq_rows;
  std::vector<double> eq_rhs;
  std::size_t total_block_dim = 0;
};

struct Evaluator {
  std::size_t n;
  std::size_t num_aux;

  Point point(std::span<const double> x) const {
    return {HermitianCoordinates::to_matrix(x.first(HermitianCoordinates::count(n)), n),
            std::vector<double>(x.begin() + static_cast<long>(HermitianCoordinates::count(n)), x.end())};
  }
};

CompiledProblem compile(const Problem& p) {
  if (p.hermitian_dim == 0) {
    throw Error(ErrorCode::InvalidArgument, "sdp: hermitian variable dimension must be positive");
  }
  if (!p.objective) throw Error(ErrorCode::InvalidArgument, "sdp: missing objective");
  const std::size_t nh = HermitianCoordinates::count(p.hermitian_dim);
  CompiledProblem c;
  c.num_vars = nh + p.num_aux;
  const Evaluator ev{p.hermitian_dim, p.num_aux};

  std::vector<double> x(c.num_vars, 0.0);
  const Point origin = ev.point(x);
  std::vector<Point> units;
  units.reserve(c.num_vars);
  for (std::size_t j = 0; j < c.num_vars; ++j) {
    x[j] = 1.0;
    units.push_back(ev.point(x));
    x[j] = 0.0;
  }

  for (const auto& b : p.blocks) {
    CompiledBlock cb;
    cb.name = b.name;
    const HermitianMatrix c0 = b.map(origin.y, origin.aux);
    cb.dim = c0.dim();
    cb.constant = c0.matrix();
    cb.coeff.reserve(c.num_vars);
    for (const auto& u : units) {
      const HermitianMatrix v = b.map(u.y, u.aux);
      if (v.dim() != cb.dim) throw Error(ErrorCode::DimensionMismatch, "sdp: block size varies");
      cb.coeff.push_back(v.matrix() - cb.constant);
    }
    c.total_block_dim += cb.dim;
    c.blocks.push_back(std::move(cb));
  }

  c.cost_offset = p.objective(origin.y, origin.aux);
  for (const auto& u : units) c.cost.push_back(p.objective(u.y, u.aux) - c.cost_offset);

  for (const auto& e : p.equalities) {
    const double off = e.lhs(origin.y, origin.aux);
    std::vector<double> row;
    row.reserve(c.num_vars);
    for (const auto& u : units) row.push_back(e.lhs(u.y, u.aux) - off);
    c.eq_rows.push_back(std::move(row));
    c.eq_rhs.push_back(e.rhs - off);
  }
  return c;
}

ComplexMatrix block_value(const CompiledBlock& b, std::span<const double> x) {
  ComplexMatrix m = b.constant;
  auto out = m.entries();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] == 0.0) continue;
    const auto a = b.coeff[j].entries();
    for (std::size_t e = 0; e < out.size(); ++e) out[e] += x[j] * a[e];
  }
  return m;
}

// Lower-triangular L with m = L L^dagger; nullopt if m is not positive definite.
std::optional<ComplexMatrix> cholesky(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  ComplexMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Real log_det_from_cholesky(const ComplexMatrix& l) {
  Real acc = 0;
  for (std::size_t i = 0; i < l.rows(); ++i) acc += 2 * std::log(static_cast<Real>(l(i, i).real()));
  return acc;
}

ComplexMatrix inverse_from_cholesky(const ComplexMatrix& l) {
  const std::size_t n = l.rows();
  // Solve L Z = I, then inverse = Z^dagger Z.
  ComplexMatrix z(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = (i == col) ? Complex(1.0) : Complex(0.0);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * z(k, col);
      z(i, col) = s / l(i, i).real();
    }
  }
  return z.adjoint() * z;
}

struct BarrierState {
  bool feasible = false;
  Real value = 0;  // cost/mu - sum log det
};

BarrierState barrier_value(const CompiledProblem& c, std::span<const double> x, Real mu) {
  BarrierState s;
  Real acc = 0;
  for (std::size_t j = 0; j < x.size(); ++j) acc += static_cast<Real>(c.cost[j]) * x[j];
  acc /= mu;
  for (const auto& b : c.blocks) {
    const auto l = cholesky(block_value(b, x));
    if (!l) return s;
    acc -= log_det_from_cholesky(*l);
  }
  s.feasible = true;
  s.value = acc;
  return s;
}

// Dense Gaussian elimination with partial pivoting; nullopt when a pivot
// vanishes relative to the matrix scale.
std::optional<std::vector<Real>> solve_dense(std::vector<std::vector<Real>> a, std::vector<Real> b) {
  const std::size_t n = b.size();
  Real scale = 0;
  for (const auto& row : a)
    for (Real v : row) scale = std::max(scale, std::abs(v));
  if (scale == 0) return std::nullopt;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) <= scale * 1e-30L) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Real f = a[r][col] / a[col][col];
      if (f == 0) continue;
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<Real> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Real s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

double equality_residual(const CompiledProblem& c, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < c.eq_rows.size(); ++i) {
    Real s = 0;
    for (std::size_t j = 0; j < x.size(); ++j) s += static_cast<Real>(c.eq_rows[i][j]) * x[j];
    worst = std::max(worst, static_cast<double>(std::abs(s - c.eq_rhs[i])));
  }
  return worst;
}

double objective_value(const CompiledProblem& c, std::span<const double> x) {
  Real s = c.cost_offset;
  for (std::size_t j = 0; j < x.size(); ++j) s += static_cast<Real>(c.cost[j]) * x[j];
  return static_cast<double>(s);
}

void check_affine(const Problem& p, const CompiledProblem& c, std::span<const double> x) {
  const Point pt = Evaluator{p.hermitian_dim, p.num_aux}.point(x);
  for (std::size_t k = 0; k < c.blocks.size(); ++k) {
    const ComplexMatrix direct = p.blocks[k].map(pt.y, pt.aux).matrix();
    const ComplexMatrix rebuilt = block_value(c.blocks[k], x);
    const double scale = std::max(1.0, direct.max_abs());
    if ((direct - rebuilt).max_abs() > 1e-9 * scale) {
      throw Error(ErrorCode::InvalidArgument, "sdp: block '" + c.blocks[k].name + "' is not affine");
    }
  }
}

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  const CompiledProblem c = compile(problem);
  const std::size_t nv = c.num_vars;
  const std::size_t ne = c.eq_rows.size();

  if (problem.start.y.dim() != problem.hermitian_dim || problem.start.aux.size() != problem.num_aux) {
    throw Error(ErrorCode::DimensionMismatch, "sdp: start point has the wrong shape");
  }
  std::vector<double> x = HermitianCoordinates::from_matrix(problem.start.y);
  x.insert(x.end(), problem.start.aux.begin(), problem.start.aux.end());
  check_affine(problem, c, x);

  for (const auto& b : c.blocks) {
    const double lo = min_eigenvalue(HermitianMatrix(block_value(b, x)));
    if (lo < 1e-6) {
      throw Error(ErrorCode::Infeasible,
                  "sdp: start point is not strictly inside block '" + b.name + "'");
    }
  }

  Solution sol;
  Real mu = options.initial_mu;
  const Real total_dim = static_cast<Real>(std::max<std::size_t>(c.total_block_dim, 1));
  int newton = 0;

  std::vector<std::vector<ComplexMatrix>> weighted(c.blocks.size());

  while (true) {
    // Centering: minimize cost/mu - sum log det subject to the equalities.
    for (int inner = 0; inner < 200; ++inner) {
      if (++newton > options.max_newton_iterations) {
        throw Error(ErrorCode::NoConvergence, "sdp: Newton iteration cap reached");
      }
      std::vector<Real> grad(nv);
      for (std::size_t j = 0; j < nv; ++j) grad[j] = static_cast<Real>(c.cost[j]) / mu;
      std::vector<std::vector<Real>> hess(nv, std::vector<Real>(nv, 0));

      for (std::size_t k = 0; k < c.blocks.size(); ++k) {
        const auto& b = c.blocks[k];
        const auto l = cholesky(block_value(b, x));
        if (!l) throw Error(ErrorCode::IllConditioned, "sdp: iterate left the cone");
        const ComplexMatrix inv = inverse_from_cholesky(*l);
        auto& w = weighted[k];
        w.resize(nv);
        for (std::size_t j = 0; j < nv; ++j) {
          w[j] = inv * b.coeff[j];
          grad[j] -= w[j].trace().real();
        }
        const std::size_t d = b.dim;
        for (std::size_t i = 0; i < nv; ++i) {
          if (w[i].max_abs() == 0.0) continue;
          for (std::size_t j = i; j < nv; ++j) {
            Real acc = 0;
            for (std::size_t r = 0; r < d; ++r)
              for (std::size_t s = 0; s < d; ++s) {
                acc += static_cast<Real>((w[i](r, s) * w[j](s, r)).real());
              }
            hess[i][j] += acc;
            if (i != j) hess[j][i] += acc;
          }
        }
      }

      // KKT system [H E^T; E 0] [dx; nu] = [-g; rhs - E x].
      const std::size_t dim = nv + ne;
      std::vector<std::vector<Real>> kkt(dim, std::vector<Real>(dim, 0));
      std::vector<Real> rhs(dim, 0);
      Real diag_scale = 0;
      for (std::size_t i = 0; i < nv; ++i) diag_scale = std::max(diag_scale, std::abs(hess[i][i]));
      for (std::size_t i = 0; i < nv; ++i) {
        for (std::size_t j = 0; j < nv; ++j) kkt[i][j] = hess[i][j];
        kkt[i][i] += diag_scale * 1e-18L;
        rhs[i] = -grad[i];
      }
      // Equality rows are scaled to the Hessian magnitude so pivoting sees comparable entries.
      const Real eq_scale = std::max<Real>(1, diag_scale);
      for (std::size_t e = 0; e < ne; ++e) {
        Real ax = 0;
        for (std::size_t j = 0; j < nv; ++j) {
          kkt[nv + e][j] = eq_scale * c.eq_rows[e][j];
          kkt[j][nv + e] = eq_scale * c.eq_rows[e][j];
          ax += static_cast<Real>(c.eq_rows[e][j]) * x[j];
        }
        rhs[nv + e] = eq_scale * (c.eq_rhs[e] - ax);
      }
      const auto step = solve_dense(std::move(kkt), std::move(rhs));
      if (!step) throw Error(ErrorCode::IllConditioned, "sdp: Newton system is singular");

      Real decrement = 0;
      Real slope = 0;
      for (std::size_t i = 0; i < nv; ++i) {
        slope += grad[i] * (*step)[i];
        for (std::size_t j = 0; j < nv; ++j) decrement += (*step)[i] * hess[i][j] * (*step)[j];
      }
      if (decrement / 2 <= 1e-12L && equality_residual(c, x) <= 1e-10) break;

      // Backtracking: stay strictly inside every block, then Armijo.
      const BarrierState here = barrier_value(c, x, mu);
      Real t = 1;
      std::vector<double> trial(nv);
      bool accepted = false;
      for (int halvings = 0; halvings < 80; ++halvings, t /= 2) {
        for (std::size_t j = 0; j < nv; ++j) trial[j] = static_cast<double>(x[j] + t * (*step)[j]);
        const BarrierState there = barrier_value(c, trial, mu);
        if (!there.feasible) continue;
        if (there.value <= here.value + options.armijo * t * slope) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;  // no further progress at this mu within rounding
      x = trial;
    }

    sol.objective_history.push_back(objective_value(c, x));
    const Real gap = total_dim * mu;
    if (gap <= options.gap_tolerance) {
      sol.gap = static_cast<double>(gap);
      break;
    }
    mu *= options.mu_factor;
  }

  sol.newton_iterations = newton;
  sol.optimum = objective_value(c, x);
  sol.equality_residual = equality_residual(c, x);
  for (const auto& b : c.blocks) {
    sol.block_min_eigenvalues.push_back(min_eigenvalue(HermitianMatrix(block_value(b, x))));
  }
  sol.point = Evaluator{problem.hermitian_dim, problem.num_aux}.point(x);
  return sol;
}

}  // namespace netbound::sdp
