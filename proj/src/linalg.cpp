#include "netbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "netbound/error.hpp"

namespace netbound {

namespace {

[[noreturn]] void dimension_error(const std::string& what) {
  throw Error(ErrorCode::DimensionMismatch, what);
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    dimension_error("ComplexMatrix: entry count does not match shape");
  }
  for (const auto& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::InvalidArgument, "ComplexMatrix: non-finite entry");
    }
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) dimension_error("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  for (const auto& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::InvalidArgument, "ComplexMatrix: non-finite entry");
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) dimension_error("trace of a non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) dimension_error("matrix sum shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) dimension_error("matrix difference shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) dimension_error("matrix product shape mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  if (!m.is_square()) dimension_error("HermitianMatrix: matrix is not square");
  const std::size_t n = m.rows();
  double skew = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const Complex z = m(r, c);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::InvalidArgument, "HermitianMatrix: non-finite entry");
      }
      skew = std::max(skew, std::abs(z - std::conj(m(c, r))));
    }
  if (skew > 1e-12 * std::max(1.0, m.max_abs())) {
    throw Error(ErrorCode::InvalidArgument,
                "HermitianMatrix: input is not Hermitian (skew " + std::to_string(skew) + ")");
  }
  m_ = ComplexMatrix(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m_(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  return HermitianMatrix(ComplexMatrix::identity(n));
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  m_ += other.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
  m_ -= other.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double scale) {
  m_ *= scale;
  return *this;
}

// ---------------------------------------------------------------------------
// BipartiteState

BipartiteState::BipartiteState(HermitianMatrix m, std::size_t dim_a, std::size_t dim_b)
    : m_(std::move(m)), dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a_ == 0 || dim_b_ == 0 || dim_a_ * dim_b_ != m_.dim()) {
    dimension_error("BipartiteState: dim_a * dim_b must equal the matrix dimension");
  }
}

BipartiteState BipartiteState::density(HermitianMatrix m, std::size_t dim_a, std::size_t dim_b) {
  BipartiteState s(std::move(m), dim_a, dim_b);
  if (std::abs(s.m_.trace() - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "BipartiteState: trace differs from one");
  }
  if (min_eigenvalue(s.m_) < -1e-10) {
    throw Error(ErrorCode::InvalidArgument, "BipartiteState: operator is not positive");
  }
  s.normalized_ = true;
  s.positive_ = true;
  return s;
}

// ---------------------------------------------------------------------------
// Tensor structure

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const Complex s = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
    }
  return out;
}

HermitianMatrix partial_trace(const HermitianMatrix& m, std::size_t dim_a, std::size_t dim_b,
                              Subsystem which) {
  if (dim_a == 0 || dim_b == 0 || dim_a * dim_b != m.dim()) {
    dimension_error("partial_trace: dims do not factor the matrix");
  }
  const auto& x = m.matrix();
  if (which == Subsystem::B) {
    ComplexMatrix out(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j)
        for (std::size_t k = 0; k < dim_b; ++k) out(i, j) += x(i * dim_b + k, j * dim_b + k);
    return HermitianMatrix(out);
  }
  ComplexMatrix out(dim_b, dim_b);
  for (std::size_t k = 0; k < dim_b; ++k)
    for (std::size_t l = 0; l < dim_b; ++l)
      for (std::size_t i = 0; i < dim_a; ++i) out(k, l) += x(i * dim_b + k, i * dim_b + l);
  return HermitianMatrix(out);
}

HermitianMatrix partial_trace(const BipartiteState& m, Subsystem which) {
  return partial_trace(m.matrix(), m.dim_a(), m.dim_b(), which);
}

HermitianMatrix partial_transpose(const HermitianMatrix& m, std::size_t dim_a, std::size_t dim_b,
                                  Subsystem which) {
  if (dim_a == 0 || dim_b == 0 || dim_a * dim_b != m.dim()) {
    dimension_error("partial_transpose: dims do not factor the matrix");
  }
  const auto& x = m.matrix();
  ComplexMatrix out(m.dim(), m.dim());
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t j = 0; j < dim_a; ++j)
      for (std::size_t k = 0; k < dim_b; ++k)
        for (std::size_t l = 0; l < dim_b; ++l) {
          out(i * dim_b + k, j * dim_b + l) = which == Subsystem::B
                                                  ? x(i * dim_b + l, j * dim_b + k)
                                                  : x(j * dim_b + k, i * dim_b + l);
        }
  return HermitianMatrix(out);
}

HermitianMatrix partial_transpose(const BipartiteState& m, Subsystem which) {
  return partial_transpose(m.matrix(), m.dim_a(), m.dim_b(), which);
}

// ---------------------------------------------------------------------------
// Eigensolver

EigenDecomposition eig_hermitian(const HermitianMatrix& m) {
  const std::size_t n = m.dim();
  ComplexMatrix a = m.matrix();
  ComplexMatrix v = ComplexMatrix::identity(n);

  double frob = 0.0;
  for (const auto& z : a.entries()) frob += std::norm(z);
  frob = std::sqrt(frob);
  const double tol = 1e-14 * std::max(frob, std::numeric_limits<double>::min());

  constexpr int kMaxSweeps = 100;
  bool converged = false;
  for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        if (p != q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= tol) {
      converged = true;
      break;
    }
    if (sweep == kMaxSweeps) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const Complex phase_conj = std::conj(apq / mag);
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = D P with D = diag(.., e^{-i arg a_pq} at q, ..) and P the real rotation.
        const Complex g_pp = c, g_pq = s, g_qp = -s * phase_conj, g_qq = c * phase_conj;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * g_pp + akq * g_qp;
          a(k, q) = akp * g_pq + akq * g_qq;
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * g_pp + vkq * g_qp;
          v(k, q) = vkp * g_pq + vkq * g_qq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
          a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!converged) {
    throw Error(ErrorCode::NoConvergence, "eig_hermitian: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

std::vector<double> eigenvalues(const HermitianMatrix& m) { return eig_hermitian(m).values; }

double min_eigenvalue(const HermitianMatrix& m) {
  if (m.dim() == 0) return 0.0;
  return eig_hermitian(m).values.front();
}

double max_eigenvalue(const HermitianMatrix& m) {
  if (m.dim() == 0) return 0.0;
  return eig_hermitian(m).values.back();
}

HermitianMatrix conjugate(const HermitianMatrix& m, const ComplexMatrix& u) {
  return HermitianMatrix(u * m.matrix() * u.adjoint());
}

// ---------------------------------------------------------------------------
// Divergences

namespace {

Complex sandwich(const ComplexMatrix& vecs, std::size_t i, const ComplexMatrix& rho, std::size_t j) {
  // <v_i| rho |v_j>
  const std::size_t n = rho.rows();
  Complex acc = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    Complex row = 0.0;
    for (std::size_t c = 0; c < n; ++c) row += rho(r, c) * vecs(c, j);
    acc += std::conj(vecs(r, i)) * row;
  }
  return acc;
}

void check_same_dims(const HermitianMatrix& rho, const HermitianMatrix& sigma) {
  if (rho.dim() != sigma.dim()) dimension_error("divergence arguments have different dimensions");
}

void check_same_dims(const BipartiteState& rho, const BipartiteState& sigma) {
  if (rho.dim_a() != sigma.dim_a() || rho.dim_b() != sigma.dim_b()) {
    dimension_error("divergence arguments have different bipartite dimensions");
  }
}

// Weight of rho on the kernel of sigma, i.e. the largest <v|rho|v> over kernel vectors.
bool leaks_outside_support(const EigenDecomposition& sigma, const ComplexMatrix& rho) {
  for (std::size_t k = 0; k < sigma.values.size(); ++k) {
    if (sigma.values[k] > kSupportThreshold) continue;
    if (sandwich(sigma.vectors, k, rho, k).real() > kSupportThreshold) return true;
  }
  return false;
}

}  // namespace

double dmax(const HermitianMatrix& rho, const HermitianMatrix& sigma) {
  check_same_dims(rho, sigma);
  const auto es = eig_hermitian(sigma);
  const auto& r = rho.matrix();
  if (leaks_outside_support(es, r)) return std::numeric_limits<double>::infinity();

  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < es.values.size(); ++k)
    if (es.values[k] > kSupportThreshold) support.push_back(k);
  if (support.empty()) return -std::numeric_limits<double>::infinity();

  // sigma^{-1/2} rho sigma^{-1/2} restricted to supp(sigma).
  const std::size_t s = support.size();
  ComplexMatrix reduced(s, s);
  for (std::size_t i = 0; i < s; ++i) {
    reduced(i, i) = sandwich(es.vectors, support[i], r, support[i]).real() / es.values[support[i]];
    for (std::size_t j = i + 1; j < s; ++j) {
      const double scale = 1.0 / std::sqrt(es.values[support[i]] * es.values[support[j]]);
      reduced(i, j) = sandwich(es.vectors, support[i], r, support[j]) * scale;
      reduced(j, i) = std::conj(reduced(i, j));
    }
  }
  const double top = max_eigenvalue(HermitianMatrix(reduced));
  if (top <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log2(top);
}

double dmax(const BipartiteState& rho, const BipartiteState& sigma) {
  check_same_dims(rho, sigma);
  return dmax(rho.matrix(), sigma.matrix());
}

double relative_entropy(const HermitianMatrix& rho, const HermitianMatrix& sigma) {
  check_same_dims(rho, sigma);
  const auto es = eig_hermitian(sigma);
  const auto& r = rho.matrix();
  if (leaks_outside_support(es, r)) return std::numeric_limits<double>::infinity();

  double entropy_term = 0.0;
  for (double p : eigenvalues(rho))
    if (p > 0.0) entropy_term += p * std::log2(p);

  double cross_term = 0.0;
  for (std::size_t k = 0; k < es.values.size(); ++k) {
    if (es.values[k] <= kSupportThreshold) continue;
    cross_term += sandwich(es.vectors, k, r, k).real() * std::log2(es.values[k]);
  }
  return entropy_term - cross_term;
}

double relative_entropy(const BipartiteState& rho, const BipartiteState& sigma) {
  check_same_dims(rho, sigma);
  return relative_entropy(rho.matrix(), sigma.matrix());
}

}  // namespace netbound
