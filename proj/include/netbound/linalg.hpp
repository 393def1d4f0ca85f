#pragma once

// Dense complex linear algebra for the small operators (dimension <= 8) that
// appear in qubit channel problems: Kronecker products, partial traces and
// transposes, a Jacobi Hermitian eigensolver, and the two entropy
// divergences.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace netbound {

using Complex = std::complex<double>;

/// Row-major dense complex matrix with full storage.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  Complex trace() const;

  /// Largest absolute entry.
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Square matrix equal to its adjoint. Construction rejects inputs whose
/// anti-Hermitian part exceeds 1e-12 (relative to the entry scale when that
/// is above one) and stores the exact Hermitian part (M + M^dagger) / 2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m);

  static HermitianMatrix identity(std::size_t n);

  std::size_t dim() const noexcept { return m_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  double trace() const { return m_.trace().real(); }

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator-=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double scale);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }

 private:
  ComplexMatrix m_;
};

/// Hermitian operator on a bipartite space H_A (x) H_B with A the slow index.
class BipartiteState {
 public:
  BipartiteState() = default;
  /// Any Hermitian operator with consistent dimensions (flags left unset).
  BipartiteState(HermitianMatrix m, std::size_t dim_a, std::size_t dim_b);

  /// A density operator: validates trace within 1e-10 of one and minimum
  /// eigenvalue >= -1e-10, and sets both flags.
  static BipartiteState density(HermitianMatrix m, std::size_t dim_a, std::size_t dim_b);

  const HermitianMatrix& matrix() const noexcept { return m_; }
  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  bool normalized() const noexcept { return normalized_; }
  bool positive() const noexcept { return positive_; }

 private:
  HermitianMatrix m_;
  std::size_t dim_a_ = 0;
  std::size_t dim_b_ = 0;
  bool normalized_ = false;
  bool positive_ = false;
};

enum class Subsystem { A, B };

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out `which`; the remaining factor keeps its original ordering.
HermitianMatrix partial_trace(const HermitianMatrix& m, std::size_t dim_a, std::size_t dim_b,
                              Subsystem which);
HermitianMatrix partial_trace(const BipartiteState& m, Subsystem which);

/// Transposes the indices of `which` only.
HermitianMatrix partial_transpose(const HermitianMatrix& m, std::size_t dim_a,
                                  std::size_t dim_b, Subsystem which = Subsystem::B);
HermitianMatrix partial_transpose(const BipartiteState& m, Subsystem which = Subsystem::B);

/// Cyclic complex Jacobi. Throws NoConvergence after 100 sweeps.
EigenDecomposition eig_hermitian(const HermitianMatrix& m);
std::vector<double> eigenvalues(const HermitianMatrix& m);
double min_eigenvalue(const HermitianMatrix& m);
double max_eigenvalue(const HermitianMatrix& m);

/// U m U^dagger.
HermitianMatrix conjugate(const HermitianMatrix& m, const ComplexMatrix& u);

/// Eigenvalues at or below this are treated as kernel directions.
inline constexpr double kSupportThreshold = 1e-10;

/// Max-relative entropy in bits; +infinity when supp(rho) is not inside supp(sigma).
double dmax(const BipartiteState& rho, const BipartiteState& sigma);
double dmax(const HermitianMatrix& rho, const HermitianMatrix& sigma);

/// Umegaki relative entropy in bits with 0 log 0 = 0; +infinity on support violation.
double relative_entropy(const BipartiteState& rho, const BipartiteState& sigma);
double relative_entropy(const HermitianMatrix& rho, const HermitianMatrix& sigma);

}  // namespace netbound
