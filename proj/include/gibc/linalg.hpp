#pragma once

// Dense complex linear algebra backed by LAPACKE/OpenBLAS. Matrices are
// row-major. Values are immutable once built; every function here is pure.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gibc::linalg {

using cplx = std::complex<double>;
using Vector = std::vector<cplx>;

inline constexpr double kRankTol = 1e-8;
inline constexpr double kNullTol = 1e-10;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  // Zero matrix.
  ComplexMatrix(std::size_t rows, std::size_t cols);
  // Checked construction: data.size() must be rows*cols and every entry finite.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> d);
  static ComplexMatrix diagonal(std::span<const double> d);
  static ComplexMatrix column(std::span<const cplx> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  const std::vector<cplx>& values() const { return data_; }
  std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Vector col(std::size_t c) const;
  void set_col(std::size_t c, std::span<const cplx> v);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  // Rows [r0, r0+nr) and columns [c0, c0+nc).
  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);
  ComplexMatrix cols_range(std::size_t c0, std::size_t nc) const { return block(0, c0, rows_, nc); }

  ComplexMatrix hermitian_part() const;      // (A + A*)/2
  ComplexMatrix antihermitian_part() const;  // (A - A*)/(2i), Hermitian

  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx a);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
Vector operator*(const ComplexMatrix& a, std::span<const cplx> x);
inline Vector operator*(const ComplexMatrix& a, const Vector& x) {
  return a * std::span<const cplx>(x);
}

// A* B without forming A*.
ComplexMatrix adjoint_times(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix hstack(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix vstack(const ComplexMatrix& a, const ComplexMatrix& b);

// x* y
cplx dot(std::span<const cplx> x, std::span<const cplx> y);
double norm2(std::span<const cplx> x);

// Hermitian positive-definite inner-product matrix with a cached upper
// Cholesky factor U (G = U* U).
class GramMatrix {
 public:
  GramMatrix() = default;
  explicit GramMatrix(ComplexMatrix g);
  static GramMatrix identity(std::size_t n);
  static GramMatrix diagonal(std::span<const double> d);

  std::size_t dim() const { return g_.rows(); }
  const ComplexMatrix& matrix() const { return g_; }
  const ComplexMatrix& chol_upper() const { return u_; }

  // y* G x
  cplx inner(std::span<const cplx> x, std::span<const cplx> y) const;
  double norm(std::span<const cplx> x) const;
  // U m and U^{-1} m.
  ComplexMatrix factor_apply(const ComplexMatrix& m) const;
  ComplexMatrix factor_solve(const ComplexMatrix& m) const;
  // m U^{-1}
  ComplexMatrix right_factor_solve(const ComplexMatrix& m) const;

 private:
  ComplexMatrix g_;
  ComplexMatrix u_;
};

struct Svd {
  std::vector<double> s;  // descending
  ComplexMatrix u;        // rows x k
  ComplexMatrix vh;       // k x cols  (V*)
};

Svd svd(const ComplexMatrix& m);
// Full square U and V* (needed for null spaces).
Svd svd_full(const ComplexMatrix& m);
std::vector<double> singular_values(const ComplexMatrix& m);
double spectral_norm(const ComplexMatrix& m);

std::size_t numerical_rank(const ComplexMatrix& m, double tol = kRankTol);
double gram_operator_norm(const ComplexMatrix& m, const GramMatrix& g_in, const GramMatrix& g_out);

struct Eig {
  std::vector<cplx> values;
  ComplexMatrix vectors;  // columns, unit 2-norm; empty when not requested
};
Eig eig(const ComplexMatrix& m, bool want_vectors = true);

struct HermitianEig {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;
};
HermitianEig hermitian_eig(const ComplexMatrix& m, bool want_vectors = true);

struct PencilEig {
  std::vector<cplx> values;  // infinite eigenvalues are reported as inf
  ComplexMatrix vectors;     // columns, unit 2-norm
  std::vector<double> residuals;
  double b_condition = 0.0;
};
// a x = lambda b x. Throws InvalidInput when cond(b) exceeds max_condition.
PencilEig solve_pencil(const ComplexMatrix& a, const ComplexMatrix& b, double max_condition = 1e12);

// Solves a x = b; throws InvalidInput when a is numerically singular.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
Vector solve(const ComplexMatrix& a, std::span<const cplx> b);
ComplexMatrix inverse(const ComplexMatrix& a);
// Reciprocal 1-norm condition estimate from an LU factorization.
double rcond(const ComplexMatrix& a);

// Reusable LU factorization. Unlike solve(), it does not reject
// ill-conditioned matrices; only an exactly zero pivot is an error.
class LuFactor {
 public:
  explicit LuFactor(const ComplexMatrix& a);
  std::size_t dim() const { return lu_.rows(); }
  double rcond() const { return rcond_; }
  bool singular() const { return singular_; }
  Vector solve(std::span<const cplx> b) const;
  ComplexMatrix solve(const ComplexMatrix& b) const;

 private:
  ComplexMatrix lu_;
  std::vector<int> piv_;
  double rcond_ = 0.0;
  bool singular_ = false;
};

// Lower Cholesky factor of a Hermitian positive-definite matrix.
ComplexMatrix cholesky_lower(const ComplexMatrix& a);

// Orthonormal basis (columns) of the null space: right singular vectors whose
// singular value is <= rel_tol * sigma_max. A zero matrix has full null space.
ComplexMatrix nullspace(const ComplexMatrix& m, double rel_tol = kNullTol);

// Orthonormalizes the columns of basis in the G inner product.
ComplexMatrix gram_orthonormalize(const ComplexMatrix& basis, const GramMatrix& g);

// Largest principal angle between two column spans, both assumed
// G-orthonormal. Returns pi/2 when the dimensions differ.
double max_principal_angle(const ComplexMatrix& a, const ComplexMatrix& b, const GramMatrix& g);

// Real dense helpers used by the FEM fast paths.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major
  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct RealEig {
  std::vector<cplx> values;
  ComplexMatrix vectors;
};
// General real eigenproblem; complex-conjugate pairs are expanded.
RealEig real_eig(const RealMatrix& m, bool want_vectors = true);

struct RealSymmetricEig {
  std::vector<double> values;  // ascending
  RealMatrix vectors;          // columns
};
RealSymmetricEig real_symmetric_eig(const RealMatrix& m, bool want_vectors = true);

// Applies WORKBENCH_THREADS (if set) to the BLAS thread pool. Idempotent.
void configure_threads();
// Worker budget for coarse-grained parallel loops.
unsigned worker_count();

}  // namespace gibc::linalg
