#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "gibc/errors.hpp"
#include "gibc/linalg.hpp"
#include "lapack.hpp"

namespace gibc::linalg {

namespace {

int to_int(std::size_t n) { return static_cast<int>(n); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.square()) throw InvalidInput(std::string(what) + ": matrix must be square");
}

void normalize_columns(ComplexMatrix& v) {
  for (std::size_t c = 0; c < v.cols(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < v.rows(); ++r) s += std::norm(v(r, c));
    s = std::sqrt(s);
    if (s == 0.0) continue;
    for (std::size_t r = 0; r < v.rows(); ++r) v(r, c) /= s;
  }
}

}  // namespace

// ---------------------------------------------------------------- Gram

GramMatrix::GramMatrix(ComplexMatrix g) : g_(std::move(g)) {
  require_square(g_, "gram matrix");
  const double scale = std::max(g_.max_abs(), std::numeric_limits<double>::min());
  for (std::size_t r = 0; r < g_.rows(); ++r)
    for (std::size_t c = r; c < g_.cols(); ++c)
      if (std::abs(g_(r, c) - std::conj(g_(c, r))) > 1e-12 * scale)
        throw InvalidInput("gram matrix is not Hermitian");
  u_ = ComplexMatrix(g_.rows(), g_.cols());
  for (std::size_t r = 0; r < g_.rows(); ++r)
    for (std::size_t c = r; c < g_.cols(); ++c) u_(r, c) = g_(r, c);
  if (g_.rows() == 0) return;
  const int info =
      LAPACKE_zpotrf(LAPACK_ROW_MAJOR, 'U', to_int(u_.rows()), u_.data(), to_int(u_.cols()));
  if (info != 0) throw InvalidInput("gram matrix is not positive definite");
}

GramMatrix GramMatrix::identity(std::size_t n) { return GramMatrix(ComplexMatrix::identity(n)); }

GramMatrix GramMatrix::diagonal(std::span<const double> d) {
  return GramMatrix(ComplexMatrix::diagonal(d));
}

cplx GramMatrix::inner(std::span<const cplx> x, std::span<const cplx> y) const {
  const Vector gx = g_ * x;
  return dot(y, gx);
}

double GramMatrix::norm(std::span<const cplx> x) const {
  return std::sqrt(std::max(0.0, inner(x, x).real()));
}

ComplexMatrix GramMatrix::factor_apply(const ComplexMatrix& m) const {
  if (m.rows() != dim()) throw InvalidInput("gram factor dimension mismatch");
  ComplexMatrix out = m;
  if (out.empty()) return out;
  const cplx one{1.0, 0.0};
  cblas_ztrmm(CblasRowMajor, CblasLeft, CblasUpper, CblasNoTrans, CblasNonUnit, to_int(m.rows()),
              to_int(m.cols()), &one, u_.data(), to_int(dim()), out.data(), to_int(out.cols()));
  return out;
}

ComplexMatrix GramMatrix::factor_solve(const ComplexMatrix& m) const {
  if (m.rows() != dim()) throw InvalidInput("gram factor dimension mismatch");
  ComplexMatrix out = m;
  if (out.empty()) return out;
  const cplx one{1.0, 0.0};
  cblas_ztrsm(CblasRowMajor, CblasLeft, CblasUpper, CblasNoTrans, CblasNonUnit, to_int(m.rows()),
              to_int(m.cols()), &one, u_.data(), to_int(dim()), out.data(), to_int(out.cols()));
  return out;
}

ComplexMatrix GramMatrix::right_factor_solve(const ComplexMatrix& m) const {
  if (m.cols() != dim()) throw InvalidInput("gram factor dimension mismatch");
  ComplexMatrix out = m;
  if (out.empty()) return out;
  const cplx one{1.0, 0.0};
  cblas_ztrsm(CblasRowMajor, CblasRight, CblasUpper, CblasNoTrans, CblasNonUnit, to_int(m.rows()),
              to_int(m.cols()), &one, u_.data(), to_int(dim()), out.data(), to_int(out.cols()));
  return out;
}

// ---------------------------------------------------------------- SVD

namespace {

Svd run_gesdd(const ComplexMatrix& m, char job) {
  if (m.empty()) throw InvalidInput("svd of an empty matrix");
  const std::size_t rows = m.rows(), cols = m.cols(), k = std::min(rows, cols);
  ComplexMatrix a = m;
  Svd out;
  out.s.assign(k, 0.0);
  std::size_t ucols = 0, vrows = 0;
  if (job == 'S') {
    ucols = k;
    vrows = k;
  } else if (job == 'A') {
    ucols = rows;
    vrows = cols;
  }
  out.u = ComplexMatrix(rows, ucols);
  out.vh = ComplexMatrix(vrows, cols);
  cplx dummy{};
  const int info = LAPACKE_zgesdd(
      LAPACK_ROW_MAJOR, job, to_int(rows), to_int(cols), a.data(), to_int(cols), out.s.data(),
      job == 'N' ? &dummy : out.u.data(), job == 'N' ? 1 : to_int(std::max<std::size_t>(ucols, 1)),
      job == 'N' ? &dummy : out.vh.data(), to_int(cols));
  if (info != 0) throw NumericalFailure("singular value decomposition did not converge");
  return out;
}

}  // namespace

Svd svd(const ComplexMatrix& m) { return run_gesdd(m, 'S'); }
Svd svd_full(const ComplexMatrix& m) { return run_gesdd(m, 'A'); }
std::vector<double> singular_values(const ComplexMatrix& m) { return run_gesdd(m, 'N').s; }

double spectral_norm(const ComplexMatrix& m) {
  if (m.empty()) return 0.0;
  return singular_values(m).front();
}

std::size_t numerical_rank(const ComplexMatrix& m, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("rank tolerance must be positive");
  if (m.empty()) return 0;
  const auto s = singular_values(m);
  if (s.front() == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [&](double x) { return x > tol * s.front(); }));
}

double gram_operator_norm(const ComplexMatrix& m, const GramMatrix& g_in, const GramMatrix& g_out) {
  if (m.cols() != g_in.dim() || m.rows() != g_out.dim())
    throw InvalidInput("gram operator norm dimension mismatch");
  if (m.empty()) return 0.0;
  return spectral_norm(g_in.right_factor_solve(g_out.factor_apply(m)));
}

// ---------------------------------------------------------------- eigen

Eig eig(const ComplexMatrix& m, bool want_vectors) {
  require_square(m, "eig");
  const std::size_t n = m.rows();
  Eig out;
  out.values.resize(n);
  if (n == 0) return out;
  ComplexMatrix a = m;
  if (want_vectors) out.vectors = ComplexMatrix(n, n);
  cplx dummy{};
  const int info = LAPACKE_zgeev(LAPACK_ROW_MAJOR, 'N', want_vectors ? 'V' : 'N', to_int(n),
                                 a.data(), to_int(n), out.values.data(), &dummy, to_int(n),
                                 want_vectors ? out.vectors.data() : &dummy, to_int(n));
  if (info != 0) throw NumericalFailure("eigenvalue iteration did not converge");
  return out;
}

HermitianEig hermitian_eig(const ComplexMatrix& m, bool want_vectors) {
  require_square(m, "hermitian_eig");
  const std::size_t n = m.rows();
  HermitianEig out;
  out.values.resize(n);
  if (n == 0) return out;
  ComplexMatrix a = m.hermitian_part();
  const int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, want_vectors ? 'V' : 'N', 'U', to_int(n),
                                  a.data(), to_int(n), out.values.data());
  if (info != 0) throw NumericalFailure("Hermitian eigenvalue iteration did not converge");
  if (want_vectors) out.vectors = std::move(a);
  return out;
}

PencilEig solve_pencil(const ComplexMatrix& a, const ComplexMatrix& b, double max_condition) {
  require_square(a, "solve_pencil");
  require_square(b, "solve_pencil");
  if (a.rows() != b.rows()) throw InvalidInput("pencil matrices differ in size");
  const std::size_t n = a.rows();
  PencilEig out;
  if (n == 0) return out;
  const auto sb = singular_values(b);
  out.b_condition = sb.back() > 0.0 ? sb.front() / sb.back() : std::numeric_limits<double>::infinity();
  if (!(out.b_condition <= max_condition))
    throw InvalidInput("pencil matrix b is singular to working precision (condition " +
                       fmt(out.b_condition) + ")");
  ComplexMatrix aa = a, bb = b;
  std::vector<cplx> alpha(n), beta(n);
  out.vectors = ComplexMatrix(n, n);
  cplx dummy{};
  const int info = LAPACKE_zggev(LAPACK_ROW_MAJOR, 'N', 'V', to_int(n), aa.data(), to_int(n),
                                 bb.data(), to_int(n), alpha.data(), beta.data(), &dummy, to_int(n),
                                 out.vectors.data(), to_int(n));
  if (info != 0) throw NumericalFailure("generalized eigenvalue iteration did not converge");
  normalize_columns(out.vectors);
  const double na = spectral_norm(a), nb = sb.front();
  out.values.resize(n);
  out.residuals.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = beta[j] == cplx{} ? cplx{std::numeric_limits<double>::infinity(), 0.0}
                                      : alpha[j] / beta[j];
    const Vector x = out.vectors.col(j);
    const Vector ax = a * x, bx = b * x;
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r += std::norm(ax[i] - out.values[j] * bx[i]);
    out.residuals[j] = std::sqrt(r) / (na + std::abs(out.values[j]) * nb);
  }
  return out;
}

// ---------------------------------------------------------------- solves

namespace {

struct Lu {
  ComplexMatrix lu;
  std::vector<lapack_int> piv;
  double rcond = 0.0;
};

Lu factor(const ComplexMatrix& a) {
  require_square(a, "solve");
  const std::size_t n = a.rows();
  Lu f{a, std::vector<lapack_int>(n), 0.0};
  if (n == 0) {
    f.rcond = 1.0;
    return f;
  }
  double anorm = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += std::abs(a(r, c));
    anorm = std::max(anorm, s);
  }
  const int info = LAPACKE_zgetrf(LAPACK_ROW_MAJOR, to_int(n), to_int(n), f.lu.data(), to_int(n),
                                  f.piv.data());
  if (info > 0 || anorm == 0.0) return f;
  if (info < 0) throw NumericalFailure("LU factorization failed");
  double rc = 0.0;
  if (LAPACKE_zgecon(LAPACK_ROW_MAJOR, '1', to_int(n), f.lu.data(), to_int(n), anorm, &rc) != 0)
    throw NumericalFailure("condition estimate failed");
  f.rcond = rc;
  return f;
}

constexpr double kSingularRcond = 1e-14;

}  // namespace

double rcond(const ComplexMatrix& a) { return factor(a).rcond; }

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows()) throw InvalidInput("solve dimension mismatch");
  Lu f = factor(a);
  if (f.rcond < kSingularRcond)
    throw InvalidInput("matrix is numerically singular (rcond " + fmt(f.rcond) + ")");
  ComplexMatrix x = b;
  if (x.empty()) return x;
  const int info = LAPACKE_zgetrs(LAPACK_ROW_MAJOR, 'N', to_int(a.rows()), to_int(b.cols()),
                                  f.lu.data(), to_int(a.rows()), f.piv.data(), x.data(),
                                  to_int(x.cols()));
  if (info != 0) throw NumericalFailure("triangular solve failed");
  return x;
}

Vector solve(const ComplexMatrix& a, std::span<const cplx> b) {
  return solve(a, ComplexMatrix::column(b)).values();
}

LuFactor::LuFactor(const ComplexMatrix& a) {
  Lu f = factor(a);
  lu_ = std::move(f.lu);
  piv_.assign(f.piv.begin(), f.piv.end());
  rcond_ = f.rcond;
  for (std::size_t i = 0; i < lu_.rows(); ++i) singular_ = singular_ || lu_(i, i) == cplx{};
}

ComplexMatrix LuFactor::solve(const ComplexMatrix& b) const {
  if (b.rows() != dim()) throw InvalidInput("solve dimension mismatch");
  if (singular_) throw NumericalFailure("LU factor has a zero pivot");
  ComplexMatrix x = b;
  if (x.empty()) return x;
  std::vector<lapack_int> piv(piv_.begin(), piv_.end());
  const int info = LAPACKE_zgetrs(LAPACK_ROW_MAJOR, 'N', to_int(dim()), to_int(b.cols()),
                                  lu_.data(), to_int(dim()), piv.data(),
                                  x.data(), to_int(x.cols()));
  if (info != 0) throw NumericalFailure("triangular solve failed");
  return x;
}

Vector LuFactor::solve(std::span<const cplx> b) const {
  return solve(ComplexMatrix::column(b)).values();
}

ComplexMatrix inverse(const ComplexMatrix& a) {
  return solve(a, ComplexMatrix::identity(a.rows()));
}

ComplexMatrix cholesky_lower(const ComplexMatrix& a) {
  require_square(a, "cholesky");
  const std::size_t n = a.rows();
  ComplexMatrix l(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c <= r; ++c) l(r, c) = a(r, c);
  if (n == 0) return l;
  if (LAPACKE_zpotrf(LAPACK_ROW_MAJOR, 'L', to_int(n), l.data(), to_int(n)) != 0)
    throw InvalidInput("matrix is not positive definite");
  return l;
}

// ---------------------------------------------------------------- subspaces

ComplexMatrix nullspace(const ComplexMatrix& m, double rel_tol) {
  const std::size_t n = m.cols();
  if (m.rows() == 0 || m.max_abs() == 0.0) return ComplexMatrix::identity(n);
  const Svd f = svd_full(m);
  std::size_t r = 0;
  while (r < f.s.size() && f.s[r] > rel_tol * f.s.front()) ++r;
  ComplexMatrix z(n, n - r);
  for (std::size_t j = r; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) z(i, j - r) = std::conj(f.vh(j, i));
  return z;
}

ComplexMatrix gram_orthonormalize(const ComplexMatrix& basis, const GramMatrix& g) {
  if (basis.rows() != g.dim()) throw InvalidInput("basis and gram dimension mismatch");
  const std::size_t n = basis.rows(), k = basis.cols();
  if (k == 0) return basis;
  if (k > n) throw InvalidInput("more basis vectors than the space dimension");
  ComplexMatrix q = g.factor_apply(basis);
  std::vector<cplx> tau(k);
  if (LAPACKE_zgeqrf(LAPACK_ROW_MAJOR, to_int(n), to_int(k), q.data(), to_int(k), tau.data()) != 0 ||
      LAPACKE_zungqr(LAPACK_ROW_MAJOR, to_int(n), to_int(k), to_int(k), q.data(), to_int(k),
                     tau.data()) != 0)
    throw NumericalFailure("QR orthonormalization failed");
  return g.factor_solve(q);
}

double max_principal_angle(const ComplexMatrix& a, const ComplexMatrix& b, const GramMatrix& g) {
  if (a.rows() != g.dim() || b.rows() != g.dim()) throw InvalidInput("subspace dimension mismatch");
  if (a.cols() != b.cols()) return std::numbers::pi / 2;
  if (a.cols() == 0) return 0.0;
  // Component of span(a) orthogonal to span(b); its largest G-norm is the
  // sine of the largest angle. This stays accurate for tiny angles.
  const ComplexMatrix gb = g.matrix() * b;
  const ComplexMatrix rest = a - b * adjoint_times(gb, a);
  const double s = spectral_norm(g.factor_apply(rest));
  return std::asin(std::min(1.0, s));
}

// ---------------------------------------------------------------- real

RealEig real_eig(const RealMatrix& m, bool want_vectors) {
  if (m.rows != m.cols) throw InvalidInput("real_eig: matrix must be square");
  const std::size_t n = m.rows;
  RealEig out;
  if (n == 0) return out;
  std::vector<double> a = m.data, wr(n), wi(n), vr(want_vectors ? n * n : 1);
  double dummy = 0.0;
  const int info = LAPACKE_dgeev(LAPACK_ROW_MAJOR, 'N', want_vectors ? 'V' : 'N', to_int(n),
                                 a.data(), to_int(n), wr.data(), wi.data(), &dummy, to_int(n), vr.data(),
                                 to_int(n));
  if (info != 0) throw NumericalFailure("real eigenvalue iteration did not converge");
  out.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.values[j] = {wr[j], wi[j]};
  if (!want_vectors) return out;
  out.vectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    if (wi[j] != 0.0 && j + 1 < n) {
      for (std::size_t i = 0; i < n; ++i) {
        const double re = vr[i * n + j], im = vr[i * n + j + 1];
        out.vectors(i, j) = {re, im};
        out.vectors(i, j + 1) = {re, -im};
      }
      ++j;
    } else {
      for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = vr[i * n + j];
    }
  }
  normalize_columns(out.vectors);
  return out;
}

RealSymmetricEig real_symmetric_eig(const RealMatrix& m, bool want_vectors) {
  if (m.rows != m.cols) throw InvalidInput("real_symmetric_eig: matrix must be square");
  const std::size_t n = m.rows;
  RealSymmetricEig out;
  out.values.resize(n);
  if (n == 0) return out;
  RealMatrix a = m;
  const int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, want_vectors ? 'V' : 'N', 'U', to_int(n),
                                  a.data.data(), to_int(n), out.values.data());
  if (info != 0) throw NumericalFailure("symmetric eigenvalue iteration did not converge");
  if (want_vectors) out.vectors = std::move(a);
  return out;
}

// ---------------------------------------------------------------- threads

unsigned worker_count() {
  if (const char* env = std::getenv("WORKBENCH_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void configure_threads() {
  static const bool done = [] {
    if (std::getenv("WORKBENCH_THREADS") != nullptr)
      openblas_set_num_threads(static_cast<int>(worker_count()));
    return true;
  }();
  (void)done;
}

}  // namespace gibc::linalg
