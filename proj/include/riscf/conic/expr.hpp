#pragma once

// Affine expression types over the real parameterization of a conic program.
// Scalar variables occupy one real slot; a Hermitian matrix variable of
// dimension P occupies P*P slots (diagonal first, then re/im pairs of the
// strict upper triangle). Expressions stay complex-valued at this layer; the
// solver performs the real embedding.

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

namespace riscf::conic {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Complex = std::complex<double>;

struct ScalarVar {
  int index = -1;
};

struct HermVar {
  int base = -1;
  int dim = 0;
  int params() const { return dim * dim; }
};

// Parameter layout helpers for HermVar.
int herm_param_count(int dim);
// Local parameter index for the basis kinds: diag p, re(p,q), im(p,q), p<q.
int herm_diag_param(int dim, int p);
int herm_re_param(int dim, int p, int q);
int herm_im_param(int dim, int p, int q);
// Hermitian basis matrix of a local parameter.
MatrixXcd herm_basis(int dim, int local);
// Reconstruct a Hermitian matrix from its parameter slice.
MatrixXcd herm_from_params(const Eigen::Ref<const VectorXd>& params, int dim);
// Inverse of herm_from_params.
VectorXd herm_to_params(const MatrixXcd& h);

struct RealExpr {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;

  RealExpr() = default;
  RealExpr(double c) : constant(c) {}  // NOLINT: implicit by design
  static RealExpr var(const ScalarVar& v, double coef = 1.0) {
    RealExpr e;
    e.terms.emplace_back(v.index, coef);
    return e;
  }

  RealExpr& operator+=(const RealExpr& o);
  RealExpr& operator-=(const RealExpr& o);
  RealExpr& operator*=(double s);
  void add(int index, double coef) { terms.emplace_back(index, coef); }
  void normalize();  // sort, merge, drop zeros
  double eval(const VectorXd& x) const;
};

RealExpr operator+(RealExpr a, const RealExpr& b);
RealExpr operator-(RealExpr a, const RealExpr& b);
RealExpr operator*(double s, RealExpr a);

// Complex-vector-valued affine expression.
struct CVecExpr {
  VectorXcd constant;
  std::vector<std::pair<int, VectorXcd>> terms;

  explicit CVecExpr(int dim = 0) : constant(VectorXcd::Zero(dim)) {}
  static CVecExpr of_constant(const VectorXcd& v) {
    CVecExpr e(static_cast<int>(v.size()));
    e.constant = v;
    return e;
  }
  Eigen::Index size() const { return constant.size(); }
  CVecExpr& operator+=(const CVecExpr& o);
  VectorXcd eval(const VectorXd& x) const;
};

// Complex-matrix-valued affine expression (not necessarily Hermitian).
struct CMatExpr {
  MatrixXcd constant;
  std::vector<std::pair<int, MatrixXcd>> terms;

  CMatExpr(int rows = 0, int cols = 0) : constant(MatrixXcd::Zero(rows, cols)) {}
  Eigen::Index rows() const { return constant.rows(); }
  Eigen::Index cols() const { return constant.cols(); }
  CMatExpr& operator+=(const CMatExpr& o);
  CMatExpr adjoint() const;
  MatrixXcd eval(const VectorXd& x) const;
};

// Hermitian-matrix-valued affine expression; every coefficient is Hermitian.
struct HermExpr {
  MatrixXcd constant;
  std::vector<std::pair<int, MatrixXcd>> terms;

  explicit HermExpr(int dim = 0) : constant(MatrixXcd::Zero(dim, dim)) {}
  static HermExpr of_constant(const MatrixXcd& m) {
    HermExpr e(static_cast<int>(m.rows()));
    e.constant = m;
    return e;
  }
  Eigen::Index dim() const { return constant.rows(); }
  HermExpr& operator+=(const HermExpr& o);
  HermExpr& operator-=(const HermExpr& o);
  HermExpr& operator*=(double s);
  MatrixXcd eval(const VectorXd& x) const;
  bool is_real() const;  // all imaginary parts negligible
};

HermExpr operator+(HermExpr a, const HermExpr& b);
HermExpr operator-(HermExpr a, const HermExpr& b);
HermExpr operator*(double s, HermExpr a);

// ---- builders over variables ----

// X itself.
HermExpr herm_var_expr(const HermVar& x);
// T X T^H for constant T (rows may differ from x.dim).
HermExpr congruence(const MatrixXcd& t, const HermVar& x);
// tr(C X) for Hermitian C; real by Hermiticity.
RealExpr trace_form(const MatrixXcd& c, const HermVar& x);
// u^H X u.
RealExpr quad_form(const HermVar& x, const VectorXcd& u);
// left * X * u for constant matrix `left` and vector u.
CVecExpr herm_times_vec(const HermVar& x, const VectorXcd& u, const MatrixXcd& left);
CVecExpr herm_times_vec(const HermVar& x, const VectorXcd& u);
// left * X * right.
CMatExpr mat_product(const MatrixXcd& left, const HermVar& x, const MatrixXcd& right);

// ---- builders over expressions ----

RealExpr trace_form(const MatrixXcd& c, const HermExpr& x);
RealExpr quad_form(const HermExpr& x, const VectorXcd& u);
CVecExpr expr_times_vec(const CMatExpr& c, const VectorXcd& u);
CVecExpr expr_times_vec(const HermExpr& c, const VectorXcd& u);
// Re(a^H b).
RealExpr real_dot(const VectorXcd& a, const CVecExpr& b);
// C * diag(q) for constant C and vector expression q.
CMatExpr cols_scaled(const MatrixXcd& c, const CVecExpr& q);
// entry n: conj(q_n) * g_n.
CVecExpr diag_conj_scaled(const CVecExpr& q, const VectorXcd& g);
// s * I.
HermExpr scaled_identity(const RealExpr& s, int dim);

// tr(X) of a Hermitian expression.
RealExpr trace_of(const HermExpr& x);
// T X T^H for a Hermitian expression X.
HermExpr congruence_expr(const MatrixXcd& t, const HermExpr& x);
// First n entries of a vector expression.
CVecExpr cvec_head(const CVecExpr& v, int n);
// Entrywise product with a fixed Hermitian-symmetric mask: (X . mask).
HermExpr hadamard_fixed(const HermExpr& x, const MatrixXcd& mask);
// Conversions and constant products.
CMatExpr herm_to_mat(const HermExpr& x);
CMatExpr mat_times_const(const CMatExpr& x, const MatrixXcd& r);
CMatExpr const_times_mat(const MatrixXcd& l, const CMatExpr& x);
CVecExpr const_times_vec(const MatrixXcd& l, const CVecExpr& v);
CVecExpr cvec_scale(const CVecExpr& v, Complex s);
CVecExpr cvec_add(const CVecExpr& a, const CVecExpr& b);
// Entrywise scale by fixed complex factors.
CVecExpr scale_entries(const CVecExpr& v, const VectorXcd& factors);

// Entry accessors (p,q) of a Hermitian expression.
RealExpr entry_re(const HermExpr& x, int p, int q);
RealExpr entry_im(const HermExpr& x, int p, int q);

// Block assemblies (all Hermitian by construction).
HermExpr hermitian_2x2(const HermExpr& a11, const CMatExpr& a12, const HermExpr& a22);
HermExpr bordered(const HermExpr& a, const CVecExpr& b, const RealExpr& corner);
HermExpr schur2(const RealExpr& a, const RealExpr& off, const RealExpr& c);

// Isometric real vectorization rows of a Hermitian expression: diagonal
// entries, then sqrt(2)*(re, im) of the strict upper triangle. The Euclidean
// norm of the rows equals the Frobenius norm of the matrix.
std::vector<RealExpr> vech_rows(const HermExpr& x);
// Real embedding rows (re, im interleaved) of a complex vector expression.
std::vector<RealExpr> cvec_rows(const CVecExpr& v);

}  // namespace riscf::conic
