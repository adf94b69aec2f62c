#include "riscf/conic/expr.hpp"

#include <algorithm>
#include <stdexcept>

namespace riscf::conic {

namespace {
const Complex kI(0.0, 1.0);
}  // namespace

int herm_param_count(int dim) { return dim * dim; }

int herm_diag_param(int dim, int p) {
  (void)dim;
  return p;
}

namespace {
// Strict-upper pairs ordered by (q, p), p < q; each pair holds (re, im).
int upper_pair_offset(int dim, int p, int q) {
  // number of pairs before column q: 0+1+...+(q-1) = q(q-1)/2, plus p within.
  (void)dim;
  return q * (q - 1) / 2 + p;
}
}  // namespace

int herm_re_param(int dim, int p, int q) {
  return dim + 2 * upper_pair_offset(dim, p, q);
}

int herm_im_param(int dim, int p, int q) {
  return dim + 2 * upper_pair_offset(dim, p, q) + 1;
}

MatrixXcd herm_basis(int dim, int local) {
  MatrixXcd b = MatrixXcd::Zero(dim, dim);
  if (local < dim) {
    b(local, local) = 1.0;
    return b;
  }
  const int rem = local - dim;
  const int pair = rem / 2;
  const bool imag = rem % 2;
  // find q whose offset range [q(q-1)/2, q(q-1)/2 + q - 1] contains pair
  int q = 1;
  while (q * (q - 1) / 2 + q - 1 < pair) ++q;
  const int p = pair - q * (q - 1) / 2;
  if (!imag) {
    b(p, q) = 1.0;
    b(q, p) = 1.0;
  } else {
    b(p, q) = kI;
    b(q, p) = -kI;
  }
  return b;
}

MatrixXcd herm_from_params(const Eigen::Ref<const VectorXd>& params, int dim) {
  MatrixXcd h = MatrixXcd::Zero(dim, dim);
  for (int p = 0; p < dim; ++p) h(p, p) = params[herm_diag_param(dim, p)];
  for (int q = 0; q < dim; ++q)
    for (int p = 0; p < q; ++p) {
      const Complex v(params[herm_re_param(dim, p, q)],
                      params[herm_im_param(dim, p, q)]);
      h(p, q) = v;
      h(q, p) = std::conj(v);
    }
  return h;
}

VectorXd herm_to_params(const MatrixXcd& h) {
  const int dim = static_cast<int>(h.rows());
  VectorXd p(herm_param_count(dim));
  for (int i = 0; i < dim; ++i) p[herm_diag_param(dim, i)] = h(i, i).real();
  for (int q = 0; q < dim; ++q)
    for (int i = 0; i < q; ++i) {
      p[herm_re_param(dim, i, q)] = h(i, q).real();
      p[herm_im_param(dim, i, q)] = h(i, q).imag();
    }
  return p;
}

RealExpr& RealExpr::operator+=(const RealExpr& o) {
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

RealExpr& RealExpr::operator-=(const RealExpr& o) {
  constant -= o.constant;
  for (const auto& [i, c] : o.terms) terms.emplace_back(i, -c);
  return *this;
}

RealExpr& RealExpr::operator*=(double s) {
  constant *= s;
  for (auto& [i, c] : terms) c *= s;
  return *this;
}

void RealExpr::normalize() {
  std::sort(terms.begin(), terms.end());
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (out > 0 && terms[out - 1].first == terms[i].first)
      terms[out - 1].second += terms[i].second;
    else
      terms[out++] = terms[i];
  }
  terms.resize(out);
  terms.erase(std::remove_if(terms.begin(), terms.end(),
                             [](const auto& t) { return t.second == 0.0; }),
              terms.end());
}

double RealExpr::eval(const VectorXd& x) const {
  double v = constant;
  for (const auto& [i, c] : terms) v += c * x[i];
  return v;
}

RealExpr operator+(RealExpr a, const RealExpr& b) { return a += b; }
RealExpr operator-(RealExpr a, const RealExpr& b) { return a -= b; }
RealExpr operator*(double s, RealExpr a) { return a *= s; }

CVecExpr& CVecExpr::operator+=(const CVecExpr& o) {
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

VectorXcd CVecExpr::eval(const VectorXd& x) const {
  VectorXcd v = constant;
  for (const auto& [i, c] : terms) v += x[i] * c;
  return v;
}

CMatExpr& CMatExpr::operator+=(const CMatExpr& o) {
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

CMatExpr CMatExpr::adjoint() const {
  CMatExpr out(static_cast<int>(cols()), static_cast<int>(rows()));
  out.constant = constant.adjoint();
  for (const auto& [i, m] : terms) out.terms.emplace_back(i, m.adjoint());
  return out;
}

MatrixXcd CMatExpr::eval(const VectorXd& x) const {
  MatrixXcd v = constant;
  for (const auto& [i, m] : terms) v += x[i] * m;
  return v;
}

HermExpr& HermExpr::operator+=(const HermExpr& o) {
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

HermExpr& HermExpr::operator-=(const HermExpr& o) {
  constant -= o.constant;
  for (const auto& [i, m] : o.terms) terms.emplace_back(i, -m);
  return *this;
}

HermExpr& HermExpr::operator*=(double s) {
  constant *= s;
  for (auto& [i, m] : terms) m *= s;
  return *this;
}

MatrixXcd HermExpr::eval(const VectorXd& x) const {
  MatrixXcd v = constant;
  for (const auto& [i, m] : terms) v += x[i] * m;
  return v;
}

bool HermExpr::is_real() const {
  const double tol = 0.0;
  if (constant.imag().cwiseAbs().maxCoeff() > tol) return false;
  for (const auto& [i, m] : terms)
    if (m.imag().cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

HermExpr operator+(HermExpr a, const HermExpr& b) { return a += b; }
HermExpr operator-(HermExpr a, const HermExpr& b) { return a -= b; }
HermExpr operator*(double s, HermExpr a) { return a *= s; }

HermExpr herm_var_expr(const HermVar& x) {
  HermExpr e(x.dim);
  for (int t = 0; t < x.params(); ++t)
    e.terms.emplace_back(x.base + t, herm_basis(x.dim, t));
  return e;
}

HermExpr congruence(const MatrixXcd& t, const HermVar& x) {
  if (t.cols() != x.dim) throw std::invalid_argument("congruence: shape mismatch");
  HermExpr e(static_cast<int>(t.rows()));
  for (int l = 0; l < x.params(); ++l) {
    MatrixXcd coef = t * herm_basis(x.dim, l) * t.adjoint();
    e.terms.emplace_back(x.base + l, std::move(coef));
  }
  return e;
}

RealExpr trace_form(const MatrixXcd& c, const HermVar& x) {
  if (c.rows() != x.dim || c.cols() != x.dim)
    throw std::invalid_argument("trace_form: shape mismatch");
  RealExpr e;
  for (int t = 0; t < x.params(); ++t) {
    const double coef = (c * herm_basis(x.dim, t)).trace().real();
    if (coef != 0.0) e.add(x.base + t, coef);
  }
  return e;
}

RealExpr quad_form(const HermVar& x, const VectorXcd& u) {
  return trace_form(u * u.adjoint(), x);
}

CVecExpr herm_times_vec(const HermVar& x, const VectorXcd& u, const MatrixXcd& left) {
  CVecExpr e(static_cast<int>(left.rows()));
  for (int t = 0; t < x.params(); ++t)
    e.terms.emplace_back(x.base + t, left * (herm_basis(x.dim, t) * u));
  return e;
}

CVecExpr herm_times_vec(const HermVar& x, const VectorXcd& u) {
  return herm_times_vec(x, u, MatrixXcd::Identity(x.dim, x.dim));
}

CMatExpr mat_product(const MatrixXcd& left, const HermVar& x, const MatrixXcd& right) {
  CMatExpr e(static_cast<int>(left.rows()), static_cast<int>(right.cols()));
  for (int t = 0; t < x.params(); ++t)
    e.terms.emplace_back(x.base + t, left * herm_basis(x.dim, t) * right);
  return e;
}

RealExpr trace_form(const MatrixXcd& c, const HermExpr& x) {
  RealExpr e;
  e.constant = (c * x.constant).trace().real();
  for (const auto& [i, m] : x.terms) {
    const double coef = (c * m).trace().real();
    if (coef != 0.0) e.add(i, coef);
  }
  return e;
}

RealExpr quad_form(const HermExpr& x, const VectorXcd& u) {
  RealExpr e;
  e.constant = (u.adjoint() * x.constant * u)(0).real();
  for (const auto& [i, m] : x.terms) {
    const double coef = (u.adjoint() * m * u)(0).real();
    if (coef != 0.0) e.add(i, coef);
  }
  return e;
}

CVecExpr expr_times_vec(const CMatExpr& c, const VectorXcd& u) {
  CVecExpr e(static_cast<int>(c.rows()));
  e.constant = c.constant * u;
  for (const auto& [i, m] : c.terms) e.terms.emplace_back(i, m * u);
  return e;
}

CVecExpr expr_times_vec(const HermExpr& c, const VectorXcd& u) {
  CVecExpr e(static_cast<int>(c.dim()));
  e.constant = c.constant * u;
  for (const auto& [i, m] : c.terms) e.terms.emplace_back(i, m * u);
  return e;
}

RealExpr real_dot(const VectorXcd& a, const CVecExpr& b) {
  RealExpr e;
  e.constant = a.dot(b.constant).real();
  for (const auto& [i, v] : b.terms) {
    const double coef = a.dot(v).real();
    if (coef != 0.0) e.add(i, coef);
  }
  return e;
}

CMatExpr cols_scaled(const MatrixXcd& c, const CVecExpr& q) {
  if (c.cols() != q.size()) throw std::invalid_argument("cols_scaled: shape mismatch");
  CMatExpr e(static_cast<int>(c.rows()), static_cast<int>(c.cols()));
  e.constant = c * q.constant.asDiagonal();
  for (const auto& [i, v] : q.terms)
    e.terms.emplace_back(i, c * v.asDiagonal());
  return e;
}

CVecExpr diag_conj_scaled(const CVecExpr& q, const VectorXcd& g) {
  if (q.size() != g.size())
    throw std::invalid_argument("diag_conj_scaled: shape mismatch");
  CVecExpr e(static_cast<int>(g.size()));
  e.constant = q.constant.conjugate().cwiseProduct(g);
  for (const auto& [i, v] : q.terms)
    e.terms.emplace_back(i, v.conjugate().cwiseProduct(g));
  return e;
}

HermExpr scaled_identity(const RealExpr& s, int dim) {
  HermExpr e(dim);
  e.constant = s.constant * MatrixXcd::Identity(dim, dim);
  for (const auto& [i, c] : s.terms)
    e.terms.emplace_back(i, c * MatrixXcd::Identity(dim, dim));
  return e;
}

RealExpr trace_of(const HermExpr& x) {
  RealExpr e;
  e.constant = x.constant.trace().real();
  for (const auto& [i, m] : x.terms) {
    const double coef = m.trace().real();
    if (coef != 0.0) e.add(i, coef);
  }
  return e;
}

HermExpr congruence_expr(const MatrixXcd& t, const HermExpr& x) {
  if (t.cols() != x.dim())
    throw std::invalid_argument("congruence_expr: shape mismatch");
  HermExpr e(static_cast<int>(t.rows()));
  e.constant = t * x.constant * t.adjoint();
  for (const auto& [i, m] : x.terms) e.terms.emplace_back(i, t * m * t.adjoint());
  return e;
}

CVecExpr cvec_head(const CVecExpr& v, int n) {
  CVecExpr e(n);
  e.constant = v.constant.head(n);
  for (const auto& [i, t] : v.terms) e.terms.emplace_back(i, t.head(n));
  return e;
}

HermExpr hadamard_fixed(const HermExpr& x, const MatrixXcd& mask) {
  HermExpr e(static_cast<int>(x.dim()));
  e.constant = x.constant.cwiseProduct(mask);
  for (const auto& [i, m] : x.terms) e.terms.emplace_back(i, m.cwiseProduct(mask));
  return e;
}

CMatExpr herm_to_mat(const HermExpr& x) {
  CMatExpr e(static_cast<int>(x.dim()), static_cast<int>(x.dim()));
  e.constant = x.constant;
  e.terms = x.terms;
  return e;
}

CMatExpr mat_times_const(const CMatExpr& x, const MatrixXcd& r) {
  CMatExpr e(static_cast<int>(x.rows()), static_cast<int>(r.cols()));
  e.constant = x.constant * r;
  for (const auto& [i, m] : x.terms) e.terms.emplace_back(i, m * r);
  return e;
}

CMatExpr const_times_mat(const MatrixXcd& l, const CMatExpr& x) {
  CMatExpr e(static_cast<int>(l.rows()), static_cast<int>(x.cols()));
  e.constant = l * x.constant;
  for (const auto& [i, m] : x.terms) e.terms.emplace_back(i, l * m);
  return e;
}

CVecExpr const_times_vec(const MatrixXcd& l, const CVecExpr& v) {
  CVecExpr e(static_cast<int>(l.rows()));
  e.constant = l * v.constant;
  for (const auto& [i, t] : v.terms) e.terms.emplace_back(i, l * t);
  return e;
}

CVecExpr cvec_scale(const CVecExpr& v, Complex s) {
  CVecExpr e = v;
  e.constant *= s;
  for (auto& [i, t] : e.terms) t *= s;
  return e;
}

CVecExpr cvec_add(const CVecExpr& a, const CVecExpr& b) {
  CVecExpr e = a;
  e += b;
  return e;
}

CVecExpr scale_entries(const CVecExpr& v, const VectorXcd& factors) {
  CVecExpr e(static_cast<int>(v.size()));
  e.constant = v.constant.cwiseProduct(factors);
  for (const auto& [i, t] : v.terms) e.terms.emplace_back(i, t.cwiseProduct(factors));
  return e;
}

RealExpr entry_re(const HermExpr& x, int p, int q) {
  RealExpr e;
  e.constant = x.constant(p, q).real();
  for (const auto& [i, m] : x.terms) {
    const double coef = m(p, q).real();
    if (coef != 0.0) e.add(i, coef);
  }
  return e;
}

RealExpr entry_im(const HermExpr& x, int p, int q) {
  RealExpr e;
  e.constant = x.constant(p, q).imag();
  for (const auto& [i, m] : x.terms) {
    const double coef = m(p, q).imag();
    if (coef != 0.0) e.add(i, coef);
  }
  return e;
}

namespace {

// Places src into dst at (r0, c0); Hermitian completion is the caller's job.
void emplace_block(MatrixXcd& dst, const MatrixXcd& src, int r0, int c0) {
  dst.block(r0, c0, src.rows(), src.cols()) = src;
}

}  // namespace

HermExpr hermitian_2x2(const HermExpr& a11, const CMatExpr& a12, const HermExpr& a22) {
  const int d1 = static_cast<int>(a11.dim());
  const int d2 = static_cast<int>(a22.dim());
  if (a12.rows() != d1 || a12.cols() != d2)
    throw std::invalid_argument("hermitian_2x2: block shapes disagree");
  HermExpr e(d1 + d2);

  auto put = [&](int idx, const MatrixXcd* m11, const MatrixXcd* m12,
                 const MatrixXcd* m22) {
    MatrixXcd full = MatrixXcd::Zero(d1 + d2, d1 + d2);
    if (m11) emplace_block(full, *m11, 0, 0);
    if (m22) emplace_block(full, *m22, d1, d1);
    if (m12) {
      emplace_block(full, *m12, 0, d1);
      emplace_block(full, m12->adjoint().eval(), d1, 0);
    }
    if (idx < 0)
      e.constant += full;
    else
      e.terms.emplace_back(idx, std::move(full));
  };

  put(-1, &a11.constant, &a12.constant, &a22.constant);
  for (const auto& [i, m] : a11.terms) put(i, &m, nullptr, nullptr);
  for (const auto& [i, m] : a12.terms) put(i, nullptr, &m, nullptr);
  for (const auto& [i, m] : a22.terms) put(i, nullptr, nullptr, &m);
  return e;
}

HermExpr bordered(const HermExpr& a, const CVecExpr& b, const RealExpr& corner) {
  const int d = static_cast<int>(a.dim());
  if (b.size() != d) throw std::invalid_argument("bordered: vector size mismatch");
  HermExpr e(d + 1);

  auto put = [&](int idx, const MatrixXcd* m, const VectorXcd* v, double s) {
    MatrixXcd full = MatrixXcd::Zero(d + 1, d + 1);
    if (m) emplace_block(full, *m, 0, 0);
    if (v) {
      full.block(0, d, d, 1) = *v;
      full.block(d, 0, 1, d) = v->adjoint();
    }
    full(d, d) = s;
    if (idx < 0)
      e.constant += full;
    else
      e.terms.emplace_back(idx, std::move(full));
  };

  put(-1, &a.constant, &b.constant, corner.constant);
  for (const auto& [i, m] : a.terms) put(i, &m, nullptr, 0.0);
  for (const auto& [i, v] : b.terms) put(i, nullptr, &v, 0.0);
  for (const auto& [i, c] : corner.terms) put(i, nullptr, nullptr, c);
  return e;
}

HermExpr schur2(const RealExpr& a, const RealExpr& off, const RealExpr& c) {
  HermExpr e(2);
  auto put = [&](int idx, double va, double vo, double vc) {
    MatrixXcd m(2, 2);
    m << va, vo, vo, vc;
    if (idx < 0)
      e.constant += m;
    else
      e.terms.emplace_back(idx, std::move(m));
  };
  put(-1, a.constant, off.constant, c.constant);
  for (const auto& [i, v] : a.terms) put(i, v, 0, 0);
  for (const auto& [i, v] : off.terms) put(i, 0, v, 0);
  for (const auto& [i, v] : c.terms) put(i, 0, 0, v);
  return e;
}

std::vector<RealExpr> vech_rows(const HermExpr& x) {
  static const double kSqrt2 = std::sqrt(2.0);
  const int d = static_cast<int>(x.dim());
  std::vector<RealExpr> rows;
  rows.reserve(d * d);
  for (int p = 0; p < d; ++p) rows.push_back(entry_re(x, p, p));
  for (int q = 0; q < d; ++q)
    for (int p = 0; p < q; ++p) {
      rows.push_back(kSqrt2 * entry_re(x, p, q));
      rows.push_back(kSqrt2 * entry_im(x, p, q));
    }
  return rows;
}

std::vector<RealExpr> cvec_rows(const CVecExpr& v) {
  std::vector<RealExpr> rows;
  rows.reserve(2 * v.size());
  for (Eigen::Index n = 0; n < v.size(); ++n) {
    RealExpr re, im;
    re.constant = v.constant[n].real();
    im.constant = v.constant[n].imag();
    for (const auto& [i, vec] : v.terms) {
      if (vec[n].real() != 0.0) re.add(i, vec[n].real());
      if (vec[n].imag() != 0.0) im.add(i, vec[n].imag());
    }
    rows.push_back(std::move(re));
    rows.push_back(std::move(im));
  }
  return rows;
}

}  // namespace riscf::conic
