#include "riscf/conic/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>

namespace riscf::conic {
namespace {

constexpr double kReg = 1e-10;  // static KKT regularization

// ---------- symmetric vectorization (Frobenius-isometric) ----------

int svec_dim(int d) { return d * (d + 1) / 2; }

void svec_into(const MatrixXd& m, Eigen::Ref<VectorXd> out) {
  static const double kSqrt2 = std::sqrt(2.0);
  const int d = static_cast<int>(m.rows());
  int idx = 0;
  for (int q = 0; q < d; ++q) {
    for (int p = 0; p < q; ++p) out[idx++] = kSqrt2 * m(p, q);
    out[idx++] = m(q, q);
  }
}

MatrixXd unsvec(const Eigen::Ref<const VectorXd>& v, int d) {
  static const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
  MatrixXd m(d, d);
  int idx = 0;
  for (int q = 0; q < d; ++q) {
    for (int p = 0; p < q; ++p) {
      const double x = v[idx++] * kInvSqrt2;
      m(p, q) = x;
      m(q, p) = x;
    }
    m(q, q) = v[idx++];
  }
  return m;
}

// Real symmetric embedding of a complex Hermitian matrix.
MatrixXd embed_hermitian(const MatrixXcd& h) {
  const int d = static_cast<int>(h.rows());
  MatrixXd e(2 * d, 2 * d);
  e.topLeftCorner(d, d) = h.real();
  e.bottomRightCorner(d, d) = h.real();
  e.topRightCorner(d, d) = -h.imag();
  e.bottomLeftCorner(d, d) = h.imag();
  return e;
}

// ---------- compiled cone blocks ----------

struct PsdBlock {
  int d = 0;
  int sd = 0;  // svec dimension
  std::vector<int> vars;
  std::vector<MatrixXd> coefs;  // symmetric, aligned with vars
  MatrixXd constant;            // h contribution: svec(constant)
};

struct Compiled {
  int n = 0;
  VectorXd c;         // minimize c.x
  double obj_const = 0.0;
  double obj_sign = -1.0;  // maximize => reported obj = -c.x + const

  MatrixXd A;  // p x n
  VectorXd b;

  MatrixXd G_lp;  // m_lp x n
  VectorXd h_lp;

  struct Soc {
    MatrixXd G;
    VectorXd h;
    int dim = 0;
  };
  std::vector<Soc> socs;
  std::vector<PsdBlock> psds;

  int m_lp = 0;
  int m_total = 0;
  double degree = 0.0;

  int lp_offset = 0;
  std::vector<int> soc_offset;
  std::vector<int> psd_offset;
};

VectorXd expr_row(const RealExpr& e, int n) {
  VectorXd r = VectorXd::Zero(n);
  for (const auto& [i, c] : e.terms) r[i] += c;
  return r;
}

Compiled compile(const ConicProgram& prog) {
  Compiled cp;
  cp.n = prog.num_reals();

  cp.c = VectorXd::Zero(cp.n);
  for (const auto& [i, co] : prog.objective().terms) cp.c[i] -= co;  // maximize
  cp.obj_const = prog.objective().constant;

  // Equalities.
  std::vector<const LinearConstraint*> eqs, ineqs;
  for (const auto& l : prog.linear())
    (l.equality ? eqs : ineqs).push_back(&l);

  cp.A.resize(static_cast<Eigen::Index>(eqs.size()), cp.n);
  cp.b.resize(static_cast<Eigen::Index>(eqs.size()));
  for (std::size_t r = 0; r < eqs.size(); ++r) {
    VectorXd row = expr_row(eqs[r]->expr, cp.n);
    double rhs = -eqs[r]->expr.constant;
    const double scale = std::max(row.cwiseAbs().maxCoeff(), std::abs(rhs));
    const double inv = scale > 1e-12 ? 1.0 / scale : 1.0;
    cp.A.row(static_cast<Eigen::Index>(r)) = inv * row.transpose();
    cp.b[static_cast<Eigen::Index>(r)] = inv * rhs;
  }

  // LP rows: nonneg variable declarations then inequalities.
  std::vector<VectorXd> lp_rows;
  std::vector<double> lp_h;
  for (const auto& v : prog.vars())
    if (!v.is_matrix && v.nonneg) {
      VectorXd row = VectorXd::Zero(cp.n);
      row[v.base] = -1.0;
      lp_rows.push_back(row);
      lp_h.push_back(0.0);
    }
  for (const auto* l : ineqs) {
    VectorXd row = -expr_row(l->expr, cp.n);
    double h = l->expr.constant;
    const double scale = std::max(row.cwiseAbs().maxCoeff(), std::abs(h));
    const double inv = scale > 1e-12 ? 1.0 / scale : 1.0;
    lp_rows.push_back(inv * row);
    lp_h.push_back(inv * h);
  }
  cp.m_lp = static_cast<int>(lp_rows.size());
  cp.G_lp.resize(cp.m_lp, cp.n);
  cp.h_lp.resize(cp.m_lp);
  for (int r = 0; r < cp.m_lp; ++r) {
    cp.G_lp.row(r) = lp_rows[r].transpose();
    cp.h_lp[r] = lp_h[r];
  }

  // SOC blocks: s = (bound; rows).
  for (const auto& s : prog.socs()) {
    Compiled::Soc blk;
    blk.dim = static_cast<int>(s.rows.size()) + 1;
    blk.G.resize(blk.dim, cp.n);
    blk.h.resize(blk.dim);
    blk.G.row(0) = -expr_row(s.bound, cp.n).transpose();
    blk.h[0] = s.bound.constant;
    double scale = std::max(blk.G.row(0).cwiseAbs().maxCoeff(), std::abs(blk.h[0]));
    for (std::size_t r = 0; r < s.rows.size(); ++r) {
      blk.G.row(static_cast<Eigen::Index>(r + 1)) =
          -expr_row(s.rows[r], cp.n).transpose();
      blk.h[static_cast<Eigen::Index>(r + 1)] = s.rows[r].constant;
      scale = std::max({scale,
                        blk.G.row(static_cast<Eigen::Index>(r + 1)).cwiseAbs().maxCoeff(),
                        std::abs(blk.h[static_cast<Eigen::Index>(r + 1)])});
    }
    if (scale > 1e-12) {
      blk.G /= scale;
      blk.h /= scale;
    }
    cp.socs.push_back(std::move(blk));
  }

  // PSD blocks; complex Hermitian expressions get the real embedding.
  for (const auto& l : prog.lmis()) {
    PsdBlock blk;
    const bool real_only = l.mat.is_real();
    blk.d = static_cast<int>(l.mat.dim()) * (real_only ? 1 : 2);
    blk.sd = svec_dim(blk.d);
    blk.constant = real_only ? MatrixXd(l.mat.constant.real())
                             : embed_hermitian(l.mat.constant);
    double scale = blk.constant.cwiseAbs().maxCoeff();
    // merge duplicate variable terms
    std::vector<std::pair<int, MatrixXcd>> terms = l.mat.terms;
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (!blk.vars.empty() && blk.vars.back() == terms[i].first) {
        blk.coefs.back() += real_only ? MatrixXd(terms[i].second.real())
                                      : embed_hermitian(terms[i].second);
      } else {
        blk.vars.push_back(terms[i].first);
        blk.coefs.push_back(real_only ? MatrixXd(terms[i].second.real())
                                      : embed_hermitian(terms[i].second));
      }
      scale = std::max(scale, blk.coefs.back().cwiseAbs().maxCoeff());
    }
    if (scale > 1e-12) {
      blk.constant /= scale;
      for (auto& m : blk.coefs) m /= scale;
    }
    cp.psds.push_back(std::move(blk));
  }

  cp.lp_offset = 0;
  int off = cp.m_lp;
  cp.degree = cp.m_lp;
  for (const auto& s : cp.socs) {
    cp.soc_offset.push_back(off);
    off += s.dim;
    cp.degree += 1;
  }
  for (const auto& p : cp.psds) {
    cp.psd_offset.push_back(off);
    off += p.sd;
    cp.degree += p.d;
  }
  cp.m_total = off;
  return cp;
}

// ---------- Nesterov-Todd scalings ----------

struct SocScale {
  double eta = 1.0;
  VectorXd v;  // unit-J half-point: W = eta (2 v v^T - J)
  VectorXd lambda;
};

struct PsdScale {
  MatrixXd R, Rinv;
  VectorXd sigma;
};

struct Scalings {
  bool identity = true;
  VectorXd lp_w, lp_lambda;
  std::vector<SocScale> socs;
  std::vector<PsdScale> psds;
};

double soc_j(const Eigen::Ref<const VectorXd>& u) {
  return u[0] * u[0] - u.tail(u.size() - 1).squaredNorm();
}

bool compute_scalings(const Compiled& cp, const VectorXd& s, const VectorXd& z,
                      Scalings& w) {
  w.identity = false;
  w.lp_w.resize(cp.m_lp);
  w.lp_lambda.resize(cp.m_lp);
  for (int i = 0; i < cp.m_lp; ++i) {
    const double si = s[i], zi = z[i];
    if (si <= 0 || zi <= 0) return false;
    w.lp_w[i] = std::sqrt(si / zi);
    w.lp_lambda[i] = std::sqrt(si * zi);
  }
  w.socs.clear();
  for (std::size_t k = 0; k < cp.socs.size(); ++k) {
    const int off = cp.soc_offset[k], dim = cp.socs[k].dim;
    const VectorXd sb = s.segment(off, dim), zb = z.segment(off, dim);
    const double js = soc_j(sb), jz = soc_j(zb);
    if (js <= 0 || jz <= 0 || sb[0] <= 0 || zb[0] <= 0) return false;
    SocScale sc;
    const double rjs = std::sqrt(js), rjz = std::sqrt(jz);
    sc.eta = std::sqrt(rjs / rjz);
    VectorXd sbar = sb / rjs, zbar = zb / rjz;
    const double gamma = std::sqrt((1.0 + sbar.dot(zbar)) / 2.0);
    VectorXd q = sbar;  // NT point
    q[0] += zbar[0];
    q.tail(dim - 1) -= zbar.tail(dim - 1);
    q /= (2.0 * gamma);
    sc.v = q;
    sc.v[0] += 1.0;
    sc.v /= std::sqrt(2.0 * sc.v[0]);
    // lambda = W z
    VectorXd jz_z = zb;
    jz_z.tail(dim - 1) = -jz_z.tail(dim - 1);
    sc.lambda = sc.eta * (2.0 * sc.v * sc.v.dot(zb) - jz_z);
    w.socs.push_back(std::move(sc));
  }
  w.psds.clear();
  for (std::size_t k = 0; k < cp.psds.size(); ++k) {
    const int off = cp.psd_offset[k], d = cp.psds[k].d;
    MatrixXd S = unsvec(s.segment(off, cp.psds[k].sd), d);
    MatrixXd Z = unsvec(z.segment(off, cp.psds[k].sd), d);
    Eigen::LLT<MatrixXd> ls(S), lz(Z);
    for (int tries = 0; tries < 3 && ls.info() != Eigen::Success; ++tries) {
      S += (1e-14 * std::max(1.0, S.trace() / d)) * MatrixXd::Identity(d, d);
      ls.compute(S);
    }
    for (int tries = 0; tries < 3 && lz.info() != Eigen::Success; ++tries) {
      Z += (1e-14 * std::max(1.0, Z.trace() / d)) * MatrixXd::Identity(d, d);
      lz.compute(Z);
    }
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
    const MatrixXd Ls = ls.matrixL();
    const MatrixXd Lz = lz.matrixL();
    Eigen::JacobiSVD<MatrixXd> svd(Lz.transpose() * Ls,
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
    PsdScale sc;
    sc.sigma = svd.singularValues();
    if (sc.sigma.minCoeff() <= 0) return false;
    const VectorXd inv_sqrt = sc.sigma.cwiseSqrt().cwiseInverse();
    sc.R = Ls * svd.matrixV() * inv_sqrt.asDiagonal();
    sc.Rinv = inv_sqrt.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
    w.psds.push_back(std::move(sc));
  }
  return true;
}

// ---------- per-cone linear maps ----------

enum class MapKind { w, wt, winv, winvt };

void apply_map(const Compiled& cp, const Scalings& w, MapKind kind, VectorXd& u) {
  if (w.identity) return;
  for (int i = 0; i < cp.m_lp; ++i) {
    const double f = (kind == MapKind::w || kind == MapKind::wt) ? w.lp_w[i]
                                                                 : 1.0 / w.lp_w[i];
    u[i] *= f;
  }
  for (std::size_t k = 0; k < cp.socs.size(); ++k) {
    const int off = cp.soc_offset[k], dim = cp.socs[k].dim;
    const auto& sc = w.socs[k];
    VectorXd ub = u.segment(off, dim);
    VectorXd ju = ub;
    ju.tail(dim - 1) = -ju.tail(dim - 1);
    if (kind == MapKind::w || kind == MapKind::wt) {
      u.segment(off, dim) = sc.eta * (2.0 * sc.v * sc.v.dot(ub) - ju);
    } else {
      VectorXd jw = sc.v;
      jw.tail(dim - 1) = -jw.tail(dim - 1);
      u.segment(off, dim) = (2.0 * jw * jw.dot(ub) - ju) / sc.eta;
    }
  }
  for (std::size_t k = 0; k < cp.psds.size(); ++k) {
    const int off = cp.psd_offset[k], d = cp.psds[k].d;
    const auto& sc = w.psds[k];
    MatrixXd U = unsvec(u.segment(off, cp.psds[k].sd), d);
    MatrixXd V;
    switch (kind) {
      case MapKind::w: V = sc.R.transpose() * U * sc.R; break;
      case MapKind::wt: V = sc.R * U * sc.R.transpose(); break;
      case MapKind::winv: V = sc.Rinv.transpose() * U * sc.Rinv; break;
      case MapKind::winvt: V = sc.Rinv * U * sc.Rinv.transpose(); break;
    }
    V = 0.5 * (V + V.transpose()).eval();
    svec_into(V, u.segment(off, cp.psds[k].sd));
  }
}

// Jordan algebra in the scaled space.
VectorXd scaled_lambda(const Compiled& cp, const Scalings& w) {
  VectorXd l = VectorXd::Zero(cp.m_total);
  l.head(cp.m_lp) = w.lp_lambda;
  for (std::size_t k = 0; k < cp.socs.size(); ++k)
    l.segment(cp.soc_offset[k], cp.socs[k].dim) = w.socs[k].lambda;
  for (std::size_t k = 0; k < cp.psds.size(); ++k) {
    MatrixXd L = w.psds[k].sigma.asDiagonal();
    svec_into(L, l.segment(cp.psd_offset[k], cp.psds[k].sd));
  }
  return l;
}

VectorXd jordan_mul(const Compiled& cp, const VectorXd& a, const VectorXd& b) {
  VectorXd out = VectorXd::Zero(cp.m_total);
  out.head(cp.m_lp) = a.head(cp.m_lp).cwiseProduct(b.head(cp.m_lp));
  for (std::size_t k = 0; k < cp.socs.size(); ++k) {
    const int off = cp.soc_offset[k], dim = cp.socs[k].dim;
    const VectorXd ab = a.segment(off, dim), bb = b.segment(off, dim);
    out[off] = ab.dot(bb);
    out.segment(off + 1, dim - 1) =
        ab[0] * bb.tail(dim - 1) + bb[0] * ab.tail(dim - 1);
  }
  for (std::size_t k = 0; k < cp.psds.size(); ++k) {
    const int off = cp.psd_offset[k], d = cp.psds[k].d;
    MatrixXd A = unsvec(a.segment(off, cp.psds[k].sd), d);
    MatrixXd B = unsvec(b.segment(off, cp.psds[k].sd), d);
    MatrixXd P = 0.5 * (A * B + B * A);
    svec_into(P, out.segment(off, cp.psds[k].sd));
  }
  return out;
}

// Solves lambda o u = v for u, where lambda is the scaled point.
VectorXd jordan_div_lambda(const Compiled& cp, const Scalings& w, const VectorXd& v) {
  VectorXd out = VectorXd::Zero(cp.m_total);
  out.head(cp.m_lp) = v.head(cp.m_lp).cwiseQuotient(w.lp_lambda);
  for (std::size_t k = 0; k < cp.socs.size(); ++k) {
    const int off = cp.soc_offset[k], dim = cp.socs[k].dim;
    const VectorXd& l = w.socs[k].lambda;
    const VectorXd vb = v.segment(off, dim);
    const double a = soc_j(l);
    const double u0 = (l[0] * vb[0] - l.tail(dim - 1).dot(vb.tail(dim - 1))) / a;
    out[off] = u0;
    out.segment(off + 1, dim - 1) =
        (vb.tail(dim - 1) - u0 * l.tail(dim - 1)) / l[0];
  }
  for (std::size_t k = 0; k < cp.psds.size(); ++k) {
    const int off = cp.psd_offset[k], d = cp.psds[k].d;
    const VectorXd& sig = w.psds[k].sigma;
    MatrixXd V = unsvec(v.segment(off, cp.psds[k].sd), d);
    for (int q = 0; q < d; ++q)
      for (int p = 0; p < d; ++p) V(p, q) *= 2.0 / (sig[p] + sig[q]);
    svec_into(V, out.segment(off, cp.psds[k].sd));
  }
  return out;
}

VectorXd cone_e(const Compiled& cp) {
  VectorXd e = VectorXd::Zero(cp.m_total);
  e.head(cp.m_lp).setOnes();
  for (std::size_t k = 0; k < cp.socs.size(); ++k) e[cp.soc_offset[k]] = 1.0;
  for (std::size_t k = 0; k < cp.psds.size(); ++k)
    svec_into(MatrixXd::Identity(cp.psds[k].d, cp.psds[k].d),
              e.segment(cp.psd_offset[k], cp.psds[k].sd));
  return e;
}

// Largest violation of cone membership (0 when interior).
double cone_violation(const Compiled& cp, const VectorXd& u) {
  double v = 0.0;
  for (int i = 0; i < cp.m_lp; ++i) v = std::max(v, -u[i]);
  for (std::size_t k = 0; k < cp.socs.size(); ++k) {
    const int off = cp.soc_offset[k], dim = cp.socs[k].dim;
    v = std::max(v, u.segment(off + 1, dim - 1).norm() - u[off]);
  }
  for (std::size_t k = 0; k < cp.psds.size(); ++k) {
    MatrixXd U = unsvec(u.segment(cp.psd_offset[k], cp.psds[k].sd), cp.psds[k].d);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(U, Eigen::EigenvaluesOnly);
    v = std::max(v, -es.eigenvalues().minCoeff());
  }
  return v;
}

// Largest t in (0, cap] with u + t du staying in the cone.
double max_step(const Compiled& cp, const VectorXd& u, const VectorXd& du,
                double cap) {
  double t = cap;
  for (int i = 0; i < cp.m_lp; ++i)
    if (du[i] < 0) t = std::min(t, -u[i] / du[i]);
  for (std::size_t k = 0; k < cp.socs.size(); ++k) {
    const int off = cp.soc_offset[k], dim = cp.socs[k].dim;
    const VectorXd ub = u.segment(off, dim), db = du.segment(off, dim);
    const double a = soc_j(db);
    const double b = ub[0] * db[0] - ub.tail(dim - 1).dot(db.tail(dim - 1));
    const double c = soc_j(ub);
    // smallest positive root of a t^2 + 2 b t + c = 0
    double root = std::numeric_limits<double>::infinity();
    const double disc = b * b - a * c;
    if (std::abs(a) < 1e-300) {
      if (b < 0) root = -c / (2.0 * b);
    } else if (disc >= 0) {
      const double sq = std::sqrt(disc);
      for (double r : {(-b - sq) / a, (-b + sq) / a})
        if (r > 0) root = std::min(root, r);
    }
    if (db[0] < 0) root = std::min(root, -ub[0] / db[0]);
    t = std::min(t, root);
  }
  for (std::size_t k = 0; k < cp.psds.size(); ++k) {
    const int off = cp.psd_offset[k], d = cp.psds[k].d;
    MatrixXd U = unsvec(u.segment(off, cp.psds[k].sd), d);
    MatrixXd D = unsvec(du.segment(off, cp.psds[k].sd), d);
    Eigen::LLT<MatrixXd> llt(U);
    if (llt.info() != Eigen::Success) {
      llt.compute(U + 1e-13 * std::max(1.0, U.trace() / d) * MatrixXd::Identity(d, d));
      if (llt.info() != Eigen::Success) return 0.0;
    }
    const MatrixXd L = llt.matrixL();
    MatrixXd M = L.triangularView<Eigen::Lower>().solve(D);
    M = L.triangularView<Eigen::Lower>()
            .solve(M.transpose())
            .transpose()
            .eval();
    M = 0.5 * (M + M.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(M, Eigen::EigenvaluesOnly);
    const double lam = es.eigenvalues().minCoeff();
    if (lam < 0) t = std::min(t, -1.0 / lam);
  }
  return t;
}

// ---------- KKT machinery ----------

struct Kkt {
  const Compiled* cp = nullptr;
  MatrixXd Ghat;  // m_total x n, scaled by W^{-T}
  Eigen::LLT<MatrixXd> h_llt;
  Eigen::LLT<MatrixXd> schur_llt;
  bool has_eq = false;

  // Builds W^{-T}G and the reduced factorizations for the current scaling.
  bool factor(const Scalings& w) {
    const Compiled& c = *cp;
    Ghat.resize(c.m_total, c.n);
    Ghat.setZero();
    if (c.m_lp > 0) {
      if (w.identity)
        Ghat.topRows(c.m_lp) = c.G_lp;
      else
        Ghat.topRows(c.m_lp) = w.lp_w.cwiseInverse().asDiagonal() * c.G_lp;
    }
    for (std::size_t k = 0; k < c.socs.size(); ++k) {
      const int off = c.soc_offset[k], dim = c.socs[k].dim;
      if (w.identity) {
        Ghat.middleRows(off, dim) = c.socs[k].G;
      } else {
        const auto& sc = w.socs[k];
        VectorXd jw = sc.v;
        jw.tail(dim - 1) = -jw.tail(dim - 1);
        MatrixXd JG = c.socs[k].G;
        JG.bottomRows(dim - 1) = -JG.bottomRows(dim - 1);
        Ghat.middleRows(off, dim) =
            (2.0 * jw * (jw.transpose() * c.socs[k].G) - JG) / sc.eta;
      }
    }
    for (std::size_t k = 0; k < c.psds.size(); ++k) {
      const auto& blk = c.psds[k];
      const int off = c.psd_offset[k];
      VectorXd col(blk.sd);
      for (std::size_t t = 0; t < blk.vars.size(); ++t) {
        // G column is -coef; scale then svec
        if (w.identity) {
          svec_into(-blk.coefs[t], col);
        } else {
          const auto& sc = w.psds[k];
          MatrixXd m = sc.Rinv * blk.coefs[t] * sc.Rinv.transpose();
          m = 0.5 * (m + m.transpose()).eval();
          svec_into(-m, col);
        }
        Ghat.col(blk.vars[t]).segment(off, blk.sd) = col;
      }
    }

    MatrixXd H = Ghat.transpose() * Ghat;
    H.diagonal().array() += kReg;
    h_llt.compute(H);
    if (h_llt.info() != Eigen::Success) return false;
    has_eq = c.A.rows() > 0;
    if (has_eq) {
      MatrixXd HiAt = h_llt.solve(c.A.transpose());
      MatrixXd S = c.A * HiAt;
      S.diagonal().array() += kReg;
      schur_llt.compute(S);
      if (schur_llt.info() != Eigen::Success) return false;
    }
    return true;
  }

  // Solves [H A^T; A 0] (dx, dy) = (bx, by) with one refinement pass.
  void solve_reduced(const VectorXd& bx, const VectorXd& by, VectorXd& dx,
                     VectorXd& dy) const {
    const Compiled& c = *cp;
    auto pass = [&](const VectorXd& rx, const VectorXd& ry, VectorXd& ox,
                    VectorXd& oy) {
      if (has_eq) {
        VectorXd t = h_llt.solve(rx);
        oy = schur_llt.solve(c.A * t - ry);
        ox = h_llt.solve(rx - c.A.transpose() * oy);
      } else {
        ox = h_llt.solve(rx);
        oy.resize(0);
      }
    };
    pass(bx, by, dx, dy);
    // refinement
    VectorXd rx = bx - Ghat.transpose() * (Ghat * dx);
    rx -= kReg * dx;
    VectorXd ry;
    if (has_eq) {
      rx -= c.A.transpose() * dy;
      ry = by - c.A * dx;
    } else {
      ry.resize(0);
    }
    VectorXd ex, ey;
    pass(rx, ry, ex, ey);
    dx += ex;
    if (has_eq) dy += ey;
  }

  // Solves the 3x3 system (see block comment in solve()).
  void solve3(const Scalings& w, const VectorXd& bx, const VectorXd& by,
              const VectorXd& bz, VectorXd& dx, VectorXd& dy, VectorXd& dz) const {
    const Compiled& c = *cp;
    VectorXd bz_scaled = bz;
    apply_map(c, w, MapKind::winvt, bz_scaled);
    VectorXd rx = bx + Ghat.transpose() * bz_scaled;
    solve_reduced(rx, by, dx, dy);
    dz = Ghat * dx - bz_scaled;
    apply_map(c, w, MapKind::winv, dz);
  }
};

double vec_or_one(const VectorXd& v) { return std::max(1.0, v.norm()); }

}  // namespace

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::inaccurate: return "inaccurate";
    default: return "failure";
  }
}

ConicSolution solve(const ConicProgram& prog, const SolverOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  Compiled cp = compile(prog);
  ConicSolution sol;
  sol.x = VectorXd::Zero(cp.n);

  auto finish = [&](SolveStatus st, const std::string& msg) {
    sol.status = st;
    sol.message = msg;
    sol.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sol.objective = -cp.c.dot(sol.x) + cp.obj_const;
    return sol;
  };

  if (cp.m_total == 0) {
    // Only equality constraints: solve least squares and report.
    if (cp.A.rows() > 0)
      sol.x = cp.A.colPivHouseholderQr().solve(cp.b);
    return finish(SolveStatus::optimal, "no cone constraints");
  }

  // Assemble h (cone constants) as one vector.
  VectorXd h = VectorXd::Zero(cp.m_total);
  h.head(cp.m_lp) = cp.h_lp;
  for (std::size_t k = 0; k < cp.socs.size(); ++k)
    h.segment(cp.soc_offset[k], cp.socs[k].dim) = cp.socs[k].h;
  for (std::size_t k = 0; k < cp.psds.size(); ++k)
    svec_into(cp.psds[k].constant,
              h.segment(cp.psd_offset[k], cp.psds[k].sd));

  auto apply_G = [&](const VectorXd& x) {
    VectorXd out = VectorXd::Zero(cp.m_total);
    if (cp.m_lp) out.head(cp.m_lp) = cp.G_lp * x;
    for (std::size_t k = 0; k < cp.socs.size(); ++k)
      out.segment(cp.soc_offset[k], cp.socs[k].dim) = cp.socs[k].G * x;
    for (std::size_t k = 0; k < cp.psds.size(); ++k) {
      const auto& blk = cp.psds[k];
      MatrixXd m = MatrixXd::Zero(blk.d, blk.d);
      for (std::size_t t = 0; t < blk.vars.size(); ++t)
        m -= x[blk.vars[t]] * blk.coefs[t];
      svec_into(m, out.segment(cp.psd_offset[k], blk.sd));
    }
    return out;
  };
  auto apply_Gt = [&](const VectorXd& u) {
    VectorXd out = VectorXd::Zero(cp.n);
    if (cp.m_lp) out = cp.G_lp.transpose() * u.head(cp.m_lp);
    for (std::size_t k = 0; k < cp.socs.size(); ++k)
      out += cp.socs[k].G.transpose() * u.segment(cp.soc_offset[k], cp.socs[k].dim);
    for (std::size_t k = 0; k < cp.psds.size(); ++k) {
      const auto& blk = cp.psds[k];
      MatrixXd U = unsvec(u.segment(cp.psd_offset[k], blk.sd), blk.d);
      for (std::size_t t = 0; t < blk.vars.size(); ++t)
        out[blk.vars[t]] -= (blk.coefs[t].cwiseProduct(U)).sum();
    }
    return out;
  };

  Kkt kkt;
  kkt.cp = &cp;
  Scalings w;
  w.identity = true;
  if (!kkt.factor(w)) return finish(SolveStatus::failure, "initial factorization failed");

  // Initial point.
  VectorXd x, y, z, s, tmp_y, tmp_x;
  {
    VectorXd zx, zy, zz;
    kkt.solve3(w, VectorXd::Zero(cp.n), cp.b, h, zx, zy, zz);
    x = zx;
    s = -zz;
    const double viol = cone_violation(cp, s);
    if (viol >= 0) s += (1.0 + viol) * cone_e(cp);

    kkt.solve3(w, -cp.c, VectorXd::Zero(cp.A.rows()), VectorXd::Zero(cp.m_total),
               tmp_x, y, z);
    const double dviol = cone_violation(cp, z);
    if (dviol >= 0) z += (1.0 + dviol) * cone_e(cp);
  }

  const VectorXd e = cone_e(cp);
  double best_score = std::numeric_limits<double>::infinity();
  VectorXd best_x = x;
  double best_pres = 1, best_dres = 1, best_gap = 1;

  const double norm_b = vec_or_one(cp.b);
  const double norm_h = vec_or_one(h);
  const double norm_c = vec_or_one(cp.c);

  int iter = 0;
  std::string end_msg = "iteration limit";
  for (; iter < opts.max_iters; ++iter) {
    const VectorXd rx = cp.c + cp.A.transpose() * y + apply_Gt(z);
    const VectorXd ry = cp.A * x - cp.b;
    const VectorXd rz = apply_G(x) + s - h;
    const double gap = s.dot(z);
    const double pcost = cp.c.dot(x);
    const double dcost = -h.dot(z) - cp.b.dot(y);

    const double pres = std::max(ry.norm() / norm_b, rz.norm() / norm_h);
    const double dres = rx.norm() / norm_c;
    double relgap = std::numeric_limits<double>::infinity();
    if (pcost < 0)
      relgap = gap / -pcost;
    else if (dcost > 0)
      relgap = gap / dcost;

    const double score = std::max({pres, dres, std::min(relgap, gap)});
    if (score < best_score) {
      best_score = score;
      best_x = x;
      best_pres = pres;
      best_dres = dres;
      best_gap = gap;
    }
    if (opts.verbose)
      std::cerr << "iter " << iter << " pres " << pres << " dres " << dres
                << " gap " << gap << "\n";

    if (pres <= opts.feas_tol && dres <= opts.feas_tol &&
        (gap <= opts.gap_abs || relgap <= opts.gap_rel)) {
      sol.x = x;
      sol.iterations = iter;
      sol.primal_residual = pres;
      sol.dual_residual = dres;
      sol.duality_gap = gap;
      return finish(SolveStatus::optimal, "converged");
    }

    // Infeasibility certificates.
    const double hz_by = h.dot(z) + cp.b.dot(y);
    if (hz_by < 0) {
      const double cert = (cp.A.transpose() * y + apply_Gt(z)).norm() / norm_c;
      if (cert <= opts.feas_tol * (-hz_by)) {
        sol.iterations = iter;
        return finish(SolveStatus::infeasible, "primal infeasibility certificate");
      }
    }
    if (pcost < 0) {
      const double res = (apply_G(x) + s).norm() / norm_h;
      const double eqres = cp.A.rows() ? (cp.A * x).norm() / norm_b : 0.0;
      if (std::max(res, eqres) <= opts.feas_tol * (-pcost)) {
        sol.iterations = iter;
        return finish(SolveStatus::failure, "dual infeasibility certificate (unbounded)");
      }
    }

    if (!compute_scalings(cp, s, z, w)) {
      end_msg = "scaling breakdown";
      break;
    }
    if (!kkt.factor(w)) {
      end_msg = "KKT factorization failed";
      break;
    }
    const VectorXd lambda = scaled_lambda(cp, w);
    const double mu = gap / cp.degree;

    // Affine direction.
    VectorXd ds_target = -jordan_mul(cp, lambda, lambda);
    VectorXd g = jordan_div_lambda(cp, w, ds_target);
    VectorXd wg = g;
    apply_map(cp, w, MapKind::wt, wg);
    VectorXd dx_a, dy_a, dz_a;
    kkt.solve3(w, -rx, -ry, -rz - wg, dx_a, dy_a, dz_a);
    VectorXd ds_a = -rz - apply_G(dx_a);

    double alpha_aff = std::min(max_step(cp, s, ds_a, 10.0),
                                max_step(cp, z, dz_a, 10.0));
    alpha_aff = std::min(alpha_aff, 1.0);
    const double sigma = std::pow(1.0 - alpha_aff, 3);

    // Combined direction with Mehrotra correction.
    VectorXd ds_scaled = ds_a, dz_scaled = dz_a;
    apply_map(cp, w, MapKind::winvt, ds_scaled);
    apply_map(cp, w, MapKind::w, dz_scaled);
    const VectorXd corr = jordan_mul(cp, ds_scaled, dz_scaled);
    ds_target = -jordan_mul(cp, lambda, lambda) + sigma * mu * e - corr;
    g = jordan_div_lambda(cp, w, ds_target);
    wg = g;
    apply_map(cp, w, MapKind::wt, wg);
    VectorXd dx, dy, dz;
    kkt.solve3(w, -rx, -ry, -rz - wg, dx, dy, dz);
    VectorXd ds = -rz - apply_G(dx);

    double alpha = std::min(max_step(cp, s, ds, 10.0), max_step(cp, z, dz, 10.0));
    alpha = std::min(1.0, opts.step_fraction * alpha);
    if (alpha <= 1e-9) {
      end_msg = "step stalled";
      break;
    }
    x += alpha * dx;
    if (cp.A.rows()) y += alpha * dy;
    s += alpha * ds;
    z += alpha * dz;
  }

  sol.x = best_x;
  sol.iterations = iter;
  sol.primal_residual = best_pres;
  sol.dual_residual = best_dres;
  sol.duality_gap = best_gap;
  if (best_score <= 1e-5) return finish(SolveStatus::inaccurate, end_msg);
  return finish(SolveStatus::failure, end_msg);
}

double max_violation(const ConicProgram& prog, const VectorXd& x) {
  double v = 0.0;
  for (const auto& l : prog.linear()) {
    const double val = l.expr.eval(x);
    v = std::max(v, l.equality ? std::abs(val) : -val);
  }
  for (const auto& s : prog.socs()) {
    double nrm = 0.0;
    for (const auto& r : s.rows) {
      const double val = r.eval(x);
      nrm += val * val;
    }
    v = std::max(v, std::sqrt(nrm) - s.bound.eval(x));
  }
  for (const auto& l : prog.lmis()) {
    const MatrixXcd m = l.mat.eval(x);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    v = std::max(v, -es.eigenvalues().minCoeff());
  }
  return v;
}

}  // namespace riscf::conic
