#include "conic_ipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpt::ipm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Point in the cone R^no_+ x (Hermitian PSD)^N, also used for duals and
// directions. Inner product is the usual euclidean + trace pairing.
struct ConeVec {
  Eigen::VectorXd o;
  std::vector<Eigen::MatrixXcd> P;
};

double dot(const ConeVec& a, const ConeVec& b) {
  double v = a.o.dot(b.o);
  for (std::size_t n = 0; n < a.P.size(); ++n) {
    v += a.P[n].cwiseProduct(b.P[n].conjugate()).sum().real();
  }
  return v;
}

double inf_norm(const ConeVec& a) {
  double v = a.o.size() ? a.o.cwiseAbs().maxCoeff() : 0.0;
  for (const auto& blk : a.P) v = std::max(v, blk.cwiseAbs().maxCoeff());
  return v;
}

void axpy(ConeVec& y, double alpha, const ConeVec& x) {
  y.o += alpha * x.o;
  for (std::size_t n = 0; n < y.P.size(); ++n) y.P[n] += alpha * x.P[n];
}

void hermitianize(Eigen::MatrixXcd& X) {
  X = 0.5 * (X + X.adjoint()).eval();
}

// Cholesky factor with an eigenvalue-floor fallback for iterates that have
// numerically drifted to the cone boundary.
Eigen::MatrixXcd safe_chol(const Eigen::MatrixXcd& X) {
  Eigen::LLT<Eigen::MatrixXcd> llt(X);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(X);
  const double floor =
      std::max(1e-14, 1e-14 * eig.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd ev = eig.eigenvalues().cwiseMax(floor);
  const Eigen::MatrixXcd repaired =
      eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().adjoint();
  return Eigen::LLT<Eigen::MatrixXcd>(repaired).matrixL();
}

// Row bookkeeping. Global row order: N trace rows, K min rows, then the
// active lower and upper box rows. Every row carries exactly one exclusive
// orthant slack; min rows additionally touch the shared epigraph column E.
struct BoxRow {
  int k, n;
  int slack;  // orthant index
  int row;    // global row index
  double bound;
};

struct LocalRow {       // rows appearing in slot n's Schur block
  int type;             // 0 = trace, 1 = box-lo, 2 = box-hi
  int k;                // ER index for box rows
  int row;              // global row index
  int slack;            // orthant index of the exclusive slack
};

struct Layout {
  int K, M, N;
  int no, m, nu;
  int idx_e = 0, u0, v0;
  std::vector<BoxRow> lo, hi;
  Eigen::MatrixXi lo_row, hi_row;          // (k,n) -> row id or -1
  std::vector<std::vector<LocalRow>> slot; // per-slot Schur rows
  Eigen::VectorXd b;
};

Layout make_layout(const Problem& prob) {
  Layout L;
  L.K = static_cast<int>(prob.weight.rows());
  L.N = static_cast<int>(prob.weight.cols());
  L.M = static_cast<int>(prob.h.cols());
  L.u0 = 1;
  L.v0 = 1 + L.N;
  L.lo_row = Eigen::MatrixXi::Constant(L.K, L.N, -1);
  L.hi_row = Eigen::MatrixXi::Constant(L.K, L.N, -1);
  int next_slack = 1 + L.N + L.K;
  int next_row = L.N + L.K;
  const bool have_lo = prob.box_lo.size() > 0;
  const bool have_hi = prob.box_hi.size() > 0;
  for (int n = 0; n < L.N; ++n) {
    for (int k = 0; k < L.K; ++k) {
      if (have_lo && prob.box_lo(k, n) > -kInf) {
        L.lo_row(k, n) = next_row;
        L.lo.push_back({k, n, next_slack++, next_row++, prob.box_lo(k, n)});
      }
      if (have_hi && prob.box_hi(k, n) < kInf) {
        L.hi_row(k, n) = next_row;
        L.hi.push_back({k, n, next_slack++, next_row++, prob.box_hi(k, n)});
      }
    }
  }
  L.no = next_slack;
  L.m = next_row;
  L.nu = L.no + L.N * L.M;  // total cone degree
  L.slot.resize(L.N);
  for (int n = 0; n < L.N; ++n) {
    L.slot[n].push_back({0, -1, n, L.u0 + n});
  }
  for (const auto& r : L.lo) L.slot[r.n].push_back({1, r.k, r.row, r.slack});
  for (const auto& r : L.hi) L.slot[r.n].push_back({2, r.k, r.row, r.slack});
  L.b = Eigen::VectorXd::Zero(L.m);
  for (int n = 0; n < L.N; ++n) L.b(n) = prob.p_max;
  for (const auto& r : L.lo) L.b(r.row) = r.bound;
  for (const auto& r : L.hi) L.b(r.row) = r.bound;
  return L;
}

// Nesterov-Todd scaling state. For each PSD block, G satisfies
// G^{-1} X G^{-H} = G^H Z G = diag(lam); W = G G^H maps the dual slack onto
// the primal via W Z W = X.
struct Scaling {
  Eigen::VectorXd w, lam_o, d;
  std::vector<Eigen::MatrixXcd> G, Ginv, W;
  std::vector<Eigen::VectorXd> lam;
};

Scaling make_scaling(const ConeVec& x, const ConeVec& s) {
  Scaling sc;
  sc.w = (x.o.cwiseQuotient(s.o)).cwiseSqrt();
  sc.lam_o = (x.o.cwiseProduct(s.o)).cwiseSqrt();
  sc.d = x.o.cwiseQuotient(s.o);
  const std::size_t nblk = x.P.size();
  sc.G.resize(nblk);
  sc.Ginv.resize(nblk);
  sc.W.resize(nblk);
  sc.lam.resize(nblk);
  for (std::size_t n = 0; n < nblk; ++n) {
    const Eigen::MatrixXcd Lx = safe_chol(x.P[n]);
    const Eigen::MatrixXcd Lz = safe_chol(s.P[n]);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        (Lz.adjoint() * Lx).eval(),
        Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd sig = svd.singularValues();
    const Eigen::VectorXd isqrt = sig.cwiseSqrt().cwiseInverse();
    sc.G[n] = Lx * svd.matrixV() * isqrt.asDiagonal();
    sc.Ginv[n] = isqrt.asDiagonal() * svd.matrixU().adjoint() * Lz.adjoint();
    sc.W[n] = sc.G[n] * sc.G[n].adjoint();
    sc.lam[n] = sig;
  }
  return sc;
}

}  // namespace

namespace {

// The full solver state bundled so the helper functions stay short.
struct Solver {
  const Problem& prob;
  const Options& opt;
  Layout L;
  Eigen::MatrixXcd Hc;  // M x K, column k = h_k

  explicit Solver(const Problem& p, const Options& o) : prob(p), opt(o) {
    L = make_layout(p);
    Hc = p.h.adjoint();
  }

  Eigen::MatrixXd qforms(const ConeVec& x) const {
    Eigen::MatrixXd q(L.K, L.N);
    for (int n = 0; n < L.N; ++n) {
      const Eigen::MatrixXcd t = prob.h * x.P[n] * Hc;  // K x K, need diag
      q.col(n) = t.diagonal().real();
    }
    return q;
  }

  Eigen::VectorXd applyA(const ConeVec& x) const {
    Eigen::VectorXd r(L.m);
    const Eigen::MatrixXd q = qforms(x);
    for (int n = 0; n < L.N; ++n) {
      r(n) = x.o(L.u0 + n) + x.P[n].trace().real();
    }
    for (int k = 0; k < L.K; ++k) {
      double acc = -x.o(L.idx_e) - x.o(L.v0 + k);
      for (int n = 0; n < L.N; ++n) acc += prob.weight(k, n) * q(k, n);
      r(L.N + k) = acc;
    }
    for (const auto& br : L.lo) r(br.row) = q(br.k, br.n) - x.o(br.slack);
    for (const auto& br : L.hi) r(br.row) = q(br.k, br.n) + x.o(br.slack);
    return r;
  }

  ConeVec applyAT(const Eigen::VectorXd& y) const {
    ConeVec v;
    v.o = Eigen::VectorXd::Zero(L.no);
    for (int k = 0; k < L.K; ++k) {
      v.o(L.idx_e) -= y(L.N + k);
      v.o(L.v0 + k) = -y(L.N + k);
    }
    for (int n = 0; n < L.N; ++n) v.o(L.u0 + n) = y(n);
    for (const auto& br : L.lo) v.o(br.slack) = -y(br.row);
    for (const auto& br : L.hi) v.o(br.slack) = y(br.row);
    v.P.resize(L.N);
    Eigen::VectorXd gamma(L.K);
    for (int n = 0; n < L.N; ++n) {
      for (int k = 0; k < L.K; ++k) {
        double g = prob.weight(k, n) * y(L.N + k);
        if (L.lo_row(k, n) >= 0) g += y(L.lo_row(k, n));
        if (L.hi_row(k, n) >= 0) g += y(L.hi_row(k, n));
        gamma(k) = g;
      }
      v.P[n] = Hc * gamma.asDiagonal() * prob.h;
      v.P[n].diagonal().array() += std::complex<double>(y(n), 0.0);
      hermitianize(v.P[n]);
    }
    return v;
  }

  ConeVec apply_Wbar(const Scaling& sc, const ConeVec& v) const {
    ConeVec r;
    r.o = sc.d.cwiseProduct(v.o);
    r.P.resize(L.N);
    for (int n = 0; n < L.N; ++n) {
      r.P[n] = sc.W[n] * v.P[n] * sc.W[n];
      hermitianize(r.P[n]);
    }
    return r;
  }

  // x-space image of a scaled-space point: w o psi / G psi G^H.
  ConeVec apply_G(const Scaling& sc, const ConeVec& psi) const {
    ConeVec r;
    r.o = sc.w.cwiseProduct(psi.o);
    r.P.resize(L.N);
    for (int n = 0; n < L.N; ++n) {
      r.P[n] = sc.G[n] * psi.P[n] * sc.G[n].adjoint();
      hermitianize(r.P[n]);
    }
    return r;
  }

  ConeVec scale_x(const Scaling& sc, const ConeVec& dx) const {
    ConeVec r;
    r.o = dx.o.cwiseQuotient(sc.w);
    r.P.resize(L.N);
    for (int n = 0; n < L.N; ++n) {
      r.P[n] = sc.Ginv[n] * dx.P[n] * sc.Ginv[n].adjoint();
      hermitianize(r.P[n]);
    }
    return r;
  }

  ConeVec scale_s(const Scaling& sc, const ConeVec& ds) const {
    ConeVec r;
    r.o = sc.w.cwiseProduct(ds.o);
    r.P.resize(L.N);
    for (int n = 0; n < L.N; ++n) {
      r.P[n] = sc.G[n].adjoint() * ds.P[n] * sc.G[n];
      hermitianize(r.P[n]);
    }
    return r;
  }

  // Largest step alpha with (point + alpha * scaled direction) in the cone,
  // given the scaled direction relative to lam.
  double step_bound(const Scaling& sc, const ConeVec& scaled_dir,
                    bool) const {
    double alpha = kInf;
    for (int i = 0; i < L.no; ++i) {
      const double dl = scaled_dir.o(i);
      if (dl < 0.0) alpha = std::min(alpha, -sc.lam_o(i) / dl);
    }
    for (int n = 0; n < L.N; ++n) {
      const Eigen::VectorXd il = sc.lam[n].cwiseSqrt().cwiseInverse();
      const Eigen::MatrixXcd T =
          il.asDiagonal() * scaled_dir.P[n] * il.asDiagonal();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
          T, Eigen::EigenvaluesOnly);
      const double rho = eig.eigenvalues()(0);
      if (rho < 0.0) alpha = std::min(alpha, -1.0 / rho);
    }
    return alpha;
  }

  // Schur-complement factors of A Wbar A^T with the block-arrow elimination.
  struct Factors {
    std::vector<Eigen::LLT<Eigen::MatrixXd>> Dllt;
    std::vector<Eigen::MatrixXd> B;
    Eigen::LLT<Eigen::MatrixXd> Cllt;
  };

  Factors factor_schur(const Scaling& sc) const {
    Factors f;
    f.Dllt.resize(L.N);
    f.B.resize(L.N);
    Eigen::MatrixXd C = Eigen::MatrixXd::Constant(L.K, L.K, sc.d(L.idx_e));
    for (int k = 0; k < L.K; ++k) C(k, k) += sc.d(L.v0 + k);
    for (int n = 0; n < L.N; ++n) {
      const Eigen::MatrixXcd V = sc.W[n] * Hc;         // M x K
      const Eigen::MatrixXd P = (prob.h * V).cwiseAbs2();
      const Eigen::VectorXd dn = V.colwise().squaredNorm().real();
      const double tn = sc.W[n].squaredNorm();
      const auto& rows = L.slot[n];
      const int r = static_cast<int>(rows.size());
      Eigen::MatrixXd D(r, r);
      for (int a = 0; a < r; ++a) {
        for (int c2 = a; c2 < r; ++c2) {
          double v;
          if (rows[a].type == 0 && rows[c2].type == 0) {
            v = tn;
          } else if (rows[a].type == 0) {
            v = dn(rows[c2].k);
          } else if (rows[c2].type == 0) {
            v = dn(rows[a].k);
          } else {
            v = P(rows[a].k, rows[c2].k);
          }
          if (a == c2) v += sc.d(rows[a].slack);
          D(a, c2) = D(c2, a) = v;
        }
      }
      Eigen::MatrixXd B(r, L.K);
      for (int a = 0; a < r; ++a) {
        for (int j = 0; j < L.K; ++j) {
          B(a, j) = prob.weight(j, n) *
                    (rows[a].type == 0 ? dn(j) : P(j, rows[a].k));
        }
      }
      for (int j = 0; j < L.K; ++j) {
        for (int k = j; k < L.K; ++k) {
          const double v = prob.weight(j, n) * prob.weight(k, n) * P(j, k);
          C(j, k) += v;
          if (j != k) C(k, j) += v;
        }
      }
      f.Dllt[n].compute(D);
      if (f.Dllt[n].info() != Eigen::Success) {
        // Regularize a numerically semidefinite local block.
        D.diagonal().array() += 1e-12 * (1.0 + D.diagonal().maxCoeff());
        f.Dllt[n].compute(D);
      }
      f.B[n] = std::move(B);
      C -= f.B[n].transpose() * f.Dllt[n].solve(f.B[n]);
    }
    f.Cllt.compute(C);
    if (f.Cllt.info() != Eigen::Success) {
      C.diagonal().array() += 1e-12 * (1.0 + C.diagonal().maxCoeff());
      f.Cllt.compute(C);
    }
    return f;
  }

  Eigen::VectorXd solve_schur(const Factors& f,
                              const Eigen::VectorXd& g) const {
    Eigen::VectorXd y(L.m);
    Eigen::VectorXd gmin = g.segment(L.N, L.K);
    std::vector<Eigen::VectorXd> gloc(L.N);
    for (int n = 0; n < L.N; ++n) {
      const auto& rows = L.slot[n];
      Eigen::VectorXd gn(rows.size());
      for (std::size_t a = 0; a < rows.size(); ++a) gn(a) = g(rows[a].row);
      gloc[n] = gn;
      gmin -= f.B[n].transpose() * f.Dllt[n].solve(gn);
    }
    const Eigen::VectorXd ymin = f.Cllt.solve(gmin);
    y.segment(L.N, L.K) = ymin;
    for (int n = 0; n < L.N; ++n) {
      const Eigen::VectorXd yn = f.Dllt[n].solve(gloc[n] - f.B[n] * ymin);
      const auto& rows = L.slot[n];
      for (std::size_t a = 0; a < rows.size(); ++a) y(rows[a].row) = yn(a);
    }
    return y;
  }

  Solution run() const;
};

Solution Solver::run() const {
  const int K = L.K, M = L.M, N = L.N;

  ConeVec x, s, c;
  x.o = Eigen::VectorXd::Ones(L.no);
  s.o = Eigen::VectorXd::Ones(L.no);
  c.o = Eigen::VectorXd::Zero(L.no);
  c.o(L.idx_e) = -1.0;  // min -E
  const double rho = std::max(0.5, prob.p_max / (2.0 * M));
  x.P.assign(N, rho * Eigen::MatrixXcd::Identity(M, M));
  s.P.assign(N, Eigen::MatrixXcd::Identity(M, M));
  c.P.assign(N, Eigen::MatrixXcd::Zero(M, M));
  Eigen::VectorXd y = Eigen::VectorXd::Zero(L.m);

  const double bnorm = L.b.size() ? L.b.cwiseAbs().maxCoeff() : 0.0;

  Solution best;
  double best_score = kInf;
  auto record = [&](double pres, double gap, const ConeVec& xc,
                    const Eigen::VectorXd& yc, int it) {
    const double score = pres + gap;
    if (score < best_score) {
      best_score = score;
      best.S.assign(xc.P.begin(), xc.P.end());
      best.objective = xc.o(L.idx_e);
      best.dual_weights = yc.segment(N, K).cwiseMax(0.0);
      best.primal_residual = pres;
      best.rel_gap = gap;
      best.iterations = it;
    }
  };

  Status status = Status::max_iters;
  int iter = 0;
  for (; iter < opt.max_iters; ++iter) {
    const Eigen::VectorXd rp = applyA(x) - L.b;
    ConeVec rd = applyAT(y);
    axpy(rd, 1.0, s);
    axpy(rd, -1.0, c);

    const double gap = dot(x, s);
    const double pobj = x.o(L.idx_e);            // = -c^T x
    const double dobj = -L.b.dot(y);
    const double relgap =
        std::abs(pobj - dobj) / std::max({1.0, std::abs(pobj),
                                          std::abs(dobj)});
    const double pres = rp.cwiseAbs().maxCoeff();
    const double dres = inf_norm(rd);
    if (!std::isfinite(pres) || !std::isfinite(gap)) break;
    record(pres, relgap, x, y, iter);

    if (pres <= opt.feas_tol && dres <= 10.0 * opt.feas_tol &&
        relgap <= opt.opt_tol) {
      status = Status::optimal;
      break;
    }

    // Dual-ray infeasibility certificate: an exploding y with
    // A^T y_hat <= 0 (componentwise in the cone sense) and b^T y_hat < 0
    // proves there is no x in the cone with A x = b.
    const double ynorm = y.cwiseAbs().maxCoeff();
    if (ynorm > 1e7 * (1.0 + bnorm)) {
      const Eigen::VectorXd yh = y / ynorm;
      const ConeVec at = applyAT(yh);
      double viol = at.o.maxCoeff();
      for (const auto& blk : at.P) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
            blk, Eigen::EigenvaluesOnly);
        viol = std::max(viol, eig.eigenvalues()(L.M - 1));
      }
      if (viol <= 1e-8 && -L.b.dot(yh) > 1e-9) {
        status = Status::infeasible;
        break;
      }
    }

    const Scaling sc = make_scaling(x, s);
    const Factors f = factor_schur(sc);
    const double mu = gap / L.nu;

    // Predictor: aim at full residual elimination and zero complementarity.
    const ConeVec wrd = apply_Wbar(sc, rd);
    const Eigen::VectorXd rhs_aff = L.b - applyA(wrd);
    const Eigen::VectorXd dy_a = solve_schur(f, rhs_aff);
    ConeVec ds_a = applyAT(dy_a);
    for (int i = 0; i < L.no; ++i) ds_a.o(i) = -rd.o(i) - ds_a.o(i);
    for (int n = 0; n < N; ++n) ds_a.P[n] = -rd.P[n] - ds_a.P[n];
    ConeVec dx_a = apply_Wbar(sc, ds_a);
    for (int i = 0; i < L.no; ++i) dx_a.o(i) = -x.o(i) - dx_a.o(i);
    for (int n = 0; n < N; ++n) dx_a.P[n] = -x.P[n] - dx_a.P[n];

    const ConeVec dxt = scale_x(sc, dx_a);
    const ConeVec dst = scale_s(sc, ds_a);
    const double a_x = step_bound(sc, dxt, true);
    const double a_s = step_bound(sc, dst, false);
    const double alpha_aff = std::min({1.0, a_x, a_s});

    double mu_aff = 0.0;
    {
      ConeVec xa = x, sa = s;
      axpy(xa, alpha_aff, dx_a);
      axpy(sa, alpha_aff, ds_a);
      mu_aff = dot(xa, sa) / L.nu;
    }
    const double sigma =
        std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3.0);

    // Corrector: Mehrotra second-order term in the scaled space, then the
    // Lyapunov inverse against lam.
    ConeVec psi;
    psi.o = Eigen::VectorXd(L.no);
    for (int i = 0; i < L.no; ++i) {
      const double dsv = sc.lam_o(i) * sc.lam_o(i) + dxt.o(i) * dst.o(i) -
                         sigma * mu;
      psi.o(i) = dsv / sc.lam_o(i);
    }
    psi.P.resize(N);
    for (int n = 0; n < N; ++n) {
      Eigen::MatrixXcd Dm =
          0.5 * (dxt.P[n] * dst.P[n] + dst.P[n] * dxt.P[n]);
      const Eigen::VectorXd diag_add =
          (sc.lam[n].array().square() - sigma * mu).matrix();
      Dm.diagonal() += diag_add.cast<std::complex<double>>();
      const auto& lam = sc.lam[n];
      Eigen::MatrixXcd ps(M, M);
      for (int i2 = 0; i2 < M; ++i2) {
        for (int j2 = 0; j2 < M; ++j2) {
          ps(i2, j2) = 2.0 * Dm(i2, j2) / (lam(i2) + lam(j2));
        }
      }
      hermitianize(ps);
      psi.P[n] = ps;
    }

    const ConeVec gpsi = apply_G(sc, psi);
    const Eigen::VectorXd rhs = -rp + applyA(gpsi) - applyA(wrd);
    const Eigen::VectorXd dy = solve_schur(f, rhs);
    ConeVec ds = applyAT(dy);
    for (int i = 0; i < L.no; ++i) ds.o(i) = -rd.o(i) - ds.o(i);
    for (int n = 0; n < N; ++n) ds.P[n] = -rd.P[n] - ds.P[n];
    ConeVec dx = apply_Wbar(sc, ds);
    for (int i = 0; i < L.no; ++i) dx.o(i) = -gpsi.o(i) - dx.o(i);
    for (int n = 0; n < N; ++n) dx.P[n] = -gpsi.P[n] - dx.P[n];

    const double b_x = step_bound(sc, scale_x(sc, dx), true);
    const double b_s = step_bound(sc, scale_s(sc, ds), false);
    const double alpha = std::min(1.0, opt.step_frac * std::min(b_x, b_s));
    if (!std::isfinite(alpha) || alpha <= 1e-13) break;

    axpy(x, alpha, dx);
    axpy(s, alpha, ds);
    y += alpha * dy;
    for (int n = 0; n < N; ++n) {
      hermitianize(x.P[n]);
      hermitianize(s.P[n]);
    }
  }

  // Assemble the reported solution from the best recorded iterate.
  Solution out = best;
  out.status = status;
  out.iterations = std::min(iter + 1, opt.max_iters);
  if (status == Status::infeasible) {
    out.S.clear();
    out.objective = 0.0;
    return out;
  }

  // Scale each block onto the trace budget; the interior iterate satisfies
  // it only to solver tolerance.
  for (auto& Sn : out.S) {
    hermitianize(Sn);
    const double tr = Sn.trace().real();
    if (tr > prob.p_max) Sn *= prob.p_max / tr;
  }
  // Report the objective actually achieved by the returned covariances and
  // the worst remaining violation (box rows only; traces are now exact).
  ConeVec xr;
  xr.o = Eigen::VectorXd::Zero(L.no);
  xr.P = out.S;
  const Eigen::MatrixXd q = qforms(xr);
  double obj = kInf;
  for (int k = 0; k < K; ++k) {
    double acc = 0.0;
    for (int n = 0; n < N; ++n) acc += prob.weight(k, n) * q(k, n);
    obj = std::min(obj, acc);
  }
  out.objective = obj;
  double viol = 0.0;
  for (const auto& br : L.lo) {
    viol = std::max(viol, br.bound - q(br.k, br.n));
  }
  for (const auto& br : L.hi) {
    viol = std::max(viol, q(br.k, br.n) - br.bound);
  }
  out.primal_residual = std::max(0.0, viol);
  const double wsum = out.dual_weights.sum();
  if (wsum > 0.0) out.dual_weights /= wsum;
  return out;
}

}  // namespace

Solution solve(const Problem& prob, const Options& opt) {
  if (prob.weight.rows() < 1 || prob.weight.cols() < 1 ||
      prob.h.rows() != prob.weight.rows() || prob.h.cols() < 1) {
    throw std::invalid_argument("ipm: inconsistent dimensions");
  }
  if (!(prob.p_max > 0.0)) {
    throw std::invalid_argument("ipm: p_max must be > 0");
  }
  if (prob.weight.minCoeff() < 0.0) {
    throw std::invalid_argument("ipm: negative objective weight");
  }
  Solver solver(prob, opt);
  return solver.run();
}

}  // namespace wpt::ipm
