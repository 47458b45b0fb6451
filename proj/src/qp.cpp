#include "adorn/qp.hpp"

#include <limits>

namespace adorn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Dual active-set method (Goldfarb-Idnani) for min 1/2 y'Hy + c'y, A y >= b.
// The factorization of the active set is recomputed from scratch on every
// change, which is fine at the sizes used here.
QpResult dual_active_set(const MatrixXd& H, const VectorXd& c, const MatrixXd& A, const VectorXd& b,
                         double tol) {
  const int k = static_cast<int>(H.rows());
  const int m = static_cast<int>(A.rows());
  QpResult res;
  Eigen::LLT<MatrixXd> llt(H);
  if (llt.info() != Eigen::Success) {
    res.message = "objective is not positive definite";
    return res;
  }
  MatrixXd L = llt.matrixL();
  VectorXd y = -llt.solve(c);

  // Rows that vanish on the free space either hold already or make the problem infeasible.
  VectorXd row_norm(m);
  std::vector<bool> null_row(m, false);
  for (int i = 0; i < m; ++i) {
    row_norm[i] = A.row(i).norm();
    if (row_norm[i] < 1e-12) {
      null_row[i] = true;
      if (b[i] > tol) {
        res.message = "inequality constraints are infeasible";
        res.active = {i};
        res.x = y;
        return res;
      }
    }
  }

  std::vector<int> active;
  std::vector<double> u;
  MatrixXd Q = MatrixXd::Identity(k, k);
  MatrixXd R(0, 0);

  auto refactor = [&]() {
    const int q = static_cast<int>(active.size());
    if (q == 0) {
      Q = MatrixXd::Identity(k, k);
      R.resize(0, 0);
      return;
    }
    MatrixXd N(k, q);
    for (int j = 0; j < q; ++j) N.col(j) = A.row(active[j]).transpose();
    MatrixXd M = L.triangularView<Eigen::Lower>().solve(N);
    Eigen::HouseholderQR<MatrixXd> qr(M);
    Q = qr.householderQ();
    R = qr.matrixQR().topLeftCorner(q, q).triangularView<Eigen::Upper>();
  };
  auto is_active = [&](int i) {
    for (int a : active)
      if (a == i) return true;
    return false;
  };

  const int max_iter = 50 * (m + k) + 100;
  for (int iter = 0; iter < max_iter; ++iter) {
    res.iterations = iter + 1;
    int p = -1;
    double worst = -tol;
    for (int i = 0; i < m; ++i) {
      if (null_row[i] || is_active(i)) continue;
      double s = (A.row(i).dot(y) - b[i]) / row_norm[i];
      if (s < worst) {
        worst = s;
        p = i;
      }
    }
    if (p < 0) {
      res.feasible = true;
      res.x = y;
      res.active = active;
      res.multipliers = Eigen::Map<VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()));
      return res;
    }

    double u_plus = 0.0;
    for (int inner = 0; inner < k + m + 2; ++inner) {
      const int q = static_cast<int>(active.size());
      VectorXd np = A.row(p).transpose();
      VectorXd d = Q.transpose() * L.triangularView<Eigen::Lower>().solve(np);
      VectorXd z = L.transpose().triangularView<Eigen::Upper>().solve(Q.rightCols(k - q) * d.tail(k - q));
      VectorXd r = q > 0 ? VectorXd(R.triangularView<Eigen::Upper>().solve(d.head(q))) : VectorXd();

      double t1 = kInf;
      int drop = -1;
      for (int j = 0; j < q; ++j) {
        if (r[j] > 1e-14 && u[j] / r[j] < t1) {
          t1 = u[j] / r[j];
          drop = j;
        }
      }
      double zn = z.dot(np);
      double sp = np.dot(y) - b[p];
      double t2 = (z.norm() > 1e-12 * std::max(1.0, np.norm()) && zn > 1e-14) ? -sp / zn : kInf;

      if (t1 == kInf && t2 == kInf) {
        res.message = "inequality constraints are infeasible";
        res.active = active;
        res.active.push_back(p);
        res.x = y;
        return res;
      }
      double t = std::min(t1, t2);
      if (t2 < kInf) y += t * z;
      for (int j = 0; j < q; ++j) u[j] -= t * r[j];
      u_plus += t;
      if (t2 <= t1) {
        active.push_back(p);
        u.push_back(u_plus);
        refactor();
        break;
      }
      active.erase(active.begin() + drop);
      u.erase(u.begin() + drop);
      refactor();
    }
  }
  res.message = "iteration limit reached";
  res.x = y;
  res.active = active;
  return res;
}

}  // namespace

QpResult solve_qp(const QpProblem& p, double tol) {
  const int n = static_cast<int>(p.G.rows());
  const VectorXd g = p.g.size() == n ? p.g : VectorXd(VectorXd::Zero(n));
  VectorXd xp = VectorXd::Zero(n);
  MatrixXd N = MatrixXd::Identity(n, n);

  if (p.Aeq.rows() > 0) {
    Eigen::JacobiSVD<MatrixXd> svd(p.Aeq, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXd& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > 1e-10 * std::max(1.0, smax)) ++rank;
    svd.setThreshold(1e-10 * std::max(1.0, smax) / std::max(smax, 1e-300));
    xp = svd.solve(p.beq);
    double resid = (p.Aeq * xp - p.beq).norm();
    if (resid > 1e-8 * (1.0 + p.beq.norm())) {
      QpResult r;
      r.message = "equality constraints are inconsistent";
      r.x = xp;
      return r;
    }
    N = svd.matrixV().rightCols(n - rank);
  }

  const int k = static_cast<int>(N.cols());
  MatrixXd Ain = p.Ain.rows() > 0 ? MatrixXd(p.Ain * N) : MatrixXd(0, k);
  VectorXd bin = p.Ain.rows() > 0 ? VectorXd(p.bin - p.Ain * xp) : VectorXd(0);

  QpResult res;
  if (k == 0) {
    res.feasible = true;
    for (int i = 0; i < bin.size(); ++i)
      if (bin[i] > tol * std::max(1.0, p.Ain.row(i).norm())) res.feasible = false;
    if (!res.feasible) res.message = "inequality constraints are infeasible";
    res.x = xp;
  } else {
    MatrixXd H = N.transpose() * p.G * N;
    VectorXd c = N.transpose() * (p.G * xp + g);
    res = dual_active_set(H, c, Ain, bin, tol);
    res.x = xp + N * res.x;
  }
  res.objective = 0.5 * res.x.dot(p.G * res.x) + g.dot(res.x);
  return res;
}

}  // namespace adorn
