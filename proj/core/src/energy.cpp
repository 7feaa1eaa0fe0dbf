#include "wigner_align/energy.hpp"

#include <cmath>
#include <limits>

#include "wigner_align/errors.hpp"

namespace wigner_align {

namespace {

void require_order(std::size_t n, const WignerMatrix& m, const char* op) {
  if (m.n() != n) throw DimensionError(std::string(op) + ": matrix order differs from permutation size");
}

void require_rho(double rho, const char* op) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError(std::string(op) + ": rho must lie in [0, 1]");
}

}  // namespace

double loss(const Permutation& pi, const WignerMatrix& A, const WignerMatrix& B, double rho) {
  require_order(pi.n(), A, "loss");
  require_order(pi.n(), B, "loss");
  require_rho(rho, "loss");
  const auto p = pi.table();
  const std::size_t n = pi.n();
  CompensatedSum s;
  for (std::size_t i = 0; i < n; ++i) {
    const auto bi = B.row(p[i]);
    const auto ai = A.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = bi[p[j]] - rho * ai[j];
      s.add(r * r);
    }
  }
  return s.value();
}

double qap_objective(const Permutation& pi, const WignerMatrix& A, const WignerMatrix& B) {
  require_order(pi.n(), A, "qap_objective");
  require_order(pi.n(), B, "qap_objective");
  const auto p = pi.table();
  const std::size_t n = pi.n();
  CompensatedSum s;
  for (std::size_t i = 0; i < n; ++i) {
    const auto bi = B.row(p[i]);
    const auto ai = A.row(i);
    for (std::size_t j = i + 1; j < n; ++j) s.add(ai[j] * bi[p[j]]);
  }
  return 2.0 * s.value();
}

double relative_energy(const Permutation& pi, const Permutation& reference, const WignerMatrix& A,
                       const WignerMatrix& B, double rho) {
  if (pi.n() != reference.n()) throw DimensionError("relative_energy: permutation sizes differ");
  require_order(pi.n(), A, "relative_energy");
  require_order(pi.n(), B, "relative_energy");
  require_rho(rho, "relative_energy");
  const auto p = pi.table();
  const auto q = reference.table();
  const std::size_t n = pi.n();
  CompensatedSum s;
  for (std::size_t i = 0; i < n; ++i) {
    const auto bp = B.row(p[i]);
    const auto bq = B.row(q[i]);
    const auto ai = A.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double rp = bp[p[j]] - rho * ai[j];
      const double rq = bq[q[j]] - rho * ai[j];
      s.add((rp - rq) * (rp + rq));
    }
  }
  return s.value();
}

double delta_decomposed(const Permutation& sigma, const WignerMatrix& A, const WignerMatrix& H,
                        double rho) {
  require_order(sigma.n(), A, "delta_decomposed");
  require_order(sigma.n(), H, "delta_decomposed");
  require_rho(rho, "delta_decomposed");
  const auto s = sigma.table();
  const std::size_t n = sigma.n();
  CompensatedSum quad;
  CompensatedSum cross;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ai = A.row(i);
    const auto as = A.row(s[i]);
    const auto hi = H.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double diff = ai[j] - as[s[j]];
      quad.add(diff * diff);
      cross.add(hi[j] * diff);
    }
  }
  return rho * rho * quad.value() + 2.0 * rho * std::sqrt(1.0 - rho * rho) * cross.value();
}

double latent_gaussian(const Permutation& sigma, const WignerMatrix& A, const WignerMatrix& H) {
  require_order(sigma.n(), A, "latent_gaussian");
  require_order(sigma.n(), H, "latent_gaussian");
  const auto s = sigma.table();
  const std::size_t n = sigma.n();
  CompensatedSum cross;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ai = A.row(i);
    const auto as = A.row(s[i]);
    const auto hi = H.row(i);
    for (std::size_t j = i + 1; j < n; ++j) cross.add(hi[j] * (ai[j] - as[s[j]]));
  }
  return -cross.value();
}

double v_sigma(const Permutation& sigma, const WignerMatrix& A) {
  return c_pair(sigma, sigma, A);
}

double c_pair(const Permutation& sigma, const Permutation& sigma2, const WignerMatrix& A) {
  if (sigma.n() != sigma2.n()) throw DimensionError("c_pair: permutation sizes differ");
  require_order(sigma.n(), A, "c_pair");
  const auto s = sigma.table();
  const auto t = sigma2.table();
  const std::size_t n = sigma.n();
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ai = A.row(i);
    const auto as = A.row(s[i]);
    const auto at = A.row(t[i]);
    for (std::size_t j = i + 1; j < n; ++j)
      acc.add((ai[j] - as[s[j]]) * (ai[j] - at[t[j]]));
  }
  return acc.value();
}

std::int64_t expected_c(const Permutation& sigma, const Permutation& sigma2) {
  if (sigma.n() != sigma2.n()) throw DimensionError("expected_c: permutation sizes differ");
  const auto [both, both_agree] = common_deranged_edges(sigma, sigma2);
  return static_cast<std::int64_t>(both + both_agree);
}

double alpha_corr(const Permutation& tau, const Permutation& tau2, const WignerMatrix& A) {
  const double v1 = v_sigma(tau, A);
  const double v2 = v_sigma(tau2, A);
  if (!(v1 > 0.0) || !(v2 > 0.0))
    throw DegenerateInput("alpha_corr: zero variance (identity permutation or constant matrix)");
  return c_pair(tau, tau2, A) / std::sqrt(v1 * v2);
}

double log_posterior_unnorm(const Permutation& pi, const WignerMatrix& A, const WignerMatrix& B,
                            double rho) {
  require_rho(rho, "log_posterior_unnorm");
  if (rho == 1.0) throw DegenerateInput("log_posterior_unnorm: rho = 1 gives infinite inverse temperature");
  return -loss(pi, A, B, rho) / (2.0 * (1.0 - rho * rho));
}

EnergyReport energy_report(const Permutation& pi, const Permutation& reference,
                           const WignerMatrix& A, const WignerMatrix& B, double rho) {
  EnergyReport r;
  r.loss = loss(pi, A, B, rho);
  r.qap = qap_objective(pi, A, B);
  r.relative = relative_energy(pi, reference, A, B, rho);
  r.log_posterior_unnorm = rho < 1.0 ? -r.loss / (2.0 * (1.0 - rho * rho))
                                     : std::numeric_limits<double>::quiet_NaN();
  return r;
}

double swap_delta(const Permutation& pi, std::size_t i, std::size_t j, const WignerMatrix& A,
                  const WignerMatrix& B, double rho) {
  require_order(pi.n(), A, "swap_delta");
  require_order(pi.n(), B, "swap_delta");
  if (i == j || i == 0 || j == 0 || i > pi.n() || j > pi.n())
    throw DomainError("swap_delta: positions must be distinct and in 1..n");
  const auto p = pi.table();
  const std::size_t a = i - 1;
  const std::size_t b = j - 1;
  const auto ai = A.row(a);
  const auto aj = A.row(b);
  const auto bi = B.row(p[a]);
  const auto bj = B.row(p[b]);
  double s = 0.0;
  for (std::size_t k = 0; k < pi.n(); ++k) {
    if (k == a || k == b) continue;
    s += (ai[k] - aj[k]) * (bi[p[k]] - bj[p[k]]);
  }
  return 2.0 * rho * s;
}

Eigen::MatrixXd all_swap_deltas(const Permutation& pi, const WignerMatrix& A, const WignerMatrix& B,
                                double rho) {
  require_order(pi.n(), A, "all_swap_deltas");
  require_order(pi.n(), B, "all_swap_deltas");
  const auto n = static_cast<Eigen::Index>(pi.n());
  const WignerMatrix C = B.pulled_back(pi);
  const Eigen::MatrixXd G = A.dense() * C.dense().transpose();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double s = G(i, i) + G(j, j) - G(i, j) - G(j, i) - 2.0 * A.dense()(i, j) * C.dense()(i, j);
      out(i, j) = 2.0 * rho * s;
    }
  }
  return out;
}

Eigen::MatrixXd all_transposition_variances(const WignerMatrix& A) {
  const auto n = static_cast<Eigen::Index>(A.n());
  Eigen::MatrixXd G(n, n);
  G.noalias() = A.dense() * A.dense();  // A symmetric: A A^T = A^2
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double a = A.dense()(i, j);
      out(i, j) = 2.0 * (G(i, i) + G(j, j) - 2.0 * G(i, j) - 2.0 * a * a);
    }
  }
  return out;
}

}  // namespace wigner_align
