#pragma once

// Log-likelihood evaluation, least-squares gain estimate, and ML position
// estimation via a coarse (u,v,r) grid followed by alternating polar-domain
// gradient ascent with Armijo backtracking.
//
// The likelihood and the noiseless correlation objective share one evaluator:
// both are sum_t w_t |<A_t(p), M_t>|^2 for a list of target matrices M_t.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "zoomloc/geometry.hpp"
#include "zoomloc/signal.hpp"

namespace zoomloc {

struct LikelihoodValue {
  double value = 0.0;
  std::vector<double> per_measurement;
};

// Least-squares estimate of the complex amplitude: <A, Y> / ||A||_F^2.
inline std::complex<double> gain_estimate(const SteeringMatrix& a, const ComplexMatrix& y) {
  if (a.entries.rows() != y.rows() || a.entries.cols() != y.cols())
    throw std::invalid_argument("gain_estimate: shape mismatch");
  return mat_inner(a.entries, y) / a.entries.squaredNorm();
}

namespace detail {

// One correlation target: maximize sum_t weight_t |<A_t(p), target_t>|^2.
struct CorrelationTerm {
  ComplexMatrix target;
  double spacing = 0.0;
  double weight = 1.0;
};

struct ObjectiveEval {
  double value = 0.0;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();  // d/d(u, v, r)
  std::vector<double> per_term;
};

// Evaluates the objective (and optionally its analytic (u,v,r) gradient)
// at direction cosines (u, v) and range r. conj(A_ij) = exp(+j k r_ij).
inline ObjectiveEval eval_objective(const std::vector<CorrelationTerm>& terms,
                                    const ArrayConfig& cfg, double u, double v, double r,
                                    Ranging mode, bool need_grad) {
  const double k = 2.0 * kPi / cfg.wavelength;
  const double s = u * u + v * v;
  if (s >= 1.0) throw std::domain_error("eval_objective: u^2 + v^2 must be < 1");
  const double w = std::sqrt(1.0 - s);
  const IndexSet ix = cfg.index_set_x(), iy = cfg.index_set_y();

  ObjectiveEval out;
  out.per_term.reserve(terms.size());
  for (const auto& term : terms) {
    const double d = term.spacing;
    std::complex<double> c{0.0, 0.0};
    std::complex<double> dc_du{0.0, 0.0}, dc_dv{0.0, 0.0}, dc_dr{0.0, 0.0};
    for (int a = 0; a < cfg.n_x; ++a) {
      const int i = ix.lo() + a;
      for (int b = 0; b < cfg.n_y; ++b) {
        const int j = iy.lo() + b;
        double rij, dr_du = 0, dr_dv = 0, dr_dr = 0;
        if (mode == Ranging::exact) {
          const double ex = r * u - i * d, ey = r * v - j * d, ez = r * w;
          rij = std::sqrt(ex * ex + ey * ey + ez * ez);
          if (need_grad) {
            // d(p)/du = (r, 0, -ru/w), d(p)/dv = (0, r, -rv/w), d(p)/dr = (u, v, w)
            dr_du = (ex * r - ez * r * u / w) / rij;
            dr_dv = (ey * r - ez * r * v / w) / rij;
            dr_dr = (ex * u + ey * v + ez * w) / rij;
          }
        } else {
          const double d2 = d * d;
          rij = r - i * d * u - j * d * v + i * i * d2 * (1.0 - u * u) / (2.0 * r)
              + j * j * d2 * (1.0 - v * v) / (2.0 * r) - u * v * i * j * d2 / r;
          if (need_grad) {
            dr_du = -i * d - i * i * d2 * u / r - v * i * j * d2 / r;
            dr_dv = -j * d - j * j * d2 * v / r - u * i * j * d2 / r;
            dr_dr = 1.0 + (i * i * d2 * (1.0 - u * u) + j * j * d2 * (1.0 - v * v)) * (-0.5 / (r * r))
                  + u * v * i * j * d2 / (r * r);
          }
        }
        const std::complex<double> e = std::polar(1.0, k * rij) * term.target(a, b);
        c += e;
        if (need_grad) {
          const std::complex<double> je = std::complex<double>(0.0, k) * e;
          dc_du += dr_du * je;
          dc_dv += dr_dv * je;
          dc_dr += dr_dr * je;
        }
      }
    }
    const double val = term.weight * std::norm(c);
    out.value += val;
    out.per_term.push_back(val);
    if (need_grad) {
      out.grad.x() += 2.0 * term.weight * (std::conj(c) * dc_du).real();
      out.grad.y() += 2.0 * term.weight * (std::conj(c) * dc_dv).real();
      out.grad.z() += 2.0 * term.weight * (std::conj(c) * dc_dr).real();
    }
  }
  return out;
}

inline std::vector<CorrelationTerm> likelihood_terms(const MeasurementSet& ms,
                                                     const ArrayConfig& cfg) {
  std::vector<CorrelationTerm> terms;
  terms.reserve(ms.items.size());
  for (const auto& m : ms.items)
    terms.push_back({m.y, m.spacing, 1.0 / (ms.sigma2 * cfg.element_count())});
  return terms;
}

}  // namespace detail

// Data-dependent part of the log-likelihood of Eq.-style
// sum_t |<A(p,d_t), Y_t>|^2 / (sigma^2 ||A||_F^2); additive constants dropped.
inline LikelihoodValue log_likelihood(const Position& p, const MeasurementSet& ms,
                                      const ArrayConfig& cfg, Ranging mode = Ranging::exact) {
  const auto terms = detail::likelihood_terms(ms, cfg);
  const auto eval = detail::eval_objective(terms, cfg, p.u(), p.v(), p.r(), mode, false);
  return {eval.value, eval.per_term};
}

// Analytic gradient of the log-likelihood with respect to (u, v, r).
inline Eigen::Vector3d likelihood_gradient(const Position& p, const MeasurementSet& ms,
                                           const ArrayConfig& cfg,
                                           Ranging mode = Ranging::exact) {
  const auto terms = detail::likelihood_terms(ms, cfg);
  return detail::eval_objective(terms, cfg, p.u(), p.v(), p.r(), mode, true).grad;
}

// Central finite-difference fallback, kept behind its own entry point.
inline Eigen::Vector3d likelihood_gradient_fd(const Position& p, const MeasurementSet& ms,
                                              const ArrayConfig& cfg,
                                              Ranging mode = Ranging::exact,
                                              double rel_step = 1e-6) {
  const auto terms = detail::likelihood_terms(ms, cfg);
  auto f = [&](double u, double v, double r) {
    return detail::eval_objective(terms, cfg, u, v, r, mode, false).value;
  };
  const double hu = rel_step, hr = rel_step * p.r();
  Eigen::Vector3d g;
  g.x() = (f(p.u() + hu, p.v(), p.r()) - f(p.u() - hu, p.v(), p.r())) / (2 * hu);
  g.y() = (f(p.u(), p.v() + hu, p.r()) - f(p.u(), p.v() - hu, p.r())) / (2 * hu);
  g.z() = (f(p.u(), p.v(), p.r() + hr) - f(p.u(), p.v(), p.r() - hr)) / (2 * hr);
  return g;
}

// ---------------------------------------------------------------------------
// Coarse search grid
// ---------------------------------------------------------------------------

struct GridSpec {
  double uv_radius = 0.86602540378443865;  // sin(60 deg): the 120-degree cone
  double r_min = 5.0;
  double r_max = 10.0;
  double uv_step = 0.0;
  int r_points = 64;

  bool empty() const { return uv_step <= 0.0 || r_points <= 0 || uv_radius <= 0.0; }
};

// Nyquist-like sampling of the sharpest lobe: uv step = min_t lambda/(2 n_x d_t).
inline GridSpec default_grid_spec(const std::vector<double>& spacings, const ArrayConfig& cfg,
                                  double r_min, double r_max,
                                  double uv_radius = 0.86602540378443865) {
  if (spacings.empty()) throw std::invalid_argument("default_grid_spec: no spacings");
  GridSpec g;
  g.uv_radius = uv_radius;
  g.r_min = r_min;
  g.r_max = r_max;
  g.r_points = 64;
  double d_max = *std::max_element(spacings.begin(), spacings.end());
  g.uv_step = cfg.wavelength / (2.0 * cfg.n_x * d_max);
  return g;
}

struct GridBest {
  double u = 0.0, v = 0.0, r = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

namespace detail {

// Single-precision brute-force scan of the objective over the (u,v,r) grid.
// The r sweep per (u,v) is vectorized; used only to seed gradient ascent.
inline GridBest scan_objective_grid(const std::vector<CorrelationTerm>& terms,
                                    const ArrayConfig& cfg, const GridSpec& grid,
                                    Ranging mode) {
  if (grid.empty()) throw std::invalid_argument("scan_objective_grid: empty grid spec");
  const int nr = grid.r_points;
  Eigen::ArrayXf rv(nr), r2(nr), rinv(nr);
  for (int m = 0; m < nr; ++m) {
    const double r = (nr == 1) ? grid.r_min
                               : grid.r_min + (grid.r_max - grid.r_min) * m / double(nr - 1);
    rv(m) = float(r);
  }
  r2 = rv.square();
  rinv = rv.inverse();
  const float kf = float(2.0 * kPi / cfg.wavelength);
  const IndexSet ix = cfg.index_set_x(), iy = cfg.index_set_y();
  const int nb = cfg.element_count();

  struct Elem {
    float di, dj, sq;  // i*d, j*d, (i*d)^2 + (j*d)^2
    float yre, yim;
  };
  std::vector<std::vector<Elem>> elems(terms.size());
  std::vector<float> weights(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    weights[t] = float(terms[t].weight);
    elems[t].reserve(nb);
    const double d = terms[t].spacing;
    for (int a = 0; a < cfg.n_x; ++a)
      for (int b = 0; b < cfg.n_y; ++b) {
        const float di = float((ix.lo() + a) * d), dj = float((iy.lo() + b) * d);
        const auto y = terms[t].target(a, b);
        elems[t].push_back({di, dj, di * di + dj * dj, float(y.real()), float(y.imag())});
      }
  }

  Eigen::ArrayXf acc(nr), cre(nr), cim(nr), ph(nr), cs(nr), sn(nr);
  GridBest best;
  const double s = grid.uv_step, rad = grid.uv_radius;
  const int half = int(std::floor(rad / s));
  for (int iu = -half; iu <= half; ++iu) {
    const double u = iu * s;
    for (int ivv = -half; ivv <= half; ++ivv) {
      const double v = ivv * s;
      if (u * u + v * v > rad * rad) continue;
      acc.setZero();
      for (std::size_t t = 0; t < terms.size(); ++t) {
        cre.setZero();
        cim.setZero();
        const float uf = float(u), vf = float(v);
        if (mode == Ranging::exact) {
          for (const Elem& e : elems[t]) {
            const float proj = 2.0f * (uf * e.di + vf * e.dj);
            ph = (r2 - proj * rv + e.sq).sqrt() * kf;
            cs = ph.cos();
            sn = ph.sin();
            cre += cs * e.yre - sn * e.yim;
            cim += cs * e.yim + sn * e.yre;
          }
        } else {
          const float cu = 0.5f * (1.0f - uf * uf), cv = 0.5f * (1.0f - vf * vf);
          for (const Elem& e : elems[t]) {
            const float quad = e.di * e.di * cu + e.dj * e.dj * cv - uf * vf * e.di * e.dj;
            ph = (rv - (uf * e.di + vf * e.dj) + quad * rinv) * kf;
            cs = ph.cos();
            sn = ph.sin();
            cre += cs * e.yre - sn * e.yim;
            cim += cs * e.yim + sn * e.yre;
          }
        }
        acc += (cre.square() + cim.square()) * weights[t];
      }
      int m_best = 0;
      const float local = acc.maxCoeff(&m_best);
      if (double(local) > best.value) {
        best = {u, v, double(rv(m_best)), double(local)};
      }
    }
  }
  if (!std::isfinite(best.value))
    throw std::invalid_argument("scan_objective_grid: grid contains no points");
  return best;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Alternating polar-domain gradient ascent with Armijo backtracking
// ---------------------------------------------------------------------------

struct GaOptions {
  double armijo_c1 = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 30;
  double tol_rel = 1e-7;  // converged when ||delta p|| < tol_rel * r
  int max_iter = 200;
  double uv_step0 = 0.0;      // initial angular trial step; 0 = auto from lobes
  double r_step0_rel = 0.02;  // initial radial trial step relative to r
  double uv_radius = 0.999;   // keep u^2+v^2 < uv_radius^2
  double r_lo = 0.0, r_hi = 0.0;  // 0 = auto ([r/3, 3r] around the start)
};

struct GaResult {
  double u = 0.0, v = 0.0, r = 0.0;
  double value = 0.0;
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  int iterations = 0;
  bool converged = false;
};

namespace detail {

// Objective must be callable as f(u, v, r, need_grad) -> ObjectiveEval.
template <typename F>
GaResult ga_refine(F&& f, double u0, double v0, double r0, GaOptions opt) {
  if (opt.uv_step0 <= 0.0) opt.uv_step0 = 1e-3;
  if (opt.r_lo <= 0.0) opt.r_lo = r0 / 3.0;
  if (opt.r_hi <= 0.0) opt.r_hi = r0 * 3.0;

  double u = u0, v = v0, r = r0;
  ObjectiveEval cur = f(u, v, r, true);
  GaResult res;
  res.converged = false;
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    double step_norm2 = 0.0;

    // Angular update along the normalized (u,v) gradient.
    {
      const double gu = cur.grad.x(), gv = cur.grad.y();
      const double gn = std::hypot(gu, gv);
      if (gn > 0.0) {
        const double pu = gu / gn, pv = gv / gn;
        double alpha = opt.uv_step0;
        for (int bt = 0; bt < opt.max_backtracks; ++bt, alpha *= opt.shrink) {
          const double nu = u + alpha * pu, nv = v + alpha * pv;
          if (nu * nu + nv * nv >= opt.uv_radius * opt.uv_radius) continue;
          const ObjectiveEval trial = f(nu, nv, r, false);
          if (trial.value >= cur.value + opt.armijo_c1 * alpha * gn) {
            step_norm2 += (nu - u) * (nu - u) * r * r + (nv - v) * (nv - v) * r * r;
            u = nu;
            v = nv;
            cur = f(u, v, r, true);
            break;
          }
        }
      }
    }

    // Radial update.
    {
      const double gr = cur.grad.z();
      if (gr != 0.0) {
        const double pr = gr > 0 ? 1.0 : -1.0;
        double alpha = opt.r_step0_rel * r;
        for (int bt = 0; bt < opt.max_backtracks; ++bt, alpha *= opt.shrink) {
          const double nrr = r + alpha * pr;
          if (nrr <= opt.r_lo || nrr >= opt.r_hi) continue;
          const ObjectiveEval trial = f(u, v, nrr, false);
          if (trial.value >= cur.value + opt.armijo_c1 * alpha * std::abs(gr)) {
            step_norm2 += (nrr - r) * (nrr - r);
            r = nrr;
            cur = f(u, v, r, true);
            break;
          }
        }
      }
    }

    if (std::sqrt(step_norm2) < opt.tol_rel * r) {
      res.converged = true;
      ++it;
      break;
    }
  }
  res.u = u;
  res.v = v;
  res.r = r;
  res.value = cur.value;
  res.grad = cur.grad;
  res.iterations = it;
  return res;
}

}  // namespace detail

struct MlEstimate {
  Position p_hat = Position::from_uvr(0.0, 0.0, 1.0);
  LikelihoodValue objective;
  int iterations = 0;
  bool converged = false;
  GridBest grid_seed;
};

// Coarse-grid argmax over (u, v, r) followed by alternating gradient ascent.
inline MlEstimate ml_estimate(const MeasurementSet& ms, const ArrayConfig& cfg,
                              const GridSpec& grid, GaOptions ga = GaOptions{},
                              Ranging mode = Ranging::exact) {
  if (grid.empty()) throw std::invalid_argument("ml_estimate: empty grid spec");
  const auto terms = detail::likelihood_terms(ms, cfg);
  const GridBest seed = detail::scan_objective_grid(terms, cfg, grid, mode);

  if (ga.uv_step0 <= 0.0) {
    double d_min = ms.items.front().spacing;
    for (const auto& m : ms.items) d_min = std::min(d_min, m.spacing);
    // a quarter of the sharpest main-lobe width
    double d_max = ms.items.front().spacing;
    for (const auto& m : ms.items) d_max = std::max(d_max, m.spacing);
    ga.uv_step0 = 0.25 * cfg.wavelength / (cfg.n_x * d_max);
  }
  if (ga.r_lo <= 0.0) ga.r_lo = 0.5 * grid.r_min;
  if (ga.r_hi <= 0.0) ga.r_hi = 2.0 * grid.r_max;
  ga.uv_radius = std::min(ga.uv_radius, 0.9999);

  auto f = [&](double u, double v, double r, bool g) {
    return detail::eval_objective(terms, cfg, u, v, r, mode, g);
  };
  const detail::GaResult res = detail::ga_refine(f, seed.u, seed.v, seed.r, ga);

  MlEstimate out;
  out.p_hat = Position::from_uvr(res.u, res.v, res.r);
  const auto final_eval = detail::eval_objective(terms, cfg, res.u, res.v, res.r, mode, false);
  out.objective = {final_eval.value, final_eval.per_term};
  out.iterations = res.iterations;
  out.converged = res.converged;
  out.grid_seed = seed;
  return out;
}

}  // namespace zoomloc
