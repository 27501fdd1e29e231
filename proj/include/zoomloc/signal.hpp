#pragma once

// Steering matrices and synthetic received-signal measurements for the
// array-zooming system: Y^(t) = beta^(t) A(p_U, d^(t)) + N^(t) with i.i.d.
// circularly-symmetric complex Gaussian noise.

#include <complex>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "zoomloc/geometry.hpp"
#include "zoomloc/rng.hpp"

namespace zoomloc {

enum class Ranging { exact, fresnel };

using ComplexMatrix = Eigen::MatrixXcd;

// Matrix inner product <A, B> = sum_ij conj(A_ij) B_ij.
inline std::complex<double> mat_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.conjugate().cwiseProduct(b)).sum();
}

struct SteeringMatrix {
  ComplexMatrix entries;  // n_x rows (index i), n_y cols (index j)
  double spacing = 0.0;
  Position source = Position::from_uvr(0.0, 0.0, 1.0);
};

// Near-field array response: entry (i,j) = exp(-j 2 pi r_ij / lambda) with
// r_ij from the selected ranging mode. Row/col order follows the symmetric
// index sets of the config.
inline SteeringMatrix steering(const Position& p, double d, const ArrayConfig& cfg,
                               Ranging mode = Ranging::exact,
                               bool allow_outside_near_field = false) {
  if (!allow_outside_near_field && !near_field_valid(cfg, p))
    throw std::domain_error("steering: source outside the configured near-field region");
  const double k = 2.0 * kPi / cfg.wavelength;
  const IndexSet ix = cfg.index_set_x(), iy = cfg.index_set_y();
  SteeringMatrix out;
  out.spacing = d;
  out.source = p;
  out.entries.resize(cfg.n_x, cfg.n_y);
  for (int a = 0; a < cfg.n_x; ++a) {
    const int i = ix.lo() + a;
    for (int b = 0; b < cfg.n_y; ++b) {
      const int j = iy.lo() + b;
      const double r = (mode == Ranging::exact)
                           ? exact_range(p, Eigen::Vector3d(i * d, j * d, 0.0))
                           : fresnel_range(p, i, j, d);
      out.entries(a, b) = std::polar(1.0, -k * r);
    }
  }
  return out;
}

struct Measurement {
  ComplexMatrix y;
  double spacing = 0.0;
  std::complex<double> gain;  // true beta^(t) used in synthesis
};

struct MeasurementSet {
  std::vector<Measurement> items;
  double sigma2 = 1.0;
  std::uint64_t seed = 0;

  int count() const { return int(items.size()); }
  std::vector<double> spacings() const {
    std::vector<double> d;
    d.reserve(items.size());
    for (const auto& m : items) d.push_back(m.spacing);
    return d;
  }
};

// Synthesizes T measurements at per-element SNR |beta|^2 / sigma^2 with
// |beta^(t)| = 1 and a fresh uniform phase per measurement. Deterministic
// given the seed.
inline MeasurementSet synthesize(const Position& p_u, const std::vector<double>& spacings,
                                 double snr_db, std::uint64_t seed, const ArrayConfig& cfg,
                                 Ranging mode = Ranging::exact,
                                 bool allow_outside_near_field = false) {
  if (spacings.empty()) throw std::invalid_argument("synthesize: no spacings given");
  MeasurementSet ms;
  ms.sigma2 = std::pow(10.0, -snr_db / 10.0);
  ms.seed = seed;
  ms.items.reserve(spacings.size());
  for (std::size_t t = 0; t < spacings.size(); ++t) {
    Rng rng(split_seed(seed, 0x5349474eULL, t));  // per-measurement stream
    Measurement m;
    m.spacing = spacings[t];
    m.gain = rng.unit_phase();
    const SteeringMatrix a = steering(p_u, spacings[t], cfg, mode, allow_outside_near_field);
    m.y = m.gain * a.entries;
    for (int c = 0; c < m.y.cols(); ++c)
      for (int r = 0; r < m.y.rows(); ++r)
        m.y(r, c) += rng.cgaussian(ms.sigma2);
    ms.items.push_back(std::move(m));
  }
  return ms;
}

// Self-describing JSON dump (re/im pairs, row-major) for cross-implementation
// regression of synthesized data.
inline void dump_measurement_set_json(const MeasurementSet& ms, const ArrayConfig& cfg,
                                      std::ostream& os) {
  nlohmann::json j;
  j["n_x"] = cfg.n_x;
  j["n_y"] = cfg.n_y;
  j["t"] = ms.count();
  j["sigma2"] = ms.sigma2;
  j["seed"] = ms.seed;
  j["spacings"] = ms.spacings();
  auto& meas = j["measurements"] = nlohmann::json::array();
  for (const auto& m : ms.items) {
    nlohmann::json e;
    e["spacing"] = m.spacing;
    e["gain"] = {m.gain.real(), m.gain.imag()};
    auto& y = e["y"] = nlohmann::json::array();
    for (int r = 0; r < m.y.rows(); ++r)
      for (int c = 0; c < m.y.cols(); ++c)
        y.push_back({m.y(r, c).real(), m.y(r, c).imag()});
    meas.push_back(std::move(e));
  }
  os << j.dump(2) << "\n";
}

inline MeasurementSet load_measurement_set_json(std::istream& is) {
  nlohmann::json j;
  is >> j;
  MeasurementSet ms;
  ms.sigma2 = j.at("sigma2").get<double>();
  ms.seed = j.at("seed").get<std::uint64_t>();
  const int n_x = j.at("n_x").get<int>();
  const int n_y = j.at("n_y").get<int>();
  for (const auto& e : j.at("measurements")) {
    Measurement m;
    m.spacing = e.at("spacing").get<double>();
    const auto g = e.at("gain");
    m.gain = {g.at(0).get<double>(), g.at(1).get<double>()};
    m.y.resize(n_x, n_y);
    const auto& y = e.at("y");
    if (int(y.size()) != n_x * n_y)
      throw std::invalid_argument("measurement set: entry count does not match n_x * n_y");
    int idx = 0;
    for (int r = 0; r < n_x; ++r)
      for (int c = 0; c < n_y; ++c, ++idx)
        m.y(r, c) = {y.at(idx).at(0).get<double>(), y.at(idx).at(1).get<double>()};
    ms.items.push_back(std::move(m));
  }
  return ms;
}

}  // namespace zoomloc
