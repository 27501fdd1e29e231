#pragma once

// Geometry of a movable-antenna uniform planar array: element placement,
// Cartesian/polar position handling, exact and Fresnel-approximate ranging,
// and near-field (Fresnel..Fraunhofer) region checks.

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace zoomloc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

// Symmetric index range {-ceil((N-1)/2), ..., floor((N-1)/2)}; cardinality N,
// contains 0 when N is odd (and also when N is even, since 0 >= -N/2).
struct IndexSet {
  int n = 0;

  int lo() const { return -(n / 2); }
  int hi() const { return lo() + n - 1; }
  int size() const { return n; }
  bool contains(int i) const { return i >= lo() && i <= hi(); }
};

struct NearFieldLimits {
  double fresnel = 0.0;     // R_N, lower edge of the radiating near field
  double fraunhofer = 0.0;  // R_F, far-field boundary
};

// Uniform planar MA array: element counts, wavelength and the discrete
// spacing set {d_min, d_min+d_step, ..., d_max}.
struct ArrayConfig {
  int n_x = 8;
  int n_y = 8;
  double wavelength = kSpeedOfLight / 6.0e9;
  double d_min = wavelength;
  double d_max = 10.0 * wavelength;
  double d_step = 0.1 * wavelength;

  int element_count() const { return n_x * n_y; }
  IndexSet index_set_x() const { return IndexSet{n_x}; }
  IndexSet index_set_y() const { return IndexSet{n_y}; }

  // Maximum aperture D, reached with the elements fully extended at d_max.
  double aperture() const {
    return d_max * std::hypot(double(n_x - 1), double(n_y - 1));
  }

  std::vector<double> spacing_set() const {
    std::vector<double> out;
    for (double d = d_min; d <= d_max + 0.5 * d_step; d += d_step)
      out.push_back(std::min(d, d_max));
    return out;
  }

  bool spacing_in_range(double d) const {
    const double tol = 1e-9 * wavelength;
    return d >= d_min - tol && d <= d_max + tol;
  }

  // True when some spacing in the set is below half a wavelength; such
  // configs are legal but should be surfaced as dense.
  bool has_dense_spacing() const { return d_min < 0.5 * wavelength; }

  void validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("ArrayConfig: " + msg); };
    if (n_x < 2 || n_y < 2) fail("element counts must be >= 2 per axis");
    if (!(wavelength > 0.0)) fail("wavelength must be positive");
    if (!(d_min > 0.0) || d_min > d_max) fail("need 0 < d_min <= d_max");
    if (!(d_step > 0.0)) fail("d_step must be positive");
    if (!(aperture() > 0.0) || !std::isfinite(aperture())) fail("aperture must be finite and positive");
  }
};

// A point in the front half-space z >= 0, kept in Cartesian form with the
// polar quantities (u, v, r, theta, phi) derived from it at construction.
// u = sin(theta)cos(phi) and v = sin(theta)sin(phi) are the direction
// cosines along the array axes.
class Position {
 public:
  static Position cartesian(double x, double y, double z) {
    return Position(x, y, z);
  }

  // From direction cosines and range; requires u^2 + v^2 <= 1.
  static Position from_uvr(double u, double v, double r) {
    const double s = u * u + v * v;
    if (s > 1.0 + 1e-12)
      throw std::invalid_argument("Position: u^2 + v^2 exceeds 1");
    const double w = std::sqrt(std::max(0.0, 1.0 - s));
    return Position(r * u, r * v, r * w);
  }

  static Position spherical(double theta, double phi, double r) {
    return Position(r * std::sin(theta) * std::cos(phi),
                    r * std::sin(theta) * std::sin(phi),
                    r * std::cos(theta));
  }

  const Eigen::Vector3d& cart() const { return p_; }
  double x() const { return p_.x(); }
  double y() const { return p_.y(); }
  double z() const { return p_.z(); }
  double r() const { return r_; }
  double u() const { return u_; }
  double v() const { return v_; }
  double theta() const { return theta_; }
  double phi() const { return phi_; }

 private:
  Position(double x, double y, double z) : p_(x, y, z) {
    r_ = p_.norm();
    if (!(r_ > 0.0)) throw std::invalid_argument("Position: range must be positive");
    if (z < -1e-12 * r_) throw std::invalid_argument("Position: behind the array plane (z < 0)");
    u_ = x / r_;
    v_ = y / r_;
    theta_ = std::acos(std::clamp(z / r_, -1.0, 1.0));
    phi_ = (x == 0.0 && y == 0.0) ? 0.0 : std::atan2(y, x);
  }

  Eigen::Vector3d p_;
  double r_, u_, v_, theta_, phi_;
};

// Position of the (i,j)-th element at spacing d: [i*d, j*d, 0].
inline Eigen::Vector3d element_position(const ArrayConfig& cfg, int i, int j, double d) {
  if (!cfg.index_set_x().contains(i) || !cfg.index_set_y().contains(j)) {
    std::ostringstream os;
    os << "element_position: index (" << i << "," << j << ") outside the array index set";
    throw std::out_of_range(os.str());
  }
  if (!cfg.spacing_in_range(d))
    throw std::invalid_argument("element_position: spacing outside [d_min, d_max]");
  return {i * d, j * d, 0.0};
}

inline double exact_range(const Position& p, const Eigen::Vector3d& elem) {
  return (p.cart() - elem).norm();
}

// Second-order Taylor (Fresnel) range from the array center to (i,j):
// r - i d u - j d v + i^2 d^2 (1-u^2)/(2r) + j^2 d^2 (1-v^2)/(2r) - u v i j d^2 / r.
inline double fresnel_range(const Position& p, int i, int j, double d) {
  const double r = p.r();
  if (!(r > 0.0)) throw std::domain_error("fresnel_range: singular range r = 0");
  const double u = p.u(), v = p.v(), d2 = d * d;
  return r - i * d * u - j * d * v
       + i * i * d2 * (1.0 - u * u) / (2.0 * r)
       + j * j * d2 * (1.0 - v * v) / (2.0 * r)
       - u * v * i * j * d2 / r;
}

// Fresnel distance R_N = (D^4 / 8 lambda)^(1/3) and Fraunhofer distance
// R_F = 2 D^2 / lambda; a position is near-field valid iff R_N < r < R_F.
inline NearFieldLimits near_field_limits(const ArrayConfig& cfg) {
  const double d_ap = cfg.aperture();
  NearFieldLimits lim;
  lim.fresnel = std::cbrt(d_ap * d_ap * d_ap * d_ap / (8.0 * cfg.wavelength));
  lim.fraunhofer = 2.0 * d_ap * d_ap / cfg.wavelength;
  return lim;
}

inline bool near_field_valid(const ArrayConfig& cfg, const Position& p) {
  const NearFieldLimits lim = near_field_limits(cfg);
  return p.r() > lim.fresnel && p.r() < lim.fraunhofer;
}

// Validates that a whole radial interval sits inside the near field.
inline void require_near_field_interval(const ArrayConfig& cfg, double r_min, double r_max) {
  const NearFieldLimits lim = near_field_limits(cfg);
  if (!(lim.fresnel < r_min && r_max < lim.fraunhofer)) {
    std::ostringstream os;
    os << "user range [" << r_min << ", " << r_max << "] m outside the near-field region ("
       << lim.fresnel << ", " << lim.fraunhofer << ") m for aperture " << cfg.aperture() << " m";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace zoomloc
