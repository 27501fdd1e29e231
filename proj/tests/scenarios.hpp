#pragma once

// Shared test scenarios. The figure-style scenarios use an 8x8 array with
// spacings up to 5*lambda (keeps the 8.168 m user inside the near field);
// the desk-scale scenario uses a 4x4 array so that users at 5..10 m stay
// inside the near field even at d_max = 10*lambda.

#include "zoomloc/geometry.hpp"

namespace testsc {

inline constexpr double kLambda6GHz = zoomloc::kSpeedOfLight / 6.0e9;

inline zoomloc::ArrayConfig fig3_config() {
  zoomloc::ArrayConfig cfg;
  cfg.n_x = cfg.n_y = 8;
  cfg.wavelength = kLambda6GHz;
  cfg.d_min = 0.9 * kLambda6GHz;
  cfg.d_max = 5.0 * kLambda6GHz;
  cfg.d_step = 0.1 * kLambda6GHz;
  return cfg;
}

inline zoomloc::ArrayConfig desk_config() {
  zoomloc::ArrayConfig cfg;
  cfg.n_x = cfg.n_y = 4;
  cfg.wavelength = kLambda6GHz;
  cfg.d_min = 1.0 * kLambda6GHz;
  cfg.d_max = 10.0 * kLambda6GHz;
  cfg.d_step = 0.5 * kLambda6GHz;
  return cfg;
}

inline zoomloc::ArrayConfig crit1_config() {
  zoomloc::ArrayConfig cfg;
  cfg.n_x = cfg.n_y = 6;
  cfg.wavelength = kLambda6GHz;
  cfg.d_min = 1.0 * kLambda6GHz;
  cfg.d_max = 10.0 * kLambda6GHz;
  cfg.d_step = 0.1 * kLambda6GHz;
  return cfg;
}

// User position from the Fig. 3 caption, r = 8.168 m.
inline zoomloc::Position fig3_user() {
  return zoomloc::Position::cartesian(5.856, 0.768, 5.642);
}

// (u, v, r) from the Fig. 2 caption.
inline zoomloc::Position fig2_user() {
  return zoomloc::Position::from_uvr(0.717, 0.093, 8.168);
}

}  // namespace testsc
