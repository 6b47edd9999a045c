#pragma once

#include <stdexcept>

namespace linecell {

// Problem parameters shared by every model in the library.
//
// Mobiles are spread with unit density along the segment [-L, L] of a road;
// two base stations sit one height unit above the road at abscissas chosen
// elsewhere. Signal power decays with the path-loss exponent `alpha`, and
// receivers see thermal noise with standard deviation `sigma`.
struct scenario_params {
  double half_length = 10.0;  // L: mobiles occupy [-L, L]
  double alpha = 2.0;         // path-loss exponent (>= 1)
  double sigma = 0.3;         // thermal noise standard deviation (> 0)

  double noise_power() const noexcept { return sigma * sigma; }

  void validate() const {
    if (!(half_length > 0.0)) {
      throw std::invalid_argument("scenario_params: half_length must be > 0");
    }
    if (!(alpha >= 1.0)) {
      throw std::invalid_argument("scenario_params: alpha must be >= 1");
    }
    if (!(sigma > 0.0)) {
      throw std::invalid_argument("scenario_params: sigma must be > 0");
    }
  }
};

}  // namespace linecell
