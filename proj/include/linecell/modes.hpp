#pragma once

namespace linecell {

// Physical-layer model selecting how a mobile's utility (uplink throughput
// density) is computed from the association cells.
enum class utility_mode {
  cdma_single_freq,  // one shared band, matched-filter receivers
  cdma_two_freq,     // one band per BS, matched-filter receivers
  sic_single_freq,   // one shared band, successive interference cancellation
  sic_two_freq,      // one band per BS, successive interference cancellation
};

// What a mobile assumes about where it sits in the other cell's decoding
// order when SIC receivers share a band. Optimistic: decoded last there, so
// cross-cell interference is fully cancelled. Pessimistic: decoded first, so
// it bears the whole cross-cell power.
enum class decoding_belief {
  optimistic,
  pessimistic,
};

}  // namespace linecell
