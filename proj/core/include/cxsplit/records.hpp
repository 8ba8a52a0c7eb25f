#pragma once

#include <cstdint>

namespace cxsplit {

/// One sample of an observable trace. Fields that do not apply to a run
/// (energy for SU(2), two-norm error for the PDE) stay at zero.
struct TimeSeriesRecord {
  double t = 0.0;
  double norm_error = 0.0;
  double energy_error = 0.0;
  double two_norm_error = 0.0;
  /// Exponentials for SU(2) runs, propagation FFTs for PDE runs.
  std::uint64_t cost = 0;
};

}  // namespace cxsplit
