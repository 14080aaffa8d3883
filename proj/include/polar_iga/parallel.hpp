#pragma once

namespace polar_iga {

/// Number of worker threads for the OpenMP kernels. Reads POLAR_IGA_THREADS
/// once (values < 1 are ignored) and never exceeds the OpenMP maximum.
/// Returns 1 in builds without OpenMP.
int max_threads();

}  // namespace polar_iga
