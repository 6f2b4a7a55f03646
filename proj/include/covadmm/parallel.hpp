#pragma once

namespace covadmm {

/// How independent work items (replicates, CV folds) are scheduled.
/// Serial is the reference schedule; Parallel must reproduce it bit-for-bit.
enum class Execution { Serial, Parallel };

// Caps OpenMP workers; 0 restores the runtime default.
void set_max_threads(int n);
int max_threads();

// Reads COVADMM_THREADS (0 or unset = auto) and applies it. Throws
// InvalidInput on a malformed value.
void apply_thread_env();

}  // namespace covadmm
