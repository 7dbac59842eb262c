#pragma once

namespace nbv {

// Worker count for parallel kernels: hardware concurrency, capped by the
// NBV_THREADS environment variable when set. Re-read on every call so a
// process can switch caps between runs. All kernels are written so their
// output is independent of this value.
int worker_count();

}  // namespace nbv
