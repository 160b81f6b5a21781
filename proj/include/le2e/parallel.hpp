#pragma once

namespace le2e {

// Thread count used by the OpenMP kernels. Results do not depend on it.
void set_num_threads(int n);
int num_threads();

}  // namespace le2e
