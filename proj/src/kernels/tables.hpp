#pragma once

#include "optround/kernels.hpp"

namespace optround::kernels {

const KernelTable& scalar_table();

#if defined(OPTROUND_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace optround::kernels
