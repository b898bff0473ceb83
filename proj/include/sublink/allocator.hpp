// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace sublink {

/// Training allocates and frees a few hundred KB of traces per sample. By
/// default glibc hands the heap top back to the kernel after each free and
/// page-faults it in again, which triples wall time. Call once from main().
inline void keep_heap_resident() {
#if defined(__GLIBC__)
  mallopt(M_TRIM_THRESHOLD, 512 << 20);
  mallopt(M_TOP_PAD, 64 << 20);
#endif
}

}  // namespace sublink
