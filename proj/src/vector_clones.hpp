#pragma once

// Hot kernels get an AVX2 clone selected at load time. Only use this on code
// whose results cannot depend on vector width.
#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__) && defined(__gnu_linux__)
#define JB_VECTOR_CLONES __attribute__((target_clones("avx2", "default")))
#else
#define JB_VECTOR_CLONES
#endif
