#pragma once

#include <cstdint>

// Row-operation accounting. Every row-level vector XOR performed by the
// library bumps one thread-local counter, which the bench tool reports and
// the tests assert against (table construction cost, iterative-vs-lazy
// elimination totals). Define GF2_NO_OP_COUNTERS to compile the hooks away.

namespace gf2::ops {

#ifndef GF2_NO_OP_COUNTERS

inline thread_local std::uint64_t row_xor_counter = 0;

inline void count_row_xor() noexcept { ++row_xor_counter; }
inline std::uint64_t row_additions() noexcept { return row_xor_counter; }
inline void reset_row_additions() noexcept { row_xor_counter = 0; }

#else

inline void count_row_xor() noexcept {}
inline std::uint64_t row_additions() noexcept { return 0; }
inline void reset_row_additions() noexcept {}

#endif

} // namespace gf2::ops
