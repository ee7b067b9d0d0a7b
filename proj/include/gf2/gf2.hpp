#pragma once

// Dense linear algebra over GF(2): packed bit matrices, Gray-code
// combination tables, fast multiplication and PLE-based elimination.

#include "gf2/bit_matrix.hpp"
#include "gf2/gray_code.hpp"
#include "gf2/io.hpp"
#include "gf2/m4ri.hpp"
#include "gf2/multiply.hpp"
#include "gf2/op_count.hpp"
#include "gf2/ple.hpp"
