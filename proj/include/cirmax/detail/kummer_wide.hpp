#pragma once

// Extended-precision M(a,b,x) and dM/da for callers that manage their own
// cancellation budget (the eigenfunction route sums residues whose partial
// cancellation can exceed twenty decades).

#include "kummer_engine.hpp"
#include "wide.hpp"

namespace cirmax::detail {

wide kummer_m_wide(const wide& a, const wide& b, const wide& x, const wide& rel_stop);
cwide kummer_m_wide(const cwide& a, const wide& b, const wide& x, const wide& rel_stop);
wide kummer_m_da_wide(const wide& a, const wide& b, const wide& x, const wide& rel_stop);

} // namespace cirmax::detail
