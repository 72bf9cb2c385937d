#pragma once

#include <cstdint>
#include <iosfwd>

namespace combi {

/// Runs the oracle-vs-closed-form suite plus the structural law checks,
/// printing one PASS/FAIL line per point in a fixed parameter order.
/// Returns the number of failures.
int run_selftest(std::ostream& out, std::uint64_t seed);

}  // namespace combi
