#pragma once

#include <string>
#include <utility>
#include <vector>

#include "capillary/domain.hpp"
#include "capillary/radial.hpp"

namespace capillary {

/// Shortest round-trip-exact decimal form (17 significant digits).
std::string format_full(double v);

/// "rho,phi,value" rows in row-major node order, full precision. The
/// writer is deterministic: identical fields produce identical bytes.
void write_field_csv(const ScalarField& f, const std::string& path);

/// Inverse of write_field_csv onto an existing domain. Coordinates must
/// match the grid within 1e-9; errors carry the 1-based line number.
ScalarField read_field_csv(DomainPtr domain, const std::string& path);

/// "rho,s" rows of an axisymmetric oracle profile.
void write_profile_csv(const RadialProfile& profile, const std::string& path);

/// Plain "key: value" lines, written even for partial results.
void write_summary(const std::string& path,
                   const std::vector<std::pair<std::string, std::string>>& entries);

} // namespace capillary
