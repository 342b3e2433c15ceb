#pragma once

// Random group elements, configurations and ends for property checks.

#include <random>

#include "lampwalk/base_group.hpp"
#include "lampwalk/boundary_point.hpp"
#include "lampwalk/lamplighter.hpp"

namespace lampwalk {

using TestRng = std::mt19937_64;

/// Uniform reduced word of length <= max_length (free) or vector with
/// coordinates in [-max_length, max_length] (lattice).
BaseElement random_base_element(TestRng& rng, const GroupSpec& group, int max_length);

/// Up to `max_sites` lamps at random sites of norm <= `site_radius`, states
/// uniform in 1..r-1.
Configuration random_configuration(TestRng& rng, const GroupSpec& group, int modulus, int max_sites,
                                   int site_radius);

LampElement random_lamp_element(TestRng& rng, const GroupSpec& group, int modulus, int max_sites, int radius);

/// Exact end prefix.period^infinity with |prefix| <= max_prefix and
/// 1 <= |period| <= max_period.
BoundaryPoint random_exact_end(TestRng& rng, const GroupSpec& group, int max_prefix, int max_period);

}  // namespace lampwalk
