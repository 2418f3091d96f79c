#pragma once

// units.hpp -- duration parsing / formatting for scenario files.
//
// Scenario documents carry every duration as a string with an explicit unit
// suffix ("600s", "100min", "8.76h", "10d", "100y").  Internally everything
// is double seconds.  A year is 365 days here, matching the platform MTBF
// arithmetic used throughout (100 years * 365 * 24 * 3600).

#include <string>

namespace sdcplan {

// Parse a suffixed duration into seconds.  Accepts s, min, h, d, y.
// Throws ScenarioError on missing/unknown suffixes, empty input, or a
// negative value.
double parse_duration(const std::string& text);

// Canonical emission: seconds with the "s" suffix, shortest round-trip
// double formatting.  parse_duration(format_duration(x)) == x exactly.
std::string format_duration(double seconds);

// Shortest round-trip representation of a double (used for CSV cells too).
std::string format_double(double value);

} // namespace sdcplan
