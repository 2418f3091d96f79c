#include "sdcplan/units.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <cstdlib>

#include "sdcplan/errors.hpp"

namespace sdcplan {

namespace {

struct Unit {
    const char* suffix;
    double seconds;
};

// Longest suffix first so "min" wins over a would-be "m".
constexpr std::array<Unit, 5> kUnits = {{
    {"min", 60.0},
    {"s", 1.0},
    {"h", 3600.0},
    {"d", 86400.0},
    {"y", 365.0 * 86400.0},
}};

} // namespace

double parse_duration(const std::string& text) {
    if (text.empty()) {
        throw ScenarioError("duration: empty string (expected e.g. \"600s\")");
    }
    for (const Unit& u : kUnits) {
        const std::string suffix(u.suffix);
        if (text.size() <= suffix.size() ||
            text.compare(text.size() - suffix.size(), suffix.size(), suffix) != 0) {
            continue;
        }
        const std::string number = text.substr(0, text.size() - suffix.size());
        const char* begin = number.c_str();
        char* end = nullptr;
        errno = 0;
        const double value = std::strtod(begin, &end);
        if (end != begin + number.size() || number.empty() || errno == ERANGE) {
            throw ScenarioError("duration '" + text + "': bad numeric part '" + number + "'");
        }
        if (value < 0.0) {
            throw ScenarioError("duration '" + text + "': negative durations are not allowed");
        }
        return value * u.seconds;
    }
    throw ScenarioError("duration '" + text +
                        "': missing or unknown unit suffix (use s, min, h, d, y)");
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

std::string format_duration(double seconds) {
    return format_double(seconds) + "s";
}

} // namespace sdcplan
