#include "czw/mode.hpp"

#include "czw/error.hpp"

namespace czw {

IntervalMode default_mode(std::size_t n) {
    return n <= (std::size_t{1} << 10) ? IntervalMode::AllIntervals : IntervalMode::Dyadic;
}

std::string to_string(IntervalMode mode) {
    return mode == IntervalMode::AllIntervals ? "all-intervals" : "dyadic";
}

IntervalMode parse_mode(std::string_view text, std::size_t n) {
    if (text == "all-intervals" || text == "all") return IntervalMode::AllIntervals;
    if (text == "dyadic") return IntervalMode::Dyadic;
    if (text == "auto") return default_mode(n);
    throw ConfigError("unknown interval mode: " + std::string(text));
}

}  // namespace czw
