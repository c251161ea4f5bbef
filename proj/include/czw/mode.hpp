#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace czw {

/// Which intervals a supremum ranges over: every grid-aligned interval of
/// the domain, or only the dyadic ones.
enum class IntervalMode { AllIntervals, Dyadic };

/// all-intervals up to 2^10 cells, dyadic above.
IntervalMode default_mode(std::size_t n);

std::string to_string(IntervalMode mode);

/// Accepts "all-intervals", "dyadic" and "auto" (resolved against n).
IntervalMode parse_mode(std::string_view text, std::size_t n);

}  // namespace czw
