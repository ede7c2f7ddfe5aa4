#pragma once

#include <string>

namespace dwave {

/// Shortest decimal text that parses back to the same double; "nan", "inf",
/// "-inf" for non-finite values.
std::string format_double(double x);

}  // namespace dwave
