#pragma once

// JSON-lines snapshots: a header {"d": int, "radius": int} followed by one
// {"n": [ints], "v": float} record per nonzero entry in lexicographic order.

#include "dwave/lattice.hpp"

#include <iosfwd>

namespace dwave {

void write_field_jsonl(std::ostream& os, const Field<double>& f);

/// Throws std::runtime_error on malformed input, std::invalid_argument on
/// invalid fields (duplicates, arity mismatch, entries outside the header radius).
Field<double> read_field_jsonl(std::istream& is);

}  // namespace dwave
