#include "dwave/field_io.hpp"

#include <json.hpp>

#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace dwave {

void write_field_jsonl(std::ostream& os, const Field<double>& f) {
  nlohmann::ordered_json header{{"d", f.dim()}, {"radius", f.declared_radius()}};
  os << header.dump() << '\n';
  for (const auto& e : nonzero_entries(f)) {
    nlohmann::ordered_json rec{{"n", e.point.coords}, {"v", e.value}};
    os << rec.dump() << '\n';
  }
}

Field<double> read_field_jsonl(std::istream& is) {
  std::string line;
  long lineno = 0;
  auto next_record = [&]() -> std::optional<nlohmann::json> {
    while (std::getline(is, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        return nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    return std::nullopt;
  };

  auto header = next_record();
  if (!header || !header->is_object() || !header->contains("d") || !header->contains("radius"))
    throw std::runtime_error("snapshot must start with a {\"d\", \"radius\"} header");
  const int d = header->at("d").get<int>();
  const Coord radius = header->at("radius").get<Coord>();
  if (radius < 0) throw std::runtime_error("header radius must be non-negative");

  std::vector<FieldEntry<double>> entries;
  while (auto rec = next_record()) {
    if (!rec->is_object() || !rec->contains("n") || !rec->contains("v"))
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected {\"n\": [...], \"v\": ...}");
    LatticePoint n(rec->at("n").get<std::vector<Coord>>());
    const double v = rec->at("v").get<double>();
    if (v != 0.0 && n.l1_norm() > radius)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": entry outside the declared radius");
    entries.push_back({std::move(n), v});
  }
  auto f = make_field(d, entries);
  return resized(f, std::max(radius, f.declared_radius()));
}

}  // namespace dwave
