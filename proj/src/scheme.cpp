#include "dwave/scheme.hpp"

namespace dwave {

std::string HypothesisReport::describe() const {
  std::string s;
  if (!a1_ok) s += "initial data not supported in ||n|| <= " + std::to_string(K) + "; ";
  if (!a2_ok) s += "sum of u1 does not exceed sum of u0; ";
  if (!p_ok) s += "p outside 1 < p <= (d+1)/(d-1); ";
  if (s.empty()) return "all hypotheses hold";
  s.resize(s.size() - 2);
  return s;
}

}  // namespace dwave
