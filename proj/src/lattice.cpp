#include "dwave/lattice.hpp"

#include <algorithm>
#include <limits>

namespace dwave {

Coord LatticePoint::l1_norm() const {
  Coord s = 0;
  for (Coord c : coords) s += c < 0 ? -c : c;
  return s;
}

LatticePoint origin(int dim) { return LatticePoint(std::vector<Coord>(static_cast<std::size_t>(dim), 0)); }

std::string to_string(const LatticePoint& n) {
  std::string s = "(";
  for (std::size_t i = 0; i < n.coords.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(n.coords[i]);
  }
  return s + ")";
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("l1 ball count overflows 64 bits");
  return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("l1 ball count overflows 64 bits");
  return r;
}

// C(n, k) with exact intermediate division: after step i the running value is C(n - k + i, i).
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(c);
}

}  // namespace

std::uint64_t l1_ball_count(int dim, std::int64_t radius) {
  if (dim < 1) throw std::invalid_argument("dimension must be at least 1");
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  // A point with exactly k nonzero coordinates: choose the axes, the signs, and
  // a composition of some m <= R into k positive parts; summing over m gives C(R, k).
  const auto R = static_cast<std::uint64_t>(radius);
  const auto kmax = std::min<std::uint64_t>(static_cast<std::uint64_t>(dim), R);
  std::uint64_t total = 0;
  for (std::uint64_t k = 0; k <= kmax; ++k) {
    if (k >= 64) throw std::overflow_error("l1 ball count overflows 64 bits");
    std::uint64_t term = checked_mul(std::uint64_t{1} << k, binomial(static_cast<std::uint64_t>(dim), k));
    term = checked_mul(term, binomial(R, k));
    total = checked_add(total, term);
  }
  return total;
}

BallLayout::BallLayout(int dim, Coord radius) : dim_(dim), radius_(radius) {
  if (dim < 1) throw std::invalid_argument("dimension must be at least 1");
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  const auto plen = static_cast<std::size_t>(dim - 1);
  std::vector<Coord> prefix(plen, 0);

  // Depth-first walk over prefixes in lexicographic order.
  auto emit = [&](auto&& self, std::size_t depth, Coord used) -> void {
    if (depth == plen) {
      const Coord w = radius_ - used;
      rows_.push_back({size_, w});
      prefixes_.insert(prefixes_.end(), prefix.begin(), prefix.end());
      size_ += static_cast<std::size_t>(2 * w + 1);
      return;
    }
    const Coord room = radius_ - used;
    for (Coord c = -room; c <= room; ++c) {
      prefix[depth] = c;
      self(self, depth + 1, used + (c < 0 ? -c : c));
    }
    prefix[depth] = 0;
  };
  emit(emit, 0, 0);
}

std::span<const Coord> BallLayout::prefix(std::size_t r) const {
  const auto plen = static_cast<std::size_t>(dim_ - 1);
  return {prefixes_.data() + r * plen, plen};
}

std::optional<std::size_t> BallLayout::find_row(std::span<const Coord> prefix) const {
  const auto plen = static_cast<std::size_t>(dim_ - 1);
  if (prefix.size() != plen) throw std::invalid_argument("prefix arity does not match layout");
  if (plen == 0) return 0;
  Coord norm = 0;
  for (Coord c : prefix) norm += c < 0 ? -c : c;
  if (norm > radius_) return std::nullopt;

  std::size_t lo = 0;
  std::size_t hi = rows_.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto p = this->prefix(mid);
    if (std::lexicographical_compare(p.begin(), p.end(), prefix.begin(), prefix.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo;
}

std::optional<std::size_t> BallLayout::index_of(const LatticePoint& n) const {
  if (n.dim() != dim_) throw std::invalid_argument("point arity does not match layout");
  if (n.l1_norm() > radius_) return std::nullopt;
  std::span<const Coord> all(n.coords);
  auto r = find_row(all.first(static_cast<std::size_t>(dim_ - 1)));
  const auto& row = rows_[*r];
  return row.offset + static_cast<std::size_t>(n.coords.back() + row.half_width);
}

LatticePoint BallLayout::point_at(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("lattice index out of range");
  auto it = std::upper_bound(rows_.begin(), rows_.end(), index,
                             [](std::size_t i, const Row& row) { return i < row.offset; });
  const auto r = static_cast<std::size_t>(std::distance(rows_.begin(), it) - 1);
  auto p = prefix(r);
  std::vector<Coord> coords(p.begin(), p.end());
  coords.push_back(static_cast<Coord>(index - rows_[r].offset) - rows_[r].half_width);
  return LatticePoint(std::move(coords));
}

}  // namespace dwave
