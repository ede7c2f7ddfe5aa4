#pragma once

// Finitely supported scalar fields on Z^d.
//
// A field is stored densely over the closed l1 ball ||n|| <= R of its
// declared radius R. The ball is laid out as "rows": every prefix
// (n_1, ..., n_{d-1}) with |prefix| <= R owns a contiguous run of the last
// coordinate n_d in [-w, w], w = R - |prefix|. Rows appear in lexicographic
// order of their prefix, so storage order is lexicographic point order.

#include "dwave/scalar.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dwave {

using Coord = std::int64_t;

struct LatticePoint {
  std::vector<Coord> coords;

  LatticePoint() = default;
  explicit LatticePoint(std::vector<Coord> c) : coords(std::move(c)) {}
  LatticePoint(std::initializer_list<Coord> c) : coords(c) {}

  int dim() const { return static_cast<int>(coords.size()); }
  Coord l1_norm() const;

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

LatticePoint origin(int dim);
std::string to_string(const LatticePoint& n);

/// Number of integer points with ||n||_1 <= radius in Z^dim.
/// Throws std::overflow_error when the count does not fit in 64 bits.
std::uint64_t l1_ball_count(int dim, std::int64_t radius);

class BallLayout {
 public:
  struct Row {
    std::size_t offset;
    Coord half_width;
  };

  BallLayout(int dim, Coord radius);

  int dim() const { return dim_; }
  Coord radius() const { return radius_; }
  std::size_t size() const { return size_; }
  std::size_t row_count() const { return rows_.size(); }
  const Row& row(std::size_t r) const { return rows_[r]; }
  std::span<const Coord> prefix(std::size_t r) const;
  Coord prefix_norm(std::size_t r) const { return radius_ - rows_[r].half_width; }

  std::optional<std::size_t> find_row(std::span<const Coord> prefix) const;
  std::optional<std::size_t> index_of(const LatticePoint& n) const;
  LatticePoint point_at(std::size_t index) const;

 private:
  int dim_;
  Coord radius_;
  std::size_t size_ = 0;
  std::vector<Row> rows_;
  std::vector<Coord> prefixes_;  // row_count * (dim - 1), row-major
};

template <typename Scalar>
class Field {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  /// The zero field of dimension `dim` (declared radius 0).
  explicit Field(int dim)
      : layout_(std::make_shared<const BallLayout>(dim, 0)), values_(Values::Zero(1)) {}

  Field(std::shared_ptr<const BallLayout> layout, Values values)
      : layout_(std::move(layout)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != layout_->size())
      throw std::invalid_argument("field value count does not match its layout");
  }

  int dim() const { return layout_->dim(); }
  Coord declared_radius() const { return layout_->radius(); }
  const BallLayout& layout() const { return *layout_; }
  const std::shared_ptr<const BallLayout>& shared_layout() const { return layout_; }
  const Values& values() const { return values_; }
  /// Move the storage out, e.g. to reuse it as the next time slice.
  Values take_values() && { return std::move(values_); }

  /// Value at `n`; points outside the declared ball read as exactly zero.
  Scalar at(const LatticePoint& n) const {
    if (n.dim() != dim()) throw std::invalid_argument("point arity does not match field dimension");
    auto idx = layout_->index_of(n);
    return idx ? values_[static_cast<Eigen::Index>(*idx)] : Scalar(0);
  }

 private:
  std::shared_ptr<const BallLayout> layout_;
  Values values_;
};

template <typename Scalar>
struct FieldEntry {
  LatticePoint point;
  Scalar value;
};

template <typename Scalar>
struct FieldExtremum {
  Scalar value;
  LatticePoint point;
};

template <typename Scalar>
Field<Scalar> make_field(int dim, const std::vector<FieldEntry<Scalar>>& entries) {
  if (dim < 1) throw std::invalid_argument("field dimension must be at least 1");
  std::vector<const LatticePoint*> sorted;
  sorted.reserve(entries.size());
  Coord radius = 0;
  for (const auto& e : entries) {
    if (e.point.dim() != dim)
      throw std::invalid_argument("point " + to_string(e.point) + " has arity " +
                                  std::to_string(e.point.dim()) + ", expected " +
                                  std::to_string(dim));
    if (e.value != Scalar(0)) radius = std::max(radius, e.point.l1_norm());
    sorted.push_back(&e.point);
  }
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return *a < *b; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (*sorted[i] == *sorted[i - 1])
      throw std::invalid_argument("duplicate point " + to_string(*sorted[i]));

  auto layout = std::make_shared<const BallLayout>(dim, radius);
  typename Field<Scalar>::Values values = Field<Scalar>::Values::Zero(
      static_cast<Eigen::Index>(layout->size()));
  for (const auto& e : entries) {
    if (auto idx = layout->index_of(e.point)) values[static_cast<Eigen::Index>(*idx)] = e.value;
  }
  return Field<Scalar>(std::move(layout), std::move(values));
}

/// Re-embed a field in the ball of radius `radius`. Shrinking is allowed only
/// down to the support radius; values are never dropped.
template <typename Scalar>
Field<Scalar> resized(const Field<Scalar>& f, Coord radius);

template <typename Scalar>
Coord support_radius(const Field<Scalar>& f) {
  const auto& layout = f.layout();
  const auto& vals = f.values();
  Coord best = 0;
  for (std::size_t r = 0; r < layout.row_count(); ++r) {
    const auto& row = layout.row(r);
    const Coord base = layout.prefix_norm(r);
    for (Coord m = -row.half_width; m <= row.half_width; ++m) {
      const auto i = static_cast<Eigen::Index>(row.offset + static_cast<std::size_t>(m + row.half_width));
      if (vals[i] != Scalar(0)) best = std::max(best, base + (m < 0 ? -m : m));
    }
  }
  return best;
}

template <typename Scalar>
Field<Scalar> resized(const Field<Scalar>& f, Coord radius) {
  if (radius == f.declared_radius()) return f;
  if (radius < support_radius(f))
    throw std::invalid_argument("cannot shrink a field below its support radius");
  auto layout = std::make_shared<const BallLayout>(f.dim(), radius);
  typename Field<Scalar>::Values out =
      Field<Scalar>::Values::Zero(static_cast<Eigen::Index>(layout->size()));
  const auto& src = f.layout();
  const auto& in = f.values();
  for (std::size_t r = 0; r < src.row_count(); ++r) {
    auto target = layout->find_row(src.prefix(r));
    if (!target) continue;  // shrinking: the row is all zeros
    const auto& a = src.row(r);
    const auto& b = layout->row(*target);
    const Coord w = std::min(a.half_width, b.half_width);
    const auto len = static_cast<Eigen::Index>(2 * w + 1);
    out.segment(static_cast<Eigen::Index>(b.offset + static_cast<std::size_t>(b.half_width - w)), len) =
        in.segment(static_cast<Eigen::Index>(a.offset + static_cast<std::size_t>(a.half_width - w)), len);
  }
  return Field<Scalar>(std::move(layout), std::move(out));
}

/// (1/2d) * sum_k (F(n + e_k) + F(n - e_k)); the result lives on radius R + 1.
template <typename Scalar>
Field<Scalar> neighbor_average(const Field<Scalar>& f) {
  const int d = f.dim();
  const auto& src = f.layout();
  auto layout = std::make_shared<const BallLayout>(d, src.radius() + 1);
  typename Field<Scalar>::Values out(static_cast<Eigen::Index>(layout->size()));
  const auto& in = f.values();

  // Gather row by row so each output row is finished while it is in cache.
  // Row j of the source is the one whose prefix equals the output prefix plus
  // shift j; as output prefixes increase lexicographically so do the shifted
  // ones, so one forward cursor per shift replaces a search.
  const std::size_t pd = static_cast<std::size_t>(d - 1);
  std::vector<std::vector<Coord>> shifts(1, std::vector<Coord>(pd, 0));
  for (std::size_t k = 0; k < pd; ++k)
    for (Coord step : {Coord{-1}, Coord{1}}) {
      shifts.emplace_back(pd, 0);
      shifts.back()[k] = step;
    }
  std::vector<std::size_t> cursor(shifts.size(), 0);
  std::vector<Coord> target(pd);

  for (std::size_t r = 0; r < layout->row_count(); ++r) {
    const auto& row = layout->row(r);
    const Coord W = row.half_width;
    auto dst = out.segment(static_cast<Eigen::Index>(row.offset), static_cast<Eigen::Index>(2 * W + 1));
    dst.setZero();
    const auto prefix = layout->prefix(r);
    for (std::size_t j = 0; j < shifts.size(); ++j) {
      for (std::size_t k = 0; k < pd; ++k) target[k] = prefix[k] + shifts[j][k];
      auto& c = cursor[j];
      auto less = [&](std::size_t s) {
        const auto sp = src.prefix(s);
        return std::lexicographical_compare(sp.begin(), sp.end(), target.begin(), target.end());
      };
      while (c < src.row_count() && less(c)) ++c;
      if (c == src.row_count() || !std::equal(target.begin(), target.end(), src.prefix(c).begin())) continue;
      const auto& sr = src.row(c);
      const auto len = static_cast<Eigen::Index>(2 * sr.half_width + 1);
      const auto seg = in.segment(static_cast<Eigen::Index>(sr.offset), len);
      if (j == 0) {
        // Same prefix: last coordinate shifted by +1 and -1.
        dst.segment(0, len) += seg;
        dst.segment(2, len) += seg;
      } else {
        dst.segment(static_cast<Eigen::Index>(W - sr.half_width), len) += seg;
      }
    }
    dst /= Scalar(2 * d);
  }
  return Field<Scalar>(std::move(layout), std::move(out));
}

/// Sum of all values, accumulated in lexicographic point order.
template <typename Scalar>
Scalar field_sum(const Field<Scalar>& f) {
  Accumulator<Scalar> total;
  const auto& vals = f.values();
  for (Eigen::Index i = 0; i < vals.size(); ++i) total.add(vals[i]);
  return total.value();
}

/// Largest value over the declared ball (implicit zeros included); ties go to
/// the lexicographically smallest point.
template <typename Scalar>
FieldExtremum<Scalar> field_max(const Field<Scalar>& f) {
  const auto& vals = f.values();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < vals.size(); ++i)
    if (vals[i] > vals[best]) best = i;
  return {vals[best], f.layout().point_at(static_cast<std::size_t>(best))};
}

template <typename Scalar>
FieldExtremum<Scalar> field_min(const Field<Scalar>& f) {
  const auto& vals = f.values();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < vals.size(); ++i)
    if (vals[i] < vals[best]) best = i;
  return {vals[best], f.layout().point_at(static_cast<std::size_t>(best))};
}

/// a*F + b*G on the larger of the two balls.
template <typename Scalar>
Field<Scalar> linear_combination(const Scalar& a, const Field<Scalar>& f, const Scalar& b,
                                 const Field<Scalar>& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("field dimensions differ");
  const Coord radius = std::max(f.declared_radius(), g.declared_radius());
  auto fr = resized(f, radius);
  auto gr = resized(g, radius);
  typename Field<Scalar>::Values out = a * fr.values() + b * gr.values();
  return Field<Scalar>(fr.shared_layout(), std::move(out));
}

/// Pointwise map on the same layout. `fn` must send 0 to 0 to keep the
/// support inside the declared ball.
template <typename Scalar, typename Fn>
Field<Scalar> map_values(const Field<Scalar>& f, Fn&& fn) {
  typename Field<Scalar>::Values out = f.values().unaryExpr(std::forward<Fn>(fn));
  return Field<Scalar>(f.shared_layout(), std::move(out));
}

template <typename To, typename From>
Field<To> field_cast(const Field<From>& f) {
  typename Field<To>::Values out(f.values().size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if constexpr (std::is_same_v<To, double>)
      out[i] = to_double(f.values()[i]);
    else if constexpr (std::is_same_v<From, double>)
      out[i] = from_double<To>(f.values()[i]);
    else
      out[i] = To(f.values()[i]);
  }
  return Field<To>(f.shared_layout(), std::move(out));
}

template <typename Scalar>
std::vector<FieldEntry<Scalar>> nonzero_entries(const Field<Scalar>& f) {
  std::vector<FieldEntry<Scalar>> out;
  const auto& vals = f.values();
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals[i] != Scalar(0)) out.push_back({f.layout().point_at(static_cast<std::size_t>(i)), vals[i]});
  return out;
}

}  // namespace dwave
