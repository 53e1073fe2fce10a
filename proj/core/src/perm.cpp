#include "lf/perm.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

#include "lf/error.hpp"

namespace lf {

FinPerm FinPerm::cycle(std::span<const Point> points) {
  if (points.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "a cycle needs at least two points");
  }
  std::vector<Point> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorCode::kDuplicatePoint, "cycle repeats a point");
  }
  std::vector<Move> moves;
  moves.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    moves.emplace_back(points[i], points[(i + 1) % points.size()]);
  }
  std::sort(moves.begin(), moves.end());
  return FinPerm(std::move(moves));
}

FinPerm FinPerm::cycle(std::initializer_list<Point> points) {
  return cycle(std::span<const Point>(points.begin(), points.size()));
}

FinPerm FinPerm::transposition(Point a, Point b) {
  if (a == b) fail(ErrorCode::kDuplicatePoint, "transposition of a point with itself");
  return cycle({a, b});
}

FinPerm FinPerm::from_moves(std::vector<Move> moves) {
  std::erase_if(moves, [](const Move& m) { return m.first == m.second; });
  std::sort(moves.begin(), moves.end());
  std::vector<Point> images;
  images.reserve(moves.size());
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (i > 0 && moves[i].first == moves[i - 1].first) {
      fail(ErrorCode::kInvalidArgument, "point listed twice in permutation");
    }
    images.push_back(moves[i].second);
  }
  std::sort(images.begin(), images.end());
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (images[i] != moves[i].first) {
      fail(ErrorCode::kInvalidArgument, "moves do not form a bijection of their domain");
    }
  }
  return FinPerm(std::move(moves));
}

FinPerm FinPerm::from_cycles(const std::vector<std::vector<Point>>& cycles) {
  FinPerm result;
  for (const auto& c : cycles) result = result * cycle(std::span<const Point>(c));
  return result;
}

Point FinPerm::operator()(Point x) const {
  auto it = std::lower_bound(moves_.begin(), moves_.end(), x,
                             [](const Move& m, Point v) { return m.first < v; });
  if (it != moves_.end() && it->first == x) return it->second;
  return x;
}

std::vector<Point> FinPerm::support() const {
  std::vector<Point> s;
  s.reserve(moves_.size());
  for (const auto& m : moves_) s.push_back(m.first);
  return s;
}

bool FinPerm::moves_point(Point x) const { return (*this)(x) != x; }

std::optional<Point> FinPerm::max_moved() const {
  if (moves_.empty()) return std::nullopt;
  return moves_.back().first;
}

std::optional<Point> FinPerm::min_moved() const {
  if (moves_.empty()) return std::nullopt;
  return moves_.front().first;
}

FinPerm FinPerm::inverse() const {
  std::vector<Move> inv;
  inv.reserve(moves_.size());
  for (const auto& [x, y] : moves_) inv.emplace_back(y, x);
  std::sort(inv.begin(), inv.end());
  return FinPerm(std::move(inv));
}

FinPerm FinPerm::pow(std::int64_t e) const {
  std::vector<Move> out;
  out.reserve(moves_.size());
  for (const auto& c : cycles()) {
    const auto len = static_cast<std::int64_t>(c.points.size());
    const std::int64_t shift = ((e % len) + len) % len;
    if (shift == 0) continue;
    for (std::int64_t i = 0; i < len; ++i) {
      out.emplace_back(c.points[static_cast<std::size_t>(i)],
                       c.points[static_cast<std::size_t>((i + shift) % len)]);
    }
  }
  std::sort(out.begin(), out.end());
  return FinPerm(std::move(out));
}

std::uint64_t FinPerm::order() const {
  std::uint64_t result = 1;
  for (const auto& c : cycles()) result = std::lcm(result, static_cast<std::uint64_t>(c.points.size()));
  return result;
}

std::vector<Cycle> FinPerm::cycles() const {
  std::vector<Cycle> out;
  std::set<Point> seen;
  for (const auto& [start, image] : moves_) {
    if (seen.contains(start)) continue;
    Cycle c;
    Point x = start;
    do {
      c.points.push_back(x);
      seen.insert(x);
      x = (*this)(x);
    } while (x != start);
    out.push_back(std::move(c));
  }
  return out;
}

FinPerm FinPerm::restricted_to(std::span<const Point> sorted_domain) const {
  std::vector<Move> out;
  for (const auto& m : moves_) {
    if (std::binary_search(sorted_domain.begin(), sorted_domain.end(), m.first)) out.push_back(m);
  }
  return from_moves(std::move(out));
}

std::string FinPerm::to_string() const {
  if (moves_.empty()) return "()";
  std::ostringstream os;
  for (const auto& c : cycles()) {
    os << '(';
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      if (i) os << ' ';
      os << c.points[i];
    }
    os << ')';
  }
  return os.str();
}

FinPerm operator*(const FinPerm& p, const FinPerm& q) {
  std::vector<Point> domain;
  domain.reserve(p.support_size() + q.support_size());
  for (const auto& m : p.moves()) domain.push_back(m.first);
  for (const auto& m : q.moves()) domain.push_back(m.first);
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  std::vector<FinPerm::Move> moves;
  moves.reserve(domain.size());
  for (Point x : domain) {
    const Point y = p(q(x));
    if (y != x) moves.emplace_back(x, y);
  }
  return FinPerm::from_moves(std::move(moves));
}

bool sf_less(const FinPerm& p, const FinPerm& q) {
  const auto pm = p.max_moved();
  const auto qm = q.max_moved();
  if (pm != qm) {
    if (!pm) return true;
    if (!qm) return false;
    return *pm < *qm;
  }
  // Same largest moved point: the first differing image decides.
  const auto& a = p.moves();
  const auto& b = q.moves();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    const Point x = (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) ? a[i].first : b[j].first;
    const Point px = p(x);
    const Point qx = q(x);
    if (px != qx) return px < qx;
    if (i < a.size() && a[i].first == x) ++i;
    if (j < b.size() && b[j].first == x) ++j;
  }
  return false;
}

namespace {

constexpr std::array<std::uint64_t, 21> kFactorial = [] {
  std::array<std::uint64_t, 21> f{};
  f[0] = 1;
  for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * i;
  return f;
}();

// Completions of positions i+1..top after placing v at position i, counting
// only those that move `top`.
std::uint64_t completions_moving_top(Point i, Point v, Point top, bool top_available) {
  if (i == top) return v != top ? 1 : 0;
  const std::uint64_t all = kFactorial[top - i];
  if (v == top || !top_available) return all;
  return all - kFactorial[top - i - 1];
}

}  // namespace

std::uint64_t sf_index(const FinPerm& p) {
  const auto top_opt = p.max_moved();
  if (!top_opt) return 0;
  const Point top = *top_opt;
  if (top > 19) fail(ErrorCode::kOutOfRange, "sf_index: largest moved point above 19");
  std::vector<bool> used(top + 1, false);
  std::uint64_t rank = 0;
  for (Point i = 0; i <= top; ++i) {
    const Point pi = p(i);
    for (Point v = 0; v < pi; ++v) {
      if (used[v]) continue;
      rank += completions_moving_top(i, v, top, !used[top]);
    }
    used[pi] = true;
  }
  return kFactorial[top] + rank;
}

FinPerm sf_at(std::uint64_t index) {
  if (index == 0) return FinPerm::identity();
  if (index >= kFactorial[20]) fail(ErrorCode::kOutOfRange, "sf_at: index beyond 20!");
  Point top = 1;
  while (kFactorial[top + 1] <= index) ++top;
  std::uint64_t rank = index - kFactorial[top];
  std::vector<bool> used(top + 1, false);
  std::vector<FinPerm::Move> moves;
  for (Point i = 0; i <= top; ++i) {
    for (Point v = 0; v <= top; ++v) {
      if (used[v]) continue;
      const std::uint64_t c = completions_moving_top(i, v, top, !used[top]);
      if (rank < c) {
        used[v] = true;
        moves.emplace_back(i, v);
        break;
      }
      rank -= c;
    }
  }
  return FinPerm::from_moves(std::move(moves));
}

bool supports_disjoint(const FinPerm& p, const FinPerm& q) {
  const auto& a = p.moves();
  const auto& b = q.moves();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) return false;
    if (a[i].first < b[j].first) ++i; else ++j;
  }
  return true;
}

}  // namespace lf
