#include "lf/constructions.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <string>

#include "lf/error.hpp"
#include "lf/json_io.hpp"

namespace lf {

namespace {

std::vector<Point> range(Point lo, Point hi) {
  std::vector<Point> r(hi > lo ? hi - lo : 0);
  std::iota(r.begin(), r.end(), lo);
  return r;
}

std::optional<Point> max_support(const std::vector<FinPerm>& perms) {
  std::optional<Point> out;
  for (const auto& p : perms) {
    if (const auto x = p.max_moved(); x && (!out || *x > *out)) out = x;
  }
  return out;
}

Point above(const std::vector<FinPerm>& perms) {
  const auto x = max_support(perms);
  return x ? *x + 1 : 0;
}

// Least non-identity element, by image sequence, of the group the
// generators span. The first moved point is as late as possible.
FinPerm lex_least_nontrivial(const std::vector<FinPerm>& gens) {
  std::set<Point> sup;
  for (const auto& g : gens) {
    for (const auto& mv : g.moves()) sup.insert(mv.first);
  }
  const std::vector<Point> pts(sup.begin(), sup.end());
  const PermGroup group(gens, pts);
  std::size_t depth = pts.size();
  while (depth > 0) {
    --depth;
    const auto st = group.stabilizer_generators(depth);
    if (std::any_of(st.begin(), st.end(), [](const FinPerm& s) { return !s.is_identity(); })) break;
  }
  std::vector<Point> images(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(depth));
  std::set<Point> used(images.begin(), images.end());
  for (std::size_t i = depth; i < pts.size(); ++i) {
    for (Point y : pts) {
      if (used.count(y) || (i == depth && y <= pts[i])) continue;
      images.push_back(y);
      if (group.realize_prefix(images)) {
        used.insert(y);
        break;
      }
      images.pop_back();
    }
  }
  return *group.realize_prefix(images);
}

Pick certified(const FinPerm& rho, const GroupDesc& g, const WindowConfig& w) {
  auto v = membership(rho, g, w, true);
  if (!v.member() || !v.certificate) fail(ErrorCode::kNotFoundInWindow, "pick could not be certified");
  return {rho, std::move(*v.certificate)};
}

bool closure_avoids(const std::vector<FinPerm>& h, const FinPerm& rho, const std::vector<GroupDesc>& others,
                    const WindowConfig& w, std::size_t* size = nullptr) {
  auto gens = h;
  gens.push_back(rho);
  const auto all = closure_bfs(gens, w.element_budget);
  if (size) *size = all.size();
  const PermGroup base(h);
  for (const auto& e : all) {
    if (base.contains(e)) continue;
    for (const auto& o : others) {
      if (membership(e, o, w, false).kind != MemberKind::kNonMember) return false;
    }
  }
  return true;
}

// Calls fn on each s-subset of `avail` (sorted) ordered by largest element,
// then lexicographically. Stops when fn returns true.
bool for_each_subset(const std::vector<Point>& avail, std::size_t s,
                     const std::function<bool(const std::vector<Point>&)>& fn) {
  if (s == 0 || avail.size() < s) return false;
  for (std::size_t top = s - 1; top < avail.size(); ++top) {
    std::vector<std::size_t> idx(s - 1);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<Point> set;
      for (auto i : idx) set.push_back(avail[i]);
      set.push_back(avail[top]);
      if (fn(set)) return true;
      // next combination of s-1 out of [0, top)
      std::size_t k = idx.size();
      while (k > 0 && idx[k - 1] == top - (idx.size() - k) - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return false;
}

// First arrangement of `to`, in lexicographic order, satisfying pred.
std::optional<std::vector<Point>> first_bijection(std::vector<Point> to,
                                                  const std::function<bool(const std::vector<Point>&)>& pred) {
  std::sort(to.begin(), to.end());
  do {
    if (pred(to)) return to;
  } while (std::next_permutation(to.begin(), to.end()));
  return std::nullopt;
}

std::vector<std::pair<Point, Point>> zip(const std::vector<Point>& a, const std::vector<Point>& b) {
  std::vector<std::pair<Point, Point>> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.emplace_back(a[i], b[i]);
  return out;
}

}  // namespace

Pick avoid_support(const GroupDesc& g, Point m, const WindowConfig& w) {
  for (Point hi = m + 2; hi <= w.bound; ++hi) {
    const auto local = local_generators(g, range(m, hi), w);
    std::vector<FinPerm> gens;
    for (const auto& x : local.generators) {
      if (!x.is_identity()) gens.push_back(x);
    }
    if (gens.empty()) continue;
    return certified(lex_least_nontrivial(gens), g, w);
  }
  fail(ErrorCode::kNotFoundInWindow,
       "no non-trivial element supported in [" + std::to_string(m) + ", " + std::to_string(w.bound) + ")");
}

Pick avoid_support_constrained(const GroupDesc& g, Point m, const std::vector<FinPerm>& h,
                               const std::vector<GroupDesc>& others, const WindowConfig& w) {
  if (others.empty()) return avoid_support(g, m, w);
  for (const auto& x : h) {
    if (x.max_moved() && *x.max_moved() >= m) fail(ErrorCode::kInvalidArgument, "H must act on [0, m)");
  }
  for (std::size_t i = 0; i < others.size(); ++i) {
    if (orthogonal(g, others[i], w).fails()) {
      fail(ErrorCode::kInvalidArgument, "group " + std::to_string(i) + " of others is not orthogonal to G");
    }
  }
  for (Point hi = m + 2; hi <= w.bound; ++hi) {
    const auto local = local_generators(g, range(m, hi), w);
    std::vector<FinPerm> fresh;
    for (auto& e : PermGroup(local.generators).elements(w.element_budget)) {
      if (e.max_moved() == hi - 1) fresh.push_back(std::move(e));
    }
    std::sort(fresh.begin(), fresh.end(), sf_less);
    for (const auto& rho : fresh) {
      if (closure_avoids(h, rho, others, w)) return certified(rho, g, w);
    }
  }
  fail(ErrorCode::kNotFoundInWindow, "no admissible element supported in [" + std::to_string(m) + ", " +
                                         std::to_string(w.bound) + ")");
}

bool restricted_induces(const GroupDesc& g, Point m, const std::vector<FinPerm>& h_elements,
                        const std::vector<std::pair<Point, Point>>& f, const WindowConfig& w) {
  for (const auto& a : h_elements) {
    auto partial = f;
    for (Point x = 0; x < m; ++x) partial.emplace_back(x, a(x));
    if (extends(g, partial, w) != false) return true;
  }
  return false;
}

RhoBuild rho_k_cycles(const std::vector<GroupDesc>& groups, unsigned k, Point m, const std::vector<FinPerm>& h,
                      const WindowConfig& w) {
  if (k == 0) fail(ErrorCode::kInvalidArgument, "k must be positive");
  for (const auto& x : h) {
    if (x.max_moved() && *x.max_moved() >= m) fail(ErrorCode::kInvalidArgument, "H must act on [0, m)");
  }
  RhoBuild out;
  if (groups.empty()) {
    if (m + k >= w.bound) fail(ErrorCode::kNotFoundInWindow, "no room for a cycle above m");
    out.rho = FinPerm::cycle(range(m, m + k + 1));
    out.closure_size = closure_bfs(h, w.element_budget).size() * (k + 1);
    return out;
  }
  const auto h_elements = closure_bfs(h, w.element_budget);
  std::set<Point> used;
  std::vector<FinPerm::Move> moves;
  auto available = [&] {
    std::vector<Point> a;
    for (Point x = m; x < w.bound; ++x) {
      if (!used.count(x)) a.push_back(x);
    }
    return a;
  };
  // Blocks D_0..D_k whose maps no group in `targets` induces; appends the
  // cycles to `moves`.
  auto build = [&](const std::vector<GroupDesc>& targets, const std::string& label) {
    auto not_induced = [&](const std::vector<Point>& from, const std::vector<Point>& to) {
      return std::all_of(targets.begin(), targets.end(), [&](const GroupDesc& g) {
        return !restricted_induces(g, m, h_elements, zip(from, to), w);
      });
    };
    std::vector<Point> d0;
    for (std::size_t s = 2; s <= 3 && d0.empty(); ++s) {
      for_each_subset(available(), s, [&](const std::vector<Point>& d) {
        const auto f = first_bijection(d, [&](const std::vector<Point>& img) {
          return img != d && not_induced(d, img);
        });
        if (f) d0 = d;
        return f.has_value();
      });
    }
    if (d0.empty()) {
      fail(ErrorCode::kNotFoundInWindow, "stage D0 for " + label + ": every small block is fully induced in the window");
    }
    used.insert(d0.begin(), d0.end());
    std::vector<std::vector<Point>> blocks = {d0};
    std::vector<std::vector<Point>> maps = {d0};
    for (unsigned i = 1; i <= k; ++i) {
      std::optional<std::vector<Point>> fi;
      for_each_subset(available(), d0.size(), [&](const std::vector<Point>& d) {
        fi = first_bijection(d, [&](const std::vector<Point>& img) { return not_induced(d0, img); });
        if (fi) blocks.push_back(d);
        return fi.has_value();
      });
      if (!fi) fail(ErrorCode::kNotFoundInWindow, "stage D" + std::to_string(i) + " for " + label + ": no free block in the window");
      used.insert(fi->begin(), fi->end());
      maps.push_back(*fi);
    }
    // x in D_i moves to the matching point of D_{i+1}; D_k wraps to D_0.
    for (std::size_t t = 0; t < d0.size(); ++t) {
      for (unsigned i = 0; i <= k; ++i) moves.emplace_back(maps[i][t], maps[(i + 1) % (k + 1)][t]);
    }
    out.blocks.push_back(std::move(blocks));
    out.maps.push_back(std::move(maps));
  };

  try {
    for (std::size_t j = 0; j < groups.size(); ++j) {
      // Cycles already built for earlier groups may keep G_j out as well.
      if (!moves.empty() && closure_avoids(h, FinPerm::from_moves(moves), {groups[j]}, w)) {
        out.blocks.emplace_back();
        out.maps.emplace_back();
        continue;
      }
      build({groups[j]}, "group " + std::to_string(j));
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotFoundInWindow || groups.size() < 2) throw;
    // Too little room for separate blocks: one set of blocks whose maps
    // every group fails to induce. The other groups get no blocks.
    used.clear();
    moves.clear();
    out = RhoBuild{};
    try {
      build(groups, "all groups");
    } catch (const Error&) {
      throw e;
    }
    out.blocks.resize(groups.size());
    out.maps.resize(groups.size());
  }
  out.rho = FinPerm::from_moves(std::move(moves));
  if (!closure_avoids(h, out.rho, groups, w, &out.closure_size)) {
    fail(ErrorCode::kNotFoundInWindow, "stage verify: <H, rho> meets a target group outside <H>");
  }
  return out;
}

Verdict verify_chain_descent(const std::vector<GroupDesc>& chain, const WindowConfig& w) {
  bool exact = true;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (!chain[i].is_infinite()) return Verdict::Fails({{"index", i}, {"reason", "finite"}});
    if (i == 0) continue;
    const auto upper = window_generators(chain[i - 1], w);
    const auto lower = window_generators(chain[i], w);
    exact = exact && upper.exact && lower.exact;
    for (const auto& g : lower.generators) {
      if (!is_member(g, chain[i - 1], w)) {
        return Verdict::Fails({{"index", i}, {"reason", "not contained"}, {"generator", to_json(g)}});
      }
    }
    const bool strict = std::any_of(upper.generators.begin(), upper.generators.end(),
                                    [&](const FinPerm& g) { return !is_member(g, chain[i], w); });
    if (!strict) return Verdict::Fails({{"index", i}, {"reason", "not strictly smaller"}}, false);
  }
  return Verdict::Holds(nullptr, exact);
}

PseudoIntersection pseudo_intersection(const std::vector<GroupDesc>& chain, const WindowConfig& w) {
  const auto descent = verify_chain_descent(chain, w);
  if (!descent.holds()) fail(ErrorCode::kInvalidArgument, "chain is not descending: " + descent.witness.dump());
  PseudoIntersection out;
  std::vector<FinPerm> rhos;
  for (const auto& gi : chain) {
    out.x.push_back(rhos);
    out.picks.push_back(avoid_support(gi, above(rhos), w));
    rhos.push_back(out.picks.back().rho);
  }
  out.group = rhos.empty() ? GroupDesc() : GroupDesc::explicit_family(rhos);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    out.verdicts.push_back(almost_contained_verify(out.group, chain[i], out.x[i], w));
  }
  return out;
}

AntiReapingPair anti_reaping_pair(const EnumeratedFamily& family, std::size_t steps, const WindowConfig& w) {
  if (family.groups.empty() && steps > 0) fail(ErrorCode::kInvalidArgument, "empty family");
  AntiReapingPair out;
  std::vector<FinPerm> rhos;
  std::vector<FinPerm> first;
  std::vector<FinPerm> second;
  for (std::size_t t = 0; t < steps; ++t) {
    out.picks.push_back(avoid_support(family.at(t / 2), above(rhos), w));
    rhos.push_back(out.picks.back().rho);
    (t % 2 == 0 ? first : second).push_back(rhos.back());
  }
  out.g1 = first.empty() ? GroupDesc() : GroupDesc::explicit_family(first);
  out.g2 = second.empty() ? GroupDesc() : GroupDesc::explicit_family(second);
  return out;
}

Diagonal orthogonal_diagonal(const EnumeratedFamily& family, std::size_t steps, const std::vector<unsigned>& k_schedule,
                             const WindowConfig& w) {
  if (family.groups.empty() && steps > 0) fail(ErrorCode::kInvalidArgument, "empty family");
  Diagonal out;
  std::vector<FinPerm> rhos;
  std::vector<GroupDesc> prefix;
  for (std::size_t s = 0; s < steps; ++s) {
    const auto& next = family.at(s);
    if (std::find(prefix.begin(), prefix.end(), next) == prefix.end()) prefix.push_back(next);
    const unsigned k = k_schedule.empty() ? 1 : k_schedule[s % k_schedule.size()];
    out.builds.push_back(rho_k_cycles(prefix, k, above(rhos), rhos, w));
    rhos.push_back(out.builds.back().rho);
  }
  out.group = GroupDesc::finitely_generated(rhos);
  return out;
}

nlohmann::json to_json(const Pick& p) {
  return {{"rho", to_json(p.rho)}, {"certificate", to_json(p.certificate)}};
}

nlohmann::json to_json(const RhoBuild& r) {
  return {{"rho", to_json(r.rho)}, {"blocks", r.blocks}, {"maps", r.maps}, {"closure_size", r.closure_size}};
}

nlohmann::json to_json(const PseudoIntersection& p) {
  nlohmann::json picks = nlohmann::json::array();
  for (const auto& pk : p.picks) picks.push_back(to_json(pk));
  nlohmann::json x = nlohmann::json::array();
  for (const auto& xi : p.x) x.push_back(to_json(xi));
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& v : p.verdicts) verdicts.push_back(to_json(v));
  return {{"group", to_json(p.group)}, {"picks", picks}, {"x", x}, {"verdicts", verdicts}};
}

nlohmann::json to_json(const AntiReapingPair& p) {
  nlohmann::json picks = nlohmann::json::array();
  for (const auto& pk : p.picks) picks.push_back(to_json(pk));
  return {{"g1", to_json(p.g1)}, {"g2", to_json(p.g2)}, {"picks", picks}};
}

nlohmann::json to_json(const Diagonal& d) {
  nlohmann::json builds = nlohmann::json::array();
  for (const auto& b : d.builds) builds.push_back(to_json(b));
  return {{"group", to_json(d.group)}, {"builds", builds}};
}

}  // namespace lf
