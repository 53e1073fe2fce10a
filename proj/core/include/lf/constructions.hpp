#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "lf/groups.hpp"
#include "lf/lattice.hpp"

namespace lf {

/// A non-trivial element of some group together with a membership word.
struct Pick {
  FinPerm rho;
  Certificate certificate;
};

/// The least element of G, in SF order, with support in [m, infinity).
/// The search widens [m, M) until the local part becomes non-trivial.
/// Throws kNotFoundInWindow when the window is exhausted.
Pick avoid_support(const GroupDesc& g, Point m, const WindowConfig& w);

/// As avoid_support, but also every element of <H, rho> outside <H> must
/// be a non-member of each group in `others`. H must live on [0, m).
Pick avoid_support_constrained(const GroupDesc& g, Point m, const std::vector<FinPerm>& h,
                               const std::vector<GroupDesc>& others, const WindowConfig& w);

/// Does some g in G that agrees with an element of <H> on [0, m) extend the
/// partial map f? Such g form the group S the cycle builder works against.
/// A window-limited answer counts as yes.
bool restricted_induces(const GroupDesc& g, Point m, const std::vector<FinPerm>& h_elements,
                        const std::vector<std::pair<Point, Point>>& f, const WindowConfig& w);

struct RhoBuild {
  FinPerm rho;
  /// blocks[j][i] is D_{ji}; maps[j][i] lists f_{ji} images of D_{j0}.
  std::vector<std::vector<std::vector<Point>>> blocks;
  std::vector<std::vector<std::vector<Point>>> maps;
  std::size_t closure_size = 0;
};

/// A product of (k+1)-cycles supported above m with
/// <H, rho> cap G_j = <H> cap G_j for every listed group, built from
/// non-induced bijections between disjoint blocks. The equation is checked
/// on the closure of <H, rho> before returning. A group already kept out
/// by the cycles of earlier groups gets no blocks of its own. When separate
/// blocks do not fit, one shared set of blocks serves every group.
RhoBuild rho_k_cycles(const std::vector<GroupDesc>& groups, unsigned k, Point m, const std::vector<FinPerm>& h,
                      const WindowConfig& w);

struct PseudoIntersection {
  GroupDesc group;
  std::vector<Pick> picks;
  /// x[i] = picks before i; G <=_a G_i holds with it.
  std::vector<std::vector<FinPerm>> x;
  std::vector<Verdict> verdicts;
};

/// Checks that each G_{i+1} lies in G_i on the window and each is infinite.
Verdict verify_chain_descent(const std::vector<GroupDesc>& chain, const WindowConfig& w);

PseudoIntersection pseudo_intersection(const std::vector<GroupDesc>& chain, const WindowConfig& w);

/// Round-robin schedule: entry i is groups[i mod n].
struct EnumeratedFamily {
  std::vector<GroupDesc> groups;
  const GroupDesc& at(std::size_t i) const { return groups.at(i % groups.size()); }
};

struct AntiReapingPair {
  GroupDesc g1;
  GroupDesc g2;
  std::vector<Pick> picks;  // in order; even positions go to g1
};

/// `steps` counts single picks; pick t comes from schedule(t / 2).
AntiReapingPair anti_reaping_pair(const EnumeratedFamily& family, std::size_t steps, const WindowConfig& w);

struct Diagonal {
  GroupDesc group;
  std::vector<RhoBuild> builds;
};

/// Step s runs the cycle builder against the distinct groups among
/// schedule(0..s), above all earlier supports, with the earlier rhos as H.
/// An empty k_schedule means k = 1 throughout.
Diagonal orthogonal_diagonal(const EnumeratedFamily& family, std::size_t steps, const std::vector<unsigned>& k_schedule,
                             const WindowConfig& w);

nlohmann::json to_json(const Pick& p);
nlohmann::json to_json(const RhoBuild& r);
nlohmann::json to_json(const PseudoIntersection& p);
nlohmann::json to_json(const AntiReapingPair& p);
nlohmann::json to_json(const Diagonal& d);

}  // namespace lf
