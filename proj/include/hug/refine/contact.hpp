#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "hug/core/mesh.hpp"
#include "hug/diff/frozen.hpp"

namespace hug::refine {

/// One (instance, part) surface pair eligible for the penetration penalty.
struct PartPair {
  int instance_a = 0;
  std::int32_t part_a = 0;
  int instance_b = 0;
  std::int32_t part_b = 0;

  auto key() const { return std::make_tuple(instance_a, part_a, instance_b, part_b); }
  bool operator==(const PartPair& o) const { return key() == o.key(); }
  bool operator<(const PartPair& o) const { return key() < o.key(); }
};

struct PartPairSet {
  std::vector<PartPair> pairs;  // unique, sorted, sides ordered (a,pa) < (b,pb)

  void insert(PartPair pair);
  void validate() const;  // a part never pairs with itself within one instance
  bool empty() const { return pairs.empty(); }
};

/// Discovers contact pairs across instances: (a,i,b,j) with a != b is
/// included iff some vertex of part i touches a vertex of part j within
/// contact_radius. Pairs within one instance are never auto-discovered
/// (adjacent parts of one body share seams at distance zero); callers may
/// insert self-contact pairs by hand.
PartPairSet contact_pairs_from_meshes(const Scene& scene, double contact_radius = 0.02);

/// Smoothing temperature for the softplus barrier: max(0.25*tol, 1e-5).
double penetration_temperature(double tol);

/// Signed minimum separation of one pair: min over the vertices of each part
/// of (sign * distance to the opposing part's triangles), the sign negative
/// when the vertex sits inside the other instance's closed surface. Negative
/// values measure penetration depth, which an unsigned vertex-to-surface
/// distance cannot express.
struct PairSeparation {
  double distance = 0.0;
  bool found = false;               // false when either side has no geometry
  diff::ContactWitness witness;     // the argmin correspondence, global ids
};

/// Per-pair separations plus witnesses; `param` supplies the global vertex
/// indexing the witnesses use.
std::vector<PairSeparation> pair_separations(const Scene& scene, const diff::SceneParam& param,
                                             const PartPairSet& pairs);

/// Most negative (deepest) separation across all pairs; +inf for no pairs.
double min_separation(const Scene& scene, const PartPairSet& pairs);

/// One witness per vertex whose signed separation from the opposing part is
/// below `band`, both directions of every pair. Spreading the barrier over
/// the whole violating region (rather than the single argmin vertex) keeps
/// the optimization stable: each vertex receives a bounded share of the
/// push instead of the deepest vertex absorbing it all.
std::vector<diff::ContactWitness> contact_witnesses(const Scene& scene, const diff::SceneParam& param,
                                                    const PartPairSet& pairs, double band);

/// Mean over pairs of T*ln(1 + e^{(tol - d)/T}) with d the signed pair
/// separation and T = penetration_temperature(tol). Empty pair set returns 0
/// and raises *empty_flag when given.
double interpenetration_loss(const Scene& scene, const PartPairSet& pairs, double tol, bool* empty_flag = nullptr);

/// interpenetration_loss scaled by gamma_pen, with the fitting defaults.
double fitting_interpenetration_loss(const Scene& scene, const PartPairSet& pairs, double tol = 0.02,
                                     double gamma_pen = 15.0);

}  // namespace hug::refine
