#pragma once

#include <optional>
#include <vector>

#include "treespace/consensus.hpp"
#include "treespace/tree.hpp"

namespace treespace {

/// One split exchange on a simple line: moving in the direction given by the
/// sign of `weight`, split `p` shrinks to zero at s_break = -lambda0(p)/weight and
/// `p_prime` (an XNNI replacement of `p`) grows in its place.
struct SplitPair {
  Split p;
  Split p_prime;
  double weight = 0.0;  // nonzero
  double s_break = 0.0; // derived; 0 when lambda0(p)=0
};

/// Feasible weight range for one extension candidate: a closed interval of a
/// single sign; infinite bounds mark unbounded sides. Zero is never a valid
/// weight.
struct WeightInterval {
  double lo;
  double hi;
};

/// An unbounded geodesic line through a midpoint tree, encoded as ordered
/// split pairs with weights. The tree at parameter s has lengths
///   lambda(p_i)  = lambda0(p_i) + s*w_i          where that is positive,
///   lambda(p'_i) = -(lambda0(p_i) + s*w_i)       where it is negative,
///   lambda(q)    = lambda0(q)                    for untouched splits,
/// with zero-length splits omitted. Immutable after construction, which
/// checks the full validity conditions: every interval topology is a valid
/// tree topology and each pair is an XNNI exchange at its breakpoint.
class SimpleLine {
 public:
  explicit SimpleLine(Tree midpoint);  // the degenerate line {midpoint}
  SimpleLine(Tree midpoint, std::vector<SplitPair> pairs);

  const Tree& midpoint() const { return midpoint_; }
  const std::vector<SplitPair>& pairs() const { return pairs_; }
  int num_pairs() const { return static_cast<int>(pairs_.size()); }

  /// Arc length per unit of s: the L2 norm of the weight vector.
  double speed() const { return speed_; }

  /// Internal splits present on each open interval between breakpoints;
  /// index 0 is s < s_1, index k is s > s_k.
  const std::vector<Topology>& interval_topologies() const { return topologies_; }

  /// Interval bounds [lower(i), upper(i)] with infinities at the ends.
  double interval_lower(int i) const;
  double interval_upper(int i) const;

  Tree evaluate(double s) const;
  void evaluate_into(double s, std::vector<SplitLen>& out) const;

  /// Line with one more pair; re-sorts breakpoints and re-validates.
  SimpleLine extended(Split p, Split p_prime, double weight) const;

  /// Line with pair `index` removed (only end pairs stay valid in general).
  SimpleLine without_pair(int index) const;

  /// Rescales weights onto the original branch-length scale: each w_i is
  /// multiplied by the factor of p_i and breakpoints are recomputed against
  /// `unscaled_midpoint`; pairs are re-sorted and the line re-validated.
  SimpleLine back_transformed(const ScaleMap& scales,
                              const Tree& unscaled_midpoint) const;

 private:
  struct Slot {
    uint64_t mask;
    double base;   // lambda0 of the governing split
    double weight; // 0 for constant slots, +/-w for pair slots
    int kind;      // 0 constant, 1 pair p side, 2 pair p' side
  };

  void finalize();  // sorts pairs, validates, builds slots and topologies

  Tree midpoint_;
  std::vector<SplitPair> pairs_;
  std::vector<Slot> slots_;
  std::vector<Topology> topologies_;
  double speed_ = 0.0;
};

/// Checks Def.-3 feasibility of extending `line` with the exchange (p, p')
/// on interval `interval_index` with a weight of sign `w_sign` (+1/-1):
/// the geometric constraint pins the breakpoint inside the interval and the
/// topological constraints keep every interval a valid topology. Returns the
/// feasible weight interval, or nullopt when the constraint system is empty.
/// Throws when p is incompatible with the midpoint topology or p' is not an
/// XNNI replacement of p on that interval.
std::optional<WeightInterval> validate_extension(const SimpleLine& line,
                                                 Split p, Split p_prime,
                                                 int interval_index,
                                                 int w_sign);

/// Quiet variant used by the searches: any failure is just "infeasible".
std::optional<WeightInterval> try_extension(const SimpleLine& line, Split p,
                                            Split p_prime, int interval_index,
                                            int w_sign);

}  // namespace treespace
