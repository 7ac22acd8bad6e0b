#pragma once

#include "n2sc/moduli.hpp"

namespace n2sc {

// A generalized N=2 supersphere with 1+n tubes: the outgoing puncture sits
// at infinity with unit-scale data, the last incoming puncture at 0, and the
// remaining n-1 punctures at points with pairwise-distinct (and nonzero)
// bodies.
struct SphereData {
  int n = 1;
  std::vector<Point> punctures;      // (z_1,t+,t-) .. (z_{n-1},...)
  ModuliData infinity;               // sequences only; a0 = b0 = 1
  std::vector<ModuliData> locals;    // slots 1..n

  int gens() const { return infinity.gens(); }
  void validate() const;
  bool operator==(const SphereData& o) const;
};

// Sewing. Flavor A: q2 is a 1-puncture sphere with zero infinity data; the
// k-th local coordinate of q1 composes with q2's puncture coordinate.
// Flavor B: q2 has trivial puncture coordinate (1,1,0); q1's infinity data
// composes at infinity with q2's (k must be 1). FlavorMismatch otherwise.
SphereData sew(const SphereData& q1, int k, const SphereData& q2);

// sigma is one-line notation on 1..n-1; slot n and infinity stay fixed.
SphereData act_permutation(const std::vector<int>& sigma, const SphereData& q);

// The (n-1 n) transposition: shift all punctures by s_{(z_{n-1},...)}, swap
// the last two coordinate slots, rebuild the infinity data through the
// conjugating exponential.
SphereData act_transpose_last(const SphereData& q);

}  // namespace n2sc
