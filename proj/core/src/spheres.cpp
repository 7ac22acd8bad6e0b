#include "n2sc/spheres.hpp"

#include <algorithm>

#include "n2sc/errors.hpp"

namespace n2sc {

void SphereData::validate() const {
  if (n < 1) throw MismatchedContext("need at least one puncture");
  if (static_cast<int>(punctures.size()) != n - 1)
    throw MismatchedContext("expected n-1 finite punctures besides zero");
  if (static_cast<int>(locals.size()) != n)
    throw MismatchedContext("expected one local coordinate per puncture");
  infinity.validate();
  if (!infinity.unit_scales())
    throw MismatchedContext("infinity data must have a0 = b0 = 1");
  for (const auto& d : locals) d.validate();
  for (const auto& p : punctures) {
    if (!p.z.has_body())
      throw MismatchedContext("puncture body collides with the one at zero");
    if (!(p.tp.is_zero() || p.tp.is_odd()) || !(p.tm.is_zero() || p.tm.is_odd()))
      throw ParityMismatch("puncture odd coordinates must be odd");
  }
  for (size_t a = 0; a < punctures.size(); ++a)
    for (size_t b = a + 1; b < punctures.size(); ++b)
      if ((punctures[a].z - punctures[b].z).body().is_zero())
        throw MismatchedContext("puncture bodies must be pairwise distinct");
}

bool SphereData::operator==(const SphereData& o) const {
  return n == o.n && punctures == o.punctures && infinity == o.infinity &&
         locals == o.locals;
}

SphereData sew(const SphereData& q1, int k, const SphereData& q2) {
  q1.validate();
  q2.validate();
  if (q2.n != 1) throw FlavorMismatch("q2 must have a single puncture");
  bool flavor_a = q2.infinity.zero_sequences();
  bool flavor_b = q2.locals[0].unit_scales() && q2.locals[0].zero_sequences();
  SphereData r = q1;
  if (flavor_a) {
    if (k < 1 || k > q1.n) throw FlavorMismatch("slot out of range");
    r.locals[k - 1] = compose_zero(q1.locals[k - 1], q2.locals[0]);
    return r;
  }
  if (flavor_b) {
    if (k != 1) throw FlavorMismatch("infinity-flavor sewing uses slot 1");
    r.infinity = compose_infinity(q1.infinity, q2.infinity);
    return r;
  }
  throw FlavorMismatch(
      "q2 needs zero infinity data or a trivial puncture coordinate");
}

SphereData act_permutation(const std::vector<int>& sigma, const SphereData& q) {
  q.validate();
  const int m = q.n - 1;
  if (static_cast<int>(sigma.size()) != m)
    throw MismatchedContext("permutation must act on the first n-1 slots");
  std::vector<int> seen(m, 0);
  for (int v : sigma) {
    if (v < 1 || v > m || seen[v - 1]++)
      throw MismatchedContext("not a permutation");
  }
  // sigma in one-line notation; new slot j carries old slot sigma^{-1}(j)
  std::vector<int> inv(m);
  for (int j = 1; j <= m; ++j) inv[sigma[j - 1] - 1] = j;
  SphereData r = q;
  for (int j = 1; j <= m; ++j) {
    r.punctures[j - 1] = q.punctures[inv[j - 1] - 1];
    r.locals[j - 1] = q.locals[inv[j - 1] - 1];
  }
  return r;
}

SphereData act_transpose_last(const SphereData& q) {
  q.validate();
  if (q.n < 2) throw MismatchedContext("transposition needs n >= 2");
  const int L = q.gens();
  const int W = q.infinity.weight();
  const Point& c = q.punctures[q.n - 2];  // (z_{n-1}, theta+-_{n-1})

  SphereData r = q;
  CoordMap s = shift_map(c);
  for (int j = 0; j + 1 < q.n - 1; ++j) r.punctures[j] = ss_eval(s, q.punctures[j]);
  r.punctures[q.n - 2] = Point{-c.z, -c.tp, -c.tm};  // image of (0,0,0)
  std::swap(r.locals[q.n - 2], r.locals[q.n - 1]);

  // new infinity coordinate: e^{-z L_{-1} - t+ G+_{-1/2} - t- G-_{-1/2}} . H_0
  CoordMap H0 = infinity_series(q.infinity, W + 2);
  DerivationSum T(L);
  T.add(-c.z, {Family::L, -1});
  T.add(-c.tp, {Family::Gp, 0});  // G+_{-1/2} sits at index j = 0
  T.add(-c.tm, {Family::Gm, 0});
  CoordMap Ht = der_exp_apply(T, H0, W + 2);
  r.infinity = infinity_data_extract(Ht, W);
  r.validate();
  return r;
}

}  // namespace n2sc
