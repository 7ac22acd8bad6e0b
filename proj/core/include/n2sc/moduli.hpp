#pragma once

#include <vector>

#include "n2sc/derivations.hpp"

namespace n2sc {

// Local-coordinate data (a0, b0, A+, A-, M+, M-) at truncation weight W:
// the sequences are indexed j = 1..W (stored 0-based), M entries naming the
// modes j - 1/2. The pair (a0,b0) is kept sign-canonical: (-a0,-b0) encodes
// the same transformation.
struct ModuliData {
  GrassmannElement a0, b0;
  std::vector<GrassmannElement> Ap, Am, Mp, Mm;

  int weight() const { return static_cast<int>(Ap.size()); }
  int gens() const { return a0.gens(); }
  static ModuliData identity(int gens, int W);

  bool unit_scales() const;
  bool zero_sequences() const;
  void validate() const;  // parity and size invariants
  ModuliData scaled_sequences(const GrassmannElement& t) const;  // t * data
  bool operator==(const ModuliData& o) const;
};

struct ESequences {
  std::vector<GrassmannElement> Ep, Em;    // E^+-_j, even
  std::vector<GrassmannElement> MpH, MmH;  // E^+-_{j-1/2}, odd
  int weight() const { return static_cast<int>(Ep.size()); }
  bool operator==(const ESequences& o) const = default;
};

// Canonical representative modulo (a0,b0) -> (-a0,-b0): body of a0 gets
// positive real part, or positive imaginary part when the real part is zero.
ModuliData canonicalize(ModuliData d);

// The sum -(sum_j A+_j L_j + A-_j J_j + M+_{j-1/2} G+_{j-1/2} + ...).
DerivationSum derivation_sum_at_zero(const ModuliData& d);

// Coefficients of phi-+ phi~+- in exp(T) phi+-, to weight W. Needs a0=b0=1.
ESequences e_map(const ModuliData& d);

// Unique data with e_map(result) = e, by the weight-triangular solve.
ModuliData e_inverse(const ESequences& e);

// exp(T).(x,phi+,phi-) truncated at x-order `order`; e_hat adds the outer
// scale (a0^2 x~, a0 b0 phi~+, a0 b0^{-1} phi~-).
CoordMap e_tilde(const ModuliData& d, int order);
CoordMap e_hat(const ModuliData& d, int order);

// Extract (a0, b0, sequences) from a superconformal triple vanishing at zero
// with invertible leading data; inverse of e_hat at the given weight.
ModuliData e_hat_inverse(const CoordMap& H, int W);

// Group laws: compose_zero(d1,d2) = Ehat^{-1}(H_{d2} o H_{d1});
// compose_infinity per the at-infinity twist (needs unit scales).
ModuliData compose_zero(const ModuliData& d1, const ModuliData& d2);
ModuliData compose_infinity(const ModuliData& d1, const ModuliData& d2);

// Closed-form inverse (negated sequences, a0-power rescaled).
ModuliData invert_data(const ModuliData& d);

// At-infinity local coordinate attached to sequence data (unit scales):
// exp(+sum A+_j L_{-j} + A-_j J_{-j} + M G_{-j+1/2}) . (1/x, i phi/x, ...).
CoordMap infinity_series(const ModuliData& d, int order);

// Inverse of infinity_series: data of an at-infinity superconformal triple
// with leading even coefficient of phi x^{-1} equal to i.
ModuliData infinity_data_extract(const CoordMap& H, int W);

// Moduli-space normal-form validators (kept separate on purpose).
bool validate_s2k0(const ModuliData& d);  // A+_1 = M+-_{1/2} = 0
// One-tube normal form of an at-infinity coordinate: a+_1 = -a-_1 and
// m+-_{1/2} = 0 in its expansion.
bool validate_one_tube_infinity(const CoordMap& H);

}  // namespace n2sc
