#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "n2sc/derivations.hpp"

namespace n2sc {

// Element of the N=2 Neveu-Schwarz algebra over Q(i,sqrt2) with the central
// charge d kept as a formal symbol. G entries at integer slot j name the
// mode j - 1/2.
struct NsElement {
  std::map<std::pair<Family, int>, FieldScalar> terms;
  FieldScalar central;  // coefficient of d

  static NsElement basis(Family f, int j) {
    NsElement e;
    e.terms[{f, j}] = FieldScalar(1);
    return e;
  }
  void add(Family f, int j, const FieldScalar& c);
  NsElement operator+(const NsElement& o) const;
  NsElement scaled(const FieldScalar& s) const;
  NsElement with_central_zero() const;
  bool is_zero() const { return terms.empty() && central.is_zero(); }
  bool operator==(const NsElement& o) const {
    return terms == o.terms && central == o.central;
  }
  std::string str() const;
};

// Bilinear extension of the relation table; window bounds the admissible
// input indices (|j| of L/J, |mode+1/2| of G), IndexOutOfWindow otherwise.
NsElement ns_bracket(const NsElement& u, const NsElement& v, int window = 64);

struct NsVerifyReport {
  bool pass = true;
  long pairs_checked = 0;
  std::vector<std::string> mismatches;
};

// Checks der_bracket against ns_bracket with d -> 0 for every basis pair
// with indices bounded by `window`. `expected` substitutes a corrupted table
// in mutation tests; the default is the production table.
NsVerifyReport ns_verify_representation(
    int window, int gens = 3,
    const std::function<NsElement(const NsElement&, const NsElement&)>& expected =
        nullptr);

}  // namespace n2sc
