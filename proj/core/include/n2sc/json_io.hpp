#pragma once

#include <json.hpp>

#include "n2sc/nonhomo.hpp"
#include "n2sc/spheres.hpp"

namespace n2sc {

using Json = nlohmann::ordered_json;

Json to_json(const FieldScalar& v);
Json to_json(const GrassmannElement& g);
Json to_json(const SuperSeries& s);
Json to_json(const CoordMap& m);
Json to_json(const Point& p);
Json to_json(const DerivationSum& t);
Json to_json(const ModuliData& d);
Json to_json(const ESequences& e);
Json to_json(const SphereData& q);
Json to_json(const ProjectiveParams& p);
Json to_json(const OspMatrix& m);
Json to_json(const NonhomoMap& m);
Json to_json(const NonhomoPoint& p);

FieldScalar field_from_json(const Json& j);
GrassmannElement grassmann_from_json(const Json& j, int gens);
SuperSeries series_from_json(const Json& j, int gens);
CoordMap coordmap_from_json(const Json& j, int gens);
Point point_from_json(const Json& j, int gens);
DerivationSum derivation_from_json(const Json& j, int gens);
ModuliData moduli_from_json(const Json& j, int gens);
ESequences esequences_from_json(const Json& j, int gens);
SphereData sphere_from_json(const Json& j, int gens);
ProjectiveParams projective_from_json(const Json& j, int gens);
OspMatrix osp_from_json(const Json& j, int gens);
NonhomoMap nonhomomap_from_json(const Json& j, int gens);
NonhomoPoint nonhomopoint_from_json(const Json& j, int gens);

}  // namespace n2sc
