#pragma once

#include <string>

#include "json.hpp"

#include "gconn/basis.hpp"
#include "gconn/cyl.hpp"
#include "gconn/family.hpp"
#include "gconn/groupoid.hpp"
#include "gconn/groups.hpp"
#include "gconn/measure.hpp"
#include "gconn/symmetry.hpp"

namespace gconn {

using Json = nlohmann::ordered_json;

/// All *_from_json parsers throw ParseError naming `field` on bad input.

GroupDescriptor group_from_json(const Json& j, const std::string& field);
Json group_to_json(const GroupDescriptor& desc);

AmbientAlphabet alphabet_from_json(const Json& j, const std::string& field);

/// Elements serialize per kind: residue integer (zn), angle float (u1),
/// quaternion 4-array (su2).
GroupElement element_from_json(const GroupDescriptor& desc, const Json& j, const std::string& field);
Json element_to_json(const GroupElement& g);

/// Words are signed atom-id lists; "~a" traverses atom a backwards.
PathWord word_from_json(const AmbientAlphabet& alphabet, const Json& j, const std::string& field);
Json word_to_json(const AmbientAlphabet& alphabet, const PathWord& w);

Edge edge_from_json(const AmbientAlphabet& alphabet, const Json& j, const std::string& field);
TameSubgroupoid subgroupoid_from_json(const AmbientAlphabet& alphabet, const Json& j,
                                      const std::string& field);

/// SU(2) labels appear in JSON as spins (0.5, 1, ...) and parse to 2j.
CharLabel char_label_from_json(const GroupDescriptor& desc, const Json& j, const std::string& field);

Expression expression_from_json(const GroupDescriptor& desc, const Json& j, const std::string& field);

Json estimate_to_json(const IntegralEstimate& est);

GaugeTransformation gauge_from_json(const AmbientAlphabet& alphabet, const GroupDescriptor& desc,
                                    const Json& j, const std::string& field);
GroupoidAutomorphism automorphism_from_json(const AmbientAlphabet& alphabet, const Json& j,
                                            const std::string& field);

} // namespace gconn
