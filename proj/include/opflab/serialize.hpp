#pragma once

#include <json.hpp>

#include "opflab/irreps.hpp"
#include "opflab/opf.hpp"
#include "opflab/theories.hpp"

namespace opflab {

// Stable key order: reports and fixtures are compared byte for byte.
using Json = nlohmann::ordered_json;

// Complex matrices as row-major [re, im] pairs with explicit dimensions.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json to_json(const MnElement& e);
MnElement mn_element_from_json(const Json& j);

Json to_json(const Opf& f);
Opf opf_from_json(const Json& j);

Json to_json(const Measurement& m);
Measurement measurement_from_json(const Json& j);

Json to_json(const Ensemble& e);
Ensemble ensemble_from_json(const Json& j);

Json to_json(const AxiomReport& r);

Json to_json(const AssocCertificate& c);
AssocCertificate assoc_certificate_from_json(const Json& j);

Json to_json(const ProbeReport& r);

}  // namespace opflab
