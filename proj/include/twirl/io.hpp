#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "twirl/invariants.hpp"
#include "twirl/phase_retrieval.hpp"

namespace twirl::io {

using Json = nlohmann::json;

/// Sorted keys, two-space indent, arrays of scalars kept on one line, floats
/// printed with %.17g, non-finite floats as null. Ends with a newline.
std::string dump(const Json& j);

Json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

Json to_json(Complex z);
Complex complex_from_json(const Json& j);
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

/// {"labels", "table", "identity", "inverses"}.
Json to_json(const FiniteGroup& g);
/// Identity and inverses are recomputed and cross-checked when present.
GroupPtr group_from_json(const Json& j);
GroupPtr load_group(const std::filesystem::path& path);

/// Group written inline.
Json to_json(const Representation& pi);
/// "group" may be inline or a path resolved against base_dir.
Representation representation_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Representation load_representation(const std::filesystem::path& path);

Json to_json(const IsotypicDecomposition& decomp);
Json to_json(const DecompositionResiduals& r);

Json to_json(const QuantumChannel& phi);
QuantumChannel channel_from_json(const Json& j, double tol = kDefaultChannelTolerance);

Json to_json(const WitnessCertificate& w);
Json to_json(const InvariantReport& report);
Json to_json(const CapacityTensorReport& r);

Json to_json(const Frame& f);
Frame frame_from_json(const Json& j);
/// Accepts a vector frame (rank-one measurements) or {"k", "operators"}.
OperatorFrame operator_frame_from_json(const Json& j);
Json to_json(const FrameReport& r);
Json to_json(const PRCertificate& c);
Json to_json(const SubspaceWitness& w);
Json to_json(const Prop51Report& r);

}  // namespace twirl::io
