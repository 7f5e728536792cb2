#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dynlap/coherent.hpp"
#include "dynlap/difflimit.hpp"
#include "dynlap/laplacian.hpp"
#include "dynlap/spectral.hpp"
#include "dynlap/transfer.hpp"
#include "json.hpp"

namespace dynlap {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

// Matrix Market "coordinate real general", 1-based, %.17g values.
void write_matrix_market(const fs::path& path, const SparseMatrix& m);
SparseMatrix read_matrix_market(const fs::path& path);

Json to_json(const Domain& d);
Domain domain_from_json(const Json& j);
Json to_json(const Grid& g);
Grid grid_from_json(const Json& j);

/// Sidecar metadata for a serialized matrix.
Json sidecar(const TransitionMatrix& tm);
Json sidecar(const DiscreteOperator& op);

Json to_json(const Spectrum& s);
Json to_json(const CoherentSetResult& r);
Json to_json(const LimitReport& r);

/// Header `i,j,x,y,value`, one row per box in box-index order.
void write_field_csv(const fs::path& path, const ScalarField& f);
/// Reconstructs the grid from box indices and centers. The periodic flags of
/// the result are false because a field file does not record them.
ScalarField read_field_csv(const fs::path& path);

/// Header `curve_id,vertex_id,x,y,wrap_x,wrap_y`.
void write_contours_csv(const fs::path& path, const ContourSet& c);
ContourSet read_contours_csv(const fs::path& path, const Domain& domain);

/// Pretty-printed with a trailing newline.
void write_json(const fs::path& path, const Json& j);
Json read_json(const fs::path& path);

/// Lowercase hex SHA-256 of a file's bytes or of a string.
std::string sha256_file(const fs::path& path);
std::string sha256_hex(const std::string& data);

}  // namespace dynlap
