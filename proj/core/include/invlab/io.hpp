#pragma once

#include <string>

#include "invlab/states.hpp"

namespace invlab {

// JSON state format:
//   vectors:  {"dim": n, "re": [...], "im": [...]}
//   matrices: {"dim": n, "re": [[...]], "im": [[...]]}   (row-major)
// Loaders validate the domain invariants on ingestion and report the file and
// offending field on failure.

Vec parse_vector_json(const std::string& text, const std::string& origin = "<string>");
Mat parse_matrix_json(const std::string& text, const std::string& origin = "<string>");

PureState load_pure_state(const std::string& path);
DensityMatrix load_density_matrix(const std::string& path);
// Generic complex matrix (observables, unitaries, projectors).
Mat load_matrix(const std::string& path);

std::string vector_to_json(const Vec& v);
std::string matrix_to_json(const Mat& m);

void save_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace invlab
