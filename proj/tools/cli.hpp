#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "rht/fourfold.hpp"
#include "rht/sullivan.hpp"

namespace rht::cli {

// Stable exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerificationFailed = 1;
inline constexpr int kInputError = 2;
inline constexpr int kGuardExceeded = 3;

/// Runs one CLI invocation, writing to the given streams. argv[0] is the
/// program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Reads {"name": optional string, "matrix": [[int, ...], ...]}.
fourfold::IntersectionForm parse_form(const nlohmann::json& doc);
fourfold::IntersectionForm read_form_file(const std::string& path);

/// Machine-readable model document.
nlohmann::json model_document(const sullivan::MinimalModelStage& stage,
                              const fourfold::RankTable& ranks, const fourfold::Split& split,
                              int max_degree);

}  // namespace rht::cli
