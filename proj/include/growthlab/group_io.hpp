#pragma once

#include <string>

#include "growthlab/models.hpp"

namespace growthlab {

struct LoadedGroup {
  ModelPtr model;
  /// Graded-series verification attached by the loader; trivially ok for
  /// matrix and mod-p models.
  GradedReport graded;
};

/// Parses and fully validates a .group spec. Matrix inverse pairs are checked
/// exactly; split-extension actions must be involution-consistent. With
/// strict=true a graded-series violation raises math_error; with strict=false
/// the violations stay in the report (used by the verify subcommand).
LoadedGroup load_group_spec(const std::string& path, bool strict = true);

/// Same, from an in-memory JSON document.
LoadedGroup parse_group_spec(const std::string& text, bool strict = true);

}  // namespace growthlab
