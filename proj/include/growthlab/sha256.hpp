#pragma once

#include <string>
#include <string_view>

namespace growthlab {

/// SHA-256 hex digest. Used to fingerprint spec files and generating sets in
/// report manifests.
std::string sha256_hex(std::string_view data);

}  // namespace growthlab
