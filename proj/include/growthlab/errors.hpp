#pragma once

#include <stdexcept>
#include <string>

namespace growthlab {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed data at the value level: bad letter index, generating-set
/// mismatch, element fed to the wrong model.
class structural_error : public error {
 public:
  using error::error;
};

/// Input file could not be parsed at all.
class parse_error : public error {
 public:
  using error::error;
};

/// Input parsed but violates the group-spec schema (field named in message).
class schema_error : public error {
 public:
  using error::error;
};

/// Data is schema-valid but mathematically inconsistent, e.g. a declared
/// inverse that does not multiply to the identity.
class math_error : public error {
 public:
  using error::error;
};

/// A presentation is unusable: missing conjugation/action table entry,
/// non-automorphism conjugation, torsion placement.
class presentation_error : public error {
 public:
  using error::error;
};

/// A configured budget (elements, memory, collection steps) was exceeded.
class resource_error : public error {
 public:
  using error::error;
};

/// Caller passed an out-of-domain parameter (tolerance <= 0, bad window...).
class parameter_error : public error {
 public:
  using error::error;
};

}  // namespace growthlab
