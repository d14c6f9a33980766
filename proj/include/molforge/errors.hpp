//
// Project molforge - Copyright 2026 The molforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace molforge {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structural problems: self loops, duplicate bonds, bad indices.
struct GraphError : Error {
  using Error::Error;
};

// Atom valence inconsistent with the per-element allowed-valence table.
struct ValenceError : Error {
  using Error::Error;
};

// Lowercase/aromatic input admits no alternating bond assignment.
struct KekulizeError : Error {
  using Error::Error;
};

// Text-format errors carry the byte offset of the offending token.
struct ParseError : Error {
  size_t offset;
  ParseError(size_t off, const std::string& reason)
      : Error(reason + " (at offset " + std::to_string(off) + ")"), offset(off) {}
};

struct UnsupportedFeature : Error {
  using Error::Error;
};

struct IndexError : Error {
  using Error::Error;
};

// CSV/config schema problems (missing columns, bad headers).
struct SchemaError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace molforge
