// Copyright 2026 The ssmreg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ssmreg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller input: out-of-range parameters, mismatched sizes.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Mesh invariant violations: degenerate triangles, isolated vertices,
// topology mismatch between corresponding shapes.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Registration cannot proceed: too few points or every match rejected.
class DegenerateRegistration : public Error {
 public:
  using Error::Error;
};

}  // namespace ssmreg
