#pragma once

// doctest printers for engine values.

#include "testlib.hpp"

#include <doctest.h>

namespace doctest {
template <>
struct StringMaker<cohn::Scalar> {
  static String convert(const cohn::Scalar& s) { return s.to_string().c_str(); }
};
template <>
struct StringMaker<cohn::Matrix> {
  static String convert(const cohn::Matrix& m) { return m.to_string().c_str(); }
};
}  // namespace doctest

