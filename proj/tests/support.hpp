#pragma once

#include <string>

#include "essential/term.hpp"

namespace essential::testing {

// Parses test notation: the free identifiers I and Omega stand for the usual
// closed terms.
inline Term T(const std::string& text) {
  Term t = parse(text);
  t = substitute(t, "I", parse("\\i.i"));
  t = substitute(t, "Omega", parse("(\\w.w w) (\\w.w w)"));
  return t;
}

}  // namespace essential::testing
