#pragma once

#include <string>
#include <vector>

#include "orthext/instance.hpp"

namespace testsupport {

enum class CaseKind { Inner, Outer, Prune };

struct FaceCase {
  std::string name;
  CaseKind kind = CaseKind::Inner;
  orthext::FaceInstance fi;
};

/// Tiny face instances (k <= 2, at most four missing edges, at most twelve corners).
std::vector<FaceCase> handcrafted_faces();

/// Outer-face instances on small drawings.
std::vector<orthext::FaceInstance> outer_faces();

const char* kind_name(CaseKind k);

}  // namespace testsupport
