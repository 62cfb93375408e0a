// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "diffcond/frontend.hpp"

namespace fixtures {

inline constexpr const char* kRunningOriginal = "r = -x;\nif (x > 0) {\n    r = -x;\n    assert(r <= 0);\n}\n";
inline constexpr const char* kRunningModified = "r = x;\nif (x > 0) {\n    r = -x;\n    assert(r <= 0);\n}\n";
inline constexpr const char* kRelaxOriginal = "assert(x <= 5);\n";
inline constexpr const char* kRelaxModified = "assert(x <= 3);\n";

inline diffcond::Cfa cfa(const char* src) { return diffcond::build_cfa(diffcond::parse_program(src)); }

} // namespace fixtures
