// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "diffcond/cfa.hpp"
#include "diffcond/condition.hpp"

namespace diffcond {

/// Product state of a residual location. `state` is empty once the
/// condition run is detached; `collapsed_error` marks the shared error location.
struct ProductState {
    Location location = 0;
    std::optional<StateId> state;
    bool collapsed_error = false;

    auto operator<=>(const ProductState&) const = default;
};

struct ResidualCfa {
    Cfa cfa;
    std::vector<ProductState> mapping; // residual location i -> product state
};

/// Residual program: the modified-CFA paths no prefix of which the
/// condition accepts. Throws std::invalid_argument on a vocabulary mismatch.
ResidualCfa reduce(const Cfa& modified, const Condition& a);

/// Projects a residual location back to the modified program.
Location project(const ResidualCfa& r, Location residual_location);

nlohmann::json mapping_to_json(const ResidualCfa& r);

} // namespace diffcond
