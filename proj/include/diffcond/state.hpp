// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace diffcond {

using Value = std::int64_t;

/// Sorted set of variable names. Iteration order is the serialization order.
using VarSet = std::set<std::string>;

VarSet set_union(const VarSet& a, const VarSet& b);
VarSet set_difference(const VarSet& a, const VarSet& b);
bool intersects(const VarSet& a, const VarSet& b);
bool is_subset(const VarSet& a, const VarSet& b);

/// Total concrete data state. Variables that were never bound read as 0.
class DataState {
public:
    DataState() = default;
    DataState(std::initializer_list<std::pair<std::string, Value>> bindings);

    Value get(const std::string& name) const;
    void set(const std::string& name, Value value);

    /// Bound variables in name order (unbound ones are implicitly 0).
    const std::vector<std::pair<std::string, Value>>& bindings() const { return bindings_; }

    /// Compares as total maps: an explicit 0 equals an absent binding.
    friend bool operator==(const DataState& a, const DataState& b);
    friend bool operator<(const DataState& a, const DataState& b);

    std::string to_string() const;

private:
    std::vector<std::pair<std::string, Value>> bindings_;
};

/// True iff `a` and `b` agree on every variable outside `except`.
bool states_agree_except(const DataState& a, const DataState& b, const VarSet& except);

} // namespace diffcond
