// SPDX-License-Identifier: Apache-2.0
#include "diffcond/state.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

namespace diffcond {

VarSet set_union(const VarSet& a, const VarSet& b) {
    VarSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

VarSet set_difference(const VarSet& a, const VarSet& b) {
    VarSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

bool intersects(const VarSet& a, const VarSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j)
            ++i;
        else if (*j < *i)
            ++j;
        else
            return true;
    }
    return false;
}

bool is_subset(const VarSet& a, const VarSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

DataState::DataState(std::initializer_list<std::pair<std::string, Value>> bindings) {
    for (const auto& [name, value] : bindings)
        set(name, value);
}

Value DataState::get(const std::string& name) const {
    // States are tiny; a linear scan beats a binary search here.
    for (const auto& [n, v] : bindings_)
        if (n == name)
            return v;
    return 0;
}

void DataState::set(const std::string& name, Value value) {
    auto it = std::lower_bound(bindings_.begin(), bindings_.end(), name,
                               [](const auto& b, const std::string& n) { return b.first < n; });
    if (it != bindings_.end() && it->first == name)
        it->second = value;
    else
        bindings_.insert(it, {name, value});
}

namespace {

// Walks both binding lists in name order, treating absent names as 0.
// Returns <0, 0, >0 like strcmp.
int compare_states(const DataState& a, const DataState& b) {
    const auto& x = a.bindings();
    const auto& y = b.bindings();
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        Value va = 0, vb = 0;
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            va = x[i++].second;
        } else if (i == x.size() || y[j].first < x[i].first) {
            vb = y[j++].second;
        } else {
            va = x[i++].second;
            vb = y[j++].second;
        }
        if (va != vb)
            return va < vb ? -1 : 1;
    }
    return 0;
}

} // namespace

bool operator==(const DataState& a, const DataState& b) { return compare_states(a, b) == 0; }
bool operator<(const DataState& a, const DataState& b) { return compare_states(a, b) < 0; }

std::string DataState::to_string() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [n, v] : bindings_) {
        if (!first)
            os << ", ";
        first = false;
        os << n << ": " << v;
    }
    os << '}';
    return os.str();
}

bool states_agree_except(const DataState& a, const DataState& b, const VarSet& except) {
    VarSet names;
    for (const auto& [n, v] : a.bindings())
        names.insert(n);
    for (const auto& [n, v] : b.bindings())
        names.insert(n);
    for (const auto& n : names)
        if (!except.contains(n) && a.get(n) != b.get(n))
            return false;
    return true;
}

} // namespace diffcond
