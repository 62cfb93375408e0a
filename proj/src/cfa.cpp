// SPDX-License-Identifier: Apache-2.0
#include "diffcond/cfa.hpp"

#include <algorithm>
#include <sstream>

#include "diffcond/frontend.hpp"

namespace diffcond {

Operation Operation::assume(const Bool& condition) {
    Operation op;
    op.kind_ = Kind::assume;
    op.condition_ = normalize(condition);
    op.text_ = diffcond::to_string(op.condition_);
    return op;
}

Operation Operation::assign(std::string target, Arith value) {
    Operation op;
    op.kind_ = Kind::assign;
    op.target_ = std::move(target);
    op.value_ = std::move(value);
    op.text_ = op.target_ + " = " + diffcond::to_string(op.value_) + ";";
    return op;
}

Operation Operation::parse(std::string_view text) {
    try {
        auto trimmed = text;
        while (!trimmed.empty() && trimmed.back() == ' ')
            trimmed.remove_suffix(1);
        if (!trimmed.empty() && trimmed.back() == ';') {
            auto ast = parse_program(trimmed);
            if (ast.stmts.size() != 1 || !std::holds_alternative<AssignStmt>(ast.stmts[0].node))
                throw FormatError("not an assignment: " + std::string(text));
            const auto& a = std::get<AssignStmt>(ast.stmts[0].node);
            return assign(a.target, a.value);
        }
        return assume(parse_bool(trimmed));
    } catch (const SyntaxError& e) {
        throw FormatError("bad operation '" + std::string(text) + "': " + e.what());
    }
}

VarSet write_set(const Operation& op) {
    if (op.is_assign())
        return {op.target()};
    return {};
}

VarSet read_set(const Operation& op) {
    VarSet out;
    if (op.is_assign())
        collect_vars(op.value(), out);
    else
        collect_vars(op.condition(), out);
    return out;
}

std::string to_string(const Edge& e) {
    return "(" + std::to_string(e.src) + ", " + e.op.text() + ", " + std::to_string(e.dst) + ")";
}

Cfa::Cfa(std::vector<Location> locations, Location initial, Location error, std::vector<Edge> edges)
    : locations_(std::move(locations)), initial_(initial), error_(error), edges_(std::move(edges)) {
    std::sort(locations_.begin(), locations_.end());
    locations_.erase(std::unique(locations_.begin(), locations_.end()), locations_.end());
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    if (!has_location(initial_))
        throw std::invalid_argument("initial location " + std::to_string(initial_) + " is not a location");
    if (!has_location(error_))
        throw std::invalid_argument("error location " + std::to_string(error_) + " is not a location");
    for (const auto& e : edges_) {
        if (!has_location(e.src) || !has_location(e.dst))
            throw std::invalid_argument("edge " + diffcond::to_string(e) + " references an unknown location");
        if (e.src == error_)
            throw std::invalid_argument("error location has outgoing edge " + diffcond::to_string(e));
    }

    first_out_.assign(locations_.size() + 1, edges_.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < locations_.size(); ++i) {
        while (k < edges_.size() && edges_[k].src < locations_[i])
            ++k;
        first_out_[i] = k;
    }
}

bool Cfa::has_location(Location l) const { return std::binary_search(locations_.begin(), locations_.end(), l); }

std::size_t Cfa::location_index(Location l) const {
    auto it = std::lower_bound(locations_.begin(), locations_.end(), l);
    if (it == locations_.end() || *it != l)
        throw std::out_of_range("unknown location " + std::to_string(l));
    return static_cast<std::size_t>(it - locations_.begin());
}

std::span<const Edge> Cfa::out_edges(Location l) const {
    const auto i = location_index(l);
    return std::span<const Edge>(edges_).subspan(first_out_[i], first_out_[i + 1] - first_out_[i]);
}

std::size_t Cfa::out_begin(Location l) const { return first_out_[location_index(l)]; }

std::optional<std::size_t> Cfa::edge_index(const Edge& e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || !(*it == e))
        return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

VarSet Cfa::variables() const {
    VarSet out;
    for (const auto& e : edges_) {
        out.merge(read_set(e.op));
        out.merge(write_set(e.op));
    }
    return out;
}

std::vector<DeterminismViolation> check_deterministic(const Cfa& cfa) {
    std::vector<DeterminismViolation> out;
    for (Location l : cfa.locations()) {
        auto edges = cfa.out_edges(l);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            for (std::size_t j = i + 1; j < edges.size(); ++j) {
                const auto& a = edges[i];
                const auto& b = edges[j];
                const bool complementary = a.op.is_assume() && b.op.is_assume() &&
                                           equal(a.op.condition(), negate(b.op.condition()));
                if (!complementary)
                    out.push_back({l, a, b});
            }
        }
    }
    return out;
}

void require_deterministic(const Cfa& cfa, std::string_view what) {
    auto violations = check_deterministic(cfa);
    if (violations.empty())
        return;
    std::ostringstream os;
    os << what << " CFA is not deterministic:";
    for (const auto& v : violations)
        os << " at " << v.location << ": " << to_string(v.first) << " vs " << to_string(v.second) << ';';
    throw std::invalid_argument(os.str());
}

nlohmann::json edge_to_json(const Edge& e) {
    return {{"src", e.src}, {"op", e.op.text()}, {"dst", e.dst}};
}

Edge edge_from_json(const nlohmann::json& j) {
    try {
        return Edge{j.at("src").get<Location>(), Operation::parse(j.at("op").get<std::string>()),
                    j.at("dst").get<Location>()};
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed edge: ") + e.what());
    }
}

nlohmann::json cfa_to_json(const Cfa& cfa) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : cfa.edges())
        edges.push_back(edge_to_json(e));
    return {{"locations", cfa.locations()}, {"initial", cfa.initial()}, {"error", cfa.error()}, {"edges", edges}};
}

Cfa cfa_from_json(const nlohmann::json& j) {
    std::vector<Location> locations;
    Location initial = 0;
    Location error = 0;
    std::vector<Edge> edges;
    try {
        locations = j.at("locations").get<std::vector<Location>>();
        initial = j.at("initial").get<Location>();
        error = j.at("error").get<Location>();
        for (const auto& e : j.at("edges"))
            edges.push_back(edge_from_json(e));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed CFA: ") + e.what());
    }
    try {
        return Cfa(std::move(locations), initial, error, std::move(edges));
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid CFA: ") + e.what());
    }
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string serialize(const Cfa& cfa) { return dump_json(cfa_to_json(cfa)); }

Cfa deserialize(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
    return cfa_from_json(j);
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

} // namespace

std::string cfa_to_dot(const Cfa& cfa) {
    std::ostringstream os;
    os << "digraph cfa {\n";
    os << "  node [shape=circle];\n";
    for (Location l : cfa.locations()) {
        os << "  l" << l << " [label=\"" << (l == cfa.error() ? std::string("err") : std::to_string(l)) << "\"";
        if (l == cfa.error())
            os << ", shape=doublecircle";
        if (l == cfa.initial())
            os << ", style=bold";
        os << "];\n";
    }
    for (const auto& e : cfa.edges())
        os << "  l" << e.src << " -> l" << e.dst << " [label=\"" << dot_escape(e.op.text()) << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace diffcond
