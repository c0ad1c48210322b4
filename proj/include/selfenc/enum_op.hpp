#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <variant>

#include "core_model.hpp"

namespace selfenc {

// X_n = positive multiples of p_{2n}; Y_n = positive multiples of p_{2n+1}.
inline bool in_X(nat n, nat x) { return x > 0 && x % nth_prime(2 * n) == 0; }
inline bool in_Y(nat n, nat x) { return x > 0 && x % nth_prime(2 * n + 1) == 0; }

// A total selector alpha(x, y), expected to return x or y.
struct AlphaTable {
    enum class Kind { first, min, even_first, prefer, table };
    Kind kind = Kind::first;
    NatSet members;                           // prefer: arguments in this set win
    std::map<std::pair<nat, nat>, nat> rows;  // table: explicit overrides
    Kind fallback = Kind::first;              // table: rule for pairs not listed

    nat operator()(nat x, nat y) const { return eval(kind, x, y); }

private:
    nat eval(Kind k, nat x, nat y) const {
        switch (k) {
            case Kind::first: return x;
            case Kind::min: return std::min(x, y);
            case Kind::even_first: return (x % 2 == 0 || y % 2 != 0) ? x : y;
            case Kind::prefer: return (members.count(x) || !members.count(y)) ? x : y;
            case Kind::table:
                if (auto it = rows.find({x, y}); it != rows.end()) return it->second;
                if (fallback == Kind::table) throw FixtureError("alpha table is partial");
                return eval(fallback, x, y);
        }
        return x;
    }
};

inline nat checked_alpha(const AlphaTable& a, nat x, nat y) {
    nat v = a(x, y);
    if (v != x && v != y)
        throw FixtureError("alpha(" + std::to_string(x) + "," + std::to_string(y) + ") = " +
                           std::to_string(v) + " is not an argument");
    return v;
}

struct Axiom {
    NatSet premise;  // D_u
    nat n;
    nat stage;  // >= 1

    static Axiom coded(nat u, nat n, nat stage) { return {canonical_finite_set(u), n, stage}; }
    bool operator==(const Axiom&) const = default;
};

struct Extensional {
    std::vector<Axiom> axioms;
};
struct Divisibility {
    bool odd = false;  // false: Theta_0 over X_n, true: Theta_1 over Y_n
};
struct ViaAlpha {
    AlphaTable alpha;
};

using EnumOperator = std::variant<Extensional, Divisibility, ViaAlpha>;

inline constexpr nat unbounded = std::numeric_limits<nat>::max();

inline bool premise_holds(const NatSet& premise, const NatSet& E) {
    for (nat x : premise)
        if (!E.count(x)) return false;
    return true;
}

// Outputs of op on E, using only axioms enumerated by stage s.
inline NatSet apply_staged(const EnumOperator& op, const NatSet& E, nat s, nat bound = unbounded) {
    NatSet out;
    if (auto* ex = std::get_if<Extensional>(&op)) {
        for (auto& ax : ex->axioms)
            if (ax.stage <= s && ax.n <= bound && premise_holds(ax.premise, E)) out.insert(ax.n);
        return out;
    }
    if (bound == unbounded) throw std::invalid_argument("apply: intensional operators need an output bound");
    if (auto* dv = std::get_if<Divisibility>(&op)) {
        for (nat n = 0; n <= bound; ++n)
            for (nat x : E)
                if (dv->odd ? in_Y(n, x) : in_X(n, x)) { out.insert(n); break; }
        return out;
    }
    auto& al = std::get<ViaAlpha>(op).alpha;
    for (nat a = 0; a <= bound; ++a)
        for (nat c : E)
            if (checked_alpha(al, a, c) == a) { out.insert(a); break; }
    return out;
}

inline NatSet apply(const EnumOperator& op, const NatSet& E, nat bound = unbounded) {
    return apply_staged(op, E, unbounded, bound);
}

// Lists [0, f(n)] as a path x_0, x_1, ... with alpha(x_i, x_{i+1}) = x_i and returns
// the first n+1. Pairs are compared as alpha(min, max), which is again a selector.
inline std::vector<nat> semicomputable_extract(const AlphaTable& alpha, const std::vector<nat>& fvals,
                                               nat n) {
    if (n >= fvals.size()) throw std::out_of_range("semicomputable_extract: no majorizer value for n");
    auto beats = [&](nat x, nat y) {
        nat v = x < y ? checked_alpha(alpha, x, y) : checked_alpha(alpha, y, x);
        return v == x;
    };
    std::vector<nat> path;
    for (nat y = 0; y <= fvals[n]; ++y) {
        if (path.empty() || beats(y, path.front())) {
            path.insert(path.begin(), y);
        } else if (beats(path.back(), y)) {
            path.push_back(y);
        } else {
            std::size_t lo = 0, hi = path.size() - 1;  // beats(path[lo], y), beats(y, path[hi])
            while (hi - lo > 1) {
                std::size_t mid = (lo + hi) / 2;
                (beats(path[mid], y) ? lo : hi) = mid;
            }
            path.insert(path.begin() + hi, y);
        }
    }
    if (path.size() < n + 1) throw FixtureError("majorizer value below n");
    path.resize(n + 1);
    return path;
}

inline bool uie_via_alpha(const AlphaTable& alpha, nat a, const NatSet& C) {
    for (nat c : C)
        if (checked_alpha(alpha, a, c) == a) return true;
    return false;
}

}  // namespace selfenc
