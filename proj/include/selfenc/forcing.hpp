#pragma once

#include <functional>

#include <json.hpp>

#include "enum_op.hpp"

namespace selfenc {

enum class Variant { hechler, pair, triple, subtriple };

inline std::string to_string(Variant v) {
    switch (v) {
        case Variant::hechler: return "hechler";
        case Variant::pair: return "pair";
        case Variant::triple: return "triple";
        case Variant::subtriple: return "subtriple";
    }
    return "?";
}

inline Variant variant_from(const std::string& s) {
    if (s == "hechler") return Variant::hechler;
    if (s == "pair") return Variant::pair;
    if (s == "triple") return Variant::triple;
    if (s == "subtriple") return Variant::subtriple;
    throw std::invalid_argument("unknown forcing variant '" + s + "'");
}

// One condition of any of the four posets. Binary strings hold 0/1 per position; for Hechler,
// sigma is a string of numbers and g lists g(0), g(1), ...; past its end g agrees with f.
struct Condition {
    Variant variant = Variant::pair;
    std::vector<nat> sigma;
    std::vector<nat> tau;
    nat k = 0;
    std::vector<nat> g;
    bool operator==(const Condition&) const = default;
};

using Ambient = std::function<nat(nat)>;

struct BoundTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DeciderContract : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool bit(const std::vector<nat>& s, nat n) { return n < s.size() && s[n] != 0; }

inline NatSet as_set(const std::vector<nat>& s) {
    NatSet out;
    for (nat i = 0; i < s.size(); ++i)
        if (s[i]) out.insert(i);
    return out;
}

// x lies in A_E (side X) or B_E (side Y): divisible by the indexed prime exactly for m in E.
inline bool cell_membership(const NatSet& E, nat x, bool side_y) {
    auto in = [&](nat m) { return side_y ? in_Y(m, x) : in_X(m, x); };
    for (nat m : E)
        if (!in(m)) return false;
    for (nat m = 0; nth_prime(2 * m + side_y) <= x; ++m)
        if (!E.count(m) && in(m)) return false;
    return true;
}

namespace detail {

inline bool binary(const std::vector<nat>& s) {
    return std::all_of(s.begin(), s.end(), [](nat b) { return b <= 1; });
}

// Every 0 position n < |s| (of the mask) has no member of s in the divisibility class n.
inline bool clean(const std::vector<nat>& s, const std::vector<nat>& mask, bool side_y) {
    for (nat x = 0; x < s.size(); ++x) {
        if (!s[x]) continue;
        for (nat n = 0; n < mask.size(); ++n)
            if (!mask[n] && (side_y ? in_Y(n, x) : in_X(n, x))) return false;
    }
    return true;
}

inline std::vector<nat> join(const std::vector<nat>& a, const std::vector<nat>& b) {
    std::vector<nat> out(std::max(a.size(), b.size()), 0);
    for (nat i = 0; i < out.size(); ++i) out[i] = bit(a, i) || bit(b, i);
    return out;
}

inline bool prefix_of(const std::vector<nat>& a, const std::vector<nat>& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// Members of s1 past the end of s0 all lie in the divisibility class n.
inline bool new_part_in(const std::vector<nat>& s0, const std::vector<nat>& s1, nat n, bool side_y) {
    for (nat x = s0.size(); x < s1.size(); ++x)
        if (s1[x] && !(side_y ? in_Y(n, x) : in_X(n, x))) return false;
    return true;
}

inline nat g_at(const Condition& c, const Ambient& f, nat n) { return n < c.g.size() ? c.g[n] : f(n); }

// s with position n set, padded with zeros.
inline std::vector<nat> with(std::vector<nat> s, nat n) {
    if (s.size() <= n) s.resize(n + 1, 0);
    s[n] = 1;
    return s;
}

inline nat least_cell_member(const NatSet& E, nat above, bool side_y, nat bound) {
    nat step = 1;
    for (nat m : E) {
        nat p = nth_prime(2 * m + side_y);
        if (step > bound / p) step = bound + 1;
        else step *= p;
    }
    for (nat x = (above / step + 1) * step; x <= bound && step <= bound; x += step)
        if (cell_membership(E, x, side_y)) return x;
    throw BoundTooSmall("no cell member in (" + std::to_string(above) + ", " + std::to_string(bound) + "]");
}

}  // namespace detail

inline const Ambient& zero_ambient() {
    static const Ambient z = [](nat) { return nat{0}; };
    return z;
}

// E_p: sigma as a set, or the union of sigma and tau for triples.
inline NatSet cell_index(const Condition& c) {
    return c.variant == Variant::triple ? as_set(detail::join(c.sigma, c.tau)) : as_set(c.sigma);
}

inline bool is_condition(const Condition& c, const Ambient& f = zero_ambient()) {
    using namespace detail;
    switch (c.variant) {
        case Variant::hechler:
            for (nat n = 0; n < c.g.size(); ++n)
                if (c.g[n] < f(n)) return false;
            for (nat n = 0; n < c.sigma.size(); ++n)
                if (c.sigma[n] < g_at(c, f, n)) return false;
            return true;
        case Variant::pair:
            return binary(c.sigma) && c.k < c.sigma.size() && clean(c.sigma, c.sigma, false);
        case Variant::triple: {
            if (!binary(c.sigma) || !binary(c.tau) || c.k >= c.sigma.size() || c.k >= c.tau.size()) return false;
            auto u = join(c.sigma, c.tau);
            return clean(c.sigma, u, false) && clean(c.tau, u, true);
        }
        case Variant::subtriple:
            if (!binary(c.sigma) || !binary(c.tau) || c.k >= c.sigma.size() || !clean(c.sigma, c.sigma, false))
                return false;
            for (nat i = 0; i < c.tau.size(); ++i)
                if (c.tau[i] && !bit(c.sigma, i)) return false;
            return true;
    }
    return false;
}

// q extends p.
inline bool extends(const Condition& q, const Condition& p, const Ambient& f = zero_ambient()) {
    using namespace detail;
    if (q.variant != p.variant) throw std::invalid_argument("cannot compare conditions of different posets");
    switch (p.variant) {
        case Variant::hechler: {
            if (!prefix_of(p.sigma, q.sigma)) return false;
            nat top = std::max(p.g.size(), q.g.size());
            for (nat n = 0; n < top; ++n)
                if (g_at(q, f, n) < g_at(p, f, n)) return false;
            return true;
        }
        case Variant::pair:
        case Variant::subtriple:
            if (!prefix_of(p.sigma, q.sigma) || q.k < p.k) return false;
            if (p.variant == Variant::subtriple && !prefix_of(p.tau, q.tau)) return false;
            for (nat n = 0; n < p.k; ++n)
                if (bit(p.sigma, n) && !new_part_in(p.sigma, q.sigma, n, false)) return false;
            return true;
        case Variant::triple: {
            if (!prefix_of(p.sigma, q.sigma) || !prefix_of(p.tau, q.tau) || q.k < p.k) return false;
            auto u = join(p.sigma, p.tau);
            for (nat n = 0; n < p.k; ++n)
                if (bit(u, n) && (!new_part_in(p.sigma, q.sigma, n, false) || !new_part_in(p.tau, q.tau, n, true)))
                    return false;
            return true;
        }
    }
    return false;
}

// A strictly stronger condition: a fresh member of the cell A_{E_p} (and B_{E_p}) above the
// current lengths, with k raised by one; Hechler conditions grow sigma by g(|sigma|).
inline Condition nontrivial_extension(const Condition& p, nat bound, const Ambient& f = zero_ambient()) {
    using namespace detail;
    Condition q = p;
    switch (p.variant) {
        case Variant::hechler:
            q.sigma.push_back(g_at(p, f, p.sigma.size()));
            return q;
        case Variant::pair:
        case Variant::subtriple: {
            auto E = cell_index(p);
            q.sigma = with(p.sigma, least_cell_member(E, p.sigma.size(), false, bound));
            q.k = p.k + 1;
            break;
        }
        case Variant::triple: {
            auto E = cell_index(p);
            q.sigma = with(p.sigma, least_cell_member(E, p.sigma.size(), false, bound));
            q.tau = with(p.tau, least_cell_member(E, p.tau.size(), true, bound));
            q.k = p.k + 1;
            break;
        }
    }
    if (!is_condition(q, f) || !extends(q, p, f))
        throw BoundTooSmall("the cell step leaves the poset; sigma holds 0, which every class contains");
    return q;
}

// Appends a 0 to sigma (and tau) and raises k: a proper extension that adds no member.
inline Condition padding_extension(const Condition& p, const Ambient& f = zero_ambient()) {
    Condition q = p;
    if (p.variant == Variant::hechler) return nontrivial_extension(p, 0, f);
    q.sigma.push_back(0);
    if (p.variant == Variant::triple) q.tau.push_back(0);
    q.k = p.k + 1;
    if (!is_condition(q, f) || !extends(q, p, f)) throw BoundTooSmall("padding leaves the poset; sigma holds 0");
    return q;
}

// Both q and r extend p in the sub-triple poset; the union of their sigmas with r's tau and p's k.
inline Condition combine_conditions(const Condition& q, const Condition& r, const Condition& p) {
    if (p.variant != Variant::subtriple || q.variant != p.variant || r.variant != p.variant)
        throw std::invalid_argument("combine_conditions takes sub-triple conditions");
    if (!extends(q, p) || !extends(r, p)) throw std::invalid_argument("q and r must both extend p");
    Condition star{Variant::subtriple, detail::join(q.sigma, r.sigma), r.tau, p.k, {}};
    if (!is_condition(star) || !extends(star, p)) throw std::logic_error("combined condition is not a condition below p");
    return star;
}

inline Condition empty_condition(Variant v) {
    switch (v) {
        case Variant::hechler: return {v, {}, {}, 0, {}};
        case Variant::pair: return {v, {0}, {}, 0, {}};
        case Variant::triple: return {v, {0}, {0}, 0, {}};
        case Variant::subtriple: return {v, {0}, {}, 0, {}};
    }
    return {};
}

using Decider = std::function<Condition(const Condition&)>;

struct GenericRun {
    std::vector<Condition> filter;
    std::vector<nat> G0;  // union of the sigmas (as a string)
    std::vector<nat> G1;  // union of the taus
    std::vector<nat> met;  // steps at which each decider was consulted first
};

// Round-robin over the deciders, each answer followed by a nontrivial extension, or by padding
// once the next cell member lies beyond the bound.
inline GenericRun generic_build(Variant v, const std::vector<Decider>& deciders, nat steps, nat bound,
                                const Ambient& f = zero_ambient()) {
    GenericRun run;
    Condition p = empty_condition(v);
    if (v == Variant::hechler) p.g.clear();
    run.filter.push_back(p);
    run.met.assign(deciders.size(), ~nat{0});
    for (nat i = 0; i < steps; ++i) {
        if (!deciders.empty()) {
            std::size_t d = i % deciders.size();
            Condition q = deciders[d](p);
            if (q.variant != v || !is_condition(q, f) || !extends(q, p, f))
                throw DeciderContract("decider " + std::to_string(d) + " did not return an extension");
            if (run.met[d] == ~nat{0}) run.met[d] = i;
            p = std::move(q);
            run.filter.push_back(p);
        }
        try {
            p = nontrivial_extension(p, bound, f);
        } catch (const BoundTooSmall&) {
            p = padding_extension(p, f);
        }
        run.filter.push_back(p);
    }
    run.G0 = p.sigma;
    run.G1 = p.tau;
    return run;
}

inline nlohmann::json condition_to_json(const Condition& c) {
    return {{"variant", to_string(c.variant)}, {"sigma", c.sigma}, {"tau", c.tau}, {"k", c.k}, {"g", c.g}};
}

inline Condition condition_from_json(const nlohmann::json& j) {
    Condition c;
    c.variant = variant_from(j.at("variant").get<std::string>());
    c.sigma = j.value("sigma", std::vector<nat>{});
    c.tau = j.value("tau", std::vector<nat>{});
    c.k = j.value("k", nat{0});
    c.g = j.value("g", std::vector<nat>{});
    return c;
}

}  // namespace selfenc
