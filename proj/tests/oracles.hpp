#pragma once

// Reference answers written from the definitions, sharing no code with the library beyond its
// data types. Slow on purpose.

#include <selfenc/column_construction.hpp>
#include <selfenc/forcing.hpp>
#include <selfenc/trace.hpp>

namespace oracle {

using selfenc::nat;
using selfenc::NatSet;

inline std::vector<nat> sieve(nat limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<nat> primes;
    for (nat i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (nat j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

inline const std::vector<nat>& primes() {
    static const std::vector<nat> ps = sieve(nat{1} << 25);
    return ps;
}

inline nat prime(std::size_t i) {
    if (i >= primes().size()) throw std::out_of_range("oracle sieve too small");
    return primes()[i];
}

// Zero-based index of each distinct prime factor of x, by trial division.
inline std::vector<std::size_t> prime_factor_indices(nat x) {
    std::vector<std::size_t> out;
    auto& ps = primes();
    for (std::size_t i = 0; i < ps.size() && x > 1; ++i) {
        if (ps[i] * ps[i] > x) {
            out.push_back(std::lower_bound(ps.begin(), ps.end(), x) - ps.begin());
            break;
        }
        if (x % ps[i]) continue;
        out.push_back(i);
        while (x % ps[i] == 0) x /= ps[i];
    }
    return out;
}

// Cantor pairing by walking the diagonals.
inline nat pair_by_walk(nat x, nat y) {
    nat code = 0;
    for (nat d = 0;; ++d)
        for (nat j = 0; j <= d; ++j, ++code)
            if (d - j == x && j == y) return code;
}

// A class prime larger than x cannot divide it, so huge n need no table lookup.
inline bool in_class(std::size_t i, nat x) { return x > 0 && i < primes().size() && prime(i) <= x && x % prime(i) == 0; }
inline bool in_X(nat n, nat x) { return in_class(2 * n, x); }
inline bool in_Y(nat n, nat x) { return in_class(2 * n + 1, x); }

// n <= bound with E meeting X_n.
inline NatSet theta0(const NatSet& E, nat bound) {
    NatSet out;
    for (nat x : E)
        if (x > 0)
            for (auto i : prime_factor_indices(x))
                if (i % 2 == 0 && i / 2 <= bound) out.insert(i / 2);
    return out;
}

inline NatSet members(const std::vector<nat>& s) {
    NatSet out;
    for (nat i = 0; i < s.size(); ++i)
        if (s[i] == 1) out.insert(i);
    return out;
}

inline bool binary(const std::vector<nat>& s) {
    for (nat b : s)
        if (b > 1) return false;
    return true;
}

inline bool at(const std::vector<nat>& s, nat i) { return i < s.size() && s[i] == 1; }

// "If s(n) = 0 then the set s misses X_n" (or Y_n), where the 0 is read off `mask`.
inline bool clean(const std::vector<nat>& s, const std::vector<nat>& mask, bool y_side) {
    auto in = members(s);
    for (nat n = 0; n < mask.size(); ++n) {
        if (mask[n] == 1) continue;
        for (nat x : in)
            if (y_side ? in_Y(n, x) : in_X(n, x)) return false;
    }
    return true;
}

inline std::vector<nat> bit_union(const std::vector<nat>& a, const std::vector<nat>& b) {
    std::vector<nat> u(std::max(a.size(), b.size()), 0);
    for (nat i = 0; i < u.size(); ++i) u[i] = at(a, i) || at(b, i);
    return u;
}

inline bool is_prefix(const std::vector<nat>& a, const std::vector<nat>& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

using selfenc::Condition;
using selfenc::Variant;

inline bool valid(const Condition& c, const std::function<nat(nat)>& f) {
    switch (c.variant) {
        case Variant::hechler:
            for (nat n = 0; n < c.g.size(); ++n)
                if (c.g[n] < f(n)) return false;
            for (nat n = 0; n < c.sigma.size(); ++n)
                if (c.sigma[n] < (n < c.g.size() ? c.g[n] : f(n))) return false;
            return true;
        case Variant::pair:
            return binary(c.sigma) && c.k < c.sigma.size() && clean(c.sigma, c.sigma, false);
        case Variant::triple: {
            if (!binary(c.sigma) || !binary(c.tau) || c.k >= c.sigma.size() || c.k >= c.tau.size()) return false;
            auto u = bit_union(c.sigma, c.tau);
            // A zero of sigma ∪ tau past the end of the shorter string still constrains both.
            u.resize(std::max(c.sigma.size(), c.tau.size()), 0);
            return clean(c.sigma, u, false) && clean(c.tau, u, true);
        }
        case Variant::subtriple: {
            if (!binary(c.sigma) || !binary(c.tau) || c.k >= c.sigma.size() || !clean(c.sigma, c.sigma, false))
                return false;
            for (nat x : members(c.tau))
                if (!at(c.sigma, x)) return false;
            return true;
        }
    }
    return false;
}

// Whether every new member of `to` beyond `from` lies in X_n (or Y_n).
inline bool new_part_in(const std::vector<nat>& from, const std::vector<nat>& to, nat n, bool y_side) {
    for (nat x = from.size(); x < to.size(); ++x)
        if (to[x] == 1 && !(y_side ? in_Y(n, x) : in_X(n, x))) return false;
    return true;
}

inline bool extends(const Condition& q, const Condition& p, const std::function<nat(nat)>& f) {
    switch (p.variant) {
        case Variant::hechler: {
            if (!is_prefix(p.sigma, q.sigma)) return false;
            for (nat n = 0; n < std::max(p.g.size(), q.g.size()); ++n) {
                nat gq = n < q.g.size() ? q.g[n] : f(n), gp = n < p.g.size() ? p.g[n] : f(n);
                if (gq < gp) return false;
            }
            return true;
        }
        case Variant::pair:
        case Variant::subtriple: {
            if (!is_prefix(p.sigma, q.sigma) || q.k < p.k) return false;
            if (p.variant == Variant::subtriple && !is_prefix(p.tau, q.tau)) return false;
            for (nat n = 0; n < p.k; ++n)
                if (at(p.sigma, n) && !new_part_in(p.sigma, q.sigma, n, false)) return false;
            return true;
        }
        case Variant::triple: {
            if (!is_prefix(p.sigma, q.sigma) || !is_prefix(p.tau, q.tau) || q.k < p.k) return false;
            for (nat n = 0; n < p.k; ++n)
                if ((at(p.sigma, n) || at(p.tau, n)) &&
                    (!new_part_in(p.sigma, q.sigma, n, false) || !new_part_in(p.tau, q.tau, n, true)))
                    return false;
            return true;
        }
    }
    return false;
}

// Audit of the column construction from its trace and base fixture alone.
struct ColumnAudit {
    bool shape = true;     // every element of A is <n, <b^n, y>>
    bool columns = true;   // each column differs from B_s only on P's dump and N's witnesses
    std::string message;
    std::map<nat, NatSet> cols;                // column -> y values, at the end
    std::map<nat, std::pair<nat, NatSet>> p;   // P_e -> (n, dump y values)
    std::map<nat, nat> n_acts;                 // N_e -> number of acts
    std::map<nat, nat> witness;                // N_e -> last witness code
    NatSet A;
};

inline nat index_of(const std::string& req) { return std::stoull(req.substr(1)); }

inline ColumnAudit audit_columns(const selfenc::Trace& tr, const selfenc::ColumnBase& base) {
    using selfenc::EventKind;
    ColumnAudit a;
    // Largest diagonal d with d(d+1)/2 <= code, by bisection.
    auto unpair = [](nat code) {
        nat lo = 0, hi = 1;
        while (hi * (hi + 1) / 2 <= code) hi *= 2;
        while (hi - lo > 1) {
            nat mid = (lo + hi) / 2;
            (mid * (mid + 1) / 2 <= code ? lo : hi) = mid;
        }
        nat y = code - lo * (lo + 1) / 2;
        return std::pair<nat, nat>{lo - y, y};
    };
    std::map<nat, NatSet> witness_ys;
    auto fail = [&](bool& flag, const std::string& msg) {
        if (flag) a.message = msg;
        flag = false;
    };
    for (std::size_t i = 0; i < tr.events.size(); ++i) {
        auto& e = tr.events[i];
        if (e.kind == EventKind::enumerated && e.detail != "S") {
            auto [col, xy] = unpair(*e.value);
            auto [x, y] = unpair(xy);
            if (col >= base.b.size() || x != base.b[col]) {
                fail(a.shape, "event " + std::to_string(i) + " enumerates " + std::to_string(*e.value));
                continue;
            }
            a.A.insert(*e.value);
            a.cols[col].insert(y);
            if (e.req[0] == 'P') a.p[index_of(e.req)].second.insert(y);
        } else if (e.kind == EventKind::acts && e.req[0] == 'P') {
            a.p[index_of(e.req)].first = *e.value;
        } else if (e.kind == EventKind::acts && e.req[0] == 'N') {
            ++a.n_acts[index_of(e.req)];
        } else if (e.kind == EventKind::witness_assigned) {
            nat m = index_of(e.req);
            a.witness[m] = *e.value;
            witness_ys[m].insert(unpair(unpair(*e.value).second).second);
        } else if (e.kind == EventKind::finalize) {
            nat s1 = e.stage;  // stage s+1 has offered b^0..b^{s+1} to columns 0..s
            NatSet B;
            for (nat i2 = 0; i2 <= s1 && i2 < base.b.size(); ++i2) B.insert(base.b[i2]);
            for (nat m = 0; m < s1; ++m) {
                auto& have = a.cols[m];
                NatSet allowed = witness_ys[m];
                if (a.p.count(m)) allowed.insert(a.p[m].second.begin(), a.p[m].second.end());
                for (nat y : B)
                    if (!have.count(y) && !allowed.count(y))
                        fail(a.columns, "stage " + std::to_string(s1) + ": column " + std::to_string(m) + " misses " +
                                            std::to_string(y));
                for (nat y : have)
                    if (!B.count(y) && !allowed.count(y))
                        fail(a.columns, "stage " + std::to_string(s1) + ": column " + std::to_string(m) +
                                            " holds stray " + std::to_string(y));
                if (witness_ys[m].size() > 2)
                    fail(a.columns, "column " + std::to_string(m) + " used more than two witnesses");
            }
        }
    }
    return a;
}

}  // namespace oracle
