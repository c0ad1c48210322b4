#pragma once

#include "trace.hpp"

namespace selfenc {

using BitString = std::vector<bool>;

// Length-lexicographic rank of a binary string: longer strings get larger codes.
inline nat string_code(const BitString& s) {
    if (s.size() >= 63) throw std::overflow_error("string too long to code");
    nat v = 0;
    for (bool b : s) v = 2 * v + b;
    return (nat{1} << s.size()) - 1 + v;
}

inline BitString string_of_code(nat c) {
    std::size_t len = 0;
    while (c >= (nat{1} << (len + 1)) - 1) ++len;
    nat v = c - ((nat{1} << len) - 1);
    BitString s(len);
    for (std::size_t i = 0; i < len; ++i) s[len - 1 - i] = (v >> i) & 1;
    return s;
}

inline bool is_prefix(const BitString& a, const BitString& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}
inline bool comparable(const BitString& a, const BitString& b) { return is_prefix(a, b) || is_prefix(b, a); }

// An infinite set to avoid, given by a closed form or, for "list", by finitely many members.
struct AvoidSet {
    enum class Kind { multiples, list, progression };
    Kind kind = Kind::multiples;
    nat k = 1;                // multiples of k
    nat start = 0, step = 1;  // start + step * i
    std::vector<nat> items;   // sorted

    bool contains(nat x) const {
        switch (kind) {
            case Kind::multiples: return x % k == 0;
            case Kind::progression: return x >= start && (x - start) % step == 0;
            case Kind::list: return std::binary_search(items.begin(), items.end(), x);
        }
        return false;
    }

    std::optional<nat> least_at_least(nat x) const {
        switch (kind) {
            case Kind::multiples: return (x + k - 1) / k * k;
            case Kind::progression:
                if (x <= start) return start;
                return start + (x - start + step - 1) / step * step;
            case Kind::list: {
                auto it = std::lower_bound(items.begin(), items.end(), x);
                if (it == items.end()) return std::nullopt;
                return *it;
            }
        }
        return std::nullopt;
    }
};

struct AvoidRound {
    BitString sigma;  // sigma_n
    nat tau_code;     // pi(tau), kept out of A
    BitString rho;    // sigma_{n+1}
};

struct AvoidingRun {
    std::vector<nat> A_prefix;  // codes of every prefix of the last string, shortest first
    std::vector<AvoidRound> rounds;
    BitString last;
    Trace trace;
};

// For each H_n in turn: take the least member of H_n coding a string tau longer than sigma_n,
// then extend sigma_n by one bit away from tau.
inline AvoidingRun construct_retraceable_avoiding(const std::vector<AvoidSet>& H, nat rounds) {
    AvoidingRun run;
    run.trace.construction = "retraceable-avoiding";
    BitString sigma;
    for (nat n = 0; n < rounds && n < H.size(); ++n) {
        nat floor = string_code(BitString(sigma.size() + 1, false));
        auto t = H[n].least_at_least(floor);
        if (!t) throw FixtureError("H_" + std::to_string(n) + " has no member coding a string longer than " +
                                   std::to_string(sigma.size()));
        BitString tau = string_of_code(*t);
        BitString rho = sigma;
        rho.push_back(is_prefix(sigma, tau) ? !tau[sigma.size()] : false);
        auto who = "H" + std::to_string(n);
        run.trace.emit(n + 1, who, EventKind::acts, *t);
        run.trace.emit(n + 1, who, EventKind::restrained, *t, "forbid");
        run.trace.emit(n + 1, who, EventKind::enumerated, string_code(rho));
        run.rounds.push_back({sigma, *t, rho});
        sigma = std::move(rho);
        run.trace.emit(n + 1, "stage", EventKind::finalize, string_code(sigma));
    }
    for (std::size_t i = 0; i <= sigma.size(); ++i)
        run.A_prefix.push_back(string_code(BitString(sigma.begin(), sigma.begin() + i)));
    run.last = std::move(sigma);
    return run;
}

// The retracing map pi(s) -> pi(s minus its last bit), fixing the empty string.
inline nat retrace_code(nat c) {
    auto s = string_of_code(c);
    if (!s.empty()) s.pop_back();
    return string_code(s);
}

// Codes a tuple of strings: <pi(s_0), <pi(s_1), ... pi(s_n)>>.
inline nat tuple_code(const std::vector<BitString>& t) {
    if (t.empty()) throw std::invalid_argument("empty tuple");
    nat c = string_code(t.back());
    for (std::size_t i = t.size() - 1; i-- > 0;) c = cantor_pair(string_code(t[i]), c);
    return c;
}

// The characteristic string of X on [0, len).
inline BitString characteristic_prefix(const NatSet& X, nat len) {
    BitString s(len);
    for (nat i = 0; i < len; ++i) s[i] = X.count(i) > 0;
    return s;
}

// Codes of the tuples of equal-length characteristic prefixes of A_0, ..., A_n, lengths 0..bound.
// Each A_i must be known on [0, bound).
inline NatSet extract_decomposition_subset(const std::vector<NatSet>& A, nat bound) {
    if (A.empty()) throw std::invalid_argument("need at least one set");
    NatSet out;
    for (nat len = 0; len <= bound; ++len) {
        std::vector<BitString> t;
        for (auto& X : A) t.push_back(characteristic_prefix(X, len));
        out.insert(tuple_code(t));
    }
    return out;
}

}  // namespace selfenc
