#pragma once

#include <unordered_map>

#include "engine.hpp"

namespace selfenc {

// The ordered list a_0, a_1, ... under construction together with the partial function that
// regresses it. Trace events carry positions as "@i".
class RegressedSequence {
public:
    RegressedSequence() = default;

    nat size() const { return a_.size(); }
    nat at(nat i) const { return a_.at(i); }
    const std::vector<nat>& items() const { return a_; }
    const PartialFnTable& f() const { return f_; }

    std::optional<nat> position(nat x) const {
        auto it = pos_.find(x);
        if (it == pos_.end()) return std::nullopt;
        return it->second;
    }
    bool contains(nat x) const { return pos_.count(x) > 0; }

    void mention(nat v) { mentioned_ = std::max(mentioned_, v); }
    nat mentioned() const { return mentioned_; }

    // Defines f(x) = out unless it already holds; a conflicting value is a construction bug.
    void link(nat x, nat out, nat stage) {
        if (auto v = f_.value(x)) {
            if (*v != out) throw std::logic_error("f(" + std::to_string(x) + ") is already defined differently");
            return;
        }
        f_.define(x, out, stage);
        if (x != out) children_[out].push_back(x);
        Fnv1a h;
        h.add(x);
        h.add(out);
        digest_ += h.h;
        mention(x);
        mention(out);
    }

    // Order-independent digest of the graph of f, maintained as f grows.
    nat digest() const { return digest_; }
    const std::vector<nat>& children(nat x) const {
        static const std::vector<nat> none;
        auto it = children_.find(x);
        return it == children_.end() ? none : it->second;
    }

    // Appends x and makes f map it onto the previous tail.
    void push(nat x, nat stage, const std::string& who, Trace& tr) {
        if (contains(x)) throw std::logic_error(std::to_string(x) + " is already in the sequence");
        link(x, a_.empty() ? x : a_.back(), stage);
        add(x);
        tr.emit(stage, who, EventKind::enumerated, x, "@" + std::to_string(a_.size() - 1));
    }

    // Removes a_j for every j >= i.
    void truncate(nat i, nat stage, const std::string& who, Trace& tr) {
        while (a_.size() > i) {
            nat x = a_.back();
            tr.emit(stage, who, EventKind::removed, x, "@" + std::to_string(a_.size() - 1));
            pos_.erase(x);
            members_.erase(x);
            a_.pop_back();
            digests_.pop_back();
        }
    }

    void seed(nat x, nat out) {
        link(x, out, 1);
        add(x);
    }

    const NatSet& members() const { return members_; }
    // Hash of a_0, ..., a_k, maintained as the sequence changes.
    nat sequence_digest() const { return digests_.empty() ? 0 : digests_.back(); }

    // Longest common prefix of two snapshots of the sequence.
    static std::vector<nat> common_prefix(const std::vector<nat>& x, const std::vector<nat>& y) {
        std::vector<nat> out;
        for (std::size_t i = 0; i < x.size() && i < y.size() && x[i] == y[i]; ++i) out.push_back(x[i]);
        return out;
    }

private:
    void add(nat x) {
        Fnv1a h;
        h.h = sequence_digest() ^ 0x9e3779b97f4a7c15ull;
        h.add(x);
        digests_.push_back(h.h);
        pos_[x] = a_.size();
        members_.insert(x);
        a_.push_back(x);
    }

    std::vector<nat> a_;
    std::vector<nat> digests_;
    NatSet members_;
    std::unordered_map<nat, nat> pos_;
    PartialFnTable f_;
    std::unordered_map<nat, std::vector<nat>> children_;
    nat digest_ = 0;
    nat mentioned_ = 0;
};

}  // namespace selfenc
