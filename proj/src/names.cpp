#include "ptf/names.hpp"

#include <algorithm>

#include "ptf/errors.hpp"

namespace ptf {

void RealName::canonicalize() {
    std::sort(triples.begin(), triples.end(),
              [](const auto& a, const auto& b) {
                  if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
                  if (std::get<2>(a) != std::get<2>(b)) return std::get<2>(a) < std::get<2>(b);
                  return std::get<0>(a) < std::get<0>(b);
              });
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
}

std::vector<Multitree> RealName::K(std::uint32_t n, int i) const {
    std::vector<Multitree> out;
    for (const auto& [p, m, b] : triples)
        if (m == n && b == i) out.push_back(p);
    return out;
}

std::vector<Multitree> RealName::Kn(std::uint32_t n) const {
    std::vector<Multitree> out;
    for (const auto& [p, m, b] : triples)
        if (m == n) out.push_back(p);
    return out;
}

bool is_real_name(const RealName& c) {
    for (std::uint32_t n = 0; n < c.horizon; ++n) {
        auto k0 = c.K(n, 0);
        auto k1 = c.K(n, 1);
        for (const auto& p : k0)
            for (const auto& q : k1)
                if (!sad(p, q)) return false;
    }
    for (const auto& [p, n, i] : c.triples)
        if (n >= c.horizon || (i != 0 && i != 1)) return false;
    return true;
}

ClopenTree bit_fixing_tree(std::uint32_t n, int i) {
    std::vector<BitString> stems;
    for (const auto& s : all_strings(n + 1))
        if (s.bit(n) == i) stems.push_back(s);
    return ClopenTree(n + 1, stems);
}

RealName principal_name(Index xi, std::uint32_t horizon) {
    RealName c;
    c.horizon = horizon;
    for (std::uint32_t n = 0; n < horizon; ++n)
        for (int i = 0; i < 2; ++i) {
            Multitree p;
            p.comp.emplace(xi, Tree(bit_fixing_tree(n, i)));
            c.triples.emplace_back(std::move(p), n, i);
        }
    c.canonicalize();
    return c;
}

RealName flipped_principal_name(Index xi, std::uint32_t horizon) {
    RealName c;
    c.horizon = horizon;
    for (std::uint32_t n = 0; n < horizon; ++n)
        for (int i = 0; i < 2; ++i) {
            Multitree p;
            p.comp.emplace(xi, Tree(bit_fixing_tree(n, 1 - i)));
            c.triples.emplace_back(std::move(p), n, i);
        }
    c.canonicalize();
    return c;
}

bool name_within(const RealName& c, const Multiforcing& pi, std::uint32_t depth) {
    for (const auto& [p, n, i] : c.triples)
        if (!mt_member(pi, p, depth)) return false;
    return true;
}

std::vector<Multitree> cone_set(const RealName& c, const Multiforcing& pi, std::uint32_t n,
                                std::uint32_t depth) {
    (void)depth;
    std::vector<Multitree> out;
    auto kn = c.Kn(n);
    for (const auto& p : generating_family(pi))
        for (const auto& q : kn)
            if (mleq(p, q)) {
                out.push_back(p);
                break;
            }
    return out;
}

bool is_complete(const RealName& c, const Multiforcing& pi, std::uint32_t depth) {
    (void)depth;
    auto family = generating_family(pi);
    for (std::uint32_t n = 0; n < c.horizon; ++n) {
        auto kn = c.Kn(n);
        for (const auto& p : family) {
            bool hit = false;
            for (const auto& q : kn)
                if (meet_member(pi, p, q)) {
                    hit = true;
                    break;
                }
            if (!hit) return false;
        }
    }
    return true;
}

bool directly_forces_value(const Multitree& p, const RealName& c, std::uint32_t n, int i) {
    for (const auto& q : c.K(n, i))
        if (mleq(p, q)) return true;
    return false;
}

bool directly_forces_prefix(const Multitree& p, const RealName& c, const BitString& s) {
    for (std::uint32_t n = 0; n < s.length(); ++n)
        if (!directly_forces_value(p, c, n, s.bit(n))) return false;
    return true;
}

BitString max_forced_prefix(const Multitree& p, const RealName& c) {
    BitString s;
    for (std::uint32_t n = 0; n < c.horizon; ++n) {
        bool f0 = directly_forces_value(p, c, n, 0);
        bool f1 = directly_forces_value(p, c, n, 1);
        if (f0 && f1) throw AmbiguousValue("bit " + std::to_string(n));
        if (f0) s = s.append(0);
        else if (f1) s = s.append(1);
        else break;
    }
    return s;
}

bool directly_forces_avoid(const Multitree& p, const RealName& c, const Tree& T) {
    BitString top = max_forced_prefix(p, c);
    auto exact = T.exactness();
    for (std::uint32_t l = 1; l <= top.length(); ++l) {
        if (exact && l > *exact) break;  // deeper absence cannot be certified
        if (!T.projection().contains(top.prefix(l))) return true;
    }
    return false;
}

std::pair<int, Multitree> decide_value(const Multiforcing& pi, const RealName& c,
                                       const Multitree& p, std::uint32_t n) {
    if (n >= c.horizon) throw PreconditionViolated("decide_value beyond horizon");
    for (int i = 0; i < 2; ++i)
        if (directly_forces_value(p, c, n, i)) return {i, p};
    for (int i = 0; i < 2; ++i)
        for (const auto& b : c.K(n, i))
            if (auto q = meet_member(pi, p, b)) return {i, *q};
    throw SearchBudgetExceeded("decide_value: no deciding extension (name incomplete?)");
}

std::pair<BitString, Multitree> force_avoid(const Multiforcing& pi, const RealName& c,
                                            const Multitree& p, const Tree& T) {
    std::optional<std::uint32_t> level;
    for (std::uint32_t n = 0; n <= c.horizon; ++n) {
        if (auto e = T.exactness(); e && n > *e) break;
        if (T.projection().slice_size(n) >= 2) {
            level = n;
            break;
        }
    }
    if (!level) throw NoSplitLevel();
    if (*level > c.horizon) throw NoSplitLevel();
    Multitree q = p;
    for (std::uint32_t m = 0; m < *level; ++m) q = decide_value(pi, c, q, m).second;
    BitString t = max_forced_prefix(q, c).prefix(*level);
    for (const auto& s : T.projection().slice(*level))
        if (!(s == t)) return {s, q};
    throw Error("force_avoid: no second string at the split level");
}

namespace {

// Depth-first search for w <= x deciding bits of c until `accept` holds,
// trying both bit values at each undecided position.
template <typename Accept>
std::optional<Multitree> decide_search(const Multiforcing& pi, const RealName& c, Multitree x,
                                       Accept accept, std::uint64_t budget) {
    std::vector<Multitree> stack{std::move(x)};
    std::uint64_t work = 0;
    while (!stack.empty()) {
        if (++work > budget) throw SearchBudgetExceeded("name decision search");
        Multitree w = std::move(stack.back());
        stack.pop_back();
        if (auto r = accept(w)) return r;
        std::uint32_t m = max_forced_prefix(w, c).length();
        if (m >= c.horizon) continue;
        // push i=1 first so that i=0 is explored first
        for (int i = 1; i >= 0; --i)
            for (const auto& b : c.K(m, i))
                if (auto q = meet_member(pi, w, b)) {
                    stack.push_back(*q);
                    break;
                }
    }
    return std::nullopt;
}

class DecidesSet final : public MultitreeSet {
public:
    DecidesSet(std::string id, RealName c, Multiforcing pi, std::uint32_t n)
        : id_(std::move(id)), c_(std::move(c)), pi_(std::move(pi)), n_(n) {}

    const std::string& id() const override { return id_; }

    bool member(const Multitree& x) const override {
        return directly_forces_value(x, c_, n_, 0) || directly_forces_value(x, c_, n_, 1);
    }

    std::optional<Multitree> refine_into(const Multitree& x) const override {
        if (member(x)) return x;
        try {
            return decide_value(pi_, c_, x, n_).second;
        } catch (const SearchBudgetExceeded&) {
            return std::nullopt;
        }
    }

private:
    std::string id_;
    RealName c_;
    Multiforcing pi_;
    std::uint32_t n_;
};

class AvoidSet final : public MultitreeSet {
public:
    AvoidSet(std::string id, RealName c, Multiforcing pi, Index xi, Tree Q, std::uint64_t budget)
        : id_(std::move(id)), c_(std::move(c)), pi_(std::move(pi)), xi_(xi), Q_(std::move(Q)),
          budget_(budget) {}

    const std::string& id() const override { return id_; }

    bool member(const Multitree& x) const override {
        return x.has(xi_) && directly_forces_avoid(x, c_, Q_);
    }

    std::optional<Multitree> refine_into(const Multitree& x) const override {
        if (member(x)) return x;
        Multitree seed = x;
        if (!seed.has(xi_)) seed.comp.emplace(xi_, pi_.at(xi_).generators.at(0));
        auto accept = [&](const Multitree& w) -> std::optional<Multitree> {
            if (member(w)) return w;
            return std::nullopt;
        };
        return decide_search(pi_, c_, seed, accept, budget_);
    }

private:
    std::string id_;
    RealName c_;
    Multiforcing pi_;
    Index xi_;
    Tree Q_;
    std::uint64_t budget_;
};

class NonprincipalSet final : public MultitreeSet {
public:
    NonprincipalSet(std::string id, RealName c, Multiforcing pi, Index xi, std::uint64_t budget)
        : id_(std::move(id)), c_(std::move(c)), pi_(std::move(pi)), xi_(xi), budget_(budget) {}

    const std::string& id() const override { return id_; }

    bool member(const Multitree& x) const override {
        return x.has(xi_) && directly_forces_avoid(x, c_, x.at(xi_));
    }

    std::optional<Multitree> refine_into(const Multitree& x) const override {
        Multitree seed = x;
        if (!seed.has(xi_)) seed.comp.emplace(xi_, pi_.at(xi_).generators.at(0));
        auto accept = [&](const Multitree& w) -> std::optional<Multitree> {
            if (member(w)) return w;
            // try shrinking the xi component away from a forced prefix
            BitString top = max_forced_prefix(w, c_);
            const ClopenTree& tree = w.at(xi_).projection();
            for (std::uint32_t l = 1; l <= top.length(); ++l) {
                BitString s = top.prefix(l);
                if (!tree.contains(s)) continue;  // unreachable when member() is false
                for (const auto& v : tree.slice(l))
                    if (!(v == s)) {
                        Multitree r = w;
                        r.comp.at(xi_) = w.at(xi_).restrict_to(v);
                        if (member(r)) return r;
                    }
            }
            return std::nullopt;
        };
        return decide_search(pi_, c_, seed, accept, budget_);
    }

private:
    std::string id_;
    RealName c_;
    Multiforcing pi_;
    Index xi_;
    std::uint64_t budget_;
};

}  // namespace

MultitreeSetPtr decides_set(const RealName& c, const Multiforcing& pi, std::uint32_t n,
                            std::uint32_t depth) {
    (void)depth;
    return std::make_shared<DecidesSet>("decides:n" + std::to_string(n), c, pi, n);
}

MultitreeSetPtr cone_dense_set(const RealName& c, const Multiforcing& pi, std::uint32_t n,
                               std::uint32_t depth) {
    return std::make_shared<DownclosureSet>("namecone:n" + std::to_string(n), pi, c.Kn(n),
                                            /*require_mt=*/true, depth);
}

MultitreeSetPtr avoid_dense_set(const RealName& c, const Multiforcing& pi, Index xi, Tree Q,
                                const std::string& id, std::uint64_t budget) {
    std::string name = id.empty() ? "avoid:xi" + std::to_string(xi) : id;
    return std::make_shared<AvoidSet>(name, c, pi, xi, std::move(Q), budget);
}

MultitreeSetPtr nonprincipal_dense_set(const RealName& c, const Multiforcing& pi, Index xi,
                                       std::uint64_t budget) {
    return std::make_shared<NonprincipalSet>("nonprincipal:xi" + std::to_string(xi), c, pi, xi,
                                             budget);
}

bool is_nonprincipal(const RealName& c, const Multiforcing& pi, Index xi, std::uint32_t depth,
                     std::uint64_t budget) {
    (void)depth;
    if (!pi.has(xi)) throw PreconditionViolated("is_nonprincipal: xi outside the multiforcing");
    if (c.horizon == 0) return false;
    auto D = nonprincipal_dense_set(c, pi, xi, budget);
    for (const auto& p : generating_family(pi)) {
        std::optional<Multitree> w;
        try {
            w = D->refine_into(p);
        } catch (const SearchBudgetExceeded&) {
            return false;
        }
        if (!w || !mleq(*w, p) || !D->member(*w)) return false;
    }
    return true;
}

RefinementVerdict name_sealed(const Multiforcing& pi, const RealName& c, const Multiforcing& rho,
                              std::uint32_t depth, const std::vector<SealWitness>& witnesses) {
    RefinementVerdict all = mrefines(pi, rho, depth);
    for (std::uint32_t n = 0; n < c.horizon && all.holds; ++n) {
        auto D = cone_dense_set(c, pi, n, depth);
        RefinementVerdict v = mseals(pi, *D, rho, depth, witnesses);
        for (auto& f : v.failures) all.fail("n" + std::to_string(n) + ":" + f.clause, f.witness);
    }
    return all;
}

}  // namespace ptf
