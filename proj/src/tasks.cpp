#include <algorithm>

#include "ptf/errors.hpp"
#include "ptf/refine.hpp"

namespace ptf {

namespace {

enum Phase {
    kSupport = 0,
    kSteer,
    kSyn,
    kNarrow,
    kPreSeal,  // a narrowing pass opening the sealing group
    kSeal,
    kAvoid,
    kPreAd,    // a narrowing pass opening the shrink group
    kAdPairs,
    kClopenDecide,
    kNonIncl,
    kEscape,
    kThin,
    kSplit,
    kFinalize,
};

std::vector<SysKey> budget_keys(const Multiforcing& pi, std::uint32_t kmax) {
    std::vector<SysKey> keys;
    for (const auto& [xi, P] : pi.comp)
        for (std::uint32_t k = 0; k < kmax; ++k) keys.emplace_back(xi, k);
    return keys;
}

// Installs the whole budgeted (xi,k) universe, each entry starting at the
// union of the component's generators.
class SupportTask final : public DenseTask {
public:
    SupportTask(const Multiforcing& pi, std::uint32_t kmax) : pi_(pi), kmax_(kmax) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kSupport; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        System phi = psi;
        for (const auto& [xi, P] : pi_.comp) {
            std::vector<ClopenTree> projs;
            for (const auto& g : P.generators) projs.push_back(g.projection());
            ClopenTree fat = union_of(projs);
            for (std::uint32_t k = 0; k < kmax_; ++k)
                if (!phi.has({xi, k})) phi.comp.emplace(SysKey{xi, k}, fat);
        }
        return std::make_pair(level, std::move(phi));
    }

    bool member(std::uint32_t, const System& phi) const override {
        for (const auto& key : budget_keys(pi_, kmax_))
            if (!phi.has(key)) return false;
        return true;
    }

private:
    std::string id_ = "support";
    const Multiforcing& pi_;
    std::uint32_t kmax_;
};

// Density steering: for every old generator T of pi(xi) some budgeted k gets
// a frozen piece inside T, so that the new layer is dense below T.
class SteerTask final : public DenseTask {
public:
    SteerTask(const Multiforcing& pi, std::uint32_t kmax) : pi_(pi), kmax_(kmax) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kSteer; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        System phi = psi;
        std::uint32_t top = level;
        claims_.clear();
        for (const auto& [xi, P] : pi_.comp) {
            std::map<std::uint32_t, std::vector<BitString>> claimed;
            for (std::uint32_t g = 0; g < P.generators.size(); ++g) {
                std::uint32_t k = g % kmax_;
                const ClopenTree& T = P.generators[g].projection();
                ClopenTree& tree = phi.comp.at({xi, k});
                bool done = false;
                // claims in one entry must be pairwise incomparable, so that
                // later splices do not reach into earlier claimed pieces
                for (std::uint32_t work = level; work <= level + 12 && !done; ++work) {
                    for (const auto& s : tree.slice(work)) {
                        bool clash = false;
                        for (const auto& c : claimed[k])
                            if (c.comparable(s)) {
                                clash = true;
                                break;
                            }
                        if (clash) continue;
                        auto inter = intersect(tree.restrict_to(s), T);
                        if (!inter) continue;
                        tree = splice(tree, s, *inter, work);
                        claimed[k].push_back(s);
                        claims_.push_back({{xi, k}, s, g});
                        top = std::max(top, work);
                        done = true;
                        break;
                    }
                }
                if (!done) return std::nullopt;
            }
        }
        return std::make_pair(top, std::move(phi));
    }

    bool member(std::uint32_t, const System& phi) const override {
        for (const auto& cl : claims_) {
            const ClopenTree& tree = phi.at(cl.key);
            const ClopenTree& T = pi_.at(cl.key.first).generators[cl.gen].projection();
            if (!tree.contains(cl.at)) return false;
            if (!tree.restrict_to(cl.at).subset_of(T)) return false;
        }
        return true;
    }

private:
    struct Claim {
        SysKey key;
        BitString at;
        std::uint32_t gen;
    };
    std::string id_ = "steer";
    const Multiforcing& pi_;
    std::uint32_t kmax_;
    std::vector<Claim> claims_;
};

class SynTask final : public DenseTask {
public:
    explicit SynTask(const Multiforcing& pi) : pi_(pi) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kSyn; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        work_level_ = level;
        return std::make_pair(level, syn_normalize(pi_, level, psi));
    }

    bool member(std::uint32_t n, const System& phi) const override {
        std::uint32_t l = std::min(n, work_level_);
        for (const auto& [key, tree] : phi.comp) {
            for (const auto& s : tree.slice(l)) {
                ClopenTree piece = tree.restrict_to(s);
                const ArborealForcing& P = pi_.at(key.first);
                if (!forcing_member(P, Tree(piece), piece.depth() + P.max_proj_depth()))
                    return false;
            }
        }
        return true;
    }

private:
    std::string id_ = "syn";
    const Multiforcing& pi_;
    std::uint32_t work_level_ = 0;
};

// Restricts each piece rooted one level below the freeze to a single branch
// at the new level, so slice widths do not double as the level climbs.
class NarrowTask final : public DenseTask {
public:
    explicit NarrowTask(int phase) : phase_(phase), id_(phase == kNarrow       ? "narrow"
                                                        : phase == kPreSeal    ? "narrow.seal"
                                                                               : "narrow.shrink") {}

    const std::string& id() const override { return id_; }
    int phase() const override { return phase_; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        work_level_ = level;
        System phi = psi;
        if (level == 0) return std::make_pair(level, std::move(phi));
        std::uint32_t cut = level - 1;
        for (auto& [key, tree] : phi.comp) {
            for (const auto& s : tree.slice(cut)) {
                ClopenTree piece = tree.restrict_to(s);
                if (piece.slice_size(level) <= 1) continue;
                tree = splice(tree, s, piece.restrict_to(piece.slice(level).front()), cut);
            }
        }
        return std::make_pair(level, std::move(phi));
    }

    bool member(std::uint32_t, const System& phi) const override {
        if (work_level_ == 0) return true;
        for (const auto& [key, tree] : phi.comp)
            for (const auto& s : tree.slice(work_level_ - 1))
                if (tree.restrict_to(s).slice_size(work_level_) > 1) return false;
        return true;
    }

private:
    int phase_;
    std::string id_;
    std::uint32_t work_level_ = 0;
};

// Enumerates the (p, u-shape) cases of the sealing clause.
struct ShapeCase {
    Multitree p;
    UShape shape;
};

std::vector<ShapeCase> shape_cases(const Multiforcing& pi, std::uint32_t kmax, std::size_t cap) {
    std::vector<ShapeCase> out;
    for (const auto& p : generating_family(pi)) {
        std::vector<ShapeCase> partial{ShapeCase{p, {}}};
        for (const auto& [xi, P] : pi.comp) {
            if (p.has(xi)) continue;
            std::vector<ShapeCase> next = partial;  // xi absent from u
            for (const auto& c : partial)
                for (std::uint32_t k = 0; k < kmax; ++k) {
                    ShapeCase e = c;
                    e.shape.k_of[xi] = k;
                    next.push_back(std::move(e));
                }
            partial.swap(next);
            if (partial.size() + out.size() > cap) throw BudgetRejected("seal case universe");
        }
        out.insert(out.end(), partial.begin(), partial.end());
    }
    return out;
}

// Iterate the multistring set B^level over the u components.
template <typename Fn>
bool for_each_multistring(const System& phi, const UShape& shape, std::uint32_t level, Fn fn) {
    std::vector<Index> idx;
    std::vector<std::vector<BitString>> slices;
    std::size_t total = 1;
    for (const auto& [xi, k] : shape.k_of) {
        idx.push_back(xi);
        slices.push_back(phi.at({xi, k}).slice(level));
        total *= slices.back().size();
    }
    for (std::size_t it = 0; it < total; ++it) {
        std::map<Index, BitString> pick;
        std::size_t rem = it;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            pick[idx[i]] = slices[i][rem % slices[i].size()];
            rem /= slices[i].size();
        }
        if (!fn(pick)) return false;
    }
    return true;
}

Multitree v_of(const System& phi, const UShape& shape, const std::map<Index, BitString>& pick) {
    Multitree v;
    for (const auto& [xi, k] : shape.k_of)
        v.comp.emplace(xi, Tree(phi.at({xi, k}).restrict_to(pick.at(xi))));
    return v;
}

// Seals one open dense set of multitrees over pi (the uu4 construction).
class SealTask final : public DenseTask {
public:
    SealTask(const Multiforcing& pi, MultitreeSetPtr D, std::uint32_t kmax, std::uint64_t budget)
        : id_("seal:" + D->id()), pi_(pi), D_(std::move(D)), kmax_(kmax), budget_(budget) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kSeal; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        System phi = syn_normalize(pi_, level, psi);
        std::uint64_t work = 0;
        for (const auto& sc : shape_cases(pi_, kmax_, 20000)) {
            Multitree q = sc.p;
            bool ok = for_each_multistring(phi, sc.shape, level, [&](const auto& pick) {
                if (++work > budget_) throw SearchBudgetExceeded(id_);
                Multitree x = mt_union(v_of(phi, sc.shape, pick), q);
                auto w = D_->refine_into(x);
                if (!w) return false;
                for (const auto& [xi, k] : sc.shape.k_of) {
                    SysKey key{xi, k};
                    phi.comp.at(key) =
                        splice(phi.at(key), pick.at(xi), w->at(xi).projection(), level);
                }
                q = Multitree{};
                for (const auto& [xi, t] : w->comp)
                    if (!sc.shape.k_of.count(xi)) q.comp.emplace(xi, t);
                return true;
            });
            if (!ok) return std::nullopt;
            witnesses_.push_back({D_->id(), sc.p, sc.shape, level, q});
        }
        return std::make_pair(level, std::move(phi));
    }

    bool member(std::uint32_t n, const System& phi) const override {
        for (const auto& w : witnesses_) {
            if (w.level > n) return false;
            bool ok = for_each_multistring(phi, w.shape, w.level, [&](const auto& pick) {
                return D_->member(mt_union(v_of(phi, w.shape, pick), w.q));
            });
            if (!ok) return false;
        }
        return true;
    }

    void record(RefinementTrace& trace) const override {
        trace.seal_witnesses.insert(trace.seal_witnesses.end(), witnesses_.begin(),
                                    witnesses_.end());
    }

private:
    std::string id_;
    const Multiforcing& pi_;
    MultitreeSetPtr D_;
    std::uint32_t kmax_;
    std::uint64_t budget_;
    std::vector<SealWitness> witnesses_;
};

// Avoidance of one non-principal name at one index: every budgeted new
// generator of that index gets its avoidance set sealed (the Theorem-K
// construction, cases 1 and 2 of its density lemma).
class AvoidTask final : public DenseTask {
public:
    AvoidTask(const Multiforcing& pi, RealName c, Index xi, std::uint32_t kmax,
              std::uint64_t budget)
        : id_("avoidname:xi" + std::to_string(xi)), pi_(pi), c_(std::move(c)), xi_(xi),
          kmax_(kmax), budget_(budget) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kAvoid; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        System phi = syn_normalize(pi_, level, psi);
        auto np = nonprincipal_dense_set(c_, pi_, xi_, budget_);
        std::uint64_t work = 0;
        for (const auto& sc : shape_cases(pi_, kmax_, 20000)) {
            Multitree q = sc.p;
            bool ok = true;
            for (std::uint32_t K = 0; K < kmax_ && ok; ++K) {
                auto t_slice = phi.at({xi_, K}).slice(level);
                ok = for_each_multistring(phi, sc.shape, level, [&](const auto& pick) {
                    for (const auto& t : t_slice) {
                        if (++work > budget_) throw SearchBudgetExceeded(id_);
                        Multitree x = mt_union(v_of(phi, sc.shape, pick), q);
                        ClopenTree cur_piece = phi.at({xi_, K}).restrict_to(t);
                        if (x.has(xi_) && directly_forces_avoid(x, c_, Tree(cur_piece)))
                            continue;  // this piece is already avoided below x
                        bool case1 = sc.shape.k_of.count(xi_) &&
                                     sc.shape.k_of.at(xi_) == K && pick.at(xi_) == t;
                        std::optional<Multitree> w;
                        ClopenTree target = ClopenTree::full();
                        if (case1) {
                            w = np->refine_into(x);
                            if (w) target = w->at(xi_).projection();
                        } else {
                            // escape the whole piece when possible; shrink the
                            // piece to an avoided restriction otherwise
                            auto esc = avoid_dense_set(c_, pi_, xi_, Tree(cur_piece), "",
                                                       budget_);
                            w = esc->refine_into(x);
                            if (w) {
                                target = cur_piece;
                            } else {
                                try {
                                    auto [s, forced] = force_avoid(pi_, c_, x, Tree(cur_piece));
                                    w = forced;
                                    target = cur_piece.restrict_to(s);
                                } catch (const Error&) {
                                    w = std::nullopt;
                                }
                            }
                        }
                        if (!w) return false;
                        for (const auto& [eta, k] : sc.shape.k_of) {
                            SysKey key{eta, k};
                            if (case1 && eta == xi_ && k == K) continue;
                            phi.comp.at(key) =
                                splice(phi.at(key), pick.at(eta), w->at(eta).projection(), level);
                        }
                        phi.comp.at({xi_, K}) = splice(phi.at({xi_, K}), t, target, level);
                        q = Multitree{};
                        for (const auto& [eta, tr] : w->comp)
                            if (!sc.shape.k_of.count(eta)) q.comp.emplace(eta, tr);
                        if (!sc.shape.k_of.count(xi_) && !q.has(xi_))
                            q.comp.emplace(xi_, Tree(target));
                    }
                    return true;
                });
            }
            if (!ok) return std::nullopt;
            for (std::uint32_t K = 0; K < kmax_; ++K)
                witnesses_.push_back(
                    {"avoid:xi" + std::to_string(xi_) + ":k" + std::to_string(K), sc.p, sc.shape,
                     level, q});
        }
        return std::make_pair(level, std::move(phi));
    }

    bool member(std::uint32_t n, const System& phi) const override {
        for (const auto& w : witnesses_) {
            if (w.level > n) return false;
            std::uint32_t K = 0;
            auto pos = w.set_id.rfind(":k");
            if (pos != std::string::npos) K = std::stoul(w.set_id.substr(pos + 2));
            bool ok = for_each_multistring(phi, w.shape, w.level, [&](const auto& pick) {
                Multitree x = mt_union(v_of(phi, w.shape, pick), w.q);
                return x.has(xi_) &&
                       directly_forces_avoid(x, c_, Tree(phi.at({xi_, K})));
            });
            if (!ok) return false;
        }
        return true;
    }

    void record(RefinementTrace& trace) const override {
        trace.seal_witnesses.insert(trace.seal_witnesses.end(), witnesses_.begin(),
                                    witnesses_.end());
    }

private:
    std::string id_;
    const Multiforcing& pi_;
    RealName c_;
    Index xi_;
    std::uint32_t kmax_;
    std::uint64_t budget_;
    std::vector<SealWitness> witnesses_;
};

// Pairwise almost-disjointness of all budgeted entries.
class AdPairsTask final : public DenseTask {
public:
    explicit AdPairsTask(const Multiforcing& pi, std::uint32_t kmax) : pi_(pi), kmax_(kmax) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kAdPairs; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        System phi = psi;
        auto keys = budget_keys(pi_, kmax_);
        for (std::size_t i = 0; i < keys.size(); ++i)
            for (std::size_t j = i + 1; j < keys.size(); ++j) {
                ClopenTree& A = phi.comp.at(keys[i]);
                ClopenTree& B = phi.comp.at(keys[j]);
                if (almost_disjoint(A, B)) continue;
                auto [A2, B2] = shrink_disjoint(level, A, B);
                A = A2;
                B = B2;
            }
        return std::make_pair(level, std::move(phi));
    }

    bool member(std::uint32_t, const System& phi) const override {
        for (auto a = phi.comp.begin(); a != phi.comp.end(); ++a)
            for (auto b = std::next(a); b != phi.comp.end(); ++b)
                if (!almost_disjoint(a->second, b->second)) return false;
        return true;
    }

private:
    std::string id_ = "adpairs";
    const Multiforcing& pi_;
    std::uint32_t kmax_;
};

// The piece-deciding sets D(T): every level piece lands inside T or away
// from it, for every old generator T.
class ClopenDecideTask final : public DenseTask {
public:
    explicit ClopenDecideTask(const Multiforcing& pi) : pi_(pi) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kClopenDecide; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        System phi = psi;
        for (auto& [key, tree] : phi.comp) {
            for (const auto& g : pi_.at(key.first).generators) {
                const ClopenTree& T = g.projection();
                for (const auto& s : tree.slice(level)) {
                    ClopenTree piece = tree.restrict_to(s);
                    if (piece.subset_of(T) || almost_disjoint(piece, T)) continue;
                    auto inter = intersect(piece, T);
                    tree = splice(tree, s, *inter, level);
                }
            }
        }
        return std::make_pair(level, std::move(phi));
    }

    bool member(std::uint32_t n, const System& phi) const override {
        for (const auto& [key, tree] : phi.comp)
            for (const auto& g : pi_.at(key.first).generators)
                if (!clopen_in(Tree(tree), g, n)) return false;
        return true;
    }

private:
    std::string id_ = "clopendecide";
    const Multiforcing& pi_;
};

// The non-inclusion sets D'(T): no old generator stays inside a new tree.
class NonInclTask final : public DenseTask {
public:
    explicit NonInclTask(const Multiforcing& pi) : pi_(pi) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kNonIncl; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        System phi = psi;
        std::uint32_t top = level;
        for (auto& [key, tree] : phi.comp) {
            for (const auto& g : pi_.at(key.first).generators) {
                const ClopenTree& T = g.projection();
                if (!T.subset_of(tree)) continue;
                BitString t0 = T.slice(level).at(0);
                BitString split = T.least_split_above(t0);
                BitString cut = split.append(1);
                tree = remove_cone(tree, cut);
                top = std::max(top, cut.length());
            }
        }
        return std::make_pair(top, std::move(phi));
    }

    bool member(std::uint32_t, const System& phi) const override {
        for (const auto& [key, tree] : phi.comp)
            for (const auto& g : pi_.at(key.first).generators)
                if (g.projection().subset_of(tree)) return false;
        return true;
    }

private:
    std::string id_ = "nonincl";
    const Multiforcing& pi_;
};

// Carves one common hole per index: a string outside every budgeted entry,
// so a real escaping the whole new layer exists.
class EscapeTask final : public DenseTask {
public:
    EscapeTask(const Multiforcing& pi, std::uint32_t kmax) : pi_(pi), kmax_(kmax) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kEscape; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        System phi = psi;
        std::uint32_t top = level;
        for (const auto& [xi, P] : pi_.comp) {
            std::uint32_t l = level + 1;
            for (std::uint32_t k = 0; k < kmax_; ++k)
                l = std::max(l, phi.at({xi, k}).depth() + 1);
            BitString hole(l, 0);
            for (std::uint32_t k = 0; k < kmax_; ++k) {
                ClopenTree& tree = phi.comp.at({xi, k});
                if (tree.contains(hole)) tree = remove_cone(tree, hole);
            }
            holes_[xi] = hole;
            top = std::max(top, l);
        }
        return std::make_pair(top, std::move(phi));
    }

    bool member(std::uint32_t, const System& phi) const override {
        for (const auto& [xi, hole] : holes_)
            for (std::uint32_t k = 0; k < kmax_; ++k)
                if (phi.at({xi, k}).contains(hole)) return false;
        return true;
    }

    void record(RefinementTrace& trace) const override {
        for (const auto& [xi, hole] : holes_) trace.escape_holes[xi] = hole;
    }

private:
    std::string id_ = "escape";
    const Multiforcing& pi_;
    std::uint32_t kmax_;
    std::map<Index, BitString> holes_;
};

// Removes one grandchild under every full cone hanging at the target depth,
// so that no member of the old forcing stays inside any new tree up to that
// depth (the member-level half of the non-absorption clause).
class ThinTask final : public DenseTask {
public:
    explicit ThinTask(std::uint32_t depth) : depth_(depth) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kThin; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        System phi = psi;
        std::uint32_t target = std::max(depth_, level);
        for (auto& [key, tree] : phi.comp) {
            std::vector<ClopenTree> cuts;
            for (const auto& u : tree.slice(target))
                if (tree.restrict_to(u) == ClopenTree::cone(u))
                    cuts.push_back(ClopenTree::cone(u.append(1)));
            if (!cuts.empty()) tree = *difference(tree, union_of(cuts));
        }
        return std::make_pair(std::max(level, target + 1), std::move(phi));
    }

    bool member(std::uint32_t, const System& phi) const override {
        for (const auto& [key, tree] : phi.comp)
            if (has_full_cone_at(tree, depth_)) return false;
        return true;
    }

private:
    std::string id_ = "thin";
    std::uint32_t depth_;
};

// Freezes a split above every string of length <= split_budget in every
// entry; the trees do not change, the freeze level climbs.
class SplitTask final : public DenseTask {
public:
    explicit SplitTask(std::uint32_t split_budget) : budget_(split_budget) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kSplit; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        std::uint32_t top = level;
        for (const auto& [key, tree] : psi.comp)
            for (std::uint32_t l = 0; l <= budget_; ++l)
                for (const auto& t : tree.slice(l))
                    top = std::max(top, tree.least_split_above(t).length() + 1);
        return std::make_pair(top, psi);
    }

    bool member(std::uint32_t n, const System& phi) const override {
        for (const auto& [key, tree] : phi.comp)
            for (std::uint32_t l = 0; l <= budget_; ++l)
                for (const auto& t : all_strings(l))
                    if (tree.contains(t) && tree.least_split_above(t).length() + 1 > n)
                        return false;
        return true;
    }

private:
    std::string id_ = "split";
    std::uint32_t budget_;
};

class FinalizeTask final : public DenseTask {
public:
    explicit FinalizeTask(std::uint32_t depth) : depth_(depth) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kFinalize; }

    // The freeze level ends beyond every entry's structural depth, so the
    // output trees are exact as the finite objects they are.
    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        std::uint32_t top = std::max(level, depth_);
        for (const auto& [key, tree] : psi.comp) top = std::max(top, tree.depth() + 1);
        return std::make_pair(top, psi);
    }

    bool member(std::uint32_t n, const System& phi) const override {
        if (n < depth_) return false;
        for (const auto& [key, tree] : phi.comp)
            if (n < tree.depth()) return false;
        return true;
    }

private:
    std::string id_ = "finalize";
    std::uint32_t depth_;
};

// The arboreal sealing sets of the refinement theorem's clause (v): every
// level piece of every entry of the index lands below a member of D.
class ArborealSealTask final : public DenseTask {
public:
    ArborealSealTask(const Multiforcing& pi, Index xi, std::vector<Tree> D, std::size_t ord)
        : id_("arbseal:xi" + std::to_string(xi) + ":" + std::to_string(ord)), pi_(pi), xi_(xi),
          D_(std::move(D)) {}

    const std::string& id() const override { return id_; }
    int phase() const override { return kSeal; }

    std::optional<std::pair<std::uint32_t, System>> extend(std::uint32_t level,
                                                           const System& psi) override {
        System phi = syn_normalize(pi_, level, psi);
        const ArborealForcing& P = pi_.at(xi_);
        for (auto& [key, tree] : phi.comp) {
            if (key.first != xi_) continue;
            for (const auto& s : tree.slice(level)) {
                ClopenTree piece = tree.restrict_to(s);
                bool covered = false;
                for (const auto& S : D_)
                    if (piece.subset_of(S.projection())) {
                        covered = true;
                        break;
                    }
                if (covered) continue;
                bool shrunk = false;
                for (const auto& S : D_) {
                    auto inter = intersect(piece, S.projection());
                    if (!inter) continue;
                    auto m = member_within(P, *inter);
                    if (!m) continue;
                    tree = splice(tree, s, *m, level);
                    shrunk = true;
                    break;
                }
                if (!shrunk) return std::nullopt;  // D not pre-dense below the piece
            }
        }
        work_level_ = level;
        return std::make_pair(level, std::move(phi));
    }

    bool member(std::uint32_t n, const System& phi) const override {
        std::uint32_t l = std::min(n, work_level_);
        for (const auto& [key, tree] : phi.comp) {
            if (key.first != xi_) continue;
            for (const auto& s : tree.slice(l)) {
                ClopenTree piece = tree.restrict_to(s);
                bool covered = false;
                for (const auto& S : D_)
                    if (piece.subset_of(S.projection())) {
                        covered = true;
                        break;
                    }
                if (!covered) return false;
            }
        }
        return true;
    }

private:
    std::string id_;
    const Multiforcing& pi_;
    Index xi_;
    std::vector<Tree> D_;
    std::uint32_t work_level_ = 0;
};

}  // namespace

TaskList mandatory_tasks(const Multiforcing& pi, const std::vector<RealName>& name_pool,
                         const std::vector<MultitreeSetPtr>& dense_pool,
                         const std::vector<AvoidRequest>& avoid_pool,
                         const std::map<Index, std::vector<std::vector<Tree>>>& arboreal_pool,
                         const RunConfig& cfg) {
    if (pi.comp.size() * cfg.kmax > 64) throw BudgetRejected("(xi,k) universe too large");
    if (cfg.split_budget > 12) throw BudgetRejected("splitting budget too large");
    for (const auto& [xi, P] : pi.comp) {
        if (xi >= cfg.index_bound) throw BudgetRejected("index above the bound");
        if (P.generators.empty()) throw BudgetRejected("component without generators");
    }

    TaskList out;
    if (cfg.enable_support) out.tasks.push_back(std::make_shared<SupportTask>(pi, cfg.kmax));
    if (cfg.enable_steer) out.tasks.push_back(std::make_shared<SteerTask>(pi, cfg.kmax));
    if (cfg.enable_syn) out.tasks.push_back(std::make_shared<SynTask>(pi));
    if (cfg.enable_narrow) {
        out.tasks.push_back(std::make_shared<NarrowTask>(kNarrow));
        out.tasks.push_back(std::make_shared<NarrowTask>(kPreSeal));
        out.tasks.push_back(std::make_shared<NarrowTask>(kPreAd));
    }
    if (cfg.enable_seal) {
        for (const auto& D : dense_pool)
            out.tasks.push_back(std::make_shared<SealTask>(pi, D, cfg.kmax, cfg.search_budget));
        for (std::size_t ci = 0; ci < name_pool.size(); ++ci)
            for (std::uint32_t n = 0; n < name_pool[ci].horizon; ++n)
                out.tasks.push_back(std::make_shared<SealTask>(
                    pi, cone_dense_set(name_pool[ci], pi, n, cfg.depth), cfg.kmax,
                    cfg.search_budget));
        for (const auto& [xi, sets] : arboreal_pool)
            for (std::size_t i = 0; i < sets.size(); ++i)
                out.tasks.push_back(std::make_shared<ArborealSealTask>(pi, xi, sets[i], i));
    }
    if (cfg.enable_avoid)
        for (const auto& req : avoid_pool) {
            if (!pi.has(req.xi)) throw PreconditionViolated("avoid request outside |pi|");
            out.tasks.push_back(
                std::make_shared<AvoidTask>(pi, req.name, req.xi, cfg.kmax, cfg.search_budget));
        }
    if (cfg.enable_adpairs) out.tasks.push_back(std::make_shared<AdPairsTask>(pi, cfg.kmax));
    if (cfg.enable_clopen) out.tasks.push_back(std::make_shared<ClopenDecideTask>(pi));
    if (cfg.enable_nonincl) out.tasks.push_back(std::make_shared<NonInclTask>(pi));
    if (cfg.enable_escape) out.tasks.push_back(std::make_shared<EscapeTask>(pi, cfg.kmax));
    if (cfg.enable_thin) out.tasks.push_back(std::make_shared<ThinTask>(cfg.depth));
    if (cfg.enable_split) out.tasks.push_back(std::make_shared<SplitTask>(cfg.split_budget));
    out.tasks.push_back(std::make_shared<FinalizeTask>(cfg.depth));
    return out;
}

void apply_ablation(RunConfig& cfg, const std::string& family) {
    if (family == "split") cfg.enable_split = false;
    else if (family == "adpairs") cfg.enable_adpairs = false;
    else if (family == "steer") cfg.enable_steer = false;
    else if (family == "clopen") cfg.enable_clopen = false;
    else if (family == "nonincl") cfg.enable_nonincl = false;
    else if (family == "seal") cfg.enable_seal = false;
    else if (family == "avoid") cfg.enable_avoid = false;
    else if (family == "escape") cfg.enable_escape = false;
    else if (family == "thin") cfg.enable_thin = false;
    else if (family == "narrow") cfg.enable_narrow = false;
    else if (family == "syn") cfg.enable_syn = false;
    else if (family == "support") cfg.enable_support = false;
    else throw ParseError("unknown ablation family: " + family);
}

}  // namespace ptf
