#include "rse/invariants.hpp"

#include <algorithm>
#include <numeric>

namespace rse {

std::string_view pairing_name(Pairing p) {
    return p == Pairing::AA ? "AA" : "AAINV";
}

Pairing parse_pairing(std::string_view s) {
    if (s == "AA") return Pairing::AA;
    if (s == "AAINV") return Pairing::AAINV;
    throw SpecError("unknown pairing '" + std::string(s) + "' (expected AA or AAINV)");
}

GroupInvariants compute_invariants(const FiniteGroup& g) {
    GroupInvariants out;
    const std::uint32_t n = g.order();
    out.order = n;
    out.r_profile.assign(n, 0);
    for (Element x = 0; x < n; ++x) ++out.r_profile[g.mul(x, x)];
    std::uint64_t sq_pairs = 0;
    for (auto r : out.r_profile) sq_pairs += std::uint64_t(r) * r;
    if (sq_pairs % n != 0)
        throw InvariantViolation("sum of squared root counts is not divisible by |G|");
    out.epsilon = sq_pairs / n;
    out.iota = out.r_profile[g.identity()];

    out.centralizer_sizes.assign(n, n);
    if (g.is_abelian()) {
        out.kappa = n;
    } else {
        std::vector<std::uint32_t> class_of(n, UINT32_MAX);
        std::vector<Element> orbit;
        for (Element x = 0; x < n; ++x) {
            if (class_of[x] != UINT32_MAX) continue;
            orbit.clear();
            for (Element y = 0; y < n; ++y) {
                Element c = g.mul(g.mul(g.inv(y), x), y);
                if (class_of[c] == UINT32_MAX) {
                    class_of[c] = std::uint32_t(out.kappa);
                    orbit.push_back(c);
                }
            }
            for (Element c : orbit) out.centralizer_sizes[c] = n / std::uint32_t(orbit.size());
            ++out.kappa;
        }
    }
    for (Element x = 0; x < n; ++x)
        if (x != g.identity()) out.max_centralizer_nontrivial = std::max(out.max_centralizer_nontrivial, out.centralizer_sizes[x]);
    out.cp = Rational(out.kappa, n);
    out.sq = Rational(out.epsilon, n);
    return out;
}

std::uint64_t commuting_pairs(const FiniteGroup& g) {
    std::uint64_t count = 0;
    for (Element x = 0; x < g.order(); ++x)
        for (Element y = 0; y < g.order(); ++y) count += g.mul(x, y) == g.mul(y, x);
    return count;
}

const QClass& QPartitionCounts::at(std::string_view name) const {
    for (auto& c : classes)
        if (c.name == name) return c;
    throw DomainError("no class named " + std::string(name));
}

BigInt QPartitionCounts::total() const {
    BigInt s = 0;
    for (auto& c : classes) s += c.count;
    return s;
}

BigInt QPartitionCounts::weight(int j) const {
    BigInt s = 0;
    for (auto& c : classes)
        if (c.distinct == j) s += c.completed;
    return s;
}

QPartitionCounts empty_partition(Pairing p, std::uint64_t universe_size) {
    QPartitionCounts q;
    q.variant = p;
    q.universe_size = universe_size;
    if (p == Pairing::AA)
        q.classes = {{"Q1(1)", 3, 0, 0}, {"Q1(2)", 3, 0, 0}, {"Q1(3)", 4, 0, 0},
                     {"Q2", 2, 0, 0},    {"Q3(1)", 2, 0, 0}, {"Q3(2)", 3, 0, 0},
                     {"Q4(1)", 2, 0, 0}, {"Q4(2)", 3, 0, 0}, {"Q5", 1, 0, 0}};
    else
        q.classes = {{"Q1(1)", 3, 0, 0}, {"Q1(2)", 4, 0, 0}, {"Q2", 2, 0, 0}, {"Q3(1)", 2, 0, 0},
                     {"Q3(2)", 3, 0, 0}, {"Q4", 2, 0, 0},    {"Q5", 1, 0, 0}};
    return q;
}

PairProducts pair_products(const FiniteGroup& g, const Subset& f) {
    PairProducts t;
    t.size = std::uint32_t(f.size());
    t.ambient = g.order();
    std::size_t n = f.size();
    t.mul.resize(n * n);
    t.mul_inv.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            t.mul[i * n + j] = g.mul(f.members[i], f.members[j]);
            t.mul_inv[i * n + j] = g.mul(f.members[i], g.inv(f.members[j]));
        }
    return t;
}

namespace {

// Class slots, in the order of empty_partition.
enum AaSlot { A11, A12, A13, A2, A31, A32, A41, A42, A5 };
enum InvSlot { I11, I12, I2, I31, I32, I4, I5 };

}  // namespace

QPartitionCounts q_partition(const PairProducts& t, Pairing p) {
    const std::size_t n = t.size;
    std::vector<std::uint64_t> count(9, 0), completed(9, 0);
    // owner[id] = e + 1 when the ambient id is c x_e (AA) or x_e c^-1 (AAINV),
    // so d = owner - 1 is the completing element for the current c.
    std::vector<std::uint32_t> owner(t.ambient, 0);
    auto M = [&](std::size_t i, std::size_t j) { return t.mul[i * n + j]; };
    auto MI = [&](std::size_t i, std::size_t j) { return t.mul_inv[i * n + j]; };
    auto tally = [&](int slot, bool in_f) {
        ++count[slot];
        completed[slot] += in_f;
    };

    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t e = 0; e < n; ++e) owner[p == Pairing::AA ? M(c, e) : MI(e, c)] = std::uint32_t(e + 1);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                if (p == Pairing::AA) {
                    std::uint32_t ab = M(a, b);
                    if (a == b && b == c) tally(A5, true);
                    else if (a == c) tally(A2, true);
                    else if (b == c) {
                        if (ab == M(b, a)) tally(A31, true);
                        else tally(A32, owner[ab] != 0);
                    } else if (a == b) {
                        if (M(a, a) == M(c, c)) tally(A41, true);
                        else tally(A42, owner[ab] != 0);
                    } else if (ab == M(c, a)) tally(A11, true);
                    else if (ab == M(c, c)) tally(A12, true);
                    else tally(A13, owner[ab] != 0);
                } else {
                    std::uint32_t ba = MI(b, a);
                    if (a == b && b == c) tally(I5, true);
                    else if (a == c) tally(I2, true);
                    else if (b == c) {
                        if (ba == MI(a, b)) tally(I31, true);
                        else tally(I32, owner[ba] != 0);
                    } else if (a == b) tally(I4, true);
                    else if (ba == MI(a, c)) tally(I11, true);
                    else tally(I12, owner[ba] != 0);
                }
            }
        for (std::size_t e = 0; e < n; ++e) owner[p == Pairing::AA ? M(c, e) : MI(e, c)] = 0;
    }
    QPartitionCounts q = empty_partition(p, n);
    for (std::size_t s = 0; s < q.classes.size(); ++s) {
        q.classes[s].count = count[s];
        q.classes[s].completed = completed[s];
    }
    return q;
}

QPartitionCounts q_partition(const FiniteGroup& g, const Subset& f, Pairing p, const Caps& caps) {
    if (f.universe != g.order()) throw DomainError("subset universe does not match the group order");
    std::uint64_t n = f.size();
    if (n * n * n > caps.triples)
        throw CapExceeded("triple enumeration over |F| = " + std::to_string(n) +
                          " exceeds the cap; use the closed form for the full group");
    return q_partition(pair_products(g, f), p);
}

QPartitionCounts q_partition_closed_form(const GroupInvariants& inv, Pairing p) {
    const BigInt n = inv.order, kappa = inv.kappa, eps = inv.epsilon, iota = inv.iota;
    QPartitionCounts q = empty_partition(p, inv.order);
    std::vector<BigInt> v;
    if (p == Pairing::AA)
        v = {n * (n - kappa),   n * (n - eps),   n * (n * n - 5 * n + 2 + eps + kappa),
             n * (n - 1),       n * (kappa - 1), n * (n - kappa),
             n * (eps - 1),     n * (n - eps),   n};
    else
        v = {n * (n - iota), n * (n * n - 4 * n + 2 + iota), n * (n - 1), n * (iota - 1),
             n * (n - iota), n * (n - 1),                     n};
    for (std::size_t s = 0; s < v.size(); ++s) {
        q.classes[s].count = v[s];
        q.classes[s].completed = v[s];
    }
    return q;
}

BigInt fn_overlap_sum(const FiniteGroup& g, const Subset& f) {
    if (f.universe != g.order()) throw DomainError("subset universe does not match the group order");
    std::vector<char> in_f(g.order(), 0), in_ff(g.order(), 0);
    for (Element x : f.members) in_f[x] = 1;
    for (Element x : f.members)
        if (!in_f[g.inv(x)]) throw DomainError("subset is not closed under inverses");
    std::vector<Element> ff;
    for (Element x : f.members)
        for (Element y : f.members) {
            Element z = g.mul(x, y);
            if (!in_ff[z]) {
                in_ff[z] = 1;
                ff.push_back(z);
            }
        }
    BigInt total = 0;
    for (Element y : ff) {
        std::uint64_t overlap = 0;
        for (Element x : f.members) overlap += in_f[g.mul(g.inv(y), x)];
        total += overlap;
    }
    return total;
}

std::uint32_t max_centralizer_in(const FiniteGroup& g, const Subset& f) {
    std::uint32_t best = 0;
    for (Element x : f.members) {
        if (x == g.identity()) continue;
        std::uint32_t c = 0;
        for (Element y : f.members) c += g.mul(x, y) == g.mul(y, x);
        best = std::max(best, c);
    }
    return best;
}

Subset full_subset(const FiniteGroup& g) {
    std::vector<Element> all(g.order());
    std::iota(all.begin(), all.end(), 0);
    return Subset(g.order(), std::move(all));
}

}  // namespace rse
