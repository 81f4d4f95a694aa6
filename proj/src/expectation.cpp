#include "rse/expectation.hpp"

namespace rse {

std::string_view variant_name(Variant v) {
    switch (v) {
    case Variant::AA: return "AA";
    case Variant::AAINV: return "AAINV";
    case Variant::ACTION: return "ACTION";
    }
    return "?";
}

std::string_view method_name(Method m) {
    switch (m) {
    case Method::BINOMIAL_Q: return "BINOMIAL_Q";
    case Method::PAPER_CLOSED_FORM: return "PAPER_CLOSED_FORM";
    case Method::CORRECTED_CLOSED_FORM: return "CORRECTED_CLOSED_FORM";
    }
    return "?";
}

std::string_view constant_mode_name(ConstantMode m) {
    return m == ConstantMode::AS_PRINTED ? "AS_PRINTED" : "ORDERED_CORRECTED";
}

Variant to_variant(Pairing p) {
    return p == Pairing::AA ? Variant::AA : Variant::AAINV;
}

namespace {

void check_k(std::uint64_t k, std::uint64_t n) {
    if (k < 1 || k > n)
        throw DomainError("k = " + std::to_string(k) + " outside 1.." + std::to_string(n));
}


}  // namespace

Rational inclusion_probability(std::uint64_t n, std::uint64_t k, std::uint64_t j) {
    return Rational(binomial(std::int64_t(n) - std::int64_t(j), std::int64_t(k) - std::int64_t(j)),
                    binomial(std::int64_t(n), std::int64_t(k)));
}

ExpectationResult expected_energy(const QPartitionCounts& q, std::uint64_t k) {
    check_k(k, q.universe_size);
    ExpectationResult r;
    r.k = k;
    r.universe_size = q.universe_size;
    r.variant = to_variant(q.variant);
    r.method = Method::BINOMIAL_Q;
    r.value = 0;
    for (int j = 1; j <= 4; ++j) r.value += inclusion_probability(q.universe_size, k, j) * Rational(q.weight(j));
    return r;
}

ExpectationResult expected_energy(const GroupInvariants& inv, std::uint64_t k, Pairing p) {
    return expected_energy(q_partition_closed_form(inv, p), k);
}

ExpectationResult expected_energy(const FiniteGroup& g, std::uint64_t k, Pairing p) {
    return expected_energy(compute_invariants(g), k, p);
}

ExpectationResult expected_energy(const FiniteGroup& g, const Subset& f, std::uint64_t k, Pairing p,
                                  const Caps& caps) {
    if (f.universe != g.order()) throw DomainError("subset universe does not match the group order");
    check_k(k, f.size());
    if (f.size() == g.order()) return expected_energy(g, k, p);
    return expected_energy(q_partition(g, f, p, caps), k);
}

Rational diagonal_term(std::uint64_t n, std::uint64_t k) {
    auto N = std::int64_t(n), K = std::int64_t(k);
    Rational out = 0;
    if (N >= 2) out += Rational(falling(K, 2), falling(N, 2));
    if (N >= 3) out -= 2 * Rational(falling(K, 3), falling(N, 3));
    if (N >= 4) out += Rational(falling(K, 4), falling(N, 4));
    return out * N;
}

namespace {

ExpectationResult closed_form(const GroupInvariants& inv, std::uint64_t k, Pairing p, bool printed) {
    const std::int64_t n = inv.order, K = std::int64_t(k);
    if (n < 4) throw DomainError("closed forms need |G| >= 4");
    check_k(k, inv.order);
    const auto kappa = std::int64_t(inv.kappa), eps = std::int64_t(inv.epsilon), iota = std::int64_t(inv.iota);
    // k^(j) / (n-1)^(j-1)
    auto coef = [&](std::int64_t j) { return Rational(falling(K, j), falling(n - 1, j - 1)); };
    ExpectationResult r;
    r.k = k;
    r.universe_size = inv.order;
    r.variant = to_variant(p);
    r.method = printed ? Method::PAPER_CLOSED_FORM : Method::CORRECTED_CLOSED_FORM;
    if (p == Pairing::AA) {
        // printed constants: +3, -1, -1; corrected: +2, 0, -2
        std::int64_t c4 = printed ? 3 : 2, c3 = printed ? -1 : 0, c2 = printed ? -1 : -2;
        r.value = coef(4) * Rational(n * n - 5 * n + eps + kappa + c4) +
                  2 * coef(3) * Rational(2 * n - eps - kappa + c3) +
                  coef(2) * Rational(eps + kappa + c2) + Rational(K * K);
    } else {
        r.value = coef(4) * Rational(n * n - 4 * n + 2 + iota) +
                  2 * coef(3) * Rational(n - iota) +
                  coef(2) * Rational(iota - 1) + Rational(2 * K * K - K);
    }
    return r;
}

}  // namespace

ExpectationResult paper_closed_form(const GroupInvariants& inv, std::uint64_t k, Pairing p) {
    return closed_form(inv, k, p, true);
}

ExpectationResult corrected_closed_form(const GroupInvariants& inv, std::uint64_t k, Pairing p) {
    return closed_form(inv, k, p, false);
}

BoundPair action_expectation_bounds(std::uint64_t k, std::uint64_t h, std::uint64_t phi_size, ConstantMode mode) {
    if (phi_size < 2) throw DomainError("phi_size must be at least 2");
    BoundPair b;
    b.source = "action";
    b.constant_mode = mode;
    Rational kh(BigInt(k) * h);
    b.lower = kh;
    BigInt den = mode == ConstantMode::AS_PRINTED ? BigInt(2 * (phi_size - 1)) : BigInt(phi_size - 1);
    b.upper = kh * (1 + Rational(BigInt(k - 1) * (h - 1), den));
    return b;
}

ExpectationResult independent_action_expectation(const GroupAction& act, const Subset& f, const Subset& phi,
                                                 std::uint64_t k, std::uint64_t h, const Caps& caps) {
    const FiniteGroup& g = act.group();
    if (f.universe != g.order()) throw DomainError("F is not a subset of the group");
    if (phi.universe != act.domain_size()) throw DomainError("Phi is not a subset of the domain");
    check_k(k, f.size());
    check_k(h, phi.size());
    if (BigInt(f.size()) * f.size() * phi.size() > caps.action_triples)
        throw CapExceeded("|F|^2 |Phi| exceeds the enumeration cap");
    std::vector<char> in_phi(act.domain_size(), 0);
    for (auto w : phi.members) in_phi[w] = 1;
    // counts[s][t]: s = distinct among {a,b}, t = distinct among {g,d}
    std::uint64_t counts[3][3] = {};
    for (Element a : f.members)
        for (Element b : f.members) {
            Element binv = g.inv(b);
            for (auto w : phi.members) {
                std::uint32_t d = act.act(act.act(w, a), binv);
                if (!in_phi[d]) continue;
                ++counts[a == b ? 1 : 2][w == d ? 1 : 2];
            }
        }
    ExpectationResult r;
    r.k = k;
    r.universe_size = f.size();
    r.variant = Variant::ACTION;
    r.method = Method::BINOMIAL_Q;
    r.value = 0;
    for (int s = 1; s <= 2; ++s)
        for (int t = 1; t <= 2; ++t)
            if (counts[s][t])
                r.value += Rational(counts[s][t]) * inclusion_probability(f.size(), k, s) *
                           inclusion_probability(phi.size(), h, t);
    return r;
}

BoundPair multiplicative_bounds(std::uint64_t k, std::uint64_t f_size, std::uint64_t max_centralizer, Pairing p) {
    if (f_size < 5) throw DomainError("multiplicative bounds need |F| >= 5");
    const auto K = std::int64_t(k), f = std::int64_t(f_size), m = std::int64_t(max_centralizer);
    BoundPair b;
    b.constant_mode = ConstantMode::AS_PRINTED;
    Rational k4(falling(K, 4)), k3(falling(K, 3)), k2(falling(K, 2));
    if (p == Pairing::AA) {
        b.source = "multiplicative";
        b.upper = k4 / (f - 3) + k3 / Rational(falling(f - 1, 2)) * (4 * f - 2) +
                  k2 * (2 + Rational(m - 1, f - 1)) + K;
        b.lower = k4 / Rational(falling(f - 1, 3)) * (f * f - 5 * f + 2) +
                  k3 / Rational(falling(f - 1, 2)) * (f - m) + K * K;
    } else {
        b.source = "multiplicative_inverse";
        b.upper = k4 / (f - 3) + k3 / Rational(falling(f - 1, 2)) * (2 * f - 1) + 3 * K * K - 2 * K;
        b.lower = k4 / Rational(falling(f - 1, 3)) * (f * f - 4 * f + 2) + 2 * K * K - K;
    }
    return b;
}

Rational asymptotic_prediction_aa(const Rational& cp, const Rational& sq, std::uint64_t k) {
    if (cp < 0 || cp > 1 || sq < 0 || sq > 1) throw DomainError("densities must lie in [0,1]");
    Rational K(k);
    return (1 + cp + sq) * K * K - (cp + sq) * K;
}

Rational asymptotic_prediction_aainv(const Rational& iota_density, std::uint64_t k) {
    if (iota_density < 0 || iota_density > 1) throw DomainError("densities must lie in [0,1]");
    Rational K(k);
    return (2 + iota_density) * K * K - (1 + iota_density) * K;
}

}  // namespace rse
