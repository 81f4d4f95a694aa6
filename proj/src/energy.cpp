#include "rse/energy.hpp"

#include <algorithm>

namespace rse {

namespace {

template <class Act>
EnergyReport energy_impl(const Subset& a, const Subset& d, Act act) {
    EnergyReport rep;
    rep.a_size = a.size();
    rep.delta_size = d.size();
    std::vector<std::uint32_t> images;
    images.reserve(a.size() * d.size());
    for (Element w : d.members)
        for (Element x : a.members) images.push_back(act(w, x));
    std::sort(images.begin(), images.end());
    for (std::size_t i = 0; i < images.size();) {
        std::size_t j = i;
        while (j < images.size() && images[j] == images[i]) ++j;
        std::uint64_t r = j - i;
        rep.histogram.emplace_back(images[i], r);
        rep.energy += r * r;
        i = j;
    }
    rep.image_size = rep.histogram.size();
    if (rep.image_size) {
        BigInt num = BigInt(rep.a_size) * rep.a_size * rep.delta_size * rep.delta_size;
        rep.cs_lower_bound = Rational(num, BigInt(rep.image_size));
    }

    if (a.size() * d.size() <= 1000) {
        std::uint64_t quartic = 0;
        for (Element x : a.members)
            for (Element y : a.members)
                for (Element g : d.members)
                    for (Element h : d.members) quartic += act(g, x) == act(h, y);
        if (quartic != rep.energy)
            throw InvariantViolation("histogram energy disagrees with the direct quadruple count");
    }
    return rep;
}

void check_universe(const Subset& s, std::uint32_t n, const char* what) {
    if (s.universe != n)
        throw DomainError(std::string(what) + " lives in a universe of size " + std::to_string(s.universe) +
                          ", expected " + std::to_string(n));
}

}  // namespace

EnergyReport action_energy(const Subset& a, const Subset& d, const GroupAction& act) {
    check_universe(a, act.group().order(), "A");
    check_universe(d, act.domain_size(), "D");
    return energy_impl(a, d, [&](std::uint32_t w, Element x) { return act.act(w, x); });
}

EnergyReport multiplicative_energy(const Subset& a, const Subset& b, const FiniteGroup& g) {
    check_universe(a, g.order(), "A");
    check_universe(b, g.order(), "B");
    return energy_impl(a, b, [&](Element w, Element x) { return g.mul(w, x); });
}

Subset product_set(const Subset& a, const Subset& b, const FiniteGroup& g) {
    check_universe(a, g.order(), "A");
    check_universe(b, g.order(), "B");
    std::vector<Element> out;
    out.reserve(a.size() * b.size());
    for (Element x : a.members)
        for (Element y : b.members) out.push_back(g.mul(x, y));
    return Subset(g.order(), std::move(out));
}

Subset inverse_set(const Subset& a, const FiniteGroup& g) {
    std::vector<Element> out;
    for (Element x : a.members) out.push_back(g.inv(x));
    return Subset(g.order(), std::move(out));
}

Subset translate_right(const Subset& a, Element x, const FiniteGroup& g) {
    std::vector<Element> out;
    for (Element y : a.members) out.push_back(g.mul(y, x));
    return Subset(g.order(), std::move(out));
}

Subset translate_left(Element x, const Subset& a, const FiniteGroup& g) {
    std::vector<Element> out;
    for (Element y : a.members) out.push_back(g.mul(x, y));
    return Subset(g.order(), std::move(out));
}

Rational normalized_energy(const Subset& a, const Subset& d, const GroupAction& act, Normalization mode) {
    auto rep = action_energy(a, d, act);
    BigInt den;
    if (mode == Normalization::GLOBAL) {
        den = BigInt(act.group().order()) * act.group().order() * act.domain_size();
    } else {
        if (a.size() == 0 || d.size() == 0) throw DomainError("LOCAL normalization needs nonempty A and D");
        den = BigInt(a.size()) * a.size() * d.size();
    }
    return Rational(BigInt(rep.energy), den);
}

Rational cs_growth_bound(const EnergyReport& report) {
    if (report.energy == 0) throw DomainError("zero energy: A or D is empty");
    BigInt num = BigInt(report.a_size) * report.a_size * report.delta_size * report.delta_size;
    return Rational(num, BigInt(report.energy));
}

}  // namespace rse
