#include "rse/group.hpp"
#include "rse/rng.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <charconv>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace rse {

namespace {

std::string tuple_label(const std::vector<std::int64_t>& xs) {
    std::string out = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(xs[i]);
    }
    return out + ")";
}

std::string cycle_label(const std::vector<std::uint32_t>& p) {
    std::string out;
    std::vector<bool> seen(p.size(), false);
    for (std::uint32_t i = 0; i < p.size(); ++i) {
        if (seen[i] || p[i] == i) continue;
        out += "(";
        for (std::uint32_t j = i; !seen[j]; j = p[j]) {
            seen[j] = true;
            if (j != i) out += " ";
            out += std::to_string(j + 1);
        }
        out += ")";
    }
    return out.empty() ? "()" : out;
}

struct VecHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const {
        std::uint64_t h = 0x84222325cbf29ce4ULL;
        for (auto x : v) h = Rng::mix(h ^ x);
        return h;
    }
};

// Lexicographic rank of a permutation of 0..n-1 (Lehmer code).
std::uint32_t perm_rank(const std::uint32_t* p, std::uint32_t n) {
    std::uint32_t rank = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t smaller = 0;
        for (std::uint32_t j = i + 1; j < n; ++j) smaller += p[j] < p[i];
        rank = rank * (n - i) + smaller;
    }
    return rank;
}

std::uint32_t parse_uint(std::string_view s, std::string_view context) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw SpecError("bad integer '" + std::string(s) + "' in '" + std::string(context) + "'");
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace((unsigned char)s.front())) s.remove_prefix(1);
    while (!s.empty() && std::isspace((unsigned char)s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace

Element FiniteGroup::pow(Element g, std::uint64_t e) const {
    Element acc = identity_, base = g;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

void FiniteGroup::materialize() {
    std::vector<Element> t(std::size_t(order_) * order_);
    for (Element g = 0; g < order_; ++g)
        for (Element h = 0; h < order_; ++h) t[std::size_t(g) * order_ + h] = mul(g, h);
    table_ = std::move(t);
    backend_ = Backend::Table;
    mul_ = nullptr;
}

FiniteGroup FiniteGroup::from_table(std::string tag, std::vector<Element> table, LabelFn label,
                                    bool abelian) {
    auto n = std::uint32_t(std::llround(std::sqrt(double(table.size()))));
    if (n == 0 || std::size_t(n) * n != table.size()) throw SpecError("table is not square");
    std::vector<char> seen(n);
    for (std::uint32_t axis = 0; axis < 2; ++axis)
        for (std::uint32_t i = 0; i < n; ++i) {
            std::fill(seen.begin(), seen.end(), 0);
            for (std::uint32_t j = 0; j < n; ++j) {
                Element x = axis ? table[std::size_t(j) * n + i] : table[std::size_t(i) * n + j];
                if (x >= n || seen[x]) throw InvariantViolation("multiplication table is not a Latin square");
                seen[x] = 1;
            }
        }
    FiniteGroup g;
    g.order_ = n;
    g.tag_ = std::move(tag);
    g.table_ = std::move(table);
    g.backend_ = Backend::Table;
    g.abelian_ = abelian;
    g.label_ = label ? std::move(label) : LabelFn([](Element x) { return std::to_string(x); });
    bool found = false;
    for (Element e = 0; e < n && !found; ++e) {
        found = true;
        for (Element x = 0; x < n && found; ++x) found = g.table_[std::size_t(e) * n + x] == x;
        if (found) g.identity_ = e;
    }
    if (!found) throw InvariantViolation("no identity element");
    g.inv_.assign(n, 0);
    for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y)
            if (g.table_[std::size_t(x) * n + y] == g.identity_) g.inv_[x] = y;
    return g;
}

FiniteGroup FiniteGroup::from_callback(std::string tag, std::uint32_t order, Element identity, MulFn mul,
                                       std::vector<Element> inverses, LabelFn label, bool abelian) {
    FiniteGroup g;
    g.order_ = order;
    g.identity_ = identity;
    g.tag_ = std::move(tag);
    g.backend_ = Backend::Callback;
    g.mul_ = std::move(mul);
    g.inv_ = std::move(inverses);
    g.label_ = std::move(label);
    g.abelian_ = abelian;
    if (order <= kTableOrder) g.materialize();
    return g;
}

FiniteGroup FiniteGroup::cyclic(std::uint32_t n) {
    if (n < 1) throw SpecError("cyclic group needs n >= 1");
    FiniteGroup g;
    g.backend_ = Backend::Cyclic;
    g.order_ = n;
    g.param_ = n;
    g.abelian_ = true;
    g.tag_ = "cyclic:" + std::to_string(n);
    g.inv_.resize(n);
    for (Element x = 0; x < n; ++x) g.inv_[x] = x ? n - x : 0;
    g.label_ = [](Element x) { return "(" + std::to_string(x) + ")"; };
    return g;
}

FiniteGroup FiniteGroup::elementary_abelian_2(std::uint32_t m) {
    if (m < 1 || m > 20) throw SpecError("ea2 rank must be in 1..20");
    FiniteGroup g;
    g.backend_ = Backend::Xor;
    g.order_ = 1u << m;
    g.param_ = m;
    g.abelian_ = true;
    g.tag_ = "ea2:" + std::to_string(m);
    g.inv_.resize(g.order_);
    std::iota(g.inv_.begin(), g.inv_.end(), 0);
    g.label_ = [m](Element x) {
        std::vector<std::int64_t> bits;
        for (std::uint32_t i = 0; i < m; ++i) bits.push_back((x >> i) & 1);
        return tuple_label(bits);
    };
    return g;
}

FiniteGroup FiniteGroup::dihedral(std::uint32_t n) {
    if (n < 2 || n > 500'000) throw SpecError("dihedral group needs 2 <= n <= 500000");
    FiniteGroup g;
    g.backend_ = Backend::Dihedral;
    g.order_ = 2 * n;
    g.param_ = n;
    g.abelian_ = n == 2;
    g.tag_ = "dihedral:" + std::to_string(n);
    g.inv_.resize(g.order_);
    for (Element i = 0; i < n; ++i) {
        g.inv_[i] = i ? n - i : 0;
        g.inv_[i + n] = i + n;  // reflections are involutions
    }
    g.label_ = [n](Element x) {
        std::string r = "r^" + std::to_string(x % n);
        return x < n ? r : "s" + r;
    };
    return g;
}

FiniteGroup FiniteGroup::symmetric(std::uint32_t n) {
    if (n < 1 || n > 8) throw SpecError("symmetric group needs 1 <= n <= 8");
    std::vector<std::uint32_t> perms;  // flattened, lexicographic order
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    do perms.insert(perms.end(), p.begin(), p.end());
    while (std::next_permutation(p.begin(), p.end()));
    auto order = std::uint32_t(perms.size() / n);
    auto data = std::make_shared<const std::vector<std::uint32_t>>(std::move(perms));

    // (g h)(x) = h(g(x)): permutations act on the right.
    auto mul = [data, n](Element g, Element h) {
        std::uint32_t out[8];
        const std::uint32_t* pg = data->data() + std::size_t(g) * n;
        const std::uint32_t* ph = data->data() + std::size_t(h) * n;
        for (std::uint32_t x = 0; x < n; ++x) out[x] = ph[pg[x]];
        return perm_rank(out, n);
    };
    std::vector<Element> inv(order);
    for (Element g = 0; g < order; ++g) {
        std::uint32_t out[8];
        const std::uint32_t* pg = data->data() + std::size_t(g) * n;
        for (std::uint32_t x = 0; x < n; ++x) out[pg[x]] = x;
        inv[g] = perm_rank(out, n);
    }
    auto label = [data, n](Element g) {
        std::vector<std::uint32_t> v(data->begin() + std::size_t(g) * n, data->begin() + std::size_t(g + 1) * n);
        return cycle_label(v);
    };
    return from_callback("sym:" + std::to_string(n), order, 0, mul, std::move(inv), label, n <= 2);
}

FiniteGroup FiniteGroup::gl2(std::uint32_t q) {
    if (q != 2 && q != 3 && q != 5 && q != 7) throw SpecError("gl2 supports q in {2,3,5,7}");
    std::vector<std::array<std::uint32_t, 4>> mats;
    std::vector<std::int32_t> index(q * q * q * q, -1);
    for (std::uint32_t a = 0; a < q; ++a)
        for (std::uint32_t b = 0; b < q; ++b)
            for (std::uint32_t c = 0; c < q; ++c)
                for (std::uint32_t d = 0; d < q; ++d)
                    if ((a * d + q * q - b * c) % q != 0) {
                        index[((a * q + b) * q + c) * q + d] = std::int32_t(mats.size());
                        mats.push_back({a, b, c, d});
                    }
    if (mats.size() != (q * q - 1) * (q * q - q))
        throw InvariantViolation("GL2 enumeration produced the wrong number of matrices");
    auto order = std::uint32_t(mats.size());
    auto key = [q](std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
        return ((a * q + b) * q + c) * q + d;
    };
    std::vector<Element> table(std::size_t(order) * order);
    for (Element x = 0; x < order; ++x)
        for (Element y = 0; y < order; ++y) {
            auto& m = mats[x];
            auto& n = mats[y];
            table[std::size_t(x) * order + y] =
                Element(index[key((m[0] * n[0] + m[1] * n[2]) % q, (m[0] * n[1] + m[1] * n[3]) % q,
                                  (m[2] * n[0] + m[3] * n[2]) % q, (m[2] * n[1] + m[3] * n[3]) % q)]);
        }
    auto label = [mats](Element x) {
        auto& m = mats[x];
        return "[[" + std::to_string(m[0]) + "," + std::to_string(m[1]) + "],[" + std::to_string(m[2]) + "," +
               std::to_string(m[3]) + "]]";
    };
    return from_table("gl2:" + std::to_string(q), std::move(table), label, false);
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    std::uint64_t order = std::uint64_t(a.order()) * b.order();
    if (order > (1ull << 31)) throw CapExceeded("direct product too large");
    auto pa = std::make_shared<const FiniteGroup>(a);
    auto pb = std::make_shared<const FiniteGroup>(b);
    std::uint32_t nb = b.order();
    auto mul = [pa, pb, nb](Element x, Element y) {
        return pa->mul(x / nb, y / nb) * nb + pb->mul(x % nb, y % nb);
    };
    std::vector<Element> inv(order);
    for (Element x = 0; x < order; ++x) inv[x] = a.inv(x / nb) * nb + b.inv(x % nb);
    auto label = [pa, pb, nb](Element x) { return "(" + pa->label(x / nb) + "," + pb->label(x % nb) + ")"; };
    return from_callback("prod(" + a.tag() + "," + b.tag() + ")", std::uint32_t(order),
                         a.identity() * nb + b.identity(), mul, std::move(inv), label,
                         a.is_abelian() && b.is_abelian());
}

FiniteGroup FiniteGroup::perm_closure(const std::vector<std::vector<std::uint32_t>>& generators,
                                      std::uint64_t cap) {
    if (generators.empty()) throw SpecError("perm closure needs at least one generator");
    std::size_t d = generators[0].size();
    for (auto& g : generators) {
        if (g.size() != d) throw SpecError("generators act on different degrees");
        std::vector<std::uint32_t> sorted = g;
        std::sort(sorted.begin(), sorted.end());
        for (std::uint32_t i = 0; i < d; ++i)
            if (sorted[i] != i) throw SpecError("generator is not a permutation of 0..d-1");
    }
    auto compose = [d](const std::vector<std::uint32_t>& g, const std::vector<std::uint32_t>& h) {
        std::vector<std::uint32_t> out(d);
        for (std::size_t x = 0; x < d; ++x) out[x] = h[g[x]];
        return out;
    };
    struct Data {
        std::vector<std::vector<std::uint32_t>> perms;
        std::unordered_map<std::vector<std::uint32_t>, Element, VecHash> index;
    };
    auto data = std::make_shared<Data>();
    std::vector<std::uint32_t> id(d);
    std::iota(id.begin(), id.end(), 0);
    data->perms.push_back(id);
    data->index.emplace(id, 0);
    for (std::size_t head = 0; head < data->perms.size(); ++head)
        for (auto& s : generators) {
            auto next = compose(data->perms[head], s);
            if (data->index.count(next)) continue;
            if (data->perms.size() >= cap) throw CapExceeded("permutation closure exceeds cap");
            data->index.emplace(next, Element(data->perms.size()));
            data->perms.push_back(std::move(next));
        }
    auto order = std::uint32_t(data->perms.size());
    std::shared_ptr<const Data> cdata = data;
    auto mul = [cdata, compose](Element g, Element h) {
        return cdata->index.at(compose(cdata->perms[g], cdata->perms[h]));
    };
    std::vector<Element> inv(order);
    for (Element g = 0; g < order; ++g) {
        std::vector<std::uint32_t> out(d);
        for (std::size_t x = 0; x < d; ++x) out[cdata->perms[g][x]] = std::uint32_t(x);
        inv[g] = cdata->index.at(out);
    }
    auto label = [cdata](Element g) { return cycle_label(cdata->perms[g]); };
    bool abelian = true;
    for (auto& a : generators)
        for (auto& b : generators) abelian = abelian && compose(a, b) == compose(b, a);
    return from_callback("perm-closure", order, 0, mul, std::move(inv), label, abelian);
}

namespace {

bool starts_family(std::string_view s) {
    for (std::string_view f : {"cyclic:", "ea2:", "dihedral:", "sym:", "gl2:", "perm:", "prod("})
        if (s.substr(0, f.size()) == f) return true;
    return false;
}

FiniteGroup parse_impl(std::string_view spec, std::uint64_t max_order) {
    spec = trim(spec);
    if (spec.substr(0, 5) == "prod(" && spec.back() == ')') {
        std::string_view inner = spec.substr(5, spec.size() - 6);
        int depth = 0;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (inner[i] == '(') ++depth;
            if (inner[i] == ')') --depth;
            if (inner[i] == ',' && depth == 0 && starts_family(trim(inner.substr(i + 1)))) {
                auto a = parse_impl(inner.substr(0, i), max_order);
                auto b = parse_impl(inner.substr(i + 1), max_order);
                if (std::uint64_t(a.order()) * b.order() > max_order)
                    throw CapExceeded("group order exceeds cap");
                return FiniteGroup::direct_product(a, b);
            }
        }
        throw SpecError("prod(...) needs two comma-separated factors: '" + std::string(spec) + "'");
    }
    auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw SpecError("group spec needs family:parameter, got '" + std::string(spec) + "'");
    std::string_view family = trim(spec.substr(0, colon));
    std::string_view arg = trim(spec.substr(colon + 1));
    auto check = [&](std::uint64_t order) {
        if (order > max_order) throw CapExceeded("group order " + std::to_string(order) + " exceeds cap");
    };
    if (family == "perm") {
        std::vector<std::vector<std::uint32_t>> gens;
        std::size_t start = 0;
        while (start <= arg.size()) {
            auto bar = arg.find('|', start);
            std::string_view one = arg.substr(start, bar == std::string_view::npos ? arg.npos : bar - start);
            std::vector<std::uint32_t> images;
            std::size_t s = 0;
            while (s <= one.size()) {
                auto comma = one.find(',', s);
                images.push_back(parse_uint(trim(one.substr(s, comma == one.npos ? one.npos : comma - s)), spec));
                if (comma == one.npos) break;
                s = comma + 1;
            }
            gens.push_back(std::move(images));
            if (bar == std::string_view::npos) break;
            start = bar + 1;
        }
        return FiniteGroup::perm_closure(gens, max_order);
    }
    std::uint32_t p = parse_uint(arg, spec);
    if (family == "cyclic") {
        check(p);
        return FiniteGroup::cyclic(p);
    }
    if (family == "ea2") {
        if (p >= 1 && p <= 20) check(1ull << p);
        return FiniteGroup::elementary_abelian_2(p);
    }
    if (family == "dihedral") {
        check(2ull * p);
        return FiniteGroup::dihedral(p);
    }
    if (family == "sym") {
        std::uint64_t f = 1;
        for (std::uint32_t i = 2; i <= p && i <= 9; ++i) f *= i;
        check(f);
        return FiniteGroup::symmetric(p);
    }
    if (family == "gl2") return FiniteGroup::gl2(p);
    throw SpecError("unknown group family '" + std::string(family) + "'");
}

}  // namespace

FiniteGroup parse_group(std::string_view spec, std::uint64_t max_order) {
    return parse_impl(spec, max_order);
}

GroupPtr make_group(std::string_view spec, std::uint64_t max_order) {
    return std::make_shared<const FiniteGroup>(parse_group(spec, max_order));
}

Subset::Subset(std::uint32_t universe_size, std::vector<Element> elems) : universe(universe_size) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (!elems.empty() && elems.back() >= universe_size)
        throw DomainError("subset member " + std::to_string(elems.back()) + " outside universe of size " +
                          std::to_string(universe_size));
    members = std::move(elems);
}

bool Subset::contains(Element x) const {
    return std::binary_search(members.begin(), members.end(), x);
}

Subset parse_subset(std::string_view text, std::uint32_t universe) {
    std::vector<Element> out;
    std::size_t s = 0;
    text = trim(text);
    if (text.empty()) return Subset(universe, {});
    while (s <= text.size()) {
        auto comma = text.find(',', s);
        out.push_back(parse_uint(trim(text.substr(s, comma == text.npos ? text.npos : comma - s)), text));
        if (comma == text.npos) break;
        s = comma + 1;
    }
    return Subset(universe, std::move(out));
}

GroupAction GroupAction::regular(GroupPtr g) {
    GroupAction a;
    a.domain_ = g->order();
    a.group_ = std::move(g);
    a.regular_ = true;
    return a;
}

GroupAction GroupAction::from_table(GroupPtr g, std::uint32_t domain, std::vector<std::uint32_t> table) {
    if (domain == 0 || table.size() != std::size_t(domain) * g->order())
        throw SpecError("action table has the wrong shape");
    GroupAction a;
    a.group_ = std::move(g);
    a.domain_ = domain;
    a.table_ = std::move(table);
    const FiniteGroup& G = *a.group_;
    for (auto x : a.table_)
        if (x >= domain) throw InvariantViolation("action table maps outside the domain");
    for (std::uint32_t w = 0; w < domain; ++w)
        if (a.act(w, G.identity()) != w) throw InvariantViolation("identity does not act trivially");
    std::uint64_t work = std::uint64_t(domain) * G.order() * G.order();
    Rng rng(0x5eed);
    std::uint64_t checks = std::min<std::uint64_t>(work, 10'000'000);
    for (std::uint64_t i = 0; i < checks; ++i) {
        std::uint32_t w;
        Element x, y;
        if (work <= 10'000'000) {
            w = std::uint32_t(i / (std::uint64_t(G.order()) * G.order()));
            x = Element(i / G.order() % G.order());
            y = Element(i % G.order());
        } else {
            w = std::uint32_t(rng.below(domain));
            x = Element(rng.below(G.order()));
            y = Element(rng.below(G.order()));
        }
        if (a.act(a.act(w, x), y) != a.act(w, G.mul(x, y)))
            throw InvariantViolation("action table is not compatible with the group law");
    }
    return a;
}

std::vector<std::string> check_group_axioms(const FiniteGroup& g, std::uint64_t seed) {
    std::vector<std::string> issues;
    const std::uint32_t n = g.order();
    const Element e = g.identity();
    Rng rng = Rng::stream(seed, 0);
    // Latin square: full for moderate orders, sampled rows/columns otherwise.
    std::vector<std::uint32_t> stamp(n, 0);
    std::uint32_t lines = n <= 4096 ? n : 64, tick = 0;
    for (std::uint32_t axis = 0; axis < 2; ++axis)
        for (std::uint32_t i = 0; i < lines; ++i) {
            Element r = n <= 4096 ? i : Element(rng.below(n));
            ++tick;
            for (Element x = 0; x < n; ++x) {
                Element v = axis ? g.mul(x, r) : g.mul(r, x);
                if (v >= n || stamp[v] == tick) {
                    issues.push_back((axis ? "column " : "row ") + std::to_string(r) + " is not a permutation");
                    break;
                }
                stamp[v] = tick;
            }
        }
    for (Element x = 0; x < n; ++x) {
        if (g.mul(e, x) != x || g.mul(x, e) != x) {
            issues.push_back("identity fails at " + std::to_string(x));
            break;
        }
        if (g.mul(x, g.inv(x)) != e || g.mul(g.inv(x), x) != e) {
            issues.push_back("inverse fails at " + std::to_string(x));
            break;
        }
    }
    auto assoc = [&](Element a, Element b, Element c) { return g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)); };
    if (n <= 64) {
        for (Element a = 0; a < n; ++a)
            for (Element b = 0; b < n; ++b)
                for (Element c = 0; c < n; ++c)
                    if (!assoc(a, b, c)) {
                        issues.push_back("associativity fails");
                        return issues;
                    }
    } else {
        for (int i = 0; i < 100'000; ++i)
            if (!assoc(Element(rng.below(n)), Element(rng.below(n)), Element(rng.below(n)))) {
                issues.push_back("associativity fails");
                break;
            }
    }
    return issues;
}

}  // namespace rse
