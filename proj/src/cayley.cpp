#include "rse/cayley.hpp"

#include <algorithm>
#include <charconv>

namespace rse {

FreeGroupModel::FreeGroupModel(int rank) : rank_(rank) {
    if (rank < 1 || rank > 26) throw SpecError("free group rank must be in 1..26");
}

FreeGroupModel::Elem FreeGroupModel::multiply(const Elem& x, const Elem& y) const {
    // cancel the longest suffix of x against the prefix of y
    std::size_t c = 0;
    while (c < x.size() && c < y.size() && x[x.size() - 1 - c] == -y[c]) ++c;
    Elem out;
    out.reserve(x.size() + y.size() - 2 * c);
    out.insert(out.end(), x.begin(), x.end() - c);
    out.insert(out.end(), y.begin() + c, y.end());
    return out;
}

FreeGroupModel::Elem FreeGroupModel::inverse(const Elem& x) const {
    Elem out(x.rbegin(), x.rend());
    for (auto& l : out) l = std::int8_t(-l);
    return out;
}

std::vector<FreeGroupModel::Elem> FreeGroupModel::generators() const {
    std::vector<Elem> out;
    for (int i = 1; i <= rank_; ++i) {
        out.push_back({std::int8_t(i)});
        out.push_back({std::int8_t(-i)});
    }
    return out;
}

std::string FreeGroupModel::format(const Elem& x) const {
    if (x.empty()) return "1";
    std::string out;
    for (auto l : x) out += char(l > 0 ? 'a' + (l - 1) : 'A' + (-l - 1));
    return out;
}

LatticeModel::LatticeModel(int dim) : dim_(dim) {
    if (dim < 1 || dim > 8) throw SpecError("lattice dimension must be in 1..8");
}

LatticeModel::Elem LatticeModel::multiply(const Elem& x, const Elem& y) const {
    Elem out(x);
    for (int i = 0; i < dim_; ++i) out[i] += y[i];
    return out;
}

LatticeModel::Elem LatticeModel::inverse(const Elem& x) const {
    Elem out(x);
    for (auto& v : out) v = -v;
    return out;
}

std::vector<LatticeModel::Elem> LatticeModel::generators() const {
    std::vector<Elem> out;
    for (int i = 0; i < dim_; ++i)
        for (int s : {1, -1}) {
            Elem e(dim_, 0);
            e[i] = s;
            out.push_back(e);
        }
    return out;
}

namespace {

template <class V>
std::string join(const V& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out + ")";
}

}  // namespace

std::string LatticeModel::format(const Elem& x) const {
    return join(x);
}

std::string HeisenbergModel::format(const Elem& x) const {
    return join(x);
}

LamplighterModel::Elem LamplighterModel::multiply(const Elem& x, const Elem& y) const {
    Elem out;
    out.cursor = x.cursor + y.cursor;
    out.lamps.reserve(x.lamps.size() + y.lamps.size());
    auto i = x.lamps.begin();
    auto j = y.lamps.begin();
    while (i != x.lamps.end() || j != y.lamps.end()) {
        if (j == y.lamps.end() || (i != x.lamps.end() && *i < *j + x.cursor)) {
            out.lamps.push_back(*i++);
        } else if (i == x.lamps.end() || *j + x.cursor < *i) {
            out.lamps.push_back(*j++ + x.cursor);
        } else {
            ++i;
            ++j;
        }
    }
    return out;
}

LamplighterModel::Elem LamplighterModel::inverse(const Elem& x) const {
    Elem out;
    out.cursor = -x.cursor;
    out.lamps.reserve(x.lamps.size());
    for (auto p : x.lamps) out.lamps.push_back(p - x.cursor);
    return out;
}

std::string LamplighterModel::format(const Elem& x) const {
    std::string lamps = "{";
    for (std::size_t i = 0; i < x.lamps.size(); ++i) lamps += (i ? "," : "") + std::to_string(x.lamps[i]);
    return "t=" + std::to_string(x.cursor) + ";" + lamps + "}";
}

namespace {

std::size_t combine(std::uint64_t h, std::uint64_t v) {
    return Rng::mix(h ^ (v + 0x9e3779b97f4a7c15ULL));
}

}  // namespace

std::size_t ElemHash::operator()(const std::vector<std::int8_t>& v) const {
    std::uint64_t h = v.size();
    for (auto x : v) h = combine(h, std::uint8_t(x));
    return h;
}

std::size_t ElemHash::operator()(const std::vector<std::int32_t>& v) const {
    std::uint64_t h = v.size();
    for (auto x : v) h = combine(h, std::uint32_t(x));
    return h;
}

std::size_t ElemHash::operator()(const std::array<std::int64_t, 3>& v) const {
    std::uint64_t h = 3;
    for (auto x : v) h = combine(h, std::uint64_t(x));
    return h;
}

std::size_t ElemHash::operator()(const LampState& v) const {
    std::uint64_t h = combine(v.lamps.size(), std::uint32_t(v.cursor));
    for (auto x : v.lamps) h = combine(h, std::uint32_t(x));
    return h;
}

AnyModel parse_model(std::string_view spec) {
    auto colon = spec.find(':');
    std::string_view family = spec.substr(0, colon);
    int param = 0;
    if (colon != std::string_view::npos) {
        std::string_view arg = spec.substr(colon + 1);
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), param);
        if (ec != std::errc() || ptr != arg.data() + arg.size())
            throw SpecError("bad model parameter in '" + std::string(spec) + "'");
    }
    if (family == "free" && colon != std::string_view::npos) return FreeGroupModel(param);
    if (family == "lattice" && colon != std::string_view::npos) return LatticeModel(param);
    if (family == "heisenberg" && colon == std::string_view::npos) return HeisenbergModel{};
    if (family == "lamplighter" && colon == std::string_view::npos) return LamplighterModel{};
    throw SpecError("unknown model '" + std::string(spec) + "' (free:r, lattice:d, heisenberg, lamplighter)");
}

std::string model_name(const AnyModel& m) {
    return std::visit([](const auto& x) { return x.name(); }, m);
}

BigInt free_ball_size(int rank, std::uint64_t n) {
    if (rank == 1) return BigInt(2 * n + 1);
    BigInt p = 1;
    for (std::uint64_t i = 0; i < n; ++i) p *= 2 * rank - 1;
    return 1 + BigInt(2 * rank) * (p - 1) / (2 * rank - 2);
}

BigInt lattice_ball_size(int dim, std::uint64_t n) {
    BigInt total = 0;
    for (int i = 0; i <= dim; ++i) total += (BigInt(1) << i) * binomial(dim, i) * binomial(std::int64_t(n), i);
    return total;
}

std::shared_ptr<const SubsetUniverse> make_ball_universe(const AnyModel& m, std::size_t n, const Caps& caps) {
    return std::visit(
        [&](const auto& model) -> std::shared_ptr<const SubsetUniverse> {
            using M = std::decay_t<decltype(model)>;
            auto ball = build_ball(model, n, caps.ball);
            return std::make_shared<BallUniverse<M>>(model, std::move(ball.elements));
        },
        m);
}

DensityProfile density_profile(const AnyModel& m, std::size_t n_max, const ProfileOptions& opt) {
    return std::visit([&](const auto& model) { return density_profile(model, n_max, opt); }, m);
}

QPartitionCounts interval_q_partition(std::int64_t n, Pairing p) {
    if (n < 0) throw DomainError("radius must be non-negative");
    const std::int64_t N = 2 * n + 1;
    auto in = [n](std::int64_t x) { return x >= -n && x <= n; };
    // number of c in [-n, n] with c + t in [-n, n]
    auto shifted = [n](std::int64_t t) { return std::max<std::int64_t>(0, 2 * n + 1 - std::abs(t)); };
    enum { S11, S12, S13, S2, S31, S32, S41, S42, S5 };
    enum { T11, T12, T2, T31, T32, T4, T5 };
    std::vector<std::uint64_t> cnt(9, 0), done(9, 0);
    auto add = [&](int s, std::int64_t c, std::int64_t d) {
        cnt[s] += std::uint64_t(c);
        done[s] += std::uint64_t(d);
    };
    for (std::int64_t a = -n; a <= n; ++a)
        for (std::int64_t b = -n; b <= n; ++b) {
            if (p == Pairing::AA) {
                if (a == b) {
                    add(S5, 1, 1);
                    // (a, a, c): d = 2a - c, and 2a = 2c forces c = a
                    add(S42, N - 1, shifted(2 * a) - 1);
                    continue;
                }
                const std::int64_t s = a + b;
                const bool even = s % 2 == 0;
                add(S2, 1, 1);
                add(S31, 1, 1);
                if (even) add(S12, 1, 1);
                // c outside {a, b, s/2}; d = s - c
                add(S13, N - 2 - even, shifted(s) - 2 - even);
            } else {
                if (a == b) {
                    add(T5, 1, 1);
                    add(T4, N - 1, N - 1);
                    continue;
                }
                const std::int64_t t = b - a;  // d = c + t
                add(T2, 1, 1);
                add(T32, 1, in(2 * b - a));
                const bool back = in(2 * a - b);  // c = 2a - b gives d = a
                if (back) add(T11, 1, 1);
                add(T12, N - 2 - back, shifted(t) - 1 - in(2 * b - a) - back);
            }
        }
    QPartitionCounts q = empty_partition(p, std::uint64_t(N));
    for (std::size_t s = 0; s < q.classes.size(); ++s) {
        q.classes[s].count = cnt[s];
        q.classes[s].completed = done[s];
    }
    return q;
}

QPartitionCounts ball_q_partition(const AnyModel& m, std::size_t n, Pairing p, const Caps& caps) {
    return std::visit([&](const auto& model) { return ball_q_partition(model, n, p, caps); }, m);
}

ExpectationResult finite_filtration_expectation(const AnyModel& m, std::size_t n, std::uint64_t k, Pairing p,
                                                const Caps& caps) {
    return expected_energy(ball_q_partition(m, n, p, caps), k);
}

McEstimate ball_energy_mc(const AnyModel& m, std::size_t n, Pairing p, const SamplingConfig& cfg, const Caps& caps) {
    auto u = make_ball_universe(m, n, caps);
    auto stat = make_statistic(p == Pairing::AA ? "ENERGY_AA" : "ENERGY_AAINV", u);
    return mc_expected(*u, cfg, stat);
}

}  // namespace rse
