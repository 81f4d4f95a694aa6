#pragma once

#include "rse/common.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rse {

using Element = std::uint32_t;

/**
 * A finite group on the indices 0..order-1.
 *
 * Small groups carry a full multiplication table. Large cyclic and
 * elementary abelian groups multiply arithmetically, and the remaining
 * large families fall back to a composition callback. Inverses are always
 * tabulated.
 */
class FiniteGroup {
public:
    using MulFn = std::function<Element(Element, Element)>;
    using LabelFn = std::function<std::string(Element)>;

    // Orders up to this bound get a materialized table.
    static constexpr std::uint32_t kTableOrder = 2048;

    std::uint32_t order() const { return order_; }
    Element identity() const { return identity_; }
    Element inv(Element g) const { return inv_[g]; }
    const std::vector<Element>& inverses() const { return inv_; }
    std::string label(Element g) const { return label_(g); }
    const std::string& tag() const { return tag_; }
    bool is_abelian() const { return abelian_; }
    bool has_table() const { return backend_ == Backend::Table; }

    Element mul(Element g, Element h) const {
        switch (backend_) {
        case Backend::Table:
            return table_[std::size_t(g) * order_ + h];
        case Backend::Cyclic: {
            Element s = g + h;
            return s >= order_ ? s - order_ : s;
        }
        case Backend::Xor:
            return g ^ h;
        case Backend::Dihedral: {
            // index i + n j  <->  r^i s^j
            Element n = param_, i = g % n, j = g / n, k = h % n, l = h / n;
            Element rot = j ? (i + n - k) % n : (i + k) % n;
            return rot + n * (j ^ l);
        }
        case Backend::Callback:
            return mul_(g, h);
        }
        return 0;
    }

    Element pow(Element g, std::uint64_t e) const;

    // Build from a full table (row-major, order x order). Validates the
    // Latin-square property and finds identity and inverses.
    static FiniteGroup from_table(std::string tag, std::vector<Element> table, LabelFn label,
                                  bool abelian = false);
    // Build from a composition callback. The table is materialized when the
    // order is at most kTableOrder.
    static FiniteGroup from_callback(std::string tag, std::uint32_t order, Element identity,
                                     MulFn mul, std::vector<Element> inverses, LabelFn label,
                                     bool abelian);

    static FiniteGroup cyclic(std::uint32_t n);
    static FiniteGroup elementary_abelian_2(std::uint32_t m);
    static FiniteGroup dihedral(std::uint32_t n);
    static FiniteGroup symmetric(std::uint32_t n);
    static FiniteGroup gl2(std::uint32_t q);
    static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);
    // Closure of the given permutations (image arrays on 0..d-1) under composition.
    static FiniteGroup perm_closure(const std::vector<std::vector<std::uint32_t>>& generators,
                                    std::uint64_t cap = 1'000'000);

private:
    enum class Backend : std::uint8_t { Table, Cyclic, Xor, Dihedral, Callback };

    void materialize();

    Backend backend_ = Backend::Table;
    std::uint32_t order_ = 0;
    std::uint32_t param_ = 0;
    Element identity_ = 0;
    bool abelian_ = false;
    std::string tag_;
    std::vector<Element> table_;
    std::vector<Element> inv_;
    MulFn mul_;
    LabelFn label_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Parses the group mini-language: cyclic:6, ea2:4, dihedral:5, sym:4, gl2:3,
// prod(sym:3,cyclic:2), perm:1,0,2|1,2,0 (image arrays separated by '|').
FiniteGroup parse_group(std::string_view spec, std::uint64_t max_order = 1'048'576);
GroupPtr make_group(std::string_view spec, std::uint64_t max_order = 1'048'576);

// A subset of a finite universe, stored as sorted distinct indices.
struct Subset {
    std::uint32_t universe = 0;
    std::vector<Element> members;

    Subset() = default;
    Subset(std::uint32_t universe_size, std::vector<Element> elems);
    std::size_t size() const { return members.size(); }
    bool contains(Element x) const;
};

Subset parse_subset(std::string_view text, std::uint32_t universe);

/**
 * Right action of a group on 0..domain-1, omega . g. The regular action is
 * kept implicit (omega . g = omega g) so it never needs a table.
 */
class GroupAction {
public:
    static GroupAction regular(GroupPtr g);
    static GroupAction from_table(GroupPtr g, std::uint32_t domain, std::vector<std::uint32_t> table);

    std::uint32_t act(std::uint32_t omega, Element g) const {
        return regular_ ? group_->mul(omega, g) : table_[std::size_t(omega) * group_->order() + g];
    }
    std::uint32_t domain_size() const { return domain_; }
    const FiniteGroup& group() const { return *group_; }
    const GroupPtr& group_ptr() const { return group_; }
    bool is_regular() const { return regular_; }

private:
    GroupPtr group_;
    std::uint32_t domain_ = 0;
    bool regular_ = false;
    std::vector<std::uint32_t> table_;
};

// Axiom checks; returns human-readable violations (empty when the group is fine).
std::vector<std::string> check_group_axioms(const FiniteGroup& g, std::uint64_t seed = 1);

}  // namespace rse
