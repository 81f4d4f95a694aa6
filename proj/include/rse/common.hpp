#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rse {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Error taxonomy. Each maps to its own CLI exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};
struct SpecError : Error {
    using Error::Error;
    const char* kind() const noexcept override { return "malformed_spec"; }
};
struct DomainError : Error {
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};
struct CapExceeded : Error {
    using Error::Error;
    const char* kind() const noexcept override { return "cap_exceeded"; }
};
struct InvariantViolation : Error {
    using Error::Error;
    const char* kind() const noexcept override { return "invariant_violation"; }
};

// Work limits for exact enumeration paths.
struct Caps {
    std::uint64_t triples = 30'000'000;       // |F|^3 for Q-partition enumeration
    std::uint64_t subsets = 10'000'000;       // C(|F|,k) for brute-force expectation
    std::uint64_t ball = 5'000'000;           // ball size in Cayley models
    std::uint64_t exact_pairs = 5'000;        // ball size up to which commuting pairs are counted exactly
    std::uint64_t action_triples = 100'000'000;  // |F|^2 |Phi| for the exact action expectation
    std::uint64_t group_order = 1'048'576;
};

// C(n, r) with C(n, r) = 0 whenever r < 0, r > n or n < 0.
BigInt binomial(std::int64_t n, std::int64_t r);

// n (n-1) ... (n-j+1); 1 for j = 0.
BigInt falling(std::int64_t n, std::int64_t j);

// Canonical "p/q" rendering (q = 1 is kept).
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& s);
double to_double(const Rational& q);

}  // namespace rse
