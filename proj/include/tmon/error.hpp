#pragma once

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace tmon {

/// Arbitrary-size natural number. Used for element codes of objects such as
/// P(P(P(X))) whose cardinality does not fit in a machine word.
using Nat = boost::multiprecision::cpp_int;

/// Canonical element of a finite set 0..n-1.
using Elem = std::uint32_t;

// Error hierarchy. The CLI maps each class onto a distinct exit code.

/// Malformed input: mismatched domains, bad tables, invalid descriptors.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation's documented precondition does not hold.
class PreconditionViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A product, hom-set or solution set would exceed the enumeration cap.
class EnumerationTooLarge : public std::runtime_error {
public:
    explicit EnumerationTooLarge(const std::string& what)
        : std::runtime_error("enumeration too large: " + what) {}
};

/// Something that must hold by construction did not. Always a bug.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Restricted unit/map/multiplication of a terminal monad left the
/// equalizer. Carries a human-readable witness.
class StructureTransportFailed : public std::runtime_error {
public:
    explicit StructureTransportFailed(const std::string& what)
        : std::runtime_error("structure transport failed: " + what) {}
};

namespace detail {
inline std::atomic<std::uint64_t>& cap_storage() {
    static std::atomic<std::uint64_t> cap{std::uint64_t{1} << 24};
    return cap;
}
}  // namespace detail

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

inline std::uint64_t enumeration_cap() { return detail::cap_storage().load(); }

inline void set_enumeration_cap(std::uint64_t cap) {
    if (cap == 0) throw StructuralError("enumeration cap must be positive");
    detail::cap_storage().store(cap);
}

/// Temporarily replaces the global enumeration cap.
class ScopedEnumerationCap {
public:
    explicit ScopedEnumerationCap(std::uint64_t cap) : saved_(enumeration_cap()) {
        set_enumeration_cap(cap);
    }
    ~ScopedEnumerationCap() { detail::cap_storage().store(saved_); }
    ScopedEnumerationCap(const ScopedEnumerationCap&) = delete;
    ScopedEnumerationCap& operator=(const ScopedEnumerationCap&) = delete;

private:
    std::uint64_t saved_;
};

/// Throws unless `count` fits under the cap. `what` names the offending set.
inline void check_cap(const Nat& count, const std::string& what) {
    if (count > enumeration_cap())
        throw EnumerationTooLarge(what + " has " + count.str() + " elements (cap " +
                                  std::to_string(enumeration_cap()) + ")");
}

/// base^exp, saturating at cap+1 so callers can test against the cap without
/// materialising astronomically large numbers.
inline std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
    const std::uint64_t limit = enumeration_cap() + 1;
    if (exp == 0) return 1;
    if (base <= 1) return base;
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (r > limit / base) return limit;
        r *= base;
    }
    return r;
}

}  // namespace tmon
