#pragma once

#include <cstdint>
#include <stdexcept>

namespace padiq {

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for n < 3.3e14 (witness set 2..37 covers far beyond).
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

}  // namespace detail

// A verified prime. Construction runs a deterministic primality check; values
// at or above 3.3e14 are rejected rather than tested probabilistically.
class Prime {
public:
    static constexpr std::uint64_t kMaxValue = 330'000'000'000'000ull;

    explicit Prime(std::uint64_t value) : value_(value) {
        if (value >= kMaxValue)
            throw std::domain_error("Prime: value out of supported range (< 3.3e14)");
        if (!detail::is_prime_u64(value))
            throw std::domain_error("Prime: " + std::to_string(value) + " is not prime");
    }

    std::uint64_t value() const { return value_; }

    friend bool operator==(const Prime&, const Prime&) = default;
    friend auto operator<=>(const Prime&, const Prime&) = default;

private:
    std::uint64_t value_;
};

}  // namespace padiq
