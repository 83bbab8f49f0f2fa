#pragma once

// Shared integer helpers: error type, small-prime utilities, exact roots.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace arboreal {

inline constexpr const char* kVersion = "1.0.0";

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using BigInt = mpz_class;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline bool is_prime(const BigInt& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline std::vector<std::uint64_t> primes_below(std::uint64_t limit) {
    std::vector<std::uint64_t> out;
    if (limit < 3) return out;
    std::vector<bool> composite(limit, false);
    for (std::uint64_t i = 2; i < limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j < limit; j += i) composite[j] = true;
    }
    return out;
}

// Returns (prime, exponent) when n = prime^exponent with exponent >= 1.
struct PrimePower {
    std::uint64_t prime = 0;
    unsigned exponent = 0;
};

inline std::optional<PrimePower> as_prime_power(std::uint64_t n) {
    if (n < 2) return std::nullopt;
    std::uint64_t p = 0;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) { p = d; break; }
    if (p == 0) return PrimePower{n, 1};
    unsigned e = 0;
    while (n % p == 0) { n /= p; ++e; }
    if (n != 1) return std::nullopt;
    return PrimePower{p, e};
}

inline std::uint64_t mod_reduce(const BigInt& a, std::uint64_t m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r.get_ui();
}

inline std::int64_t mod_reduce(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    return r;
}

// Inverse modulo m; throws when gcd(a, m) != 1.
inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
    }
    if (r != 1) throw Error("element not invertible modulo " + std::to_string(m));
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m) : t);
}

// Exact k-th root test on |n|.
inline bool is_perfect_power(const BigInt& n, unsigned long k) {
    BigInt a = abs(n);
    return mpz_root(BigInt().get_mpz_t(), a.get_mpz_t(), k) != 0;
}

inline bool is_perfect_square(const BigInt& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline std::string to_decimal(const BigInt& n) { return n.get_str(10); }

}  // namespace arboreal
