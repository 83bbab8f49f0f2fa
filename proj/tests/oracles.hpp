#pragma once

// Independent reference computations used only by the test suite.

#include "arboreal/common.hpp"

#include <cstdint>
#include <vector>

namespace oracle {

using arboreal::BigInt;

// Determinant by fraction-free Bareiss elimination.
inline BigInt bareiss_det(std::vector<std::vector<BigInt>> m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap = k + 1;
            while (swap < n && m[swap][k] == 0) ++swap;
            if (swap == n) return 0;
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]);
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// Res(a, b) via the Sylvester matrix; coefficients low degree first, no trailing zeros.
inline BigInt sylvester_resultant(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    const std::size_t da = a.size() - 1, db = b.size() - 1;
    const std::size_t n = da + db;
    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n, 0));
    for (std::size_t r = 0; r < db; ++r)
        for (std::size_t i = 0; i <= da; ++i) m[r][r + i] = a[da - i];
    for (std::size_t r = 0; r < da; ++r)
        for (std::size_t i = 0; i <= db; ++i) m[db + r][r + i] = b[db - i];
    return bareiss_det(m);
}

inline std::vector<BigInt> trim(std::vector<BigInt> c) {
    while (c.size() > 1 && c.back() == 0) c.pop_back();
    return c;
}

// Exhaustive search for y with u*y^e = v (mod m).
inline bool power_residue_bruteforce(std::int64_t v, std::int64_t u, std::uint64_t m, unsigned e) {
    auto red = [m](std::int64_t a) { return static_cast<std::uint64_t>(((a % static_cast<std::int64_t>(m)) + static_cast<std::int64_t>(m)) % static_cast<std::int64_t>(m)); };
    for (std::uint64_t y = 0; y < m; ++y) {
        std::uint64_t t = 1;
        for (unsigned i = 0; i < e; ++i) t = t * y % m;
        if (red(static_cast<std::int64_t>(t)) * red(u) % m == red(v)) return true;
    }
    return false;
}

// Integer polynomial evaluation mod q (low degree first).
inline std::uint64_t eval_mod(const std::vector<BigInt>& f, std::uint64_t x, std::uint64_t q) {
    BigInt acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = (acc * x + f[i]) % q;
    if (acc < 0) acc += q;
    return acc.get_ui();
}

// Affine points on a*y^2 = f(x) over F_q by scanning all (x, y).
inline std::uint64_t affine_count_bruteforce(const BigInt& a, const std::vector<BigInt>& f, std::uint64_t q) {
    BigInt ar = a % q;
    if (ar < 0) ar += q;
    std::uint64_t count = 0;
    for (std::uint64_t x = 0; x < q; ++x) {
        const auto fx = eval_mod(f, x, q);
        for (std::uint64_t y = 0; y < q; ++y)
            if (ar.get_ui() * (y * y % q) % q == fx) ++count;
    }
    return count;
}

// Polynomials over F_q as plain vectors, low degree first, for the Jacobian oracle.
using Vec = std::vector<std::uint64_t>;

inline Vec poly_mul(const Vec& a, const Vec& b, std::uint64_t q) {
    if (a.empty() || b.empty()) return {};
    Vec c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % q;
    return c;
}

// Remainder of a by monic b.
inline Vec poly_rem_monic(Vec a, const Vec& b, std::uint64_t q) {
    const std::size_t db = b.size() - 1;
    for (std::size_t i = a.size(); i-- > db;) {
        const std::uint64_t c = a[i];
        if (c == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) a[i - db + j] = (a[i - db + j] + q - c * b[j] % q) % q;
    }
    a.resize(std::min(a.size(), db));
    return a;
}

// Number of (u, v) with u monic, deg u <= g, deg v < deg u, u | v^2 - h.
inline std::uint64_t jacobian_size_bruteforce(const Vec& h, unsigned g, std::uint64_t q) {
    std::uint64_t total = 0;
    for (unsigned d = 0; d <= g; ++d) {
        std::uint64_t qd = 1;
        for (unsigned i = 0; i < d; ++i) qd *= q;
        for (std::uint64_t ui = 0; ui < qd; ++ui) {
            Vec u(d + 1, 1);
            std::uint64_t r = ui;
            for (unsigned i = 0; i < d; ++i) { u[i] = r % q; r /= q; }
            for (std::uint64_t vi = 0; vi < qd; ++vi) {
                Vec v(d, 0);
                std::uint64_t s = vi;
                for (unsigned i = 0; i < d; ++i) { v[i] = s % q; s /= q; }
                Vec w = poly_mul(v, v, q);
                if (w.size() < h.size()) w.resize(h.size(), 0);
                for (std::size_t i = 0; i < h.size(); ++i) w[i] = (w[i] + q - h[i]) % q;
                Vec rem = poly_rem_monic(w, u, q);
                bool zero = true;
                for (auto c : rem) zero &= (c == 0);
                if (zero) ++total;
            }
        }
    }
    return total;
}

}  // namespace oracle
