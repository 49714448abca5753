#pragma once
// Small-integer number theory helpers.
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace hauptwerk {

using i64 = std::int64_t;

inline i64 pmod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 floordiv(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline i64 gcd64(i64 a, i64 b) { return std::gcd(a, b); }

// x*a + y*b = g
inline i64 egcd(i64 a, i64 b, i64& x, i64& y) {
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = floordiv(a, b);
        i64 t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
    x = x0;
    y = y0;
    return a;
}

inline i64 invmod(i64 a, i64 m) {
    if (m == 1) return 0;
    i64 x, y;
    if (egcd(pmod(a, m), m, x, y) != 1) throw NotCoprime("no inverse mod " + std::to_string(m));
    return pmod(x, m);
}

inline i64 powmod(i64 b, i64 e, i64 m) {
    __int128 r = 1 % m, x = pmod(b, m);
    while (e > 0) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<i64>(r);
}

inline std::map<i64, int> factorize(i64 n) {
    std::map<i64, int> f;
    n = std::llabs(n);
    for (i64 p = 2; p * p <= n; ++p)
        while (n % p == 0) { ++f[p]; n /= p; }
    if (n > 1) ++f[n];
    return f;
}

inline bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

inline std::vector<i64> divisors(i64 n) {
    std::vector<i64> d;
    for (i64 i = 1; i <= n; ++i)
        if (n % i == 0) d.push_back(i);
    return d;
}

inline i64 euler_phi(i64 n) {
    i64 r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

inline int ord_p(i64 n, i64 p) {
    if (n == 0) return 1 << 30;
    int k = 0;
    while (n % p == 0) { n /= p; ++k; }
    return k;
}

inline i64 isqrt(i64 n) {
    if (n < 0) return -1;
    i64 r = static_cast<i64>(__builtin_sqrtl(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline bool is_square(i64 n) {
    if (n < 0) return false;
    i64 r = isqrt(n);
    return r * r == n;
}

// Kronecker symbol (a|n).
inline int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int res = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) res = -res;
    }
    int v = 0;
    while (n % 2 == 0) { n /= 2; ++v; }
    if (v > 0) {
        if (a % 2 == 0) return 0;
        i64 am8 = pmod(a, 8);
        if ((v & 1) && (am8 == 3 || am8 == 5)) res = -res;
    }
    // Jacobi symbol (a|n), n odd positive
    a = pmod(a, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) res = -res;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) res = -res;
        a %= n;
    }
    return n == 1 ? res : 0;
}

inline bool is_fundamental_discriminant(i64 d) {
    if (d == 0 || d == 1) return false;
    i64 m = pmod(d, 4);
    if (m == 1) {
        for (auto [p, e] : factorize(d))
            if (e > 1) return false;
        return true;
    }
    if (m != 0) return false;
    i64 d4 = d / 4;
    i64 r = pmod(d4, 4);
    if (r != 2 && r != 3) return false;
    for (auto [p, e] : factorize(d4))
        if (e > 1) return false;
    return true;
}

}  // namespace hauptwerk
