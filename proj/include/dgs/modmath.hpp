#ifndef DGS_MODMATH_HPP
#define DGS_MODMATH_HPP

#include <cassert>
#include <cstdint>

namespace dgs {

using u128 = unsigned __int128;

// a*b mod m for m < 2^81. Uses the native 128-bit product when m fits in
// 64 bits, otherwise splits a into 35-bit limbs so no intermediate product
// overflows 128 bits.
inline u128 mulmod(u128 a, u128 b, u128 m) {
    a %= m;
    b %= m;
    if (m <= ~0ULL) return (u128)((a * b) % m);
    u128 a_hi = a >> 35;
    u128 a_lo = a & (((u128)1 << 35) - 1);
    u128 r = (a_hi * b) % m;
    r = (r << 35) % m;
    r = (r + a_lo * b % m) % m;
    return r;
}

inline u128 powmod(u128 base, u128 exp, u128 m) {
    u128 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin; the witness set covers all n < 3.3e24.
inline bool is_prime(u128 n) {
    if (n < 2) return false;
    for (u128 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    u128 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u128 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        u128 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline u128 next_prime_above(u128 n) {
    u128 c = n + 1;
    if (c <= 2) return 2;
    if ((c & 1) == 0) ++c;
    while (!is_prime(c)) c += 2;
    return c;
}

} // namespace dgs

#endif // DGS_MODMATH_HPP
