#ifndef HECKE_DETAIL_MODULAR_HPP
#define HECKE_DETAIL_MODULAR_HPP

// Residue rings used by the primality tests and Pollard-Brent splitting.
// The backends share one interface so the rho loop is written once:
//   Mod64    plain u64 residues, products through u128
//   Mont64   Montgomery residues for odd 64-bit moduli
//   Mont128  Montgomery residues for odd 128-bit moduli
//   ModMpz   GMP residues for anything larger

#include "hecke/bigint.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>

namespace hecke::detail {

inline u64 mulmod64(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod64(u64 base, u64 e, u64 m)
{
    u64 r = 1 % m;
    base %= m;
    while (e != 0) {
        if (e & 1) r = mulmod64(r, base, m);
        base = mulmod64(base, base, m);
        e >>= 1;
    }
    return r;
}

inline u64 gcd64(u64 a, u64 b)
{
    while (b != 0) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline u128 gcd128(u128 a, u128 b)
{
    if (a == 0) return b;
    if (b == 0) return a;
    auto ctz = [](u128 x) {
        auto lo = static_cast<u64>(x);
        return lo != 0 ? std::countr_zero(lo) : 64 + std::countr_zero(static_cast<u64>(x >> 64));
    };
    int shift = ctz(a | b);
    a >>= ctz(a);
    do {
        b >>= ctz(b);
        if (a > b) std::swap(a, b);
        b -= a;
    } while (b != 0);
    return a << shift;
}

struct Mod64 {
    using value_type = u64;
    u64 n;

    explicit Mod64(u64 modulus) : n(modulus) {}
    value_type from_u64(u64 x) const { return x % n; }
    value_type one() const { return 1 % n; }
    value_type mul(value_type a, value_type b) const { return mulmod64(a, b, n); }
    value_type add(value_type a, value_type b) const
    {
        u64 s = a + b;
        if (s < a || s >= n) s -= n;
        return s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (n - b); }
    Int gcd(value_type a) const { return make_int(gcd64(a, n)); }
    Int modulus() const { return make_int(n); }
};

/// Montgomery arithmetic modulo an odd n < 2^64 with R = 2^64.
class Mont64 {
public:
    using value_type = u64;

    explicit Mont64(u64 modulus) : n_(modulus)
    {
        u64 inv = n_;
        for (int i = 0; i < 6; ++i) inv *= 2 - n_ * inv;
        ninv_ = u64{0} - inv;
        u128 r = (u128{1} << 64) % n_;
        r2_ = static_cast<u64>(r * r % n_);
        one_ = mul(1, r2_);
    }

    value_type from_u64(u64 x) const { return mul(x % n_, r2_); }
    value_type one() const { return one_; }

    value_type mul(value_type a, value_type b) const
    {
        u128 t = static_cast<u128>(a) * b;
        u64 m = static_cast<u64>(t) * ninv_;
        u128 mn = static_cast<u128>(m) * n_;
        u64 hi = static_cast<u64>(t >> 64);
        u64 mh = static_cast<u64>(mn >> 64);
        u64 r = hi + mh;
        bool wrapped = r < hi;
        if (static_cast<u64>(t) != 0) {
            ++r;
            wrapped = wrapped || r == 0;
        }
        if (wrapped || r >= n_) r -= n_;
        return r;
    }

    value_type add(value_type a, value_type b) const
    {
        u64 s = a + b;
        if (s < a || s >= n_) s -= n_;
        return s;
    }

    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (n_ - b); }
    Int gcd(value_type a) const { return make_int(gcd64(a, n_)); }
    Int modulus() const { return make_int(n_); }

private:
    u64 n_;
    u64 ninv_ = 0;
    u64 r2_ = 0;
    u64 one_ = 0;
};

/// Montgomery arithmetic modulo an odd n < 2^128 with R = 2^128.
class Mont128 {
public:
    using value_type = u128;

    explicit Mont128(u128 modulus) : n_(modulus)
    {
        u128 inv = n_;
        for (int i = 0; i < 7; ++i) inv *= 2 - n_ * inv;
        ninv_ = u128{0} - inv;
        Int r2 = make_int(u128{1}) << 256;
        r2 %= make_int(n_);
        r2_ = to_u128(r2);
        one_ = reduce_from(1);
    }

    value_type from_u64(u64 x) const { return reduce_from(static_cast<u128>(x) % n_); }
    value_type one() const { return one_; }

    value_type mul(value_type a, value_type b) const
    {
        u128 hi, lo;
        mul_wide(a, b, hi, lo);
        u128 m = lo * ninv_;
        u128 mh, ml;
        mul_wide(m, n_, mh, ml);
        // hi + mh + carry < 2n; the sum may wrap past 2^128 when n is close to it.
        u128 r = hi + mh;
        bool wrapped = r < hi;
        if (lo != 0) {
            ++r;
            wrapped = wrapped || r == 0;
        }
        if (wrapped || r >= n_) r -= n_;
        return r;
    }

    value_type add(value_type a, value_type b) const
    {
        u128 s = a + b;
        if (s < a || s >= n_) s -= n_;
        return s;
    }

    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (n_ - b); }
    Int gcd(value_type a) const { return make_int(gcd128(a, n_)); }
    Int modulus() const { return make_int(n_); }
    u128 from_montgomery(value_type a) const { return mul(a, 1); }
    value_type to_montgomery(u128 x) const { return reduce_from(x % n_); }

private:
    static void mul_wide(u128 a, u128 b, u128& hi, u128& lo)
    {
        const u128 mask = ~u64{0};
        u128 a0 = a & mask, a1 = a >> 64;
        u128 b0 = b & mask, b1 = b >> 64;
        u128 p00 = a0 * b0, p01 = a0 * b1, p10 = a1 * b0, p11 = a1 * b1;
        u128 mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
        lo = (mid << 64) | (p00 & mask);
        hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    }

    value_type reduce_from(u128 x) const { return mul(x, r2_); }

    u128 n_;
    u128 ninv_ = 0;
    u128 r2_ = 0;
    u128 one_ = 0;
};

struct ModMpz {
    using value_type = Int;
    Int n;

    explicit ModMpz(Int modulus) : n(std::move(modulus)) {}
    value_type from_u64(u64 x) const
    {
        Int r = make_int(x);
        r %= n;
        return r;
    }
    value_type one() const { return Int(1); }
    value_type mul(const value_type& a, const value_type& b) const
    {
        Int r = a * b;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t());
        return r;
    }
    value_type add(const value_type& a, const value_type& b) const
    {
        Int s = a + b;
        if (s >= n) s -= n;
        return s;
    }
    value_type sub(const value_type& a, const value_type& b) const
    {
        Int s = a - b;
        if (sgn(s) < 0) s += n;
        return s;
    }
    Int gcd(const value_type& a) const
    {
        Int g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
        return g;
    }
    Int modulus() const { return n; }
};

/// Pollard rho with Brent's cycle detection and batched gcds, iterating
/// x -> x^2 + c from x0 = 2. `budget` counts polynomial evaluations and is
/// decremented in place; a budget of zero on entry means "unlimited".
/// Returns a nontrivial factor or nullopt (cycle collapsed or budget spent).
template <class Ring>
std::optional<Int> brent_rho(const Ring& ring, u64 c, u64& budget)
{
    using V = typename Ring::value_type;
    const bool limited = budget != 0;
    const Int n = ring.modulus();
    const V cv = ring.from_u64(c);
    auto step = [&](const V& v) { return ring.add(ring.mul(v, v), cv); };
    auto charge = [&](u64 k) {
        if (!limited) return true;
        if (budget <= k) {
            budget = 0;
            return false;
        }
        budget -= k;
        return true;
    };

    constexpr u64 batch = 128;
    V y = ring.from_u64(2);
    V x = y;
    V ys = y;
    V q = ring.one();
    Int g = 1;
    u64 r = 1;
    do {
        x = y;
        if (!charge(r)) return std::nullopt;
        for (u64 i = 0; i < r; ++i) y = step(y);
        u64 k = 0;
        do {
            ys = y;
            u64 lim = std::min(batch, r - k);
            if (!charge(lim)) return std::nullopt;
            for (u64 i = 0; i < lim; ++i) {
                y = step(y);
                q = ring.mul(q, ring.sub(x, y));
            }
            g = ring.gcd(q);
            k += lim;
        } while (k < r && g == 1);
        r *= 2;
    } while (g == 1);

    if (g == n) {
        do {
            if (!charge(1)) return std::nullopt;
            ys = step(ys);
            g = ring.gcd(ring.sub(x, ys));
        } while (g == 1);
    }
    if (g == n) return std::nullopt;
    return g;
}

} // namespace hecke::detail

#endif // HECKE_DETAIL_MODULAR_HPP
