#ifndef HECKE_ARITH_HPP
#define HECKE_ARITH_HPP

// Exact integer utilities: sieving, primality, factorization, valuations,
// multiplicative functions and the largest-prime-factor function P(n).

#include "hecke/bigint.hpp"
#include "hecke/detail/modular.hpp"
#include "hecke/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace hecke {

// ---------------------------------------------------------------------------
// Sieve
// ---------------------------------------------------------------------------

class PrimeSieve {
public:
    explicit PrimeSieve(u64 limit) : limit_(limit)
    {
        if (limit < 2) throw DomainError("sieve limit must be at least 2");
        membership_.assign(limit + 1, true);
        membership_[0] = false;
        membership_[1] = false;
        for (u64 i = 2; i * i <= limit; ++i) {
            if (!membership_[i]) continue;
            for (u64 j = i * i; j <= limit; j += i) membership_[j] = false;
        }
        primes_.reserve(limit < 100 ? 32 : static_cast<std::size_t>(1.3 * limit / std::log(double(limit))));
        for (u64 i = 2; i <= limit; ++i) {
            if (membership_[i]) primes_.push_back(i);
        }
    }

    u64 limit() const { return limit_; }
    const std::vector<u64>& primes() const { return primes_; }

    bool is_prime(u64 n) const
    {
        if (n > limit_) throw LookupError("sieve query " + std::to_string(n) + " beyond limit " + std::to_string(limit_));
        return membership_[n];
    }

    /// Number of primes <= x.
    std::size_t pi(u64 x) const
    {
        if (x > limit_) throw LookupError("pi(" + std::to_string(x) + ") beyond sieve limit " + std::to_string(limit_));
        return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
    }

    /// Primes in [lo, hi].
    std::vector<u64> primes_between(u64 lo, u64 hi) const
    {
        if (hi > limit_) throw LookupError("prime range beyond sieve limit");
        auto first = std::lower_bound(primes_.begin(), primes_.end(), lo);
        auto last = std::upper_bound(primes_.begin(), primes_.end(), hi);
        return {first, last};
    }

private:
    u64 limit_;
    std::vector<bool> membership_;
    std::vector<u64> primes_;
};

inline PrimeSieve sieve_primes(u64 limit)
{
    return PrimeSieve(limit);
}

namespace detail {

inline const PrimeSieve& small_sieve()
{
    static const PrimeSieve sieve(1u << 16);
    return sieve;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

struct PrimalityOptions {
    u64 seed = 1;
    unsigned rounds = 40;
};

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime_u64(u64 n)
{
    if (n < 2) return false;
    for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % p == 0) return n == p;
    }
    if (n < 41 * 41) return true;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Witness set valid for all n < 2^64.
    for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
        a %= n;
        if (a == 0) continue;
        u64 x = detail::powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

inline bool miller_rabin_round(const Int& n, const Int& d, unsigned long s, const Int& base)
{
    Int x;
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    const Int nm1 = n - 1;
    if (x == 1 || x == nm1) return true;
    for (unsigned long r = 1; r < s; ++r) {
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
        if (x == nm1) return true;
        if (x == 1) return false;
    }
    return false;
}

inline Int half_mod(Int x, const Int& n)
{
    if (mpz_odd_p(x.get_mpz_t())) x += n;
    x >>= 1;
    return x;
}

/// Strong Lucas probable-prime test with Selfridge parameters (odd n > 2).
inline bool strong_lucas(const Int& n)
{
    if (mpz_perfect_square_p(n.get_mpz_t())) return false;
    long D = 5;
    for (;;) {
        Int dv = D;
        int j = mpz_jacobi(dv.get_mpz_t(), n.get_mpz_t());
        if (j == -1) break;
        if (j == 0 && abs(dv) != n) return false;
        D = D > 0 ? -(D + 2) : -D + 2;
    }
    const Int P = 1;
    const Int Q = (1 - D) / 4;
    const Int Dz = D;
    Int d = n + 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;

    auto mod = [&](Int x) {
        mpz_mod(x.get_mpz_t(), x.get_mpz_t(), n.get_mpz_t());
        return x;
    };
    Int U = 1, V = P, Qk = mod(Q);
    for (long bit = static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
        U = mod(U * V);
        V = mod(V * V - 2 * Qk);
        Qk = mod(Qk * Qk);
        if (mpz_tstbit(d.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
            Int nu = half_mod(mod(P * U + V), n);
            Int nv = half_mod(mod(Dz * U + P * V), n);
            U = nu;
            V = nv;
            Qk = mod(Qk * Q);
        }
    }
    if (U == 0 || V == 0) return true;
    for (unsigned long r = 1; r < s; ++r) {
        V = mod(V * V - 2 * Qk);
        if (V == 0) return true;
        Qk = mod(Qk * Qk);
    }
    return false;
}

} // namespace detail

/// Primality for arbitrary-precision integers. Exact below 2^64; above that,
/// Miller-Rabin to base 2 plus `rounds` seeded random bases and a strong
/// Lucas test (reproducible for a fixed seed).
inline bool is_probable_prime(const Int& n, const PrimalityOptions& opt = {})
{
    if (sgn(n) <= 0) return false;
    if (fits_u64(n)) return is_prime_u64(to_u64(n));
    for (u64 p : detail::small_sieve().primes()) {
        if (p > 1000) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(p))) return false;
    }
    Int d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    d >>= s;
    if (!detail::miller_rabin_round(n, d, s, Int(2))) return false;

    std::mt19937_64 rng(opt.seed);
    const Int span = n - 3;
    for (unsigned i = 0; i < opt.rounds; ++i) {
        Int base = make_int(rng()) * make_int(rng()) + make_int(rng());
        base %= span;
        base += 2;
        if (!detail::miller_rabin_round(n, d, s, base)) return false;
    }
    return detail::strong_lucas(n);
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

struct PrimeFactor {
    Int prime;
    unsigned exponent = 0;

    friend bool operator==(const PrimeFactor&, const PrimeFactor&) = default;
};

/// Complete factorization: value = sign * prod prime^exponent.
struct Factorization {
    Int value;
    int sign = 0;
    std::vector<PrimeFactor> factors;

    Int reassemble() const
    {
        Int r = sign;
        for (const auto& f : factors) r *= pow_int(f.prime, f.exponent);
        return r;
    }

    /// P(value), with P(0) = P(+-1) = 1.
    Int largest_prime() const { return factors.empty() ? Int(1) : factors.back().prime; }
};

/// Factorization that may stop early: `cofactors` are composite numbers the
/// splitter could not break within its budget. Every prime factor of a
/// cofactor exceeds the trial-division bound.
struct PartialFactorization {
    Int value;
    int sign = 0;
    std::vector<PrimeFactor> factors;
    std::vector<Int> cofactors;
    u64 trial_bound = 0;

    bool complete() const { return cofactors.empty(); }

    Int reassemble() const
    {
        Int r = sign;
        for (const auto& f : factors) r *= pow_int(f.prime, f.exponent);
        for (const auto& c : cofactors) r *= c;
        return r;
    }
};

struct FactorOptions {
    u64 trial_bound = 10000;
    /// Polynomial evaluations allowed per composite across all rho attempts;
    /// zero means unlimited.
    u64 rho_budget = 0;
    PrimalityOptions primality{};
};

namespace detail {

inline void merge_factors(std::vector<PrimeFactor>& fs)
{
    std::sort(fs.begin(), fs.end(), [](const PrimeFactor& a, const PrimeFactor& b) { return a.prime < b.prime; });
    std::vector<PrimeFactor> out;
    for (auto& f : fs) {
        if (!out.empty() && out.back().prime == f.prime) {
            out.back().exponent += f.exponent;
        } else {
            out.push_back(std::move(f));
        }
    }
    fs = std::move(out);
}

/// One nontrivial factor of the odd composite m, or nullopt when the budget
/// runs out. Rho constants run through 1, 2, 3, ...
inline std::optional<Int> split_composite(const Int& m, u64& budget)
{
    if (mpz_perfect_power_p(m.get_mpz_t())) {
        for (unsigned long k = 2; k <= bit_length(m); ++k) {
            Int root;
            if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), k) != 0) return root;
        }
    }
    const bool limited = budget != 0;
    for (u64 c = 1;; ++c) {
        std::optional<Int> g;
        if (bit_length(m) <= 64) {
            g = brent_rho(Mont64(to_u64(m)), c, budget);
        } else if (bit_length(m) <= 128) {
            g = brent_rho(Mont128(to_u128(m)), c, budget);
        } else {
            g = brent_rho(ModMpz(m), c, budget);
        }
        if (g) return g;
        if (limited && budget == 0) return std::nullopt;
    }
}

} // namespace detail

inline PartialFactorization factorize_bounded(const Int& n, const FactorOptions& opt = {})
{
    PartialFactorization out;
    out.value = n;
    out.sign = sgn(n);
    out.trial_bound = opt.trial_bound;
    Int m = abs(n);
    if (m <= 1) return out;

    std::optional<PrimeSieve> wide;
    if (opt.trial_bound > detail::small_sieve().limit()) wide.emplace(opt.trial_bound);
    const PrimeSieve& sieve = wide ? *wide : detail::small_sieve();

    for (u64 p : sieve.primes()) {
        if (p > opt.trial_bound) break;
        if (fits_u64(m)) {
            u64 v = to_u64(m);
            if (p * p > v) break;
            if (v % p != 0) continue;
            unsigned e = 0;
            while (v % p == 0) {
                v /= p;
                ++e;
            }
            out.factors.push_back({make_int(p), e});
            m = make_int(v);
        } else {
            if (!mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) continue;
            unsigned e = static_cast<unsigned>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), make_int(p).get_mpz_t()));
            out.factors.push_back({make_int(p), e});
        }
    }
    if (m == 1) return out;

    const Int bound_sq = make_int(opt.trial_bound + 1) * make_int(opt.trial_bound + 1);
    std::vector<Int> stack;
    if (m < bound_sq) {
        out.factors.push_back({m, 1});
    } else {
        stack.push_back(m);
    }
    while (!stack.empty()) {
        Int x = std::move(stack.back());
        stack.pop_back();
        if (is_probable_prime(x, opt.primality)) {
            out.factors.push_back({x, 1});
            continue;
        }
        u64 budget = opt.rho_budget;
        auto d = detail::split_composite(x, budget);
        if (!d) {
            out.cofactors.push_back(x);
            continue;
        }
        Int other = x / *d;
        stack.push_back(*d);
        stack.push_back(other);
    }
    detail::merge_factors(out.factors);
    std::sort(out.cofactors.begin(), out.cofactors.end());
    return out;
}

/// Certified complete factorization; 0 and +-1 give an empty factor list.
inline Factorization factorize(const Int& n, FactorOptions opt = {})
{
    opt.rho_budget = 0;
    auto partial = factorize_bounded(n, opt);
    return Factorization{std::move(partial.value), partial.sign, std::move(partial.factors)};
}

/// P(n): largest prime factor, with P(0) = P(+-1) = 1.
inline Int largest_prime_factor(const Int& n, const FactorOptions& opt = {})
{
    return factorize(n, opt).largest_prime();
}

/// Bracket on P(n) from a possibly incomplete factorization: `lower <= P(n)`,
/// with equality when `exact`.
struct LpfBound {
    Int lower = 1;
    bool exact = true;
};

inline LpfBound lpf_bound(const PartialFactorization& pf)
{
    LpfBound b;
    if (!pf.factors.empty()) b.lower = pf.factors.back().prime;
    if (!pf.complete()) {
        b.exact = false;
        Int floor = make_int(pf.trial_bound + 1);
        if (b.lower < floor) b.lower = floor;
    }
    return b;
}

/// Exact test of P(n) > threshold that avoids a full factorization whenever
/// the trial-division residue already certifies a large prime factor.
inline bool largest_prime_factor_exceeds(const Int& n, double threshold, const FactorOptions& opt = {})
{
    if (threshold < static_cast<double>(opt.trial_bound)) {
        FactorOptions quick = opt;
        quick.rho_budget = 1;  // exhausted immediately: trial division and primality only
        auto pf = factorize_bounded(n, quick);
        if (!pf.complete()) return true;
        return cmp(pf.factors.empty() ? Int(1) : pf.factors.back().prime, threshold) > 0;
    }
    return cmp(largest_prime_factor(n, opt), threshold) > 0;
}

// ---------------------------------------------------------------------------
// Valuations and small-integer arithmetic
// ---------------------------------------------------------------------------

/// q-adic valuation; `infinite` marks n = 0.
struct Valuation {
    unsigned long value = 0;
    bool infinite = false;

    friend bool operator==(const Valuation&, const Valuation&) = default;
};

inline Valuation valuation(const Int& n, const Int& q)
{
    if (sgn(q) <= 0) throw DomainError("valuation base must be a positive prime");
    if (!is_probable_prime(q)) throw DomainError("valuation base " + to_decimal(q) + " is not prime");
    if (sgn(n) == 0) return {0, true};
    Int rest = n;
    return {mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), q.get_mpz_t()), false};
}

/// Factorization of a machine integer n >= 1 as (prime, exponent) pairs.
inline std::vector<std::pair<u64, unsigned>> factor_u64(u64 n)
{
    if (n == 0) throw DomainError("factor_u64 of zero");
    std::vector<std::pair<u64, unsigned>> out;
    if (n >= (u64{1} << 32)) {
        for (const auto& f : factorize(make_int(n)).factors) out.emplace_back(to_u64(f.prime), f.exponent);
        return out;
    }
    for (u64 p : detail::small_sieve().primes()) {
        if (p * p > n) break;
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

/// Positive divisors of n in increasing order.
inline std::vector<u64> divisors(u64 n)
{
    std::vector<u64> ds{1};
    for (auto [p, e] : factor_u64(n)) {
        const std::size_t count = ds.size();
        u64 pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < count; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

struct MultiplicativeValues {
    int mu = 0;
    u64 phi = 0;
    unsigned omega = 0;
    Int sigma_k;
};

/// mu(n), phi(n), omega(n) and sigma_k(n) = sum of k-th powers of divisors.
inline MultiplicativeValues multiplicative_suite(u64 n, unsigned k = 1)
{
    if (n == 0) throw DomainError("multiplicative functions are defined for n >= 1");
    if (k == 0) throw DomainError("sigma_k requires k >= 1");
    MultiplicativeValues v{1, 1, 0, Int(1)};
    for (auto [p, e] : factor_u64(n)) {
        ++v.omega;
        v.mu = e > 1 ? 0 : -v.mu;
        u64 pe1 = 1;
        for (unsigned i = 1; i < e; ++i) pe1 *= p;
        v.phi *= pe1 * (p - 1);
        // (p^{k(e+1)} - 1) / (p^k - 1)
        Int pk = pow_int(p, k);
        Int term = (pow_int(pk, e + 1) - 1) / (pk - 1);
        v.sigma_k *= term;
    }
    return v;
}

inline int mobius(u64 n) { return multiplicative_suite(n).mu; }
inline u64 euler_phi(u64 n) { return multiplicative_suite(n).phi; }
inline unsigned omega(u64 n) { return multiplicative_suite(n).omega; }

/// n_3 = min{ d | n : d >= 3 }.
inline u64 smallest_divisor_geq3(u64 n)
{
    if (n < 3) throw DomainError("smallest_divisor_geq3 requires n >= 3");
    for (u64 d : divisors(n)) {
        if (d >= 3) return d;
    }
    return n;
}

/// Kronecker symbol (D / q) for a prime q.
inline int kronecker_symbol(const Int& D, u64 q)
{
    if (!is_prime_u64(q)) throw DomainError("kronecker_symbol: " + std::to_string(q) + " is not prime");
    if (q == 2) {
        if (mpz_even_p(D.get_mpz_t())) return 0;
        Int r = D;
        mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), 3);
        u64 m = to_u64(r);
        return (m == 1 || m == 7) ? 1 : -1;
    }
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), D.get_mpz_t(), make_int(q).get_mpz_t());
    u64 a = to_u64(r);
    if (a == 0) return 0;
    u64 euler = detail::powmod64(a, (q - 1) / 2, q);
    return euler == 1 ? 1 : -1;
}

/// Square root of a modulo an odd prime q (Tonelli-Shanks); nullopt for non-residues.
inline std::optional<u64> sqrt_mod(u64 a, u64 q)
{
    a %= q;
    if (q == 2 || a == 0) return a;
    if (detail::powmod64(a, (q - 1) / 2, q) != 1) return std::nullopt;
    u64 s = 0, t = q - 1;
    while ((t & 1) == 0) {
        t >>= 1;
        ++s;
    }
    if (s == 1) return detail::powmod64(a, (q + 1) / 4, q);
    u64 z = 2;
    while (detail::powmod64(z, (q - 1) / 2, q) != q - 1) ++z;
    u64 m = s;
    u64 c = detail::powmod64(z, t, q);
    u64 x = detail::powmod64(a, (t + 1) / 2, q);
    u64 b = detail::powmod64(a, t, q);
    while (b != 1) {
        u64 i = 0, bb = b;
        while (bb != 1) {
            bb = detail::mulmod64(bb, bb, q);
            ++i;
        }
        u64 w = c;
        for (u64 j = 0; j + 1 < m - i; ++j) w = detail::mulmod64(w, w, q);
        x = detail::mulmod64(x, w, q);
        c = detail::mulmod64(w, w, q);
        b = detail::mulmod64(b, c, q);
        m = i;
    }
    return x;
}

} // namespace hecke

#endif // HECKE_ARITH_HPP
