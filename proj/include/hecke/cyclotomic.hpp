#ifndef HECKE_CYCLOTOMIC_HPP
#define HECKE_CYCLOTOMIC_HPP

// Homogeneous cyclotomic values Phi_n(alpha, beta) for Lucas pairs
// alpha + beta = a, alpha * beta = q, evaluated through integer Lucas terms
//   U_1 = 1, U_2 = a, U_{d+1} = a U_d - q U_{d-1}
// as Phi_n = prod_{d | n} U_d^{mu(n/d)}.

#include "hecke/arith.hpp"
#include "hecke/bigint.hpp"
#include "hecke/eigenform.hpp"
#include "hecke/errors.hpp"
#include "hecke/quadfield.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace hecke {

struct LucasParameters {
    Int a;
    Int q;
    /// Eigenform provenance (weight, p) when built from a table; weight 0 otherwise.
    int weight = 0;
    u64 p = 0;
    /// p^nu removed from both roots by coprime_part().
    unsigned removed_nu = 0;

    bool coprime() const
    {
        Int g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t());
        return g == 1;
    }
};

inline LucasParameters lucas_parameters(const CoefficientTable& table, u64 p)
{
    if (!is_prime_u64(p)) throw DomainError(std::to_string(p) + " is not prime");
    return {table.at(p), pow_int(p, static_cast<unsigned long>(table.weight() - 1)), table.weight(), p, 0};
}

/// Divides alpha and beta by p^nu, nu = nu_p(a), so that the new pair is
/// coprime. For eigenform sources gcd((alpha), (beta)) = (p^nu).
inline LucasParameters coprime_part(const LucasParameters& lp)
{
    if (lp.p == 0) throw DomainError("coprime_part needs an eigenform source prime");
    if (sgn(lp.a) == 0) throw DomainError("a = 0 has no coprime normalization");
    LucasParameters out = lp;
    const Int p = make_int(lp.p);
    unsigned long nu = mpz_remove(out.a.get_mpz_t(), lp.a.get_mpz_t(), p.get_mpz_t());
    const Int p2nu = pow_int(p, 2 * nu);
    if (!mpz_divisible_p(lp.q.get_mpz_t(), p2nu.get_mpz_t()) || lp.q == p2nu) {
        throw DomainError("p-adic valuation of a is too large for a coprime normalization");
    }
    out.q = lp.q / p2nu;
    out.removed_nu = lp.removed_nu + static_cast<unsigned>(nu);
    return out;
}

/// U_0 .. U_dmax.
inline std::vector<Int> lucas_terms(const LucasParameters& lp, u64 dmax)
{
    std::vector<Int> u(dmax + 1);
    u[0] = 0;
    if (dmax >= 1) u[1] = 1;
    for (u64 d = 2; d <= dmax; ++d) u[d] = lp.a * u[d - 1] - lp.q * u[d - 2];
    return u;
}

inline Int lucas_term(const LucasParameters& lp, u64 d)
{
    if (d < 1) throw DomainError("lucas_term requires d >= 1");
    return lucas_terms(lp, d)[d];
}

inline Int phi_value_from_terms(const std::vector<Int>& U, u64 n)
{
    if (n < 2) throw DomainError("phi_value requires n >= 2");
    Int num = 1, den = 1;
    for (u64 d : divisors(n)) {
        if (sgn(U.at(d)) == 0) {
            throw DegenerateInputError("Lucas term U_" + std::to_string(d) + " vanishes for n = " + std::to_string(n));
        }
        const int mu = mobius(n / d);
        if (mu == 1) num *= U[d];
        if (mu == -1) den *= U[d];
    }
    if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) {
        throw std::logic_error("inexact Moebius quotient for n = " + std::to_string(n));
    }
    Int r;
    mpz_divexact(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return r;
}

inline Int phi_value(const LucasParameters& lp, u64 n)
{
    if (n < 2) throw DomainError("phi_value requires n >= 2");
    return phi_value_from_terms(lucas_terms(lp, n), n);
}

/// prod_{d | n, d > 1} Phi_d(alpha, beta); equals U_n.
inline Int divisor_product(const LucasParameters& lp, u64 n)
{
    auto U = lucas_terms(lp, n);
    Int r = 1;
    for (u64 d : divisors(n)) {
        if (d > 1) r *= phi_value_from_terms(U, d);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials
// ---------------------------------------------------------------------------

/// Coefficients (ascending) of the one-variable cyclotomic polynomial Phi_n(x).
inline std::vector<Int> cyclotomic_polynomial(u64 n)
{
    if (n < 1) throw DomainError("cyclotomic_polynomial requires n >= 1");
    std::vector<Int> poly{1};
    const auto ds = divisors(n);
    for (u64 d : ds) {
        if (mobius(n / d) != 1) continue;
        std::vector<Int> next(poly.size() + d, 0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + d] += poly[i];
            next[i] -= poly[i];
        }
        poly = std::move(next);
    }
    for (u64 d : ds) {
        if (mobius(n / d) != -1) continue;
        // Exact division by x^d - 1, from the top degree down.
        std::vector<Int> quot(poly.size() - d, 0);
        for (std::size_t i = poly.size(); i-- > d;) {
            const Int c = poly[i];
            quot[i - d] = c;
            poly[i - d] += c;
            poly[i] = 0;
        }
        for (std::size_t i = 0; i < d; ++i) {
            if (sgn(poly[i]) != 0) throw std::logic_error("inexact cyclotomic division");
        }
        poly = std::move(quot);
    }
    return poly;
}

/// Homogeneous polynomial sum_j c_j X^j Y^{deg - j}.
struct HomogeneousPoly {
    std::vector<Int> coeffs;

    std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

    Int evaluate(const Int& X, const Int& Y) const
    {
        Int r = 0, xp = 1;
        const std::size_t m = degree();
        std::vector<Int> ypow(m + 1);
        ypow[0] = 1;
        for (std::size_t j = 1; j <= m; ++j) ypow[j] = ypow[j - 1] * Y;
        for (std::size_t j = 0; j <= m; ++j) {
            r += coeffs[j] * xp * ypow[m - j];
            xp *= X;
        }
        return r;
    }
};

/// Psi_n with Psi_n((A+B)^2, AB) = Phi_n(A, B), n >= 3.
inline HomogeneousPoly psi_polynomial(u64 n)
{
    if (n < 3) throw DomainError("psi_polynomial requires n >= 3");
    if (n > 200) throw DomainError("psi_polynomial is limited to n <= 200");
    const auto c = cyclotomic_polynomial(n);
    const std::size_t m = (c.size() - 1) / 2;

    // R(t) = c_m + sum_j c_{m+j} D_j(t), D_j(x + 1/x) = x^j + x^-j.
    std::vector<Int> R(m + 1, 0);
    std::vector<Int> dprev{2}, dcur{0, 1};
    R[0] = c[m];
    for (std::size_t j = 1; j <= m; ++j) {
        for (std::size_t i = 0; i < dcur.size(); ++i) R[i] += c[m + j] * dcur[i];
        std::vector<Int> dnext(dcur.size() + 1, 0);
        for (std::size_t i = 0; i < dcur.size(); ++i) dnext[i + 1] += dcur[i];
        for (std::size_t i = 0; i < dprev.size(); ++i) dnext[i] -= dprev[i];
        dprev = std::move(dcur);
        dcur = std::move(dnext);
    }
    // S(s) = R(s - 2) by Horner's rule in s.
    std::vector<Int> S(m + 1, 0);
    for (std::size_t i = m + 1; i-- > 0;) {
        std::vector<Int> next(m + 1, 0);
        for (std::size_t j = 0; j < m; ++j) {
            next[j + 1] += S[j];
            next[j] -= 2 * S[j];
        }
        next[0] += R[i];
        S = std::move(next);
    }
    return {S};
}

// ---------------------------------------------------------------------------
// Primitive divisors
// ---------------------------------------------------------------------------

struct ClassifyOptions {
    FactorOptions factor{};
    /// Candidates k*n +- 1 up to this bound are divided out before rho.
    u64 progression_bound = 1000000;
};

struct ClassifiedPrime {
    Int prime;
    unsigned exponent = 0;
    bool primitive = false;
    bool divides_n = false;
    /// prime = +-1 (mod n); meaningful when !divides_n.
    bool plus_minus_one = false;
};

/// Check of nu_P(Phi_n) <= nu_P(n O_K) at one non-primitive prime ideal.
struct IdealBoundCheck {
    Int prime;
    SplitType type = SplitType::inert;
    unsigned long nu_phi = 0;
    unsigned long nu_n = 0;
    bool holds() const { return nu_phi <= nu_n; }
};

struct CyclotomicValue {
    u64 n = 0;
    Int value;
    std::vector<ClassifiedPrime> primes;
    std::vector<Int> unresolved;
    /// Parallel to `unresolved`: every prime factor proven +-1 mod n by
    /// order_certificate() without factoring.
    std::vector<bool> unresolved_certified;
    std::vector<IdealBoundCheck> ideal_checks;

    /// Certified primes not dividing n that are not +-1 mod n.
    std::size_t congruence_violations() const
    {
        std::size_t v = 0;
        for (const auto& p : primes) v += (!p.divides_n && !p.plus_minus_one);
        return v;
    }

    std::size_t ideal_bound_violations() const
    {
        std::size_t v = 0;
        for (const auto& c : ideal_checks) v += !c.holds();
        return v;
    }

    bool complete() const { return unresolved.empty(); }

    std::size_t uncertified() const
    {
        std::size_t v = 0;
        for (bool c : unresolved_certified) v += !c;
        return v;
    }
};

namespace detail {

/// u + v x in (Z/m)[x]/(x^2 - a x + q).
struct LucasRingElt {
    Int u, v;
};

struct LucasRing {
    Int m, a, q;

    LucasRingElt mul(const LucasRingElt& x, const LucasRingElt& y) const
    {
        const Int vv = x.v * y.v;
        LucasRingElt r{x.u * y.u - q * vv, x.u * y.v + x.v * y.u + a * vv};
        mpz_mod(r.u.get_mpz_t(), r.u.get_mpz_t(), m.get_mpz_t());
        mpz_mod(r.v.get_mpz_t(), r.v.get_mpz_t(), m.get_mpz_t());
        return r;
    }

    LucasRingElt pow(LucasRingElt x, u64 e) const
    {
        LucasRingElt r{1, 0};
        while (e) {
            if (e & 1) r = mul(r, x);
            e >>= 1;
            if (e) x = mul(x, x);
        }
        return r;
    }

    /// alpha^e - beta^e with alpha = x, beta = a - x.
    LucasRingElt lucas_difference(u64 e) const
    {
        const LucasRingElt al = pow({0, 1}, e);
        Int bu = a;
        mpz_mod(bu.get_mpz_t(), bu.get_mpz_t(), m.get_mpz_t());
        const LucasRingElt be = pow({bu, m - 1}, e);
        LucasRingElt r{al.u - be.u, al.v - be.v};
        mpz_mod(r.u.get_mpz_t(), r.u.get_mpz_t(), m.get_mpz_t());
        mpz_mod(r.v.get_mpz_t(), r.v.get_mpz_t(), m.get_mpz_t());
        return r;
    }

    /// N(u + v alpha) = u^2 + a u v + q v^2 mod m.
    Int norm(const LucasRingElt& x) const
    {
        Int r = x.u * x.u + a * x.u * x.v + q * x.v * x.v;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
        return r;
    }
};

} // namespace detail

/// True when every prime l | c is proven to satisfy l = +-1 (mod n):
/// gcd(c, n q (a^2 - 4q)) = 1, alpha^n = beta^n mod c, and
/// gcd(c, N(alpha^(n/r) - beta^(n/r))) = 1 for every prime r | n. Then
/// alpha/beta has exact order n modulo every prime above l, and Frobenius
/// acts on it as identity (l split) or inversion (l inert).
inline bool order_certificate(const LucasParameters& lp, u64 n, const Int& c)
{
    if (n < 2 || c < 2) return false;
    Int g, bad = make_int(n) * lp.q * (lp.a * lp.a - 4 * lp.q);
    mpz_gcd(g.get_mpz_t(), c.get_mpz_t(), bad.get_mpz_t());
    if (g != 1) return false;
    const detail::LucasRing R{c, lp.a, lp.q};
    const auto d = R.lucas_difference(n);
    if (d.u != 0 || d.v != 0) return false;
    for (auto [r, e] : factor_u64(n)) {
        const Int nm = R.norm(R.lucas_difference(n / r));
        mpz_gcd(g.get_mpz_t(), c.get_mpz_t(), nm.get_mpz_t());
        if (g != 1) return false;
    }
    return true;
}

namespace detail {

inline void strip_progression(Int& value, u64 n, u64 bound, std::vector<PrimeFactor>& found)
{
    auto try_divide = [&](u64 cand) {
        if (cand < 2 || !mpz_divisible_ui_p(value.get_mpz_t(), cand)) return;
        if (!is_prime_u64(cand)) return;
        unsigned e = 0;
        while (mpz_divisible_ui_p(value.get_mpz_t(), cand)) {
            mpz_divexact_ui(value.get_mpz_t(), value.get_mpz_t(), cand);
            ++e;
        }
        found.push_back({make_int(cand), e});
    };
    for (u64 k = 1; k * n - 1 <= bound; ++k) {
        try_divide(k * n - 1);
        if (k * n + 1 <= bound) try_divide(k * n + 1);
        if (value == 1) break;
    }
}

} // namespace detail

/// Factors |value| for a value of Phi_n: candidates k*n +- 1 first, then
/// trial division and rho. `value` and `sign` keep the signed input.
inline PartialFactorization factor_cyclotomic_value(const Int& value, u64 n, const ClassifyOptions& opt = {})
{
    Int rest = abs(value);
    std::vector<PrimeFactor> found;
    if (n >= 3) detail::strip_progression(rest, n, opt.progression_bound, found);
    PartialFactorization pf = factorize_bounded(rest, opt.factor);
    for (auto& f : pf.factors) found.push_back(std::move(f));
    detail::merge_factors(found);
    pf.value = value;
    pf.sign = sgn(value);
    pf.factors = std::move(found);
    return pf;
}

/// Factors Phi_n(alpha, beta) and marks each prime as primitive or not.
/// A prime l is non-primitive when l | n or l | U_d for a proper divisor d
/// of n. Every non-primitive prime ideal is checked against nu_P(n O_K).
inline CyclotomicValue classify_prime_divisors(const LucasParameters& lp, u64 n, const QuadraticField& field,
                                               const ClassifyOptions& opt = {})
{
    if (n <= 6) throw PreconditionError("primitive-divisor classification requires n > 6");
    if (!lp.coprime()) throw PreconditionError("a and q are not coprime");
    const auto U = lucas_terms(lp, n);
    CyclotomicValue out;
    out.n = n;
    out.value = phi_value_from_terms(U, n);

    PartialFactorization pf = factor_cyclotomic_value(out.value, n, opt);
    const auto& found = pf.factors;
    out.unresolved = pf.cofactors;
    for (const auto& c : out.unresolved) out.unresolved_certified.push_back(order_certificate(lp, n, c));

    Int nonprim = make_int(n);
    for (u64 d : divisors(n)) {
        if (d < n) nonprim *= U[d];
    }
    for (const auto& f : found) {
        ClassifiedPrime cp;
        cp.prime = f.prime;
        cp.exponent = f.exponent;
        cp.divides_n = fits_u64(f.prime) && n % to_u64(f.prime) == 0;
        cp.primitive = !mpz_divisible_p(nonprim.get_mpz_t(), f.prime.get_mpz_t());
        const u64 r = mpz_fdiv_ui(f.prime.get_mpz_t(), n);
        cp.plus_minus_one = r == 1 || r == n - 1;
        if (!cp.primitive) {
            if (!fits_u64(f.prime)) throw std::logic_error("non-primitive prime beyond 64 bits");
            for (const auto& P : field.split_prime(to_u64(f.prime))) {
                IdealBoundCheck c;
                c.prime = f.prime;
                c.type = P.type;
                c.nu_phi = field.ideal_valuation(field.from_int(out.value), P).value;
                c.nu_n = field.ideal_valuation(field.from_int(make_int(n)), P).value;
                out.ideal_checks.push_back(c);
            }
        }
        out.primes.push_back(std::move(cp));
    }
    return out;
}

/// P(Phi_n(alpha, beta)) as a bracket.
inline LpfBound cyclotomic_lpf(const LucasParameters& lp, u64 n, const ClassifyOptions& opt = {})
{
    return lpf_bound(factor_cyclotomic_value(phi_value(lp, n), n, opt));
}

/// P(U_n) = P(a_f(p^{n-1})) as a bracket, assembled from Phi_d for d | n,
/// d > 1, after removing the common p-part. a = 0 is handled directly.
inline LpfBound lucas_term_lpf(const LucasParameters& lp, u64 n, const ClassifyOptions& opt = {})
{
    if (n == 0) throw DomainError("n must be positive");
    if (sgn(lp.a) == 0) {
        if (n % 2 == 0) throw DegenerateInputError("U_n vanishes for a = 0 and even n");
        if (n == 1) return {};
        return {largest_prime_factor(lp.q, opt.factor), true};
    }
    const LucasParameters cp = lp.coprime() ? lp : coprime_part(lp);
    LpfBound out;
    if (cp.removed_nu > 0 && n > 1) out.lower = make_int(cp.p);
    for (u64 d : divisors(n)) {
        if (d == 1) continue;
        LpfBound b = cyclotomic_lpf(cp, d, opt);
        if (b.lower > out.lower) out.lower = b.lower;
        out.exact = out.exact && b.exact;
    }
    return out;
}

/// log|N_K(Phi_n(alpha, beta))| / (2 h(gamma) phi(n)) with N_K(x) = x^2 for
/// rational x. Uses the coprime part of the pair.
inline double norm_phi_ratio(const EigenField& E, const CoefficientTable& table, u64 n)
{
    if (is_root_of_unity_gamma(E)) throw DomainError("gamma is a root of unity");
    LucasParameters lp = lucas_parameters(table, E.p);
    if (!lp.coprime()) lp = coprime_part(lp);
    const Int phi = phi_value(lp, n);
    if (sgn(phi) == 0) throw DegenerateInputError("Phi_n vanishes");
    const double h = height_gamma(E).method_a;
    const double log_norm = 2.0 * log_abs(phi);
    return log_norm / (2.0 * h * static_cast<double>(euler_phi(n)));
}

} // namespace hecke

#endif // HECKE_CYCLOTOMIC_HPP
