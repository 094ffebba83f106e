#include "hecke/cyclotomic.hpp"

#include <gtest/gtest.h>

#include <complex>
#include <numeric>

using namespace hecke;

namespace {

// Phi_n(x) from roots of unity in floating point, rounded; valid for small n.
std::vector<long> cyclotomic_by_roots(u64 n)
{
    std::vector<std::complex<long double>> poly{1.0L};
    const long double pi = std::acos(-1.0L);
    for (u64 j = 1; j <= n; ++j) {
        if (std::gcd(j, n) != 1) continue;
        std::complex<long double> z = std::polar(1.0L, 2 * pi * j / n);
        std::vector<std::complex<long double>> next(poly.size() + 1, 0.0L);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= z * poly[i];
        }
        poly = next;
    }
    std::vector<long> out;
    for (auto c : poly) out.push_back(std::lround(static_cast<double>(c.real())));
    return out;
}

LucasParameters params(long a, long q) { return {Int(a), Int(q)}; }

} // namespace

TEST(Lucas, Terms)
{
    auto lp = params(5, 7);
    EXPECT_EQ(lucas_term(lp, 1), 1);
    EXPECT_EQ(lucas_term(lp, 2), 5);
    EXPECT_EQ(lucas_term(lp, 3), 25 - 7);
    EXPECT_THROW(lucas_term(lp, 0), DomainError);
}

TEST(Lucas, MatchesEigenformPrimePowers)
{
    for (auto f : FormDescriptor::all()) {
        auto t = eigenform_table(f, 50);
        for (u64 p : {2, 3, 5, 7, 11, 13, 47}) {
            auto lp = lucas_parameters(t, p);
            for (unsigned d = 1; d <= 12; ++d) ASSERT_EQ(lucas_term(lp, d), coeff_prime_power(t, p, d - 1));
        }
    }
}

TEST(Phi, HandExpansions)
{
    for (auto [a, q] : {std::pair{3L, 5L}, {-24L, 2048L}, {7L, 11L}}) {
        auto lp = params(a, q);
        EXPECT_EQ(phi_value(lp, 2), a);
        EXPECT_EQ(phi_value(lp, 3), a * a - q);
        EXPECT_EQ(phi_value(lp, 4), a * a - 2 * q);
        EXPECT_EQ(phi_value(lp, 6), a * a - 3 * q);
    }
    EXPECT_THROW(phi_value(params(3, 5), 1), DomainError);
    // a = 0 makes U_2 = 0.
    EXPECT_THROW(phi_value(params(0, 5), 4), DegenerateInputError);
}

TEST(Cyclotomic, PolynomialAgainstRootsOfUnity)
{
    for (u64 n = 1; n <= 60; ++n) {
        auto c = cyclotomic_polynomial(n);
        auto ref = cyclotomic_by_roots(n);
        ASSERT_EQ(c.size(), ref.size()) << n;
        for (std::size_t i = 0; i < c.size(); ++i) ASSERT_EQ(c[i], ref[i]) << n << " " << i;
    }
    auto c105 = cyclotomic_polynomial(105);
    EXPECT_EQ(c105[7], -2);
}

TEST(Psi, SmallCases)
{
    EXPECT_EQ(psi_polynomial(3).coeffs, (std::vector<Int>{-1, 1}));
    EXPECT_EQ(psi_polynomial(4).coeffs, (std::vector<Int>{-2, 1}));
    EXPECT_EQ(psi_polynomial(6).coeffs, (std::vector<Int>{-3, 1}));
    EXPECT_THROW(psi_polynomial(2), DomainError);
    for (u64 n = 3; n <= 200; ++n) EXPECT_EQ(2 * psi_polynomial(n).degree(), euler_phi(n)) << n;
}

TEST(Psi, PolynomialIdentityAtIntegerPoints)
{
    // Psi_n((A+B)^2, AB) = Phi_n(A, B) = B^phi(n) Phi_n(A/B) for integer A, B.
    for (u64 n = 3; n <= 40; ++n) {
        auto psi = psi_polynomial(n);
        auto c = cyclotomic_polynomial(n);
        for (long A : {-3L, 1L, 2L, 5L}) {
            for (long B : {1L, 2L, 7L}) {
                Int direct = 0;
                for (std::size_t i = 0; i < c.size(); ++i) {
                    direct += c[i] * pow_int(Int(A), i) * pow_int(Int(B), c.size() - 1 - i);
                }
                ASSERT_EQ(psi.evaluate(Int((A + B) * (A + B)), Int(A * B)), direct) << n << " " << A << " " << B;
            }
        }
    }
}

TEST(Phi, ProductIdentityAndPsiConsistencyAllForms)
{
    PrimeSieve sieve(50);
    std::vector<HomogeneousPoly> psi(31);
    for (u64 n = 3; n <= 30; ++n) psi[n] = psi_polynomial(n);
    for (auto f : FormDescriptor::all()) {
        auto t = eigenform_table(f, 50);
        for (u64 p : sieve.primes()) {
            auto lp = lucas_parameters(t, p);
            LucasParameters neg = lp;
            neg.a = -lp.a;
            for (u64 n = 2; n <= 30; ++n) {
                ASSERT_EQ(divisor_product(lp, n), coeff_prime_power(t, p, n - 1)) << f.name << " p=" << p << " n=" << n;
                if (n >= 3) {
                    const Int phi = phi_value(lp, n);
                    ASSERT_EQ(phi, psi[n].evaluate(lp.a * lp.a, lp.q));
                    ASSERT_EQ(phi, phi_value(neg, n));
                }
            }
        }
    }
}

TEST(Divisibility, OddPrimePowers)
{
    auto t = delta_series(1000);
    PrimeSieve sieve(1000);
    for (u64 p : sieve.primes()) {
        auto pw = prime_power_coefficients(t, p, 21);
        for (unsigned m = 1; m <= 10; ++m) {
            ASSERT_TRUE(mpz_divisible_p(pw[2 * m + 1].get_mpz_t(), pw[1].get_mpz_t())) << p << " " << m;
        }
    }
}

TEST(CoprimePart, DeltaAtTwo)
{
    auto t = delta_series(50);
    auto lp = lucas_parameters(t, 2);
    EXPECT_FALSE(lp.coprime());
    auto cp = coprime_part(lp);
    EXPECT_TRUE(cp.coprime());
    EXPECT_EQ(cp.a, -3);
    EXPECT_EQ(cp.q, 32);
    EXPECT_EQ(cp.removed_nu, 3u);
    // Phi_n(alpha, beta) = p^{nu phi(n)} Phi_n(alpha', beta').
    for (u64 n = 2; n <= 30; ++n) {
        EXPECT_EQ(phi_value(lp, n), pow_int(2, 3 * euler_phi(n)) * phi_value(cp, n)) << n;
    }
}

TEST(Classify, DeltaPFiveNSeven)
{
    auto t = delta_series(50);
    auto lp = coprime_part(lucas_parameters(t, 5));
    auto L = field_from_lucas(lp.a, lp.q);
    auto cv = classify_prime_divisors(lp, 7, L.field);
    EXPECT_TRUE(cv.complete());
    EXPECT_EQ(cv.congruence_violations(), 0u);
    Int prod = 1;
    for (const auto& p : cv.primes) {
        prod *= pow_int(p.prime, p.exponent);
        if (p.primitive) {
            EXPECT_TRUE(p.plus_minus_one) << p.prime;
            EXPECT_FALSE(p.divides_n);
        }
    }
    EXPECT_EQ(prod, abs(cv.value));
    EXPECT_EQ(cv.ideal_bound_violations(), 0u);
}

TEST(Classify, Preconditions)
{
    auto t = delta_series(50);
    auto lp = lucas_parameters(t, 5);
    auto L = field_from_lucas(lp.a, lp.q);
    EXPECT_THROW(classify_prime_divisors(lp, 7, L.field), PreconditionError);
    auto cp = coprime_part(lp);
    EXPECT_THROW(classify_prime_divisors(cp, 6, L.field), PreconditionError);
}

TEST(Classify, SmallPrimesCertifiedCongruence)
{
    // Certified primes for Delta, p <= 50, 7 <= n <= 12 satisfy the congruence.
    auto t = delta_series(50);
    PrimeSieve sieve(50);
    for (u64 p : sieve.primes()) {
        auto lp = lucas_parameters(t, p);
        if (!lp.coprime()) lp = coprime_part(lp);
        auto L = field_from_lucas(lp.a, lp.q);
        ClassifyOptions opt;
        opt.factor.rho_budget = 1 << 16;
        for (u64 n = 7; n <= 12; ++n) {
            auto cv = classify_prime_divisors(lp, n, L.field, opt);
            if (!cv.complete()) continue;
            EXPECT_EQ(cv.congruence_violations(), 0u) << p << " " << n;
            for (const auto& c : cv.ideal_checks) {
                if (c.type != SplitType::ramified) EXPECT_TRUE(c.holds()) << p << " " << n << " " << c.prime;
            }
        }
    }
}

// Rank of apparition: least m >= 1 with l | U_m, by direct iteration mod l.
u64 rank_of_apparition(long a, long q, u64 l)
{
    const long L = static_cast<long>(l);
    long u0 = 0, u1 = 1;
    for (u64 m = 1; m <= 2 * l + 2; ++m) {
        if (u1 % L == 0) return m;
        long u2 = ((a % L) * u1 - (q % L) * u0) % L;
        if (u2 < 0) u2 += L;
        u0 = u1;
        u1 = u2;
    }
    return 0;
}

TEST(OrderCertificate, PrimesMatchRankOfApparition)
{
    const std::pair<long, long> pairs[] = {{1, 2}, {3, 5}, {-24, 2048}, {252, 3}, {5, 7}};
    PrimeSieve sieve(3000);
    for (auto [a, q] : pairs) {
        const long disc = a * a - 4 * q;
        u64 hits = 0;
        for (u64 n = 3; n <= 30; ++n) {
            for (u64 l : sieve.primes()) {
                const long L = static_cast<long>(l);
                if (q % L == 0 || disc % L == 0 || n % l == 0) continue;
                const bool exact = rank_of_apparition(a, q, l) == n;
                EXPECT_EQ(order_certificate(params(a, q), n, make_int(l)), exact) << a << " " << q << " " << n << " " << l;
                if (exact) {
                    ++hits;
                    EXPECT_TRUE(l % n == 1 || l % n == n - 1) << l << " " << n;
                }
            }
        }
        EXPECT_GT(hits, 15u) << a << " " << q;
    }
}

TEST(OrderCertificate, CompositesAndRejections)
{
    // x^2 - 3x + 5, disc -11; first level with two primes of rank n and
    // one of rank 2n or 3n below 20000.
    auto lp = params(3, 5);
    PrimeSieve sieve(20000);
    u64 n = 0;
    std::vector<u64> good, bad;
    for (u64 m = 7; m <= 40 && n == 0; ++m) {
        good.clear();
        bad.clear();
        for (u64 l : sieve.primes_between(3, 20000)) {
            if (l == 5 || l == 11 || m % l == 0) continue;
            const u64 z = rank_of_apparition(3, 5, l);
            if (z == m) good.push_back(l);
            else if (z == 2 * m || z == 3 * m) bad.push_back(l);
        }
        if (good.size() >= 2 && !bad.empty()) n = m;
    }
    ASSERT_GT(n, 0u);
    EXPECT_TRUE(order_certificate(lp, n, make_int(good[0]) * make_int(good[1])));
    EXPECT_FALSE(order_certificate(lp, n, make_int(good[0]) * make_int(bad[0])));
    EXPECT_FALSE(order_certificate(lp, n, make_int(good[0]) * make_int(n)));
    EXPECT_FALSE(order_certificate(lp, n, make_int(good[0]) * 11));
    EXPECT_FALSE(order_certificate(lp, n, Int(1)));
}

TEST(OrderCertificate, FactoredDeltaCofactors)
{
    // Products of the primitive primes of fully factored values certify;
    // adding any non-primitive or n-dividing prime breaks the certificate.
    auto t = delta_series(50);
    PrimeSieve sieve(50);
    u64 tried = 0;
    for (u64 p : sieve.primes()) {
        auto lp = lucas_parameters(t, p);
        if (!lp.coprime()) lp = coprime_part(lp);
        auto L = field_from_lucas(lp.a, lp.q);
        ClassifyOptions opt;
        opt.factor.rho_budget = 1 << 14;
        for (u64 n = 7; n <= 16; ++n) {
            auto cv = classify_prime_divisors(lp, n, L.field, opt);
            if (!cv.complete()) {
                EXPECT_EQ(cv.unresolved.size(), cv.unresolved_certified.size());
                continue;
            }
            Int prim = 1;
            bool nonprim = false;
            for (const auto& c : cv.primes) {
                if (c.primitive) prim *= pow_int(c.prime, c.exponent);
                else nonprim = true;
            }
            if (prim == 1) continue;
            ++tried;
            EXPECT_TRUE(order_certificate(lp, n, prim)) << p << " " << n;
            if (nonprim) EXPECT_FALSE(order_certificate(lp, n, abs(cv.value))) << p << " " << n;
        }
    }
    EXPECT_GT(tried, 20u);
}

TEST(NormRatio, DeltaAtEleven)
{
    auto t = delta_series(50);
    auto E = field_from_prime(t, 11);
    const double r101 = norm_phi_ratio(E, t, 101);
    EXPECT_GE(r101, 0.8);
    EXPECT_LE(r101, 1.2);
    // |ratio - 1| stays inside the error envelope 2^omega(n) log(n+1) / phi(n).
    for (u64 n = 31; n <= 211; ++n) {
        if (!is_prime_u64(n) && n != 210) continue;
        const double envelope = std::ldexp(1.0, omega(n)) * std::log(n + 1.0) / euler_phi(n);
        EXPECT_LE(std::abs(norm_phi_ratio(E, t, n) - 1), envelope) << n;
    }
    EXPECT_GT(std::abs(norm_phi_ratio(E, t, 210) - 1), std::abs(norm_phi_ratio(E, t, 211) - 1));
}
