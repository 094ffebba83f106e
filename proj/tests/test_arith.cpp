#include "hecke/arith.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace hecke;

namespace {

bool trial_division_is_prime(u64 n)
{
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

std::vector<std::pair<u64, unsigned>> as_pairs(const Factorization& f)
{
    std::vector<std::pair<u64, unsigned>> out;
    for (const auto& pf : f.factors) out.emplace_back(to_u64(pf.prime), pf.exponent);
    return out;
}

} // namespace

TEST(Sieve, SmallLimits)
{
    auto s = sieve_primes(10);
    EXPECT_EQ(s.primes(), (std::vector<u64>{2, 3, 5, 7}));
    EXPECT_EQ(s.pi(10), 4u);
    EXPECT_EQ(sieve_primes(2).primes(), (std::vector<u64>{2}));
    EXPECT_THROW(sieve_primes(1), DomainError);
    EXPECT_THROW(s.pi(11), LookupError);
}

TEST(Sieve, PiOfTenToFiveMatchesTrialDivision)
{
    std::size_t oracle = 0;
    for (u64 n = 2; n <= 100000; ++n) oracle += trial_division_is_prime(n);
    EXPECT_EQ(oracle, 9592u);
    EXPECT_EQ(sieve_primes(100000).pi(100000), oracle);
}

TEST(Sieve, EveryListedPrimePassesDeterministicTest)
{
    auto s = sieve_primes(200000);
    for (u64 p : s.primes()) ASSERT_TRUE(is_prime_u64(p)) << p;
    std::size_t count = 0;
    for (u64 n = 0; n <= 200000; ++n) count += is_prime_u64(n);
    EXPECT_EQ(count, s.primes().size());
}

TEST(Primality, KnownValues)
{
    EXPECT_TRUE(is_prime_u64(18446744073709551557ull));   // largest 64-bit prime
    EXPECT_FALSE(is_prime_u64(3215031751ull));            // strong pseudoprime to 2,3,5,7
    EXPECT_TRUE(is_probable_prime(Int("170141183460469231731687303715884105727")));  // 2^127 - 1
    EXPECT_FALSE(is_probable_prime(Int("340282366920938463463374607431768211457")));  // F7
    EXPECT_FALSE(is_prime_u64(3825123056546413051ull));   // strong pseudoprime to bases 2..23
}

TEST(Factorize, SpecExamples)
{
    auto f = factorize(Int(-24));
    EXPECT_EQ(f.sign, -1);
    EXPECT_EQ(as_pairs(f), (std::vector<std::pair<u64, unsigned>>{{2, 3}, {3, 1}}));

    auto z = factorize(Int(0));
    EXPECT_EQ(z.sign, 0);
    EXPECT_TRUE(z.factors.empty());
    EXPECT_TRUE(factorize(Int(1)).factors.empty());
    EXPECT_TRUE(factorize(Int(-1)).factors.empty());

    // tau(5) = 4830
    EXPECT_EQ(as_pairs(factorize(Int(4830))),
              (std::vector<std::pair<u64, unsigned>>{{2, 1}, {3, 1}, {5, 1}, {7, 1}, {23, 1}}));
}

TEST(Factorize, ReassemblesExhaustivelyToOneMillion)
{
    for (i64 n = -1000000; n <= 1000000; ++n) {
        auto f = factorize(make_int(n));
        ASSERT_EQ(f.reassemble(), make_int(n)) << n;
        for (std::size_t i = 1; i < f.factors.size(); ++i) ASSERT_LT(f.factors[i - 1].prime, f.factors[i].prime);
    }
}

TEST(Factorize, RandomWideIntegersReassemble)
{
    // Random 128-bit integers may hide two 64-bit primes, which rho cannot
    // split in test time; the partial result must still reassemble exactly
    // and every reported prime must be prime.
    std::mt19937_64 rng(2024);
    FactorOptions opt;
    opt.rho_budget = 1u << 14;
    std::size_t complete = 0;
    for (int i = 0; i < 10000; ++i) {
        Int n = (make_int(rng()) << 64) + make_int(rng());
        auto pf = factorize_bounded(n, opt);
        ASSERT_EQ(pf.reassemble(), n);
        for (const auto& f : pf.factors) ASSERT_TRUE(is_probable_prime(f.prime));
        for (const auto& c : pf.cofactors) ASSERT_FALSE(is_probable_prime(c));
        complete += pf.complete();
    }
    EXPECT_GT(complete, 4500u);
}

TEST(Factorize, ProductsOfRandomPrimesFactorCompletely)
{
    std::mt19937_64 rng(99);
    for (int i = 0; i < 300; ++i) {
        std::vector<Int> primes;
        Int n = 1;
        while (bit_length(n) < 120) {
            Int p = make_int(rng() >> (24 + rng() % 30));
            mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
            primes.push_back(p);
            n *= p;
        }
        auto f = factorize(n);
        ASSERT_EQ(f.reassemble(), n);
        std::sort(primes.begin(), primes.end());
        EXPECT_EQ(f.largest_prime(), primes.back());
    }
}

TEST(Factorize, SemiprimeAcrossMontgomeryBackends)
{
    for (unsigned bits : {62u, 64u, 100u, 127u, 128u, 160u}) {
        Int p = Int(1) << 28;
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
        Int q = (Int(1) << (bits - 29)) - 1;
        mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
        auto f = factorize(p * q);
        ASSERT_EQ(f.factors.size(), 2u) << bits;
        EXPECT_EQ(f.factors[0].prime, p);
        EXPECT_EQ(f.factors[1].prime, q);
    }
}

TEST(Factorize, PrimePowers)
{
    Int p("1000000007");
    auto f = factorize(pow_int(p, 5) * 12);
    ASSERT_EQ(f.factors.size(), 3u);
    EXPECT_EQ(f.factors[2].prime, p);
    EXPECT_EQ(f.factors[2].exponent, 5u);
}

TEST(LargestPrimeFactor, Conventions)
{
    EXPECT_EQ(largest_prime_factor(Int(0)), 1);
    EXPECT_EQ(largest_prime_factor(Int(1)), 1);
    EXPECT_EQ(largest_prime_factor(Int(-1)), 1);
    EXPECT_EQ(largest_prime_factor(Int(-24)), 3);
}

TEST(LargestPrimeFactor, DividesItsArgument)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20000; ++i) {
        Int n = make_int(static_cast<i64>(rng() % 2000000001ull) - 1000000000);
        if (abs(n) < 2) continue;
        Int P = largest_prime_factor(n);
        ASSERT_TRUE(mpz_divisible_p(n.get_mpz_t(), P.get_mpz_t())) << n;
    }
}

TEST(LargestPrimeFactor, ExceedsAgreesWithFullFactorization)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 3000; ++i) {
        Int n = make_int(rng() >> (rng() % 60));
        double t = static_cast<double>(rng() % 50);
        ASSERT_EQ(largest_prime_factor_exceeds(n, t), cmp(largest_prime_factor(n), t) > 0) << n << " " << t;
    }
    // P(1) = 1 by convention.
    EXPECT_TRUE(largest_prime_factor_exceeds(Int(1), 0.5));
    EXPECT_FALSE(largest_prime_factor_exceeds(Int(-1), 1.0));
}

TEST(LpfBound, IncompleteFactorizationGivesLowerBound)
{
    Int p = (Int(1) << 61) - 1;
    Int q = (Int(1) << 89) - 1;
    FactorOptions opt;
    opt.rho_budget = 1000;
    auto pf = factorize_bounded(p * q * 6, opt);
    ASSERT_FALSE(pf.complete());
    auto b = lpf_bound(pf);
    EXPECT_FALSE(b.exact);
    EXPECT_GT(b.lower, 10000);
    EXPECT_LE(b.lower, q);

    auto full = lpf_bound(factorize_bounded(Int(4830)));
    EXPECT_TRUE(full.exact);
    EXPECT_EQ(full.lower, 23);
}

TEST(Valuation, Examples)
{
    EXPECT_EQ(valuation(Int(-24), Int(2)).value, 3u);
    EXPECT_EQ(valuation(Int(7), Int(2)).value, 0u);
    EXPECT_TRUE(valuation(Int(0), Int(5)).infinite);
    EXPECT_THROW(valuation(Int(12), Int(4)), DomainError);
}

TEST(Multiplicative, Examples)
{
    auto v12 = multiplicative_suite(12);
    EXPECT_EQ(v12.mu, 0);
    EXPECT_EQ(v12.phi, 4u);
    EXPECT_EQ(v12.omega, 2u);

    auto v1 = multiplicative_suite(1, 3);
    EXPECT_EQ(v1.mu, 1);
    EXPECT_EQ(v1.phi, 1u);
    EXPECT_EQ(v1.omega, 0u);
    EXPECT_EQ(v1.sigma_k, 1);

    EXPECT_EQ(multiplicative_suite(6, 3).sigma_k, 252);
    EXPECT_THROW(multiplicative_suite(0), DomainError);
}

TEST(Multiplicative, PhiMatchesGcdCount)
{
    for (u64 n = 1; n <= 10000; ++n) {
        u64 count = 0;
        for (u64 j = 1; j <= n; ++j) count += std::gcd(j, n) == 1;
        ASSERT_EQ(euler_phi(n), count) << n;
    }
}

TEST(Multiplicative, SigmaAndMobiusByBruteForce)
{
    for (u64 n = 1; n <= 2000; ++n) {
        Int s3 = 0;
        int mu_sum = 0;
        for (u64 d = 1; d <= n; ++d) {
            if (n % d) continue;
            s3 += pow_int(d, 3);
            mu_sum += mobius(d);
        }
        ASSERT_EQ(multiplicative_suite(n, 3).sigma_k, s3) << n;
        ASSERT_EQ(mu_sum, n == 1 ? 1 : 0) << n;
    }
}

TEST(SmallestDivisorGeq3, Examples)
{
    EXPECT_EQ(smallest_divisor_geq3(12), 3u);
    EXPECT_EQ(smallest_divisor_geq3(8), 4u);
    EXPECT_EQ(smallest_divisor_geq3(35), 5u);
    EXPECT_EQ(smallest_divisor_geq3(3), 3u);
    EXPECT_EQ(smallest_divisor_geq3(4), 4u);
    EXPECT_THROW(smallest_divisor_geq3(2), DomainError);
}

TEST(Kronecker, Examples)
{
    EXPECT_EQ(kronecker_symbol(Int(-4), 5), 1);
    EXPECT_EQ(kronecker_symbol(Int(-4), 7), -1);
    EXPECT_EQ(kronecker_symbol(Int(12), 3), 0);
    EXPECT_EQ(kronecker_symbol(Int(-7), 2), 1);
    EXPECT_EQ(kronecker_symbol(Int(-3), 2), -1);
    EXPECT_EQ(kronecker_symbol(Int(-4), 2), 0);
}

TEST(Kronecker, MatchesEulerCriterionByEnumeration)
{
    const auto sieve = sieve_primes(200);
    for (u64 q : sieve.primes()) {
        if (q == 2) continue;
        for (i64 D = -300; D <= 300; ++D) {
            i64 r = ((D % static_cast<i64>(q)) + static_cast<i64>(q)) % static_cast<i64>(q);
            int expected = 0;
            if (r != 0) {
                expected = -1;
                for (u64 x = 1; x < q; ++x) {
                    if (x * x % q == static_cast<u64>(r)) expected = 1;
                }
            }
            ASSERT_EQ(kronecker_symbol(make_int(D), q), expected) << D << " " << q;
        }
    }
}

TEST(SqrtMod, RootsSquareBack)
{
    const auto sieve = sieve_primes(3000);
    for (u64 q : sieve.primes()) {
        for (u64 a = 0; a < std::min<u64>(q, 200); ++a) {
            auto r = sqrt_mod(a, q);
            if (r) {
                ASSERT_EQ(*r * *r % q, a) << a << " mod " << q;
            } else {
                ASSERT_EQ(kronecker_symbol(make_int(a), q), -1);
            }
        }
    }
}
