#ifndef HECKE_BIGINT_HPP
#define HECKE_BIGINT_HPP

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace hecke {

using Int = mpz_class;
using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;

inline Int make_int(u64 v)
{
    Int r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof(u64), 0, 0, &v);
    return r;
}

inline Int make_int(u128 v)
{
    u64 words[2] = {static_cast<u64>(v), static_cast<u64>(v >> 64)};
    Int r;
    mpz_import(r.get_mpz_t(), 2, -1, sizeof(u64), 0, 0, words);
    return r;
}

inline Int make_int(i64 v)
{
    Int r = make_int(v < 0 ? u64{0} - static_cast<u64>(v) : static_cast<u64>(v));
    if (v < 0) r = -r;
    return r;
}

inline std::size_t bit_length(const Int& x)
{
    return sgn(x) == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline bool fits_u64(const Int& x)
{
    return sgn(x) >= 0 && bit_length(x) <= 64;
}

inline bool fits_u128(const Int& x)
{
    return sgn(x) >= 0 && bit_length(x) <= 128;
}

/// Low 64 bits of |x|.
inline u64 to_u64(const Int& x)
{
    u64 words[2] = {0, 0};
    std::size_t count = 0;
    if (bit_length(x) > 128) {
        Int low = abs(x);
        mpz_fdiv_r_2exp(low.get_mpz_t(), low.get_mpz_t(), 64);
        mpz_export(words, &count, -1, sizeof(u64), 0, 0, low.get_mpz_t());
    } else {
        mpz_export(words, &count, -1, sizeof(u64), 0, 0, x.get_mpz_t());
    }
    return words[0];
}

/// Low 128 bits of |x|.
inline u128 to_u128(const Int& x)
{
    Int low = abs(x);
    mpz_fdiv_r_2exp(low.get_mpz_t(), low.get_mpz_t(), 128);
    u64 words[2] = {0, 0};
    std::size_t count = 0;
    mpz_export(words, &count, -1, sizeof(u64), 0, 0, low.get_mpz_t());
    return (static_cast<u128>(words[1]) << 64) | words[0];
}

inline Int pow_int(const Int& base, unsigned long e)
{
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Int pow_int(u64 base, unsigned long e)
{
    return pow_int(make_int(base), e);
}

/// Natural log of |x| without overflowing double for huge x.
inline double log_abs(const Int& x)
{
    signed long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

inline std::string to_decimal(const Int& x)
{
    return x.get_str(10);
}

inline Int parse_decimal(std::string_view text)
{
    Int r;
    std::string s(text);
    if (s.empty() || mpz_set_str(r.get_mpz_t(), s.c_str(), 10) != 0) {
        throw std::invalid_argument("not a decimal integer: '" + s + "'");
    }
    return r;
}

} // namespace hecke

#endif // HECKE_BIGINT_HPP
