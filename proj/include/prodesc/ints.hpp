#pragma once
#include <gmpxx.h>

namespace prodesc {

// All linear algebra is exact; entries are arbitrary-precision integers.
using Int = mpz_class;

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int abs_int(const Int& a) {
    Int r;
    mpz_abs(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

// canonical residue in [0, d); d > 0
inline Int mod_canonical(const Int& a, const Int& d) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
    return r;
}

// quotient minimizing |a - q*b|; b != 0
inline Int div_nearest(const Int& a, const Int& b) {
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    // floor division leaves r with the sign of b and |r| < |b|; stepping the
    // quotient up by one flips r across zero, so whichever side is closer wins
    Int twice = 2 * abs_int(r);
    if (twice > abs_int(b)) q += 1;
    return q;
}

inline Int exact_div(const Int& a, const Int& b) {
    Int q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace prodesc
