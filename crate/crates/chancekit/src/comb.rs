//! Small combinatorial tables used by the moment pipelines.

use num_bigint::BigInt;
use num_traits::One;

use crate::rational::Rational;

/// Binomial coefficient C(n, k) as an exact rational (0 for k > n).
pub fn binomial(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    Rational::new(num, den).unwrap()
}

/// C(x, k) for rational x: x(x-1)...(x-k+1)/k!.
pub fn binomial_rational(x: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc = &acc * &(x - &Rational::from_int(i as i64));
        acc = acc / Rational::from_int(i as i64 + 1);
    }
    acc
}

pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rational::from_bigint(acc)
}

/// Table of Stirling numbers of the second kind, `S(i, j)` for `i, j <= n`.
///
/// These convert factorial moments to raw moments:
/// `E[T^k] = sum_j S(k, j) E[T(T-1)...(T-j+1)]`.
pub fn stirling2_table(n: usize) -> Vec<Vec<Rational>> {
    let mut s = vec![vec![Rational::zero(); n + 1]; n + 1];
    s[0][0] = Rational::one();
    for i in 1..=n {
        for j in 1..=i {
            let carry = &s[i - 1][j] * &Rational::from_int(j as i64);
            s[i][j] = &s[i - 1][j - 1] + &carry;
        }
    }
    s
}
