//! Integer polynomial factorization and real root isolation.
//!
//! Factorization is classic Zassenhaus: reduce mod a small prime where the
//! image stays squarefree, split with Berlekamp, Hensel-lift the factors to a
//! modulus beyond the Mignotte bound, then recombine subsets against the true
//! integer factors. Root isolation is Sturm bisection; refinement is plain
//! sign-change bisection to a requested width.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;

// ---------------------------------------------------------------------------
// arithmetic in F_p[x], p a small odd prime
// ---------------------------------------------------------------------------

fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fp_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul(acc, a, p);
        }
        a = fp_mul(a, a, p);
        e >>= 1;
    }
    acc
}

fn fp_inv(a: u64, p: u64) -> u64 {
    fp_pow(a, p - 2, p)
}

pub(crate) type FpPoly = Vec<u64>; // low degree first, no trailing zeros

fn fpp_trim(mut v: FpPoly) -> FpPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn fpp_deg(v: &FpPoly) -> usize {
    v.len().saturating_sub(1)
}

fn fpp_mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + fp_mul(x, y, p)) % p;
        }
    }
    fpp_trim(out)
}

fn fpp_sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    fpp_trim(out)
}

fn fpp_divrem(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    assert!(!b.is_empty());
    let db = fpp_deg(b);
    let inv = fp_inv(b[db], p);
    let mut r = a.clone();
    if r.len() <= db {
        return (vec![], fpp_trim(r));
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        if r[i] == 0 {
            continue;
        }
        let c = fp_mul(r[i], inv, p);
        q[i - db] = c;
        for j in 0..=db {
            r[i - db + j] = (r[i - db + j] + p - fp_mul(c, b[j], p)) % p;
        }
    }
    (fpp_trim(q), fpp_trim(r))
}

pub(crate) fn fpp_gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let (_, r) = fpp_divrem(&a, &b, p);
        a = b;
        b = r;
    }
    fpp_monic(&a, p)
}

fn fpp_monic(a: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() {
        return vec![];
    }
    let inv = fp_inv(*a.last().unwrap(), p);
    a.iter().map(|&c| fp_mul(c, inv, p)).collect()
}

fn fpp_derivative(a: &FpPoly, p: u64) -> FpPoly {
    if a.len() <= 1 {
        return vec![];
    }
    fpp_trim(
        a[1..]
            .iter()
            .enumerate()
            .map(|(i, &c)| fp_mul((i as u64 + 1) % p, c, p))
            .collect(),
    )
}

/// Extended Euclid: returns `(s, t)` with `s a + t b = 1`; inputs coprime.
fn fpp_bezout(a: &FpPoly, b: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (FpPoly, FpPoly) = (vec![1], vec![]);
    let (mut t0, mut t1): (FpPoly, FpPoly) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = fpp_divrem(&r0, &r1, p);
        let s = fpp_sub(&s0, &fpp_mul(&q, &s1, p), p);
        let t = fpp_sub(&t0, &fpp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    assert_eq!(fpp_deg(&r0), 0, "inputs not coprime");
    let inv = fp_inv(r0[0], p);
    let s: FpPoly = s0.iter().map(|&c| fp_mul(c, inv, p)).collect();
    let t: FpPoly = t0.iter().map(|&c| fp_mul(c, inv, p)).collect();
    (fpp_trim(s), fpp_trim(t))
}

// ---------------------------------------------------------------------------
// Berlekamp factorization of a monic squarefree polynomial mod p
// ---------------------------------------------------------------------------

fn berlekamp(f: &FpPoly, p: u64) -> Vec<FpPoly> {
    let d = fpp_deg(f);
    if d <= 1 {
        return vec![f.clone()];
    }
    // x^p mod f
    let mut xp: FpPoly = vec![0, 1];
    {
        let mut acc: FpPoly = vec![1];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fpp_divrem(&fpp_mul(&acc, &base, p), f, p).1;
            }
            base = fpp_divrem(&fpp_mul(&base, &base, p), f, p).1;
            e >>= 1;
        }
        xp = acc;
    }
    // Frobenius matrix Q: column i = x^(p i) mod f
    let mut cols: Vec<FpPoly> = Vec::with_capacity(d);
    let mut cur: FpPoly = vec![1];
    for _ in 0..d {
        cols.push(cur.clone());
        cur = fpp_divrem(&fpp_mul(&cur, &xp, p), f, p).1;
    }
    // nullspace of (Q - I)^T? We need v with Q v = v, i.e. rows are equations.
    // Build matrix m[r][c] = Q[r][c] - delta(r,c) and find right nullspace.
    let mut m = vec![vec![0u64; d]; d];
    for (c, col) in cols.iter().enumerate() {
        for r in 0..d {
            m[r][c] = col.get(r).copied().unwrap_or(0);
        }
    }
    for i in 0..d {
        m[i][i] = (m[i][i] + p - 1) % p;
    }
    // Gauss-Jordan over F_p
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..d {
        let Some(pr) = (row..d).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(pr, row);
        let inv = fp_inv(m[row][col], p);
        for j in 0..d {
            m[row][j] = fp_mul(m[row][j], inv, p);
        }
        for r in 0..d {
            if r != row && m[r][col] != 0 {
                let fac = m[r][col];
                for j in 0..d {
                    m[r][j] = (m[r][j] + p - fp_mul(fac, m[row][j], p)) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
    let nfactors = free.len();
    if nfactors == 1 {
        return vec![f.clone()];
    }
    let mut basis: Vec<FpPoly> = Vec::new();
    for &fc in &free {
        let mut v = vec![0u64; d];
        v[fc] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[r][fc]) % p;
        }
        basis.push(fpp_trim(v));
    }
    // split using the basis vectors
    let mut factors: Vec<FpPoly> = vec![f.clone()];
    for v in basis.iter() {
        if factors.len() == nfactors {
            break;
        }
        if fpp_deg(v) == 0 {
            continue; // constant vector splits nothing
        }
        for c in 0..p {
            if factors.len() == nfactors {
                break;
            }
            let shifted = if c == 0 {
                v.clone()
            } else {
                let mut w = v.clone();
                w[0] = (w[0] + p - c) % p;
                fpp_trim(w)
            };
            let mut next: Vec<FpPoly> = Vec::with_capacity(factors.len());
            for g in factors.drain(..) {
                if fpp_deg(&g) <= 1 {
                    next.push(g);
                    continue;
                }
                let h = fpp_gcd(&g, &shifted, p);
                if h.is_empty() || fpp_deg(&h) == 0 || fpp_deg(&h) == fpp_deg(&g) {
                    next.push(g);
                } else {
                    let (q, r) = fpp_divrem(&g, &h, p);
                    debug_assert!(r.is_empty());
                    next.push(h);
                    next.push(fpp_monic(&q, p));
                }
            }
            factors = next;
        }
    }
    factors
}

// ---------------------------------------------------------------------------
// integer polynomials modulo a big power of p
// ---------------------------------------------------------------------------

type MPolyInt = Vec<BigInt>; // low degree first

fn mp_trim(mut v: MPolyInt) -> MPolyInt {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn mp_reduce(v: &[BigInt], m: &BigInt) -> MPolyInt {
    mp_trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn mp_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> MPolyInt {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    mp_reduce(&out, m)
}

fn mp_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> MPolyInt {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        *o = (x + y).mod_floor(m);
    }
    mp_trim(out)
}

fn mp_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> MPolyInt {
    let n = a.len().max(b.len());
    let mut out = vec![BigInt::zero(); n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        *o = (x - y).mod_floor(m);
    }
    mp_trim(out)
}

/// Division by a monic divisor, coefficients mod `m`.
fn mp_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (MPolyInt, MPolyInt) {
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    let mut r: MPolyInt = a.to_vec();
    if r.len() <= db {
        return (vec![], mp_trim(r));
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for j in 0..=db {
            let t = &c * &b[j];
            r[i - db + j] -= t;
        }
        q[i - db] = c;
    }
    (mp_reduce(&q, m), mp_reduce(&r, m))
}

/// One quadratic Hensel step: given `f = g h (mod m)`, `s g + t h = 1 (mod m)`
/// with `h` monic, produces the same data mod `m^2`.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (MPolyInt, MPolyInt, MPolyInt, MPolyInt) {
    let m2 = m * m;
    let e = mp_sub(f, &mp_mul(g, h, &m2), &m2);
    let (q, r) = mp_divrem_monic(&mp_mul(s, &e, &m2), h, &m2);
    let gstar = mp_add(&mp_add(g, &mp_mul(t, &e, &m2), &m2), &mp_mul(&q, g, &m2), &m2);
    let hstar = mp_add(h, &r, &m2);
    let one = vec![BigInt::one()];
    let b = mp_sub(
        &mp_add(&mp_mul(s, &gstar, &m2), &mp_mul(t, &hstar, &m2), &m2),
        &one,
        &m2,
    );
    let (c, d) = mp_divrem_monic(&mp_mul(s, &b, &m2), &hstar, &m2);
    let sstar = mp_sub(s, &d, &m2);
    let tstar = mp_sub(
        &mp_sub(t, &mp_mul(t, &b, &m2), &m2),
        &mp_mul(&c, &gstar, &m2),
        &m2,
    );
    (gstar, hstar, sstar, tstar)
}

/// Lifts the factorization `f = prod(factors) (mod p)` (all monic, f monic
/// mod target) to the target modulus, which must be a power of `p` obtained by
/// repeated squaring.
fn hensel_lift_tree(
    f: &[BigInt],
    factors: &[FpPoly],
    p: u64,
    target: &BigInt,
) -> Vec<MPolyInt> {
    if factors.len() == 1 {
        return vec![mp_reduce(f, target)];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let pb = BigInt::from(p);
    let mut gp: FpPoly = vec![1];
    for x in left {
        gp = fpp_mul(&gp, x, p);
    }
    let mut hp: FpPoly = vec![1];
    for x in right {
        hp = fpp_mul(&hp, x, p);
    }
    let (sp, tp) = fpp_bezout(&gp, &hp, p);
    let to_big = |v: &FpPoly| -> MPolyInt { v.iter().map(|&c| BigInt::from(c)).collect() };
    let mut g = to_big(&gp);
    let mut h = to_big(&hp);
    let mut s = to_big(&sp);
    let mut t = to_big(&tp);
    let mut m = pb.clone();
    while &m < target {
        let (g2, h2, s2, t2) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = &m * &m;
    }
    let g = mp_reduce(&g, target);
    let h = mp_reduce(&h, target);
    let mut out = hensel_lift_tree(&g, left, p, target);
    out.extend(hensel_lift_tree(&h, right, p, target));
    out
}

// ---------------------------------------------------------------------------
// Zassenhaus driver
// ---------------------------------------------------------------------------

fn centered(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &(&r * 2) > m {
        r - m
    } else {
        r
    }
}

fn int_poly_primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut content = BigInt::zero();
    for c in v {
        content = content.gcd(c);
    }
    if content.is_zero() {
        return v.to_vec();
    }
    if v.last().unwrap().is_negative() {
        content = -content;
    }
    v.iter().map(|c| c / &content).collect()
}

fn small_primes() -> &'static [u64] {
    &[
        3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
        97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181,
        191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
    ]
}

/// Factors a squarefree polynomial into irreducible integer-primitive factors
/// with positive leading coefficients. Constant content is dropped. The input
/// must be squarefree (run [`squarefree_part`] first).
pub fn factor_squarefree(poly: &Poly) -> Result<Vec<Poly>> {
    let (_, mut f) = poly.primitive_integer();
    if f.len() <= 1 {
        return Ok(vec![]);
    }
    let mut out: Vec<Poly> = Vec::new();
    // strip powers of x
    while f[0].is_zero() {
        out.push(Poly::from_ints(&[0, 1]));
        f.remove(0);
    }
    if f.len() <= 2 {
        if f.len() == 2 {
            out.push(Poly::from_bigints(&f));
        }
        return Ok(out);
    }

    let d = f.len() - 1;
    let lc = f[d].clone();
    // choose a prime keeping the image squarefree
    let mut chosen: Option<u64> = None;
    for &p in small_primes() {
        if (&lc % p).is_zero() {
            continue;
        }
        let fbar: FpPoly = fpp_trim(
            f.iter()
                .map(|c| c.mod_floor(&BigInt::from(p)).try_into().unwrap_or(0u64))
                .collect(),
        );
        if fpp_deg(&fbar) != d {
            continue;
        }
        let der = fpp_derivative(&fbar, p);
        if der.is_empty() {
            continue;
        }
        let g = fpp_gcd(&fbar, &der, p);
        if fpp_deg(&g) == 0 {
            chosen = Some(p);
            break;
        }
    }
    let Some(p) = chosen else {
        return Err(Error::EliminationDegenerate(
            "no squarefree prime reduction found; input may not be squarefree".into(),
        ));
    };
    let pb = BigInt::from(p);
    let fbar: FpPoly = fpp_trim(
        f.iter()
            .map(|c| u64::try_from(c.mod_floor(&pb)).unwrap())
            .collect(),
    );
    let modular = berlekamp(&fpp_monic(&fbar, p), p);
    if modular.len() == 1 {
        out.push(Poly::from_bigints(&f));
        return Ok(out);
    }

    // Mignotte-style bound: coefficients of lc * (any factor) fit below B
    let norm2_sq: BigInt = f.iter().map(|c| c * c).sum();
    let b = (norm2_sq.sqrt() + 1) * (BigInt::one() << d) * lc.abs();
    let target = {
        let mut m = pb.clone();
        let need = &b * 2 + 1;
        while m < need {
            m = &m * &m;
        }
        m
    };
    // monic image of f mod target
    let lc_inv = modinv(&lc, &target);
    let ftilde: MPolyInt = {
        let mut v: MPolyInt = f.iter().map(|c| (c * &lc_inv).mod_floor(&target)).collect();
        let n = v.len();
        v[n - 1] = BigInt::one();
        v
    };
    let mut lifted = hensel_lift_tree(&ftilde, &modular, p, &target);

    // subset recombination
    let mut fcur = f.clone();
    'outer: loop {
        let k = lifted.len();
        let dcur = fcur.len() - 1;
        let lccur = fcur[dcur].clone();
        for size in 1..=k / 2 {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                let degsum: usize = idx.iter().map(|&i| lifted[i].len() - 1).sum();
                if 2 * degsum <= dcur {
                    // candidate = pp(centered(lc * prod))
                    let mut prod: MPolyInt = vec![lccur.mod_floor(&target)];
                    for &i in &idx {
                        prod = mp_mul(&prod, &lifted[i], &target);
                    }
                    let cand_int: Vec<BigInt> =
                        prod.iter().map(|c| centered(c, &target)).collect();
                    let cand = int_poly_primitive(&cand_int);
                    let cand_poly = Poly::from_bigints(&cand);
                    if cand_poly.degree().is_some_and(|dd| dd >= 1) {
                        let fcur_poly = Poly::from_bigints(&fcur);
                        let (q, r) = fcur_poly.divrem(&cand_poly)?;
                        if r.is_zero() {
                            out.push(cand_poly);
                            let (_, qi) = q.primitive_integer();
                            fcur = qi;
                            let mut keep: Vec<MPolyInt> = Vec::new();
                            for (i, item) in lifted.into_iter().enumerate() {
                                if !idx.contains(&i) {
                                    keep.push(item);
                                }
                            }
                            lifted = keep;
                            if fcur.len() <= 1 {
                                return Ok(out);
                            }
                            continue 'outer;
                        }
                    }
                }
                if !next_combination(&mut idx, k) {
                    break;
                }
            }
        }
        break;
    }
    if fcur.len() > 1 {
        out.push(Poly::from_bigints(&fcur));
    }
    Ok(out)
}

/// Advances `idx` to the next size-`|idx|` combination of `{0..k}`;
/// false when exhausted.
fn next_combination(idx: &mut [usize], k: usize) -> bool {
    let size = idx.len();
    let mut pos = size;
    while pos > 0 {
        pos -= 1;
        if idx[pos] < pos + k - size {
            idx[pos] += 1;
            for j in pos + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Modular inverse of `a` mod `m` (gcd must be 1).
fn modinv(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "non-invertible leading coefficient");
    e.x.mod_floor(m)
}

/// The squarefree part `p / gcd(p, p')`, monic.
pub fn squarefree_part(p: &Poly) -> Poly {
    if p.degree().unwrap_or(0) == 0 {
        return Poly::one();
    }
    let g = p.gcd(&p.derivative());
    p.exact_div(&g).monic()
}

// ---------------------------------------------------------------------------
// Sturm isolation and bisection refinement
// ---------------------------------------------------------------------------

/// Scales to integer-primitive by a positive factor (signs preserved).
fn positive_primitive(p: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let (q, v) = p.primitive_integer();
    let w = Poly::from_bigints(&v);
    if q.is_negative() {
        -&w
    } else {
        w
    }
}

fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![positive_primitive(p), positive_primitive(&p.derivative())];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            return seq;
        }
        let (_, r) = seq[n - 2].divrem(&seq[n - 1]).unwrap();
        if r.is_zero() {
            return seq;
        }
        seq.push(positive_primitive(&-&r));
    }
}

fn sign_variations(seq: &[Poly], x: &Rational) -> usize {
    let mut last = 0i32;
    let mut count = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_zero() {
            0
        } else if v.is_negative() {
            -1
        } else {
            1
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Cauchy bound: all real roots lie strictly inside `(-B, B)`.
fn root_bound(p: &Poly) -> Rational {
    let lc = p.leading_coeff().abs();
    let mut m = Rational::zero();
    let d = p.deg0();
    for i in 0..d {
        m = m.max(p.coeff(i).abs());
    }
    &Rational::one() + &(m / lc)
}

/// Isolating intervals for all real roots of a squarefree polynomial: open
/// intervals `(lo, hi)`, each containing exactly one root, endpoints nonroot,
/// sorted ascending.
pub fn isolate_real_roots(p: &Poly) -> Vec<(Rational, Rational)> {
    if p.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let seq = sturm_sequence(p);
    let b = root_bound(p);
    let lo = -&b;
    let hi = b;
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    let mut stack = vec![(lo, hi)];
    while let Some((a, c)) = stack.pop() {
        let n = sign_variations(&seq, &a) as i64 - sign_variations(&seq, &c) as i64;
        if n <= 0 {
            continue;
        }
        if n == 1 {
            out.push((a, c));
            continue;
        }
        // choose a midpoint that is not a root
        let half = Rational::ratio(1, 2);
        let mut mid = &(&a + &c) * &half;
        let mut inc = 1i64;
        while p.eval(&mid).is_zero() {
            // nudge deterministically
            let frac = Rational::ratio(inc, 64 + 2 * inc);
            mid = &a + &(&(&c - &a) * &frac);
            inc += 1;
        }
        stack.push((a, mid.clone()));
        stack.push((mid, c));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Shrinks an isolating interval (endpoints nonroot, exactly one simple root
/// inside) until `hi - lo <= eps`; may return an exact point interval.
pub fn refine_root(p: &Poly, lo: &Rational, hi: &Rational, eps: &Rational) -> (Rational, Rational) {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let slo = p.eval(&lo).is_negative();
    debug_assert!(
        p.eval(&lo).is_negative() != p.eval(&hi).is_negative(),
        "no sign change on isolating interval"
    );
    let half = Rational::ratio(1, 2);
    while (&hi - &lo) > *eps {
        let mid = &(&lo + &hi) * &half;
        let v = p.eval(&mid);
        if v.is_zero() {
            return (mid.clone(), mid);
        }
        if v.is_negative() == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
