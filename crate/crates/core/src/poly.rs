//! Dense univariate polynomials over the integers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending degree, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly(Vec::new())
    }

    pub fn one() -> Self {
        IntPoly(vec![BigInt::one()])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    fn lead(&self) -> &BigInt {
        self.0.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn div_scalar(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.0.iter().map(|x| x / c).collect())
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        self.div_scalar(&c)
    }

    /// Exact quotient; panics if `d` does not divide `self` over the integers.
    pub fn exact_div(&self, d: &IntPoly) -> IntPoly {
        let (q, r) = self.div_rem_exact(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    fn div_rem_exact(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let lc = d.lead();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let top = &r[i + dd];
            if top.is_zero() {
                continue;
            }
            let (c, rem) = top.div_rem(lc);
            assert!(rem.is_zero(), "inexact polynomial division");
            for (j, dc) in d.0.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        (IntPoly::new(q), IntPoly::new(r))
    }

    /// Pseudo-remainder `lc(d)^(deg a - deg d + 1) * a mod d`.
    fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let Some(da) = self.degree() else { return IntPoly::zero() };
        if da < dd {
            return self.clone();
        }
        let lc = d.lead().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let top = r.lead().clone();
            let mut shifted = vec![BigInt::zero(); dr - dd];
            shifted.extend(d.0.iter().map(|c| c * &top));
            r = r.scale(&lc) - IntPoly::new(shifted);
        }
        r
    }

    /// Primitive gcd (positive leading coefficient).
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.is_zero() {
            return b;
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a
    }

    /// First `n` power-series coefficients of `self / den`; `den(0)` must be ±1.
    pub fn series_div(&self, den: &IntPoly, n: usize) -> Vec<BigInt> {
        let d0 = den.coeff(0);
        assert!(d0.abs().is_one(), "denominator constant term must be a unit");
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeff(k);
            for (i, di) in den.0.iter().enumerate().skip(1).take(k) {
                acc -= di * &out[k - i];
            }
            out.push(acc * &d0);
        }
        out
    }
}

impl Add for IntPoly {
    type Output = IntPoly;
    fn add(self, o: IntPoly) -> IntPoly {
        let n = self.0.len().max(o.0.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(self, o: IntPoly) -> IntPoly {
        let n = self.0.len().max(o.0.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly(self.0.into_iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}

/// `P/Q` with `Q(0) = 1`, `deg Q <= bound` and `deg P < bound` whose expansion
/// matches every supplied term, found by Berlekamp-Massey modulo a run of
/// 62-bit primes and Chinese remaindering, then checked exactly. With at least
/// `2 * bound` terms such a fraction is unique, so a `Some` is a proof.
pub fn rational_from_terms(terms: &[BigInt], bound: usize) -> Option<(IntPoly, IntPoly)> {
    let mut order = 0;
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = Vec::new();
    let mut previous: Option<Vec<BigInt>> = None;
    for p in primes_below(1 << 62).take(20_000) {
        let big_p = BigInt::from(p);
        let seq: Vec<u64> = terms.iter().map(|t| t.mod_floor(&big_p).try_into().expect("reduced")).collect();
        let (l, c) = berlekamp_massey(&seq, p);
        if l > bound {
            return None;
        }
        if l < order {
            continue;
        }
        if l > order {
            order = l;
            modulus = BigInt::one();
            acc = vec![BigInt::zero(); l + 1];
            previous = None;
        }
        // Garner step: acc += modulus * ((c - acc) / modulus mod p)
        let inv = BigInt::from(inv_mod(modulus.mod_floor(&big_p).try_into().expect("reduced"), p));
        for (a, &ci) in acc.iter_mut().zip(&c) {
            let t = ((BigInt::from(ci) - &*a) * &inv).mod_floor(&big_p);
            *a += &modulus * t;
        }
        modulus *= &big_p;
        let half = &modulus >> 1;
        let sym: Vec<BigInt> = acc.iter().map(|a| if *a > half { a - &modulus } else { a.clone() }).collect();
        if previous.as_ref() == Some(&sym) {
            let den = IntPoly::new(sym.clone());
            let product: Vec<BigInt> = (0..terms.len())
                .map(|k| (0..=k.min(order)).map(|i| &sym[i] * &terms[k - i]).sum())
                .collect();
            if product[order.min(product.len())..].iter().all(Zero::is_zero) {
                return Some((IntPoly::new(product[..order.min(product.len())].to_vec()), den));
            }
        }
        previous = Some(sym);
    }
    None
}

/// Shortest connection polynomial `c` (`c[0] = 1`) with
/// `sum_i c[i] s[n - i] = 0` for all `n >= l`, over `Z/p`.
fn berlekamp_massey(s: &[u64], p: u64) -> (usize, Vec<u64>) {
    let mul = |a: u64, b: u64| (u128::from(a) * u128::from(b) % u128::from(p)) as u64;
    let mut c = vec![1u64];
    let mut b = vec![1u64];
    let (mut l, mut m, mut last) = (0usize, 1usize, 1u64);
    for n in 0..s.len() {
        let mut d = s[n];
        for i in 1..=l.min(c.len() - 1) {
            d = (d + mul(c[i], s[n - i])) % p;
        }
        if d == 0 {
            m += 1;
            continue;
        }
        let coef = mul(d, inv_mod(last, p));
        let saved = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + m] = (c[i + m] + p - mul(coef, bi)) % p;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = saved;
            last = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, 0);
    (l, c)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = (u128::from(r) * u128::from(a) % u128::from(p)) as u64;
        }
        a = (u128::from(a) * u128::from(a) % u128::from(p)) as u64;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if let Some(&b) = BASES.iter().find(|&&b| n.is_multiple_of(b)) {
        return n == b;
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = (u128::from(x) * u128::from(x) % u128::from(n)) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn primes_below(n: u64) -> impl Iterator<Item = u64> {
    (2..n).rev().filter(|&k| is_prime(k))
}
