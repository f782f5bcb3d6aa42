//! Diagnostics on coefficient sequences: exact linear-recurrence detection,
//! growth-rate estimation, band checks and the `lambda^n n^p` shape fit.
//!
//! Recurrence detection is exact over the rationals; the asymptotic fits are
//! floating point and report their residuals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{GrowthTable, Mode};

/// `c[n] = sum_{i=1..order} coefficients[i-1] * c[n-i]` for every
/// `n >= start + order` among the supplied terms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceReport {
    pub found: bool,
    pub max_order: usize,
    pub order: usize,
    pub start: usize,
    #[serde(serialize_with = "ser_rationals")]
    pub coefficients: Vec<BigRational>,
    /// Inclusive fitting window `[start, start + 2 order - 1]`.
    pub window: [usize; 2],
    /// Last index the recurrence reproduces exactly.
    pub verified_through: usize,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// Smallest-order constant-coefficient recurrence consistent with every
/// supplied term. Each candidate `(order, start)` must be backed by at least
/// `2 * order` equations, so at least `order` of them are pure verification.
pub fn find_recurrence(coeffs: &[BigInt], max_order: usize) -> Result<RecurrenceReport> {
    let n = coeffs.len();
    if max_order == 0 || n < 3 * max_order {
        return Err(Error::InsufficientData(format!(
            "{n} coefficients, need at least {} for order {max_order}",
            3 * max_order
        )));
    }
    let q: Vec<BigRational> = coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    for d in 1..=max_order {
        for start in 0..=(n - 3 * d) {
            let rows: Vec<Vec<BigRational>> = (start + d..n)
                .map(|m| {
                    let mut row: Vec<BigRational> = (1..=d).map(|i| q[m - i].clone()).collect();
                    row.push(q[m].clone());
                    row
                })
                .collect();
            if let Some(sol) = solve_consistent(rows, d) {
                let holds = (start + d..n).all(|m| {
                    let pred: BigRational = (1..=d).map(|i| &sol[i - 1] * &q[m - i]).sum();
                    pred == q[m]
                });
                if !holds {
                    return Err(Error::Invariant("recurrence failed post-hoc verification".into()));
                }
                return Ok(RecurrenceReport {
                    found: true,
                    max_order,
                    order: d,
                    start,
                    coefficients: sol,
                    window: [start, start + 2 * d - 1],
                    verified_through: n - 1,
                });
            }
        }
    }
    Ok(RecurrenceReport {
        found: false,
        max_order,
        order: 0,
        start: 0,
        coefficients: Vec::new(),
        window: [0, 0],
        verified_through: 0,
    })
}

/// Gaussian elimination on an augmented system with `unknowns` columns.
/// Returns a solution (free variables set to zero) iff the system is consistent.
fn solve_consistent(mut rows: Vec<Vec<BigRational>>, unknowns: usize) -> Option<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..=unknowns {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    let mut sol = vec![BigRational::zero(); unknowns];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = rows[i][unknowns].clone();
    }
    Some(sol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRate {
    pub value: f64,
    /// Present when the rate is a rational dominant root of a detected recurrence.
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<BigRational>,
    pub method: &'static str,
}

fn ser_opt_rational<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Estimate of the exponential growth base `e^h` of a sequence.
pub fn growth_rate(coeffs: &[BigInt]) -> Result<GrowthRate> {
    let positive: Vec<usize> = (0..coeffs.len()).filter(|&i| coeffs[i].is_positive()).collect();
    if coeffs.len() < 3 || positive.len() < 2 {
        return Err(Error::InsufficientData("need at least three terms, two positive".into()));
    }
    let max_order = (coeffs.len() / 3).min(8);
    let rec = find_recurrence(coeffs, max_order)?;
    if rec.found {
        if let Some((value, exact)) = dominant_root(&rec.coefficients) {
            return Ok(GrowthRate { value, exact, method: "recurrence" });
        }
    }
    let (a, b) = (positive[positive.len() - 2], positive[positive.len() - 1]);
    let value = ((ln_big(&coeffs[b]) - ln_big(&coeffs[a])) / (b - a) as f64).exp();
    Ok(GrowthRate { value, exact: None, method: "ratio" })
}

/// Largest real root of `x^d - r1 x^(d-1) - ... - rd`, exact when rational.
fn dominant_root(rec: &[BigRational]) -> Option<(f64, Option<BigRational>)> {
    let d = rec.len();
    // monic coefficients, descending
    let mut poly: Vec<BigRational> = vec![BigRational::one()];
    poly.extend(rec.iter().map(|r| -r.clone()));
    let eval = |x: &BigRational| poly.iter().fold(BigRational::zero(), |acc, c| acc * x + c);

    // integer polynomial for the rational root test
    let lcm = poly.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = poly.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let lowest = ints.iter().rposition(|c| !c.is_zero())?;
    let lead = &ints[0];
    let constant = &ints[lowest];
    let mut best: Option<BigRational> = if lowest < d { Some(BigRational::zero()) } else { None };
    for p in small_divisors(constant) {
        for q in small_divisors(lead) {
            for sign in [1, -1] {
                let x = BigRational::new(BigInt::from(sign) * &p, q.clone());
                if eval(&x).is_zero() && best.as_ref().is_none_or(|b| x.abs() > b.abs()) {
                    best = Some(x);
                }
            }
        }
    }

    // largest real root numerically, by a downward scan then bisection
    let fl: Vec<f64> = poly.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let f = |x: f64| fl.iter().fold(0.0, |acc, c| acc * x + c);
    let bound = 1.0 + fl[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let steps = 20_000;
    let mut numeric = None;
    let mut hi = bound;
    for i in 1..=steps {
        let lo = bound - 2.0 * bound * i as f64 / steps as f64;
        if f(lo) == 0.0 {
            numeric = Some(lo);
            break;
        }
        if f(lo).signum() != f(hi).signum() {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if f(mid).signum() == f(a).signum() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            numeric = Some(0.5 * (a + b));
            break;
        }
        hi = lo;
    }
    match (best, numeric) {
        (Some(r), Some(x)) if r.to_f64().unwrap_or(0.0).abs() * (1.0 + 1e-9) + 1e-9 >= x.abs() => {
            Some((r.to_f64().unwrap_or(f64::NAN).abs(), Some(r.abs())))
        }
        (Some(r), None) => Some((r.to_f64().unwrap_or(f64::NAN).abs(), Some(r.abs()))),
        (_, Some(x)) => Some((x.abs(), None)),
        (None, None) => None,
    }
}

fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let Some(v) = n.to_u64() else { return vec![BigInt::one()] };
    if v == 0 {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= v && i <= 1_000_000 {
        if v % i == 0 {
            out.push(BigInt::from(i));
            out.push(BigInt::from(v / i));
        }
        i += 1;
    }
    out
}

/// Natural log of a positive big integer.
pub fn ln_big(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "logarithm of a non-positive number");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BandCheckReport {
    pub range: [usize; 2],
    pub e_h: f64,
    pub r: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub ratio: f64,
    pub all_positive: bool,
}

/// `r_n = phi(n) n / e_h^n` over the cumulative table on `range` (inclusive).
pub fn band_check(table: &GrowthTable, e_h: f64, range: (usize, usize)) -> Result<BandCheckReport> {
    let (lo, hi) = range;
    if lo > hi || hi > table.n_max() {
        return Err(Error::RangeError(format!("range {lo}..={hi} outside 0..={}", table.n_max())));
    }
    if !(e_h > 0.0 && e_h.is_finite()) {
        return Err(Error::RangeError(format!("growth base {e_h} must be positive")));
    }
    let cum = table.to_mode(Mode::Cumulative)?;
    let r: Vec<f64> = (lo..=hi)
        .map(|n| {
            let c = BigInt::from_biguint(Sign::Plus, cum.coeffs[n].clone());
            if c.is_zero() {
                0.0
            } else {
                (ln_big(&c) + (n as f64).ln() - n as f64 * e_h.ln()).exp()
            }
        })
        .collect();
    let min = r.iter().copied().fold(f64::INFINITY, f64::min);
    let max = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(BandCheckReport {
        range: [lo, hi],
        e_h,
        all_positive: r.iter().all(|&x| x > 0.0 && x.is_finite()),
        ratio: max / min,
        min,
        max,
        r,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticFit {
    pub lambda: f64,
    pub p_hat: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    pub range: [usize; 2],
}

/// Least-squares slope of `log(b_n / lambda^n)` against `log n` on `range`
/// (inclusive; default `[len/2, len-1]`).
pub fn exponent_fit(coeffs: &[BigInt], lambda: f64, range: Option<(usize, usize)>) -> Result<AsymptoticFit> {
    if !(lambda > 1.0 && lambda.is_finite()) {
        return Err(Error::RangeError(format!("base {lambda} must exceed 1")));
    }
    if coeffs.is_empty() {
        return Err(Error::InsufficientData("no coefficients".into()));
    }
    let last = coeffs.len() - 1;
    let (lo, hi) = range.unwrap_or((coeffs.len() / 2, last));
    if lo > hi || hi > last {
        return Err(Error::RangeError(format!("range {lo}..={hi} outside 0..={last}")));
    }
    let lo = lo.max(1);
    if hi + 1 < lo + 8 {
        return Err(Error::InsufficientData("fit range needs at least 8 terms with n >= 1".into()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for n in lo..=hi {
        if !coeffs[n].is_positive() {
            return Err(Error::InsufficientData(format!("coefficient {n} is not positive")));
        }
        xs.push((n as f64).ln());
        ys.push(ln_big(&coeffs[n]) - n as f64 * lambda.ln());
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let p_hat = sxy / sxx;
    let intercept = my - p_hat * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - p_hat * x).powi(2)).sum::<f64>() / k).sqrt();
    Ok(AsymptoticFit { lambda, p_hat, intercept, residual, range: [lo, hi] })
}

/// Convenience conversion for tables.
pub fn to_bigints(v: &[BigUint]) -> Vec<BigInt> {
    v.iter().map(|c| BigInt::from_biguint(Sign::Plus, c.clone())).collect()
}
