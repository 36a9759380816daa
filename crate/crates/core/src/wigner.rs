//! Wigner 3-j and 6-j symbols from the Racah single-sum formulas.
//!
//! Every factorial ratio is carried as an exact big rational; only the final
//! `sign * sqrt(value^2)` is rounded to `f64`. Arguments are [`HalfInt`]s, so
//! half-integer angular momenta are represented exactly.
//!
//! Inputs outside the selection rules (triangle violations, `m1+m2+m3 != 0`,
//! `|m| > j`) evaluate to exactly zero. Inputs that are not angular momenta
//! at all (negative `j`, `j` and `m` of different parity) are rejected.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};
use crate::HalfInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThreeJArgs {
    pub j1: HalfInt,
    pub j2: HalfInt,
    pub j3: HalfInt,
    pub m1: HalfInt,
    pub m2: HalfInt,
    pub m3: HalfInt,
}

impl ThreeJArgs {
    pub fn new(j: [HalfInt; 3], m: [HalfInt; 3]) -> Self {
        ThreeJArgs {
            j1: j[0],
            j2: j[1],
            j3: j[2],
            m1: m[0],
            m2: m[1],
            m3: m[2],
        }
    }

    /// Convenience constructor taking doubled values `[2j1, 2j2, 2j3, 2m1, 2m2, 2m3]`.
    pub fn from_twice(v: [i32; 6]) -> Self {
        let h = HalfInt::from_twice;
        ThreeJArgs::new([h(v[0]), h(v[1]), h(v[2])], [h(v[3]), h(v[4]), h(v[5])])
    }

    fn validate(&self) -> Result<()> {
        for (j, m) in [(self.j1, self.m1), (self.j2, self.m2), (self.j3, self.m3)] {
            if j.twice() < 0 {
                return Err(invalid(format!("3-j: negative angular momentum {j}")));
            }
            if !j.same_parity(m) {
                return Err(invalid(format!(
                    "3-j: j = {j} and m = {m} differ by a non-integer"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SixJArgs {
    /// `{j[0] j[1] j[2]; j[3] j[4] j[5]}`
    pub j: [HalfInt; 6],
}

impl SixJArgs {
    pub fn new(j: [HalfInt; 6]) -> Self {
        SixJArgs { j }
    }

    pub fn from_twice(v: [i32; 6]) -> Self {
        SixJArgs {
            j: v.map(HalfInt::from_twice),
        }
    }
}

/// `|a-b| <= c <= a+b` with `a+b+c` integral.
pub fn triangle_ok(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.twice(), b.twice(), c.twice());
    a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && (a - b).abs() <= c && c <= a + b
}

const FACTORIAL_TABLE: usize = 160;

fn factorial(n: i64) -> BigInt {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(FACTORIAL_TABLE);
        let mut acc = BigInt::one();
        t.push(acc.clone());
        for k in 1..FACTORIAL_TABLE {
            acc *= k;
            t.push(acc.clone());
        }
        t
    });
    debug_assert!(n >= 0, "factorial of negative argument");
    let n = n as usize;
    if n < FACTORIAL_TABLE {
        return table[n].clone();
    }
    let mut acc = table[FACTORIAL_TABLE - 1].clone();
    for k in FACTORIAL_TABLE..=n {
        acc *= k;
    }
    acc
}

/// Integer value of a doubled quantity known to be even.
fn half(twice: i32) -> i64 {
    debug_assert!(twice % 2 == 0);
    i64::from(twice / 2)
}

/// Triangle coefficient `(a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!` (doubled inputs).
fn triangle_coefficient(a: i32, b: i32, c: i32) -> BigRational {
    BigRational::new(
        factorial(half(a + b - c)) * factorial(half(a - b + c)) * factorial(half(b + c - a)),
        factorial(half(a + b + c) + 1),
    )
}

/// Correctly scaled `num/den` to `f64` for arbitrarily large integers.
fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative() != den.is_negative();
    let (num, den) = (num.abs(), den.abs());
    // keep 64 significant bits in the integer quotient
    let shift = 64 - (num.bits() as i64 - den.bits() as i64);
    let q = if shift >= 0 {
        (num << (shift as usize)) / den
    } else {
        num / (den << ((-shift) as usize))
    };
    let mantissa = q.to_f64().unwrap_or(f64::INFINITY);
    let value = mantissa * 2f64.powi(-(shift as i32));
    if negative {
        -value
    } else {
        value
    }
}

/// `sign(s) * sqrt(s^2 * p)` with `p >= 0`, rounding once at the end.
fn signed_sqrt_product(sum: &BigRational, prefactor: &BigRational) -> f64 {
    if sum.is_zero() {
        return 0.0;
    }
    let sq = sum * sum * prefactor;
    let magnitude = ratio_to_f64(sq.numer(), sq.denom()).sqrt();
    if sum.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// Wigner 3-j symbol `(j1 j2 j3; m1 m2 m3)`.
pub fn wigner_3j(args: ThreeJArgs) -> Result<f64> {
    args.validate()?;
    let ThreeJArgs {
        j1,
        j2,
        j3,
        m1,
        m2,
        m3,
    } = args;
    if m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return Ok(0.0);
    }
    if (m1 + m2 + m3) != HalfInt::ZERO || !triangle_ok(j1, j2, j3) {
        return Ok(0.0);
    }

    let (tj1, tj2, tj3) = (j1.twice(), j2.twice(), j3.twice());
    let (tm1, tm2, tm3) = (m1.twice(), m2.twice(), m3.twice());

    let mut prefactor = triangle_coefficient(tj1, tj2, tj3);
    let projections = factorial(half(tj1 + tm1))
        * factorial(half(tj1 - tm1))
        * factorial(half(tj2 + tm2))
        * factorial(half(tj2 - tm2))
        * factorial(half(tj3 + tm3))
        * factorial(half(tj3 - tm3));
    prefactor *= BigRational::from_integer(projections);

    let k_min = 0.max(half(tj2 - tj3 - tm1)).max(half(tj1 - tj3 + tm2));
    let k_max = half(tj1 + tj2 - tj3)
        .min(half(tj1 - tm1))
        .min(half(tj2 + tm2));

    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den = factorial(k)
            * factorial(half(tj3 - tj2 + tm1) + k)
            * factorial(half(tj3 - tj1 - tm2) + k)
            * factorial(half(tj1 + tj2 - tj3) - k)
            * factorial(half(tj1 - tm1) - k)
            * factorial(half(tj2 + tm2) - k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }

    let value = signed_sqrt_product(&sum, &prefactor);
    // (-1)^(j1 - j2 - m3)
    if half(tj1 - tj2 - tm3).rem_euclid(2) == 1 {
        Ok(-value)
    } else {
        Ok(value)
    }
}

/// Wigner 6-j symbol `{j1 j2 j3; j4 j5 j6}`.
pub fn wigner_6j(args: SixJArgs) -> Result<f64> {
    if let Some(j) = args.j.iter().find(|j| j.twice() < 0) {
        return Err(invalid(format!("6-j: negative angular momentum {j}")));
    }
    let [j1, j2, j3, j4, j5, j6] = args.j;
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if !triads.iter().all(|&(a, b, c)| triangle_ok(a, b, c)) {
        return Ok(0.0);
    }
    let t = args.j.map(HalfInt::twice);

    let mut prefactor = BigRational::one();
    for &(a, b, c) in &triads {
        prefactor *= triangle_coefficient(a.twice(), b.twice(), c.twice());
    }

    let a = [
        half(t[0] + t[1] + t[2]),
        half(t[0] + t[4] + t[5]),
        half(t[3] + t[1] + t[5]),
        half(t[3] + t[4] + t[2]),
    ];
    let b = [
        half(t[0] + t[1] + t[3] + t[4]),
        half(t[1] + t[2] + t[4] + t[5]),
        half(t[2] + t[0] + t[5] + t[3]),
    ];
    let lo = *a.iter().max().expect("four triads");
    let hi = *b.iter().min().expect("three sums");

    let mut sum = BigRational::zero();
    for n in lo..=hi {
        let den = a.iter().map(|&ai| factorial(n - ai)).product::<BigInt>()
            * b.iter().map(|&bi| factorial(bi - n)).product::<BigInt>();
        let term = BigRational::new(factorial(n + 1), den);
        if n % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(signed_sqrt_product(&sum, &prefactor))
}
