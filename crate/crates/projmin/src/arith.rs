//! Primes, p-adic valuations, integer factorization, and content extraction.
//!
//! Everything here is exact. Factorization refuses to return a partial
//! answer: when its budget runs out it reports the unfactored cofactor
//! instead of silently dropping primes.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::Result;

/// Arbitrary-precision rational, always gcd-reduced with positive denominator
/// (the representation `num_rational` maintains canonically).
pub type Rational = num_rational::BigRational;

/// Trial division bound used before switching to Pollard rho.
const TRIAL_LIMIT: u32 = 1_000_000;

/// Total Pollard-rho step budget per `factor` call.
const RHO_BUDGET: u64 = 1_500_000;

fn small_primes() -> &'static [u32] {
    static SIEVE: OnceLock<Vec<u32>> = OnceLock::new();
    SIEVE.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for p in 2..=n {
            if !composite[p] {
                primes.push(p as u32);
                let mut q = p * p;
                while q <= n {
                    composite[q] = true;
                    q += p;
                }
            }
        }
        primes
    })
}

/// A certified prime number. Construction runs a primality test.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(BigUint);

impl Prime {
    pub fn new(value: BigUint) -> Result<Self> {
        if is_prime(&value) {
            Ok(Prime(value))
        } else {
            Err(Error::NotPrime(value))
        }
    }

    pub fn from_u64(value: u64) -> Result<Self> {
        Prime::new(BigUint::from(value))
    }

    /// Internal constructor for values already certified prime.
    fn certified(value: BigUint) -> Self {
        debug_assert!(is_prime(&value));
        Prime(value)
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }

    pub fn to_rational(&self) -> Rational {
        Rational::from_integer(self.to_bigint())
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prime({})", self.0)
    }
}

/// The first `count` primes not in `exclude`, in increasing order.
pub fn primes_excluding<'a, I>(count: usize, exclude: I) -> Vec<Prime>
where
    I: IntoIterator<Item = &'a Prime>,
{
    let excluded: Vec<&Prime> = exclude.into_iter().collect();
    let mut out = Vec::with_capacity(count);
    for &p in small_primes() {
        if out.len() == count {
            break;
        }
        let candidate = Prime::certified(BigUint::from(p));
        if !excluded.contains(&&candidate) {
            out.push(candidate);
        }
    }
    assert!(out.len() == count, "prime table exhausted");
    out
}

/// Strong probable-prime test to the given base. `n` must be odd, > 2.
fn strong_probable_prime(n: &BigUint, base: u64) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let base = BigUint::from(base) % n;
    if base.is_zero() {
        return true;
    }
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Miller-Rabin with the fixed base set that is deterministic below
/// 3.3·10^24; above that bound the same bases make this a strong
/// probable-prime test.
pub fn is_prime(n: &BigUint) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p_big = BigUint::from(p);
        if *n == p_big {
            return true;
        }
        if (n % &p_big).is_zero() {
            return false;
        }
    }
    [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
        .iter()
        .all(|&base| strong_probable_prime(n, base))
}

/// Extended valuation: the p-adic order, with `ord_p(0) = +infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    /// The finite value; panics on infinity.
    pub fn finite(&self) -> i64 {
        match self {
            Valuation::Finite(v) => *v,
            Valuation::Infinite => panic!("valuation is infinite"),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => std::cmp::Ordering::Equal,
            (Valuation::Infinite, _) => std::cmp::Ordering::Greater,
            (_, Valuation::Infinite) => std::cmp::Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// p-adic order of an integer.
pub fn ord_p_int(n: &BigInt, p: &Prime) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p = p.to_bigint();
    let mut n = n.clone();
    let mut ord = 0i64;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(ord);
        }
        ord += 1;
        n = q;
    }
}

/// p-adic order of a rational: `ord_p(num) - ord_p(den)`.
pub fn ord_p(x: &Rational, p: &Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let num = ord_p_int(x.numer(), p).finite();
    let den = ord_p_int(x.denom(), p).finite();
    Valuation::Finite(num - den)
}

/// Pollard rho (Brent's cycle variant) on an odd composite with no factor
/// below the trial-division bound. Returns a nontrivial factor or `None`
/// when the step budget runs out.
fn pollard_rho(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let one = BigUint::one();
    // Deterministic sequence of (increment, start) parameters.
    for c in 1u64..64 {
        let c_big = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c_big) % n;
        let mut x = BigUint::from(2u32);
        let mut cycle_len = 1u64;
        loop {
            let y = x.clone();
            for _ in 0..cycle_len {
                if *budget == 0 {
                    return None;
                }
                *budget -= 1;
                x = f(&x);
                let diff = if x > y { &x - &y } else { &y - &x };
                if diff.is_zero() {
                    break;
                }
                let g = diff.gcd(n);
                if g > one && g < *n {
                    return Some(g);
                }
            }
            if x == y {
                break; // cycle closed without a factor; try the next c
            }
            cycle_len *= 2;
            if cycle_len > 1 << 24 {
                break;
            }
        }
    }
    None
}

/// Full prime factorization of a nonzero integer (sign discarded).
///
/// Trial division up to 10^6, then Miller-Rabin plus Pollard rho on what
/// remains. If the rho budget is exhausted the error carries the unfactored
/// cofactor; no partial silently-wrong answer is ever returned.
pub fn factor(n: &BigInt) -> Result<BTreeMap<Prime, u32>> {
    if n.is_zero() {
        return Err(Error::FactorZero);
    }
    let mut remaining = n.magnitude().clone();
    let mut out: BTreeMap<Prime, u32> = BTreeMap::new();
    let one = BigUint::one();

    for &p in small_primes() {
        if remaining.is_one() {
            break;
        }
        let p_big = BigUint::from(p);
        if &p_big * &p_big > remaining {
            break;
        }
        let mut mult = 0u32;
        loop {
            let (q, r) = remaining.div_rem(&p_big);
            if !r.is_zero() {
                break;
            }
            remaining = q;
            mult += 1;
        }
        if mult > 0 {
            out.insert(Prime::certified(p_big), mult);
        }
    }
    if remaining > one && remaining <= BigUint::from(TRIAL_LIMIT) * BigUint::from(TRIAL_LIMIT) {
        // Below the square of the trial bound and untouched by it: prime.
        *out.entry(Prime::certified(remaining)).or_insert(0) += 1;
        return Ok(out);
    }

    let mut budget = RHO_BUDGET;
    let mut stack = vec![remaining];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *out.entry(Prime::certified(m)).or_insert(0) += 1;
            continue;
        }
        match pollard_rho(&m, &mut budget) {
            Some(g) => {
                stack.push(&m / &g);
                stack.push(g);
            }
            None => {
                // Collect everything still unfactored into the reported cofactor.
                let mut cofactor = m;
                for rest in stack {
                    cofactor *= rest;
                }
                return Err(Error::FactorBudget { cofactor });
            }
        }
    }
    Ok(out)
}

/// Splits a nonzero list of rationals as `content * primitive` with the
/// primitive part integral, of gcd 1, and first nonzero entry positive; the
/// content carries the sign. Exact: `content * primitive[i] == coeffs[i]`.
pub fn content_and_primitive(coeffs: &[Rational]) -> Result<(Rational, Vec<BigInt>)> {
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroContent);
    }
    let mut num_gcd = BigUint::zero();
    let mut den_lcm = BigUint::one();
    for c in coeffs {
        num_gcd = num_gcd.gcd(c.numer().magnitude());
        den_lcm = den_lcm.lcm(c.denom().magnitude());
    }
    let mut content = Rational::new(BigInt::from(num_gcd), BigInt::from(den_lcm));
    let mut primitive: Vec<BigInt> = coeffs
        .iter()
        .map(|c| {
            let q = c / &content;
            debug_assert!(q.is_integer());
            q.to_integer()
        })
        .collect();
    if let Some(first) = primitive.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in &mut primitive {
                *v = -v.clone();
            }
            content = -content;
        }
    }
    debug_assert!({
        let g = primitive
            .iter()
            .fold(BigUint::zero(), |acc, v| acc.gcd(v.magnitude()));
        g.is_one()
    });
    Ok((content, primitive))
}

/// Parses an exact rational from `"a"`, `"-a"`, or `"a/b"` decimal text.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    let (num_text, den_text) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let num: BigInt = num_text.parse().map_err(|_| bad())?;
    let den: BigInt = match den_text {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}
