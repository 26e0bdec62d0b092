//! Exact integer and rational helpers: p-adic valuations, primality and
//! factorization (trial division followed by Brent's variant of Pollard rho).

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"12"`, `"-3"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Decimal for integers, `p/q` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

/// Natural log of |n|, accurate for integers far beyond f64 range.
pub fn ln_abs(n: &Int) -> f64 {
    let n = n.abs();
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (&n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_abs_rat(r: &Rat) -> f64 {
    ln_abs(r.numer()) - ln_abs(r.denom())
}

/// Largest `e` with `p^e | n`.
pub fn valuation(n: &Int, p: &Int) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    Ok(valuation_unchecked(n, p))
}

pub(crate) fn valuation_unchecked(n: &Int, p: &Int) -> u32 {
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        n = q;
        e += 1;
    }
}

/// Signed p-adic valuation of a nonzero rational.
pub(crate) fn valuation_rat(r: &Rat, p: &Int) -> i64 {
    valuation_unchecked(r.numer(), p) as i64 - valuation_unchecked(r.denom(), p) as i64
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_DIVISION_LIMIT as usize;
        let mut sieve = vec![true; limit + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= limit {
            if sieve[i] {
                let mut j = i * i;
                while j <= limit {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=limit).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

pub const TRIAL_DIVISION_LIMIT: u32 = 1_000_000;

/// Miller–Rabin. Deterministic below 3.3·10^24 (first 13 prime bases),
/// with 8 extra bases beyond that.
pub fn is_prime(n: &Int) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        for &p in &small_primes()[..25] {
            let p = p as u64;
            if small == p {
                return true;
            }
            if small % p == 0 {
                return false;
            }
        }
        if small < 97 * 97 {
            return true;
        }
    } else {
        for &p in &small_primes()[..25] {
            if (n % p).is_zero() {
                return false;
            }
        }
    }
    let one = Int::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    const BASES: [u32; 21] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
    ];
    'witness: for &a in BASES.iter() {
        let a = Int::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `sign · ∏ p^e` with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(Int, u32)>,
}

impl Factorization {
    pub fn value(&self) -> Int {
        let mut v = Int::from(self.sign);
        for (p, e) in &self.factors {
            v *= num_traits::pow(p.clone(), *e as usize);
        }
        v
    }

    pub fn primes(&self) -> impl Iterator<Item = &Int> {
        self.factors.iter().map(|(p, _)| p)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (p, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Work limits for [`factorize_with`].
#[derive(Debug, Clone, Copy)]
pub struct FactorBudget {
    pub rho_iterations: u64,
    pub rho_attempts: u32,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { rho_iterations: 1 << 20, rho_attempts: 8 }
    }
}

pub fn factorize(n: &Int) -> Result<Factorization> {
    factorize_with(n, &FactorBudget::default())
}

pub fn factorize_with(n: &Int, budget: &FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Degenerate("cannot factor zero"));
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut rest = n.abs();
    let mut found: Vec<(Int, u32)> = Vec::new();

    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let pp = p as u64;
        if let Some(r) = rest.to_u64() {
            if pp.saturating_mul(pp) > r {
                break;
            }
        }
        if (&rest % p).is_zero() {
            let pb = Int::from(p);
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            found.push((pb, e));
        }
    }

    if !rest.is_one() {
        let limit = Int::from(TRIAL_DIVISION_LIMIT);
        if rest <= &limit * &limit || is_prime(&rest) {
            found.push((rest, 1));
        } else {
            let mut stack = vec![rest];
            let mut large: Vec<Int> = Vec::new();
            while let Some(m) = stack.pop() {
                if is_prime(&m) {
                    large.push(m);
                    continue;
                }
                match split_rho(&m, budget) {
                    Some(div) => {
                        let other = &m / &div;
                        stack.push(div);
                        stack.push(other);
                    }
                    None => return Err(Error::Unfactored { residue: m }),
                }
            }
            large.sort();
            for p in large {
                match found.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => found.push((p, 1)),
                }
            }
        }
    }
    Ok(Factorization { sign, factors: found })
}

/// Brent–Pollard rho: returns a nontrivial divisor of composite `n`.
fn split_rho(n: &Int, budget: &FactorBudget) -> Option<Int> {
    if n.is_even() {
        return Some(Int::from(2));
    }
    if let Some(root) = perfect_power_root(n) {
        return Some(root);
    }
    let one = Int::one();
    for attempt in 0..budget.rho_attempts {
        let c = Int::from(attempt as u64 * 2 + 1);
        let f = |x: &Int| (x * x + &c) % n;
        let mut y = Int::from(2 + attempt as u64);
        let mut r: u64 = 1;
        let mut q = Int::one();
        let mut g = Int::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut iterations = 0u64;
        const BATCH: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            iterations += r;
            r *= 2;
            if iterations > budget.rho_iterations {
                break;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if g > one && g < *n {
            return Some(g);
        }
    }
    None
}

fn perfect_power_root(n: &Int) -> Option<Int> {
    for k in 2..=n.bits() as u32 {
        let root = n.nth_root(k);
        if root <= Int::one() {
            break;
        }
        if num_traits::pow(root.clone(), k as usize) == *n {
            return Some(root);
        }
    }
    None
}

/// Exact rational `k`-th root, if one exists.
pub fn rat_nth_root(r: &Rat, k: u32) -> Option<Rat> {
    if k == 0 {
        return None;
    }
    if r.is_negative() && k % 2 == 0 {
        return None;
    }
    let root_of = |n: &Int| -> Option<Int> {
        let root = n.nth_root(k);
        (num_traits::pow(root.clone(), k as usize) == *n).then_some(root)
    };
    Some(Rat::new(root_of(r.numer())?, root_of(r.denom())?))
}

pub fn lcm_all<'a>(xs: impl IntoIterator<Item = &'a Int>) -> Int {
    xs.into_iter().fold(Int::one(), |acc, x| acc.lcm(x))
}

pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a Int>) -> Int {
    xs.into_iter().fold(Int::zero(), |acc, x| acc.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&int(12), &int(2)).unwrap(), 2);
        assert_eq!(valuation(&int(-135), &int(5)).unwrap(), 1);
        assert_eq!(valuation(&int(7), &int(7)).unwrap(), 1);
        assert_eq!(valuation(&int(0), &int(7)), Err(Error::ValuationOfZero));
        assert_eq!(valuation(&int(10), &int(4)), Err(Error::NotPrime(int(4))));
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&int(1080)).unwrap();
        assert_eq!(f.sign, 1);
        assert_eq!(f.factors, vec![(int(2), 3), (int(3), 3), (int(5), 1)]);
        let f = factorize(&int(-1)).unwrap();
        assert_eq!(f.sign, -1);
        assert!(f.factors.is_empty());
        assert_eq!(factorize(&int(512)).unwrap().factors, vec![(int(2), 9)]);
        assert!(factorize(&int(0)).is_err());
    }

    #[test]
    fn factorize_matches_trial_division() {
        for n in (1u64..3000).chain([999_983 * 2, 1_000_003 * 97, 600_851_475_143]) {
            let ours = factorize(&Int::from(n)).unwrap();
            let oracle: Vec<(Int, u32)> =
                trial_division(n).into_iter().map(|(p, e)| (Int::from(p), e)).collect();
            assert_eq!(ours.factors, oracle, "n = {n}");
        }
    }

    #[test]
    fn rho_splits_semiprimes_beyond_trial_range() {
        let p = Int::from(1_000_000_007u64);
        let q = Int::from(998_244_353u64);
        let r = Int::from(2_147_483_647u64);
        let n = &p * &q * &r * &r;
        let f = factorize(&n).unwrap();
        assert_eq!(f.value(), n);
        assert_eq!(f.factors, vec![(q, 1), (p, 1), (r, 2)]);
    }

    #[test]
    fn budget_exhaustion_is_explicit() {
        let p = Int::from(1_000_000_007u64);
        let q = Int::from(998_244_353u64);
        let budget = FactorBudget { rho_iterations: 1, rho_attempts: 0 };
        match factorize_with(&(&p * &q), &budget) {
            Err(Error::Unfactored { residue }) => assert_eq!(residue, &p * &q),
            other => panic!("expected unfactored residue, got {other:?}"),
        }
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = vec![2, 3, 97, 7919, 1_000_000_007, 2_305_843_009_213_693_951];
        for p in primes {
            assert!(is_prime(&Int::from(p)), "{p}");
        }
        for c in [1u64, 0, 4, 561, 1_000_000_007 * 3, 3_215_031_751] {
            assert!(!is_prime(&Int::from(c)), "{c}");
        }
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rat_nth_root(&ratio(8, 27), 3), Some(ratio(2, 3)));
        assert_eq!(rat_nth_root(&ratio(-8, 27), 3), Some(ratio(-2, 3)));
        assert_eq!(rat_nth_root(&ratio(-4, 9), 2), None);
        assert_eq!(rat_nth_root(&rat(5), 2), None);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat(" -3/6 ").unwrap(), ratio(-1, 2));
        assert_eq!(fmt_rat(&ratio(4, 2)), "2");
        assert_eq!(fmt_rat(&ratio(-1, 3)), "-1/3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    proptest::proptest! {
        #[test]
        fn valuation_is_additive(n in 1i64..1_000_000, m in 1i64..1_000_000, pi in 0usize..6) {
            let p = int([2, 3, 5, 7, 11, 13][pi]);
            let vn = valuation(&int(n), &p).unwrap();
            let vm = valuation(&int(m), &p).unwrap();
            proptest::prop_assert_eq!(valuation(&(int(n) * int(m)), &p).unwrap(), vn + vm);
        }

        #[test]
        fn factorize_multiplies_back(n in -1_000_000_000_000i64..1_000_000_000_000) {
            proptest::prop_assume!(n != 0);
            let f = factorize(&int(n)).unwrap();
            proptest::prop_assert_eq!(f.value(), int(n));
            for w in f.factors.windows(2) {
                proptest::prop_assert!(w[0].0 < w[1].0);
            }
            for (p, _) in &f.factors {
                proptest::prop_assert!(is_prime(p));
            }
        }
    }
}
