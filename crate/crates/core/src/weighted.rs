//! Weighted projective points over ℚ, weighted gcds, normalization and
//! weighted multiplicative heights.
//!
//! Two height modes are provided. [`HeightMode::Literal`] multiplies every
//! place of ℚ into the product, the non-archimedean factors being
//! `max |xᵢ|_p^{1/qᵢ} = p^{-min νₚ(xᵢ)/qᵢ}`. [`HeightMode::Archimedean`]
//! keeps only the infinite place of the normalized integer representative.
//! The two differ whenever a prime divides every coordinate of the
//! normalized point.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, fmt_rat, gcd_all, ln_abs, parse_rat, rat_nth_root, rat_pow, valuation_rat, Int, Rat};
use crate::error::{Error, Result};

/// `[x₀ : … : xₙ]` with weights `(q₀, …, qₙ)`; never the zero tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub struct WeightedPoint {
    weights: Vec<u32>,
    coords: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    weights: Vec<u32>,
    coords: Vec<String>,
}

impl TryFrom<PointRepr> for WeightedPoint {
    type Error = Error;

    fn try_from(r: PointRepr) -> Result<Self> {
        let coords = r.coords.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
        WeightedPoint::new(r.weights, coords)
    }
}

impl From<WeightedPoint> for PointRepr {
    fn from(p: WeightedPoint) -> Self {
        PointRepr { weights: p.weights, coords: p.coords.iter().map(fmt_rat).collect() }
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(fmt_rat).collect();
        write!(f, "[{}]", c.join(" : "))
    }
}

fn check_shape(weights: &[u32], coords: &[Rat]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidPoint("no coordinates"));
    }
    if weights.len() != coords.len() {
        return Err(Error::InvalidPoint("weights and coordinates differ in length"));
    }
    if weights.contains(&0) {
        return Err(Error::InvalidPoint("weights must be positive"));
    }
    Ok(())
}

impl WeightedPoint {
    pub fn new(weights: Vec<u32>, coords: Vec<Rat>) -> Result<Self> {
        check_shape(&weights, &coords)?;
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidPoint("all coordinates are zero"));
        }
        Ok(WeightedPoint { weights, coords })
    }

    pub fn from_ints(weights: &[u32], coords: &[i64]) -> Result<Self> {
        Self::new(weights.to_vec(), coords.iter().map(|&c| Rat::from_integer(Int::from(c))).collect())
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn integer_coords(&self) -> Result<Vec<Int>> {
        self.coords
            .iter()
            .map(|c| if c.is_integer() { Ok(c.to_integer()) } else { Err(Error::NotInteger(fmt_rat(c))) })
            .collect()
    }

    /// `λ ⋆ (x₀, …, xₙ) = (λ^{q₀} x₀, …, λ^{qₙ} xₙ)`.
    pub fn lambda_star(&self, lambda: &Rat) -> Result<WeightedPoint> {
        if lambda.is_zero() {
            return Err(Error::ZeroScalar);
        }
        Ok(WeightedPoint {
            weights: self.weights.clone(),
            coords: self.coords.iter().zip(&self.weights).map(|(c, &q)| c * rat_pow(lambda, q as i64)).collect(),
        })
    }

    /// The largest `d` with `d^{qᵢ} | xᵢ` for all `i`; zero coordinates
    /// impose no constraint.
    pub fn wgcd(&self) -> Result<Int> {
        let ints = self.integer_coords()?;
        let g = gcd_all(ints.iter().filter(|c| !c.is_zero()));
        let mut out = Int::one();
        for (p, _) in factorize(&g)?.factors {
            let t = self
                .nonzero()
                .map(|(i, c)| Integer::div_floor(&valuation_rat(c, &p), &(self.weights[i] as i64)))
                .min()
                .unwrap_or(0);
            out *= num_traits::pow(p, t as usize);
        }
        Ok(out)
    }

    /// Normalized integer representative `λ⋆p` (wgcd 1) and the `λ` used.
    pub fn normalize_with_scalar(&self) -> Result<(WeightedPoint, Rat)> {
        let nums: Vec<&Int> = self.nonzero().map(|(_, c)| c.numer()).collect();
        let mut primes: Vec<Int> = factorize(&gcd_all(nums))?.factors.into_iter().map(|(p, _)| p).collect();
        for (_, c) in self.nonzero() {
            if !c.denom().is_one() {
                primes.extend(factorize(c.denom())?.factors.into_iter().map(|(p, _)| p));
            }
        }
        primes.sort();
        primes.dedup();
        let mut lambda = Rat::one();
        for p in primes {
            let t = self
                .nonzero()
                .map(|(i, c)| Integer::div_floor(&valuation_rat(c, &p), &(self.weights[i] as i64)))
                .min()
                .unwrap_or(0);
            lambda *= rat_pow(&Rat::from_integer(p), -t);
        }
        Ok((self.lambda_star(&lambda)?, lambda))
    }

    pub fn normalize(&self) -> Result<WeightedPoint> {
        Ok(self.normalize_with_scalar()?.0)
    }

    pub fn is_normalized(&self) -> bool {
        self.is_integral() && self.wgcd().is_ok_and(|g| g.is_one())
    }

    /// True iff `q = λ⋆p` for some `λ ∈ ℚ*`.
    ///
    /// With `g = gcd` of the weights on the nonzero support and Bézout
    /// coefficients `Σ uᵢqᵢ = g`, any such `λ` satisfies
    /// `λ^g = ∏ rᵢ^{uᵢ}` where `rᵢ = yᵢ/xᵢ`; the candidate rational g-th
    /// roots (one or two, by sign) are then checked against every ratio.
    pub fn points_equal(&self, other: &WeightedPoint) -> Result<bool> {
        if self.weights != other.weights {
            return Err(Error::WeightMismatch);
        }
        let mut ratios = Vec::new();
        for ((a, b), &q) in self.coords.iter().zip(&other.coords).zip(&self.weights) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => {}
                (false, false) => ratios.push((b / a, q)),
                _ => return Ok(false),
            }
        }
        let (g, bezout) = bezout(&ratios.iter().map(|(_, q)| *q as i64).collect::<Vec<_>>());
        let mut mu = Rat::one();
        for ((r, _), u) in ratios.iter().zip(&bezout) {
            mu *= rat_pow(r, *u);
        }
        let Some(root) = rat_nth_root(&mu, g as u32) else {
            return Ok(false);
        };
        let mut candidates = vec![root.clone()];
        if g % 2 == 0 {
            candidates.push(-root);
        }
        Ok(candidates.iter().any(|lambda| ratios.iter().all(|(r, q)| rat_pow(lambda, *q as i64) == *r)))
    }
}

/// `(g, u)` with `Σ uᵢ qᵢ = g = gcd(q)`.
fn bezout(qs: &[i64]) -> (i64, Vec<i64>) {
    let mut g = 0i64;
    let mut coeffs: Vec<i64> = Vec::with_capacity(qs.len());
    for &q in qs {
        let e = g.extended_gcd(&q);
        // e.gcd = e.x * g + e.y * q
        for c in coeffs.iter_mut() {
            *c *= e.x;
        }
        coeffs.push(e.y);
        g = e.gcd;
    }
    if g < 0 {
        g = -g;
        coeffs.iter_mut().for_each(|c| *c = -*c);
    }
    (g, coeffs)
}

/// Moduli point as produced by invariant evaluation; unlike
/// [`WeightedPoint`] it may be the zero tuple (unstable forms).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub struct ModuliPoint {
    weights: Vec<u32>,
    coords: Vec<Rat>,
}

impl TryFrom<PointRepr> for ModuliPoint {
    type Error = Error;

    fn try_from(r: PointRepr) -> Result<Self> {
        let coords = r.coords.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
        ModuliPoint::new(r.weights, coords)
    }
}

impl From<ModuliPoint> for PointRepr {
    fn from(p: ModuliPoint) -> Self {
        PointRepr { weights: p.weights, coords: p.coords.iter().map(fmt_rat).collect() }
    }
}

impl ModuliPoint {
    pub fn new(weights: Vec<u32>, coords: Vec<Rat>) -> Result<Self> {
        check_shape(&weights, &coords)?;
        Ok(ModuliPoint { weights, coords })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// The point in weighted projective space; errors on the zero tuple.
    pub fn to_weighted(&self) -> Result<WeightedPoint> {
        if self.is_zero() {
            return Err(Error::GloballyUnstable);
        }
        WeightedPoint::new(self.weights.clone(), self.coords.clone())
    }
}

impl From<WeightedPoint> for ModuliPoint {
    fn from(p: WeightedPoint) -> Self {
        ModuliPoint { weights: p.weights, coords: p.coords }
    }
}

impl fmt::Display for ModuliPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(fmt_rat).collect();
        write!(f, "[{}]", c.join(" : "))
    }
}

/// `sign · ∏ p^{eₚ}` with rational exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FactoredRepr", into = "FactoredRepr")]
pub struct FactoredValue {
    pub sign: i8,
    /// Primes strictly increasing, exponents nonzero. Empty when `exact` is false.
    pub factors: Vec<(Int, Rat)>,
    /// Natural log of the absolute value.
    pub log: f64,
    pub exact: bool,
}

#[derive(Serialize, Deserialize)]
struct FactoredRepr {
    sign: i8,
    factors: Vec<(String, String)>,
    log: f64,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    exact: bool,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

impl TryFrom<FactoredRepr> for FactoredValue {
    type Error = Error;

    fn try_from(r: FactoredRepr) -> Result<Self> {
        let factors = r
            .factors
            .iter()
            .map(|(p, e)| {
                let p: Int = p.parse().map_err(|_| Error::Parse(format!("bad prime `{p}`")))?;
                Ok((p, parse_rat(e)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FactoredValue { sign: r.sign, factors, log: r.log, exact: r.exact })
    }
}

impl From<FactoredValue> for FactoredRepr {
    fn from(v: FactoredValue) -> Self {
        FactoredRepr {
            sign: v.sign,
            factors: v.factors.iter().map(|(p, e)| (p.to_string(), fmt_rat(e))).collect(),
            log: v.log,
            exact: v.exact,
        }
    }
}

impl FactoredValue {
    pub fn one() -> Self {
        FactoredValue { sign: 1, factors: Vec::new(), log: 0.0, exact: true }
    }

    pub fn from_factors(sign: i8, factors: impl IntoIterator<Item = (Int, Rat)>) -> Self {
        let mut map: BTreeMap<Int, Rat> = BTreeMap::new();
        for (p, e) in factors {
            *map.entry(p).or_insert_with(Rat::zero) += e;
        }
        let factors: Vec<(Int, Rat)> = map.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        let log = factors.iter().map(|(p, e)| e.to_f64().unwrap_or(f64::NAN) * ln_abs(p)).sum::<f64>() + 0.0;
        FactoredValue { sign, factors, log, exact: true }
    }

    /// `|n|^{exp}`, or an inexact value when `n` cannot be factored.
    pub fn power_of(n: &Int, exp: &Rat) -> Self {
        match factorize(n) {
            Ok(f) => Self::from_factors(1, f.factors.into_iter().map(|(p, e)| (p, Rat::from_integer(e.into()) * exp))),
            Err(_) => FactoredValue {
                sign: 1,
                factors: Vec::new(),
                log: ln_abs(n) * exp.to_f64().unwrap_or(f64::NAN),
                exact: false,
            },
        }
    }

    pub fn mul(&self, other: &FactoredValue) -> FactoredValue {
        if !(self.exact && other.exact) {
            return FactoredValue {
                sign: self.sign * other.sign,
                factors: Vec::new(),
                log: self.log + other.log,
                exact: false,
            };
        }
        Self::from_factors(self.sign * other.sign, self.factors.iter().chain(&other.factors).cloned())
    }

    pub fn exponent_of(&self, p: &Int) -> Rat {
        self.factors.iter().find(|(q, _)| q == p).map(|(_, e)| e.clone()).unwrap_or_else(Rat::zero)
    }

    /// Exact value when all exponents are integers.
    pub fn to_rational(&self) -> Option<Rat> {
        if !self.exact {
            return None;
        }
        let mut v = Rat::from_integer(Int::from(self.sign));
        for (p, e) in &self.factors {
            if !e.is_integer() {
                return None;
            }
            v *= rat_pow(&Rat::from_integer(p.clone()), e.to_integer().to_i64()?);
        }
        Some(v)
    }

    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * self.log.exp()
    }
}

impl fmt::Display for FactoredValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.exact {
            return write!(f, "~{:.6}", self.to_f64());
        }
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if e.is_one() { p.to_string() } else { format!("{p}^({})", fmt_rat(e)) })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeightMode {
    Literal,
    Archimedean,
}

impl std::str::FromStr for HeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(HeightMode::Literal),
            "archimedean" => Ok(HeightMode::Archimedean),
            _ => Err(Error::Parse(format!("unknown height mode `{s}`"))),
        }
    }
}

/// `|a|^{1/qa}` vs `|b|^{1/qb}` via `|a|^{qb}` vs `|b|^{qa}`.
fn cmp_root(a: &Int, qa: u32, b: &Int, qb: u32) -> Ordering {
    num_traits::pow(a.abs(), qb as usize).cmp(&num_traits::pow(b.abs(), qa as usize))
}

/// Index of the coordinate maximizing `|xᵢ|^{1/qᵢ}` (lowest index on ties).
pub fn dominant_index(point: &WeightedPoint) -> Result<usize> {
    let ints = point.integer_coords()?;
    let mut best: Option<usize> = None;
    for (i, x) in ints.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        best = match best {
            Some(j) if cmp_root(x, point.weights[i], &ints[j], point.weights[j]) != Ordering::Greater => Some(j),
            _ => Some(i),
        };
    }
    best.ok_or(Error::InvalidPoint("all coordinates are zero"))
}

/// Weighted multiplicative height of the point, computed on its
/// normalized integer representative.
pub fn weighted_height(point: &WeightedPoint, mode: HeightMode) -> Result<FactoredValue> {
    let n = point.normalize()?;
    let ints = n.integer_coords()?;
    let j = dominant_index(&n)?;
    let arch = FactoredValue::power_of(&ints[j], &Rat::new(Int::one(), Int::from(n.weights[j])));
    match mode {
        HeightMode::Archimedean => Ok(arch),
        HeightMode::Literal => {
            let g = gcd_all(ints.iter().filter(|c| !c.is_zero()));
            let mut finite = Vec::new();
            for (p, _) in factorize(&g)?.factors {
                let min = n
                    .nonzero()
                    .map(|(i, c)| Rat::new(Int::from(valuation_rat(c, &p)), Int::from(n.weights[i])))
                    .min()
                    .unwrap_or_else(Rat::zero);
                finite.push((p, -min));
            }
            Ok(arch.mul(&FactoredValue::from_factors(1, finite)))
        }
    }
}

/// Absolute logarithmic weighted height; over ℚ the field-degree
/// normalization is 1.
pub fn abs_log_height(point: &WeightedPoint, mode: HeightMode) -> Result<f64> {
    Ok(weighted_height(point, mode)?.log)
}
