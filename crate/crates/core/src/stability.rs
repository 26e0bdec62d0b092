//! GIT stability of binary forms and semistable models.
//!
//! A form of degree `d` is stable when every root has multiplicity below
//! `d/2`, semistable when none exceeds it, and unstable otherwise; the
//! invariants vanish exactly on unstable forms. At a prime `p` an integral
//! form is semistable iff `p` does not divide every invariant. Reduction
//! works on moduli points: the twist `M = diag(p^{-r}, 1)` rescales
//! `ξᵢ ↦ det(M)^{(d/2)qᵢ} ξᵢ`, so choosing `r = 2β/d` with
//! `β = min νₚ(ξⱼ)/qⱼ` leaves some coordinate a `p`-unit.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, fmt_rat, gcd_all, is_prime, lcm_all, valuation_rat, Int, Rat};
use crate::error::{Error, Result};
use crate::form::{BinaryForm, Mat2};
use crate::invariants::evaluate;
use crate::poly::{squarefree_multiplicities, var_list, MultiPoly};
use crate::weighted::{FactoredValue, ModuliPoint, WeightedPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Stability {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::Stable => "stable",
            Stability::StrictlySemistable => "strictly semistable",
            Stability::Unstable => "unstable",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StabilityClass {
    pub class: Stability,
    pub max_multiplicity: u32,
}

/// `max{2i − d : aᵢ ≠ 0}`, the weight of `f` for the diagonal subgroup
/// `t ↦ diag(t, t⁻¹)`.
pub fn mu_diagonal(f: &BinaryForm) -> i64 {
    let d = f.degree() as i64;
    let top = f.coeffs().iter().rposition(|c| !c.is_zero()).expect("forms are nonzero") as i64;
    2 * top - d
}

/// Multiplicities occurring among the roots of `f` over ℚ̄: the root
/// `[1:0]` first when present, then one entry per squarefree block of the
/// dehomogenization.
pub fn root_multiplicities(f: &BinaryForm) -> Result<Vec<u32>> {
    let d = f.degree();
    let top = f.coeffs().iter().rposition(|c| !c.is_zero()).expect("forms are nonzero") as u32;
    let mut out = Vec::new();
    if top < d {
        out.push(d - top);
    }
    let vars = var_list(["x"]);
    let g = MultiPoly::from_terms(
        vars,
        f.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (vec![i as u32], c.clone())),
    );
    out.extend(squarefree_multiplicities(&g)?.into_iter().map(|(_, m)| m));
    Ok(out)
}

pub fn classify(f: &BinaryForm) -> Result<StabilityClass> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::UnsupportedDegree(d));
    }
    let m = root_multiplicities(f)?.into_iter().max().unwrap_or(0);
    let class = match (2 * m).cmp(&d) {
        std::cmp::Ordering::Less => Stability::Stable,
        std::cmp::Ordering::Equal => Stability::StrictlySemistable,
        std::cmp::Ordering::Greater => Stability::Unstable,
    };
    Ok(StabilityClass { class, max_multiplicity: m })
}

fn integral_point(point: &ModuliPoint) -> Result<WeightedPoint> {
    let p = point.to_weighted()?;
    if p.is_integral() {
        return Ok(p);
    }
    // λ = lcm of denominators makes every λ^{qᵢ}xᵢ integral
    let l = lcm_all(p.coords().iter().map(|c| c.denom()));
    p.lambda_star(&Rat::from_integer(l))
}

fn primes_of_gcd(point: &WeightedPoint) -> Result<Vec<Int>> {
    let ints = point.integer_coords()?;
    let g = gcd_all(ints.iter().filter(|c| !c.is_zero()));
    Ok(factorize(&g)?.factors.into_iter().map(|(p, _)| p).collect())
}

/// Primes at which an integral form fails to be semistable: those dividing
/// every coordinate of `ξ(f)`.
pub fn unstable_primes(f: &BinaryForm) -> Result<Vec<Int>> {
    if let Some(c) = f.coeffs().iter().find(|c| !c.is_integer()) {
        return Err(Error::NotInteger(fmt_rat(c)));
    }
    let xi = evaluate(f)?;
    primes_of_gcd(&xi.to_weighted()?)
}

fn check_prime(p: &Int) -> Result<()> {
    if *p < Int::from(2) || !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    Ok(())
}

/// Whether `p` fails to divide every coordinate of the normalized point.
pub fn is_semistable_at(p: &Int, point: &ModuliPoint) -> Result<bool> {
    check_prime(p)?;
    let n = point.to_weighted()?.normalize()?;
    let ints = n.integer_coords()?;
    Ok(ints.iter().any(|c| !c.is_zero() && !c.is_multiple_of(p)))
}

/// `M = diag(p^{-r}, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistDescriptor {
    #[serde(with = "str_int")]
    pub p: Int,
    #[serde(with = "str_rat")]
    pub r: Rat,
    pub ramification: u32,
}

mod str_int {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Int, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Int, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod str_rat {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        crate::arith::parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

impl TwistDescriptor {
    fn new(p: Int, r: Rat) -> Self {
        let ramification = r.denom().to_u32().unwrap_or(u32::MAX);
        TwistDescriptor { p, r, ramification }
    }

    pub fn is_rational(&self) -> bool {
        self.ramification == 1
    }

    /// The matrix when `r` is an integer.
    pub fn matrix(&self) -> Result<Mat2> {
        if !self.r.is_integer() {
            return Err(Error::FractionalTwist(fmt_rat(&self.r)));
        }
        let e = self.r.to_integer().to_i64().ok_or(Error::FractionalTwist(fmt_rat(&self.r)))?;
        let s = crate::arith::rat_pow(&Rat::from_integer(self.p.clone()), -e);
        Ok(Mat2::diag(s, Rat::one()))
    }

    /// `det(M) = p^{-r}` as a factored value.
    pub fn det(&self) -> FactoredValue {
        FactoredValue::from_factors(1, [(self.p.clone(), -self.r.clone())])
    }
}

impl fmt::Display for TwistDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "diag({}^(-{}), 1)", self.p, fmt_rat(&self.r))
    }
}

/// `f^M` for an integral twist.
pub fn twist_form(f: &BinaryForm, t: &TwistDescriptor) -> Result<BinaryForm> {
    f.act(&t.matrix()?)
}

/// One coordinate `unit · tail` where the tail is a product of prime
/// powers with rational exponents over the treated primes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedCoord {
    #[serde(with = "str_int")]
    pub unit: Int,
    pub tail: FactoredValue,
}

/// Rescaled moduli point over a ramified extension, kept symbolic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedPoint {
    pub weights: Vec<u32>,
    pub coords: Vec<ExtendedCoord>,
}

impl ExtendedPoint {
    fn from_integral(point: &WeightedPoint) -> Result<Self> {
        let coords = point
            .integer_coords()?
            .into_iter()
            .map(|unit| ExtendedCoord { unit, tail: FactoredValue::one() })
            .collect();
        Ok(ExtendedPoint { weights: point.weights().to_vec(), coords })
    }

    /// Total exponent of `p` in coordinate `i` (`None` for zero).
    pub fn exponent(&self, i: usize, p: &Int) -> Option<Rat> {
        let c = &self.coords[i];
        if c.unit.is_zero() {
            return None;
        }
        let v = valuation_rat(&Rat::from_integer(c.unit.clone()), p);
        Some(Rat::from_integer(v.into()) + c.tail.exponent_of(p))
    }

    /// Semistable at `p` iff some nonzero coordinate has `p`-exponent 0.
    pub fn is_semistable_at(&self, p: &Int) -> bool {
        (0..self.coords.len()).any(|i| self.exponent(i, p).is_some_and(|e| e.is_zero()))
    }

    /// Primes at which the point is not semistable.
    pub fn unstable_primes(&self) -> Result<Vec<Int>> {
        let units: Vec<&Int> = self.coords.iter().map(|c| &c.unit).filter(|u| !u.is_zero()).collect();
        let mut cand: Vec<Int> = factorize(&gcd_all(units))?.factors.into_iter().map(|(p, _)| p).collect();
        for c in &self.coords {
            cand.extend(c.tail.factors.iter().map(|(p, _)| p.clone()));
        }
        cand.sort();
        cand.dedup();
        Ok(cand.into_iter().filter(|p| !self.is_semistable_at(p)).collect())
    }

    /// The point over ℚ when every tail exponent is an integer.
    pub fn to_rational(&self) -> Option<WeightedPoint> {
        let coords = self
            .coords
            .iter()
            .map(|c| Some(c.tail.to_rational()? * Rat::from_integer(c.unit.clone())))
            .collect::<Option<Vec<_>>>()?;
        WeightedPoint::new(self.weights.clone(), coords).ok()
    }

    /// Coordinates as floats.
    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c.unit.to_f64().unwrap_or(f64::NAN) * c.tail.to_f64()).collect()
    }

    /// Applies `ξᵢ ↦ det(M)^{(d/2)qᵢ} ξᵢ` for the twist at one prime.
    fn twist(&self, d: u32, t: &TwistDescriptor) -> ExtendedPoint {
        let half_d = Rat::new(Int::from(d), Int::from(2));
        let coords = self
            .coords
            .iter()
            .zip(&self.weights)
            .map(|(c, &q)| {
                if c.unit.is_zero() {
                    return c.clone();
                }
                let v = crate::arith::valuation_unchecked(&c.unit, &t.p);
                let unit = &c.unit / num_traits::pow(t.p.clone(), v as usize);
                let shift = -(&t.r) * &half_d * Rat::from_integer(q.into());
                let moved = FactoredValue::from_factors(1, [(t.p.clone(), Rat::from_integer(v.into()) + shift)]);
                ExtendedCoord { unit, tail: c.tail.mul(&moved) }
            })
            .collect();
        ExtendedPoint { weights: self.weights.clone(), coords }
    }
}

impl fmt::Display for ExtendedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| {
                if c.unit.is_zero() || c.tail.factors.is_empty() {
                    c.unit.to_string()
                } else {
                    format!("{}·{}", c.unit, c.tail)
                }
            })
            .collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

/// `β = min νₚ(xⱼ)/qⱼ` over nonzero coordinates with the minimizing index
/// (lowest on ties).
fn beta(point: &WeightedPoint, p: &Int) -> (Rat, usize) {
    point
        .coords()
        .iter()
        .zip(point.weights())
        .enumerate()
        .filter(|(_, (c, _))| !c.is_zero())
        .map(|(j, (c, &q))| (Rat::new(Int::from(valuation_rat(c, p)), Int::from(q)), j))
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("points are nonzero")
}

fn local_step(ext: &ExtendedPoint, point: &WeightedPoint, p: &Int, d: u32) -> Result<(ExtendedPoint, TwistDescriptor)> {
    let (b, j) = beta(point, p);
    if b <= Rat::zero() {
        return Err(Error::AlreadySemistable(p.clone()));
    }
    let r = b * Rat::from_integer(2.into()) / Rat::from_integer(d.into());
    let t = TwistDescriptor::new(p.clone(), r);
    let out = ext.twist(d, &t);
    // ξᵢ(f^M) = det(M)^{(d/2)qᵢ} ξᵢ(f), exponent by exponent
    for (i, &q) in point.weights().iter().enumerate() {
        if let (Some(before), Some(after)) = (ext.exponent(i, p), out.exponent(i, p)) {
            let det_exp = -(&t.r) * Rat::new(Int::from(d * q), Int::from(2));
            assert_eq!(after, before + det_exp, "twist scaling identity");
            assert!(!after.is_negative());
        }
    }
    assert!(out.exponent(j, p).is_some_and(|e| e.is_zero()));
    Ok((out, t))
}

/// Semistable model at `p` of the integral point `ξ(f)` of a degree-`d`
/// form: the twisted point and `M = diag(p^{-r}, 1)` with `r = 2β/d`.
pub fn local_semistable_model(p: &Int, point: &ModuliPoint, d: u32) -> Result<(ExtendedPoint, TwistDescriptor)> {
    check_prime(p)?;
    let w = point.to_weighted()?;
    let ints = w.integer_coords()?;
    if ints.iter().any(|c| !c.is_zero() && !c.is_multiple_of(p)) {
        return Err(Error::AlreadySemistable(p.clone()));
    }
    local_step(&ExtendedPoint::from_integral(&w)?, &w, p, d)
}

/// Twists at every prime dividing all coordinates of the (denominator
/// cleared) point; the result is semistable at every prime.
pub fn global_semistable_model(point: &ModuliPoint, d: u32) -> Result<(ExtendedPoint, Vec<TwistDescriptor>)> {
    let w = integral_point(point)?;
    let mut ext = ExtendedPoint::from_integral(&w)?;
    let mut twists = Vec::new();
    for p in primes_of_gcd(&w)? {
        let (next, t) = local_step(&ext, &w, &p, d)?;
        ext = next;
        twists.push(t);
    }
    Ok((ext, twists))
}

/// Integer form of degree `d` whose roots have exactly the given
/// multiplicities, built from distinct rational linear factors chosen by a
/// seeded generator.
pub fn plant_form(d: u32, pattern: &[u32], seed: u64) -> Result<BinaryForm> {
    if pattern.is_empty() || pattern.contains(&0) || pattern.iter().sum::<u32>() != d {
        return Err(Error::InfeasiblePattern(format!("{pattern:?} for degree {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots: Vec<(i64, i64)> = Vec::new();
    let bound = 3 + pattern.len() as i64;
    while roots.len() < pattern.len() {
        // root [b : c] of the factor c·x − b·y, up to sign
        let (mut b, mut c) = (rng.gen_range(-bound..=bound), rng.gen_range(0..=bound));
        if b == 0 && c == 0 {
            continue;
        }
        let g = b.gcd(&c);
        b /= g;
        c /= g;
        if c == 0 {
            b = 1;
        }
        if !roots.contains(&(b, c)) {
            roots.push((b, c));
        }
    }
    let mut f: Option<BinaryForm> = None;
    for (&(b, c), &m) in roots.iter().zip(pattern) {
        // ascending coefficients of c·x − b·y: [−b, c]
        let lin = BinaryForm::from_ints(&[-b, c])?.pow(m);
        f = Some(match f {
            Some(g) => g.mul(&lin),
            None => lin,
        });
    }
    Ok(f.expect("pattern is nonempty"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StabilityReport {
    pub class: Stability,
    pub max_multiplicity: u32,
    pub moduli_point: ModuliPoint,
    #[serde(with = "str_ints")]
    pub unstable_primes: Vec<Int>,
    pub twists: Vec<TwistDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ExtendedPoint>,
}

mod str_ints {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|p| p.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Int>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
    }
}

/// Classification, invariants, bad primes and the global model in one go.
/// Unstable forms report no primes and no twists.
pub fn report(f: &BinaryForm) -> Result<StabilityReport> {
    let c = classify(f)?;
    let xi = evaluate(f)?;
    if xi.is_zero() {
        return Ok(StabilityReport {
            class: c.class,
            max_multiplicity: c.max_multiplicity,
            moduli_point: xi,
            unstable_primes: Vec::new(),
            twists: Vec::new(),
            model: None,
        });
    }
    let (model, twists) = global_semistable_model(&xi, f.degree())?;
    Ok(StabilityReport {
        class: c.class,
        max_multiplicity: c.max_multiplicity,
        moduli_point: xi,
        unstable_primes: twists.iter().map(|t| t.p.clone()).collect(),
        twists,
        model: Some(model),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, ratio};

    fn form(c: &[i64]) -> BinaryForm {
        BinaryForm::from_ints(c).unwrap()
    }

    fn point(w: &[u32], c: &[i64]) -> ModuliPoint {
        WeightedPoint::from_ints(w, c).unwrap().into()
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_diagonal(&form(&[0, 0, 1, 0, 0])), 0);
        assert_eq!(mu_diagonal(&form(&[0, 0, 0, 0, 1])), 4);
        assert_eq!(mu_diagonal(&form(&[1, 0, 0, 0, 0])), -4);
    }

    #[test]
    fn classify_examples() {
        let c = classify(&form(&[0, 0, 1, 0, 0])).unwrap();
        assert_eq!((c.class, c.max_multiplicity), (Stability::StrictlySemistable, 2));
        // x³(x − y) = x⁴ − x³y
        let c = classify(&form(&[0, 0, 0, -1, 1])).unwrap();
        assert_eq!((c.class, c.max_multiplicity), (Stability::Unstable, 3));
        // xy(x − y)(x + y) = x³y − xy³
        let c = classify(&form(&[0, -1, 0, 1, 0])).unwrap();
        assert_eq!((c.class, c.max_multiplicity), (Stability::Stable, 1));
        // y⁴ has the root [1:0] with multiplicity 4
        assert_eq!(classify(&form(&[1, 0, 0, 0, 0])).unwrap().class, Stability::Unstable);
        // y²(x² + y²)²: conjugate roots of multiplicity 2
        let c = classify(&form(&[1, 0, 2, 0, 1, 0, 0])).unwrap();
        assert_eq!((c.class, c.max_multiplicity), (Stability::Stable, 2));
        // (x² + y²)³
        let c = classify(&form(&[1, 0, 3, 0, 3, 0, 1])).unwrap();
        assert_eq!((c.class, c.max_multiplicity), (Stability::StrictlySemistable, 3));
        assert!(classify(&form(&[1, 1])).is_err());
    }

    #[test]
    fn unstable_prime_examples() {
        // x³y + 5y⁴
        let f = form(&[5, 0, 0, 1, 0]);
        assert_eq!(evaluate(&f).unwrap().coords(), &[rat(0), rat(-135)]);
        assert_eq!(unstable_primes(&f).unwrap(), vec![int(3), int(5)]);
        assert!(unstable_primes(&form(&[0, 0, 1, 0, 0])).unwrap().is_empty());
        assert_eq!(unstable_primes(&form(&[0, 0, 0, 0, 1])), Err(Error::GloballyUnstable));
        let half = BinaryForm::new(vec![ratio(1, 2), rat(0), rat(1)]).unwrap();
        assert!(matches!(unstable_primes(&half), Err(Error::NotInteger(_))));
    }

    #[test]
    fn semistable_at_examples() {
        let p = point(&[2, 3], &[0, -135]);
        assert!(!is_semistable_at(&int(5), &p).unwrap());
        assert!(is_semistable_at(&int(7), &p).unwrap());
        for q in [2, 3, 5, 7, 11] {
            assert!(is_semistable_at(&int(q), &point(&[2, 3], &[1, -2])).unwrap());
        }
        assert_eq!(is_semistable_at(&int(4), &p), Err(Error::NotPrime(int(4))));
    }

    #[test]
    fn local_model_examples() {
        let (e, t) = local_semistable_model(&int(5), &point(&[2, 3], &[0, -135]), 4).unwrap();
        assert_eq!(e.to_rational().unwrap(), WeightedPoint::from_ints(&[2, 3], &[0, -27]).unwrap());
        assert_eq!((t.r.clone(), t.ramification), (ratio(1, 6), 6));

        let (e, t) = local_semistable_model(&int(2), &point(&[2, 3], &[0, -216]), 4).unwrap();
        assert_eq!(e.to_rational().unwrap(), WeightedPoint::from_ints(&[2, 3], &[0, -27]).unwrap());
        assert_eq!(t.r, ratio(1, 2));

        let (e, t) = local_semistable_model(&int(3), &point(&[2, 3], &[9, 27]), 4).unwrap();
        assert_eq!(e.to_rational().unwrap(), WeightedPoint::from_ints(&[2, 3], &[1, 1]).unwrap());
        assert_eq!(t.r, ratio(1, 2));
        assert!(e.is_semistable_at(&int(3)));

        assert_eq!(
            local_semistable_model(&int(7), &point(&[2, 3], &[0, -135]), 4),
            Err(Error::AlreadySemistable(int(7)))
        );
    }

    #[test]
    fn fractional_exponents_stay_symbolic() {
        // β = 1/2 at p = 2 for [2, 12] with weights (2, 3): 12·2^{-3/2}
        let (e, t) = local_semistable_model(&int(2), &point(&[2, 3], &[2, 12]), 8).unwrap();
        assert_eq!(t.r, ratio(1, 8));
        assert!(e.to_rational().is_none());
        assert_eq!(e.coords[1].unit, int(3));
        assert_eq!(e.coords[1].tail.exponent_of(&int(2)), ratio(1, 2));
        assert!(e.is_semistable_at(&int(2)));
        assert!(twist_form(&form(&[1, 0, 1]), &t).is_err());
    }

    #[test]
    fn global_model_examples() {
        let (e, ts) = global_semistable_model(&point(&[2, 3], &[0, -1080]), 4).unwrap();
        assert_eq!(e.to_rational().unwrap(), WeightedPoint::from_ints(&[2, 3], &[0, -1]).unwrap());
        assert!(e.unstable_primes().unwrap().is_empty());
        assert_eq!(ts.iter().map(|t| t.p.clone()).collect::<Vec<_>>(), vec![int(2), int(3), int(5)]);

        let (e, ts) = global_semistable_model(&point(&[2, 3], &[1, -2]), 4).unwrap();
        assert!(ts.is_empty());
        assert_eq!(e.to_rational().unwrap(), WeightedPoint::from_ints(&[2, 3], &[1, -2]).unwrap());

        let (e, ts) = global_semistable_model(&point(&[2, 3], &[0, -135]), 4).unwrap();
        assert_eq!(e.to_rational().unwrap(), WeightedPoint::from_ints(&[2, 3], &[0, -1]).unwrap());
        assert_eq!(ts.iter().map(|t| (t.p.clone(), t.r.clone())).collect::<Vec<_>>(), vec![
            (int(3), ratio(1, 2)),
            (int(5), ratio(1, 6))
        ]);

        let zero = ModuliPoint::new(vec![2, 3], vec![rat(0), rat(0)]).unwrap();
        assert_eq!(global_semistable_model(&zero, 4), Err(Error::GloballyUnstable));
    }

    #[test]
    fn integral_twist_acts_on_forms() {
        // f = x²y² + 4x⁴, twisted by diag(1/2, 1): x²y²/4 + x⁴/4
        let f = form(&[0, 0, 1, 0, 4]);
        let t = TwistDescriptor::new(int(2), rat(1));
        let g = twist_form(&f, &t).unwrap();
        assert_eq!(g.coeffs(), &[rat(0), rat(0), ratio(1, 4), rat(0), ratio(1, 4)]);
        let (xf, xg) = (evaluate(&f).unwrap(), evaluate(&g).unwrap());
        for ((a, b), &q) in xf.coords().iter().zip(xg.coords()).zip(xf.weights()) {
            assert_eq!(b, &(a * crate::arith::rat_pow(&ratio(1, 2), 2 * q as i64)));
        }
    }

    #[test]
    fn planted_patterns() {
        for (d, pat) in [(4u32, vec![3u32, 1]), (6, vec![3, 3]), (4, vec![1, 1, 1, 1]), (10, vec![5, 2, 2, 1])] {
            for seed in 0..20 {
                let f = plant_form(d, &pat, seed).unwrap();
                assert_eq!(f.degree(), d);
                assert!(f.is_integral());
                let mut got = root_multiplicities(&f).unwrap();
                let mut want = pat.clone();
                got.sort();
                got.dedup();
                want.sort();
                want.dedup();
                assert_eq!(got, want, "degree {d} seed {seed}: {f}");
            }
        }
        assert_eq!(plant_form(4, &[3, 1], 7).unwrap(), plant_form(4, &[3, 1], 7).unwrap());
        assert!(matches!(plant_form(4, &[3, 2], 0), Err(Error::InfeasiblePattern(_))));
        assert!(matches!(plant_form(4, &[], 0), Err(Error::InfeasiblePattern(_))));
    }

    #[test]
    fn report_json_shape() {
        let r = report(&form(&[5, 0, 0, 1, 0])).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["class"], "stable");
        assert_eq!(v["maxMultiplicity"], 1);
        assert_eq!(v["unstablePrimes"], serde_json::json!(["3", "5"]));
        assert_eq!(v["twists"][1], serde_json::json!({"p": "5", "r": "1/6", "ramification": 6}));
        assert_eq!(v["moduliPoint"]["coords"], serde_json::json!(["0", "-135"]));
        let u = report(&form(&[0, 0, 0, 0, 1])).unwrap();
        assert_eq!(u.class, Stability::Unstable);
        assert!(u.moduli_point.is_zero());
    }
}
