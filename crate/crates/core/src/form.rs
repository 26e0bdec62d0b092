//! Binary forms, the GL₂ substitution action and transvectants.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_rat, parse_rat, Rat};
use crate::error::{Error, Result};
use crate::poly::{coefficient_vars, var_list, MultiPoly};

/// `f = Σ aᵢ xⁱ y^{d−i}`; `coeffs[i]` multiplies `xⁱ y^{d−i}`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FormRepr", into = "FormRepr")]
pub struct BinaryForm {
    coeffs: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    degree: u32,
    coeffs: Vec<String>,
}

impl TryFrom<FormRepr> for BinaryForm {
    type Error = Error;

    fn try_from(r: FormRepr) -> Result<Self> {
        let coeffs = r.coeffs.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
        if coeffs.len() != r.degree as usize + 1 {
            return Err(Error::DegreeMismatch { expected: r.degree, found: coeffs.len() as u32 - 1 });
        }
        BinaryForm::new(coeffs)
    }
}

impl From<BinaryForm> for FormRepr {
    fn from(f: BinaryForm) -> Self {
        FormRepr { degree: f.degree(), coeffs: f.coeffs.iter().map(fmt_rat).collect() }
    }
}

impl BinaryForm {
    /// Ascending coefficients `[a₀, …, a_d]`; at least two, not all zero.
    pub fn new(coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Degenerate("a binary form needs degree at least 1"));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::Degenerate("zero form"));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect())
    }

    /// `c · xⁱ y^{d−i}`.
    pub fn monomial(d: u32, i: u32, c: Rat) -> Result<Self> {
        let mut coeffs = vec![Rat::zero(); d as usize + 1];
        coeffs[i as usize] = c;
        Self::new(coeffs)
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: u32) -> &Rat {
        &self.coeffs[i as usize]
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &Rat) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// The form as a polynomial in `x, y`.
    pub fn to_poly(&self) -> MultiPoly {
        self.to_poly_over(var_list(["x", "y"]))
    }

    pub(crate) fn to_poly_over(&self, vars: Arc<[String]>) -> MultiPoly {
        let n = vars.len();
        let d = self.degree();
        MultiPoly::from_terms(
            vars,
            self.coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[n - 2] = i as u32;
                e[n - 1] = d - i as u32;
                (e, c.clone())
            }),
        )
    }

    /// Product of two forms.
    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        BinaryForm { coeffs: out }
    }

    pub fn pow(&self, k: u32) -> BinaryForm {
        let mut out = BinaryForm { coeffs: vec![Rat::one()] };
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `f^M(x, y) = f(a x + b y, c x + d y)`.
    pub fn act(&self, m: &Mat2) -> Result<BinaryForm> {
        if m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let d = self.degree();
        // Linear forms in ascending-x coefficients: [y-coeff, x-coeff].
        let first = BinaryForm { coeffs: vec![m.b.clone(), m.a.clone()] };
        let second = BinaryForm { coeffs: vec![m.d.clone(), m.c.clone()] };
        let first_pows: Vec<BinaryForm> = (0..=d).map(|k| first.pow(k)).collect();
        let second_pows: Vec<BinaryForm> = (0..=d).map(|k| second.pow(k)).collect();
        let mut out = vec![Rat::zero(); d as usize + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let term = first_pows[i].mul(&second_pows[d as usize - i]);
            for (k, c) in term.coeffs.iter().enumerate() {
                out[k] += a * c;
            }
        }
        BinaryForm::new(out)
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm({})", self.to_poly())
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// `[[a, b], [c, d]]`, acting by `(x, y) ↦ (a x + b y, c x + d y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl Mat2 {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::diag(Rat::one(), Rat::one())
    }

    pub fn diag(a: Rat, d: Rat) -> Self {
        Mat2 { a, b: Rat::zero(), c: Rat::zero(), d }
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

/// A polynomial in `x, y` (possibly with symbolic coefficients) together
/// with its declared order. The order is not inferred from the support: a
/// covariant whose leading coefficients vanish still has its full order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covariant {
    pub poly: MultiPoly,
    pub order: u32,
}

impl Covariant {
    pub fn new(poly: MultiPoly, order: u32) -> Result<Self> {
        check_homogeneous(&poly, order)?;
        Ok(Covariant { poly, order })
    }

    /// A concrete form as a covariant in `x, y`.
    pub fn from_form(f: &BinaryForm) -> Self {
        Covariant { poly: f.to_poly(), order: f.degree() }
    }

    /// The generic form `Σ aᵢ xⁱ y^{d−i}` over variables `a0..ad, x, y`.
    pub fn generic(d: u32) -> Self {
        let vars = generic_vars(d);
        let n = vars.len();
        let poly = MultiPoly::from_terms(
            vars,
            (0..=d).map(|i| {
                let mut e = vec![0; n];
                e[i as usize] = 1;
                e[n - 2] = i;
                e[n - 1] = d - i;
                (e, Rat::one())
            }),
        );
        Covariant { poly, order: d }
    }

    pub fn pow(&self, k: u32) -> Covariant {
        Covariant { poly: self.poly.pow(k), order: self.order * k }
    }

    pub fn transvect(&self, other: &Covariant, r: u32) -> Result<Covariant> {
        let poly = transvect(&self.poly, self.order, &other.poly, other.order, r)?;
        Ok(Covariant { poly, order: self.order + other.order - 2 * r })
    }
}

/// Variables `a0 < … < ad < x < y`.
pub fn generic_vars(d: u32) -> Arc<[String]> {
    var_list(coefficient_vars(d).into_iter().chain(["x".to_string(), "y".to_string()]))
}

fn xy_indices(p: &MultiPoly) -> Result<(usize, usize)> {
    Ok((p.var_index("x")?, p.var_index("y")?))
}

fn check_homogeneous(p: &MultiPoly, order: u32) -> Result<()> {
    let (x, y) = xy_indices(p)?;
    if p.is_zero() {
        return Ok(());
    }
    match p.homogeneous_degree_in(&[x, y]) {
        Some(d) if d == order => Ok(()),
        _ => Err(Error::NotHomogeneous(order)),
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// The r-th transvectant of `f` (order `m`) and `g` (order `n`):
///
/// `(f,g)_r = (m−r)!(n−r)!/(m!n!) · Σₖ (−1)ᵏ C(r,k) ∂ʳf/∂x^{r−k}∂yᵏ · ∂ʳg/∂xᵏ∂y^{r−k}`.
///
/// Both inputs must be homogeneous of their declared order in `x, y`
/// and share one variable list.
pub fn transvect(f: &MultiPoly, m: u32, g: &MultiPoly, n: u32, r: u32) -> Result<MultiPoly> {
    if r > m.min(n) {
        return Err(Error::TransvectantOrder { r, m, n });
    }
    if f.vars() != g.vars() {
        return Err(Error::VariableMismatch);
    }
    check_homogeneous(f, m)?;
    check_homogeneous(g, n)?;
    let (x, y) = xy_indices(f)?;
    let prefactor = Rat::new(factorial(m - r) * factorial(n - r), factorial(m) * factorial(n));
    let mut acc = MultiPoly::zero(f.vars().clone());
    for k in 0..=r {
        let df = f.derive_index(x, r - k).derive_index(y, k);
        if df.is_zero() {
            continue;
        }
        let dg = g.derive_index(x, k).derive_index(y, r - k);
        if dg.is_zero() {
            continue;
        }
        let mut c = Rat::from_integer(binomial(r, k));
        if k % 2 == 1 {
            c = -c;
        }
        acc = acc.add(&df.mul(&dg)?.scale(&c))?;
    }
    let out = acc.scale(&prefactor);
    debug_assert!(check_homogeneous(&out, m + n - 2 * r).is_ok());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn quartic_vars() -> Arc<[String]> {
        var_list(coefficient_vars(4))
    }

    #[test]
    fn act_identity_and_diagonal() {
        let f = BinaryForm::from_ints(&[3, -1, 4, 1, 5]).unwrap();
        assert_eq!(f.act(&Mat2::identity()).unwrap(), f);

        let t = ratio(7, 3);
        let g = BinaryForm::monomial(4, 2, rat(1)).unwrap();
        let expect = BinaryForm::monomial(4, 2, &t * &t).unwrap();
        assert_eq!(g.act(&Mat2::diag(t, rat(1))).unwrap(), expect);

        let singular = Mat2::new(rat(1), rat(2), rat(2), rat(4));
        assert_eq!(f.act(&singular), Err(Error::SingularMatrix));
    }

    #[test]
    fn act_composes() {
        let f = BinaryForm::from_ints(&[1, 2, -3, 0, 7, 1]).unwrap();
        let m = Mat2::new(rat(2), rat(-1), ratio(1, 3), rat(5));
        let n = Mat2::new(rat(0), rat(1), rat(-4), ratio(3, 2));
        let lhs = f.act(&m).unwrap().act(&n).unwrap();
        let rhs = f.act(&m.mul(&n)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn discriminant_transforms_by_det_squared() {
        // Δ = a1² − 4 a0 a2 with f = a2 x² + a1 x y + a0 y²
        let disc = |f: &BinaryForm| f.coeff(1) * f.coeff(1) - rat(4) * f.coeff(0) * f.coeff(2);
        let f = BinaryForm::new(vec![ratio(2, 3), rat(-5), rat(7)]).unwrap();
        let m = Mat2::new(rat(3), ratio(1, 2), rat(-2), rat(4));
        let det = m.det();
        assert_eq!(disc(&f.act(&m).unwrap()), &det * &det * disc(&f));
    }

    #[test]
    fn zeroth_transvectant_is_product() {
        let f = Covariant::generic(3);
        let g = f.transvect(&f, 0).unwrap();
        assert_eq!(g.poly, f.poly.mul(&f.poly).unwrap());
        assert_eq!(g.order, 6);
    }

    #[test]
    fn quadratic_second_transvectant() {
        let f = Covariant::generic(2);
        let h = f.transvect(&f, 2).unwrap();
        let vars = generic_vars(2);
        assert_eq!(h.poly, MultiPoly::parse(vars.clone(), "2 a0 a2 - 1/2 a1^2").unwrap());
        let (prim, _) = h.poly.primitive_part().unwrap();
        assert_eq!(prim, MultiPoly::parse(vars, "4 a0 a2 - a1^2").unwrap());
    }

    #[test]
    fn quartic_fourth_transvectant() {
        let f = Covariant::generic(4);
        let h = f.transvect(&f, 4).unwrap();
        let inv = h.poly.with_vars(quartic_vars()).unwrap();
        let expect = MultiPoly::parse(quartic_vars(), "12 a0 a4 - 3 a1 a3 + a2^2").unwrap().scale(&ratio(1, 6));
        assert_eq!(inv, expect);
    }

    #[test]
    fn odd_self_transvectants_vanish() {
        for d in 1..=6 {
            let f = Covariant::generic(d);
            for r in (1..=d).step_by(2) {
                assert!(f.transvect(&f, r).unwrap().poly.is_zero(), "d={d} r={r}");
            }
        }
    }

    #[test]
    fn transvectant_errors() {
        let f = Covariant::generic(2);
        assert!(matches!(f.transvect(&f, 3), Err(Error::TransvectantOrder { .. })));
        let vars = generic_vars(2);
        let bad = MultiPoly::parse(vars.clone(), "x^2 + y").unwrap();
        assert_eq!(transvect(&bad, 2, &f.poly, 2, 1), Err(Error::NotHomogeneous(2)));
        // declared order wins over the support
        let lower = MultiPoly::parse(vars, "a0 y^2").unwrap();
        assert!(transvect(&lower, 2, &f.poly, 2, 2).is_ok());
    }

    fn cov(coeffs: Vec<i64>) -> Covariant {
        Covariant::from_form(&BinaryForm::from_ints(&coeffs).unwrap())
    }

    fn form_coeffs(n: usize) -> impl proptest::strategy::Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-9i64..10, n).prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn antisymmetry(f in form_coeffs(5), g in form_coeffs(4), r in 0u32..4) {
            let (f, g) = (cov(f), cov(g));
            let lhs = f.transvect(&g, r).unwrap().poly;
            let rhs = g.transvect(&f, r).unwrap().poly;
            let rhs = if r % 2 == 1 { rhs.neg() } else { rhs };
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bilinearity(f1 in form_coeffs(4), f2 in form_coeffs(4), g in form_coeffs(6), r in 0u32..4) {
            let (a, b, g) = (cov(f1), cov(f2), cov(g));
            let sum = Covariant { poly: a.poly.add(&b.poly).unwrap(), order: 3 };
            let lhs = sum.transvect(&g, r).unwrap().poly;
            let rhs = a.transvect(&g, r).unwrap().poly.add(&b.transvect(&g, r).unwrap().poly).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn order_bookkeeping(f in form_coeffs(6), g in form_coeffs(5), r in 0u32..5) {
            let (f, g) = (cov(f), cov(g));
            let h = f.transvect(&g, r).unwrap();
            prop_assert_eq!(h.order, 5 + 4 - 2 * r);
            let (x, y) = (h.poly.var_index("x").unwrap(), h.poly.var_index("y").unwrap());
            if !h.poly.is_zero() {
                prop_assert_eq!(h.poly.homogeneous_degree_in(&[x, y]), Some(h.order));
            }
        }

        #[test]
        fn action_composes(f in form_coeffs(5), m in proptest::array::uniform4(-4i64..5), n in proptest::array::uniform4(-4i64..5)) {
            let f = BinaryForm::from_ints(&f).unwrap();
            let m = Mat2::new(rat(m[0]), rat(m[1]), rat(m[2]), rat(m[3]));
            let n = Mat2::new(rat(n[0]), rat(n[1]), rat(n[2]), rat(n[3]));
            prop_assume!(!m.det().is_zero() && !n.det().is_zero());
            prop_assert_eq!(f.act(&m).unwrap().act(&n).unwrap(), f.act(&m.mul(&n)).unwrap());
        }
    }
}
