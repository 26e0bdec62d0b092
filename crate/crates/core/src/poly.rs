//! Sparse multivariate polynomials over ℚ.
//!
//! Terms live in a map from exponent vectors (one slot per declared
//! variable) to nonzero rational coefficients. Variables are declared in
//! increasing order, so the graded lexicographic order used for printing
//! and sign conventions compares total degree first and then exponents
//! starting from the *last* declared variable.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{Int, Rat};
use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Exponents, Rat>,
}

/// Graded lexicographic comparison; later variables are more significant.
pub fn cmp_grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

impl MultiPoly {
    pub fn zero(vars: Arc<[String]>) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Arc<[String]>, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            let n = p.vars.len();
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    pub fn var(vars: Arc<[String]>, name: &str) -> Result<Self> {
        let i = index_of(&vars, name)?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Ok(Self::monomial(vars, e, Rat::one()))
    }

    pub fn monomial(vars: Arc<[String]>, exps: Exponents, c: Rat) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent arity");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(vars: Arc<[String]>, terms: impl IntoIterator<Item = (Exponents, Rat)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent arity");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        index_of(&self.vars, name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// The constant term when the polynomial has no other terms.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, e: Exponents, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &MultiPoly) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch)
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.vars.clone());
        let n = self.vars.len();
        let mut e = vec![0u32; n];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                for k in 0..n {
                    e[k] = ea[k] + eb[k];
                }
                out.add_term(e.clone(), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut result = Self::constant(self.vars.clone(), Rat::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base).expect("same variables");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same variables");
            }
        }
        result
    }

    /// Iterated partial derivative ∂^order / ∂var^order.
    pub fn partial_derivative(&self, var: &str, order: u32) -> Result<MultiPoly> {
        let i = self.var_index(var)?;
        Ok(self.derive_index(i, order))
    }

    pub(crate) fn derive_index(&self, i: usize, order: u32) -> MultiPoly {
        if order == 0 {
            return self.clone();
        }
        let mut out = Self::zero(self.vars.clone());
        for (e, c) in &self.terms {
            if e[i] < order {
                continue;
            }
            // falling factorial e(e-1)...(e-order+1)
            let mut f = BigInt::one();
            for j in 0..order {
                f *= e[i] - j;
            }
            let mut ne = e.clone();
            ne[i] -= order;
            out.add_term(ne, c * Rat::from_integer(f));
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in the given subset of variables, if homogeneous there.
    pub fn homogeneous_degree_in(&self, idx: &[usize]) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| idx.iter().map(|&i| e[i]).sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Replaces the listed variables by rational values and drops them.
    pub fn substitute(&self, values: &[(&str, Rat)]) -> Result<MultiPoly> {
        let mut idx = Vec::with_capacity(values.len());
        for (name, v) in values {
            idx.push((self.var_index(name)?, v));
        }
        let removed: Vec<usize> = idx.iter().map(|(i, _)| *i).collect();
        let keep: Vec<usize> = (0..self.vars.len()).filter(|i| !removed.contains(i)).collect();
        let vars: Arc<[String]> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let mut out = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut c = c.clone();
            for (i, v) in &idx {
                if e[*i] > 0 {
                    c *= num_traits::pow((*v).clone(), e[*i] as usize);
                }
            }
            out.add_term(keep.iter().map(|&i| e[i]).collect(), c);
        }
        Ok(out)
    }

    /// Rewrites the polynomial over a different variable list; every
    /// variable carrying a nonzero exponent must exist in the target.
    pub fn with_vars(&self, vars: Arc<[String]>) -> Result<MultiPoly> {
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut out = Self::zero(vars.clone());
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (k, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[k] {
                    Some(j) => ne[j] = x,
                    None => return Err(Error::UndeclaredVariable(self.vars[k].clone())),
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Terms in decreasing graded lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Rat)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| cmp_grlex(b.0, a.0));
        t
    }

    pub fn leading_term(&self) -> Option<(&Exponents, &Rat)> {
        self.terms.iter().max_by(|a, b| cmp_grlex(a.0, b.0))
    }

    /// Positive rational content: gcd of numerators over lcm of denominators.
    pub fn content(&self) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        let mut num = Int::zero();
        let mut den = Int::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        Some(Rat::new(num, den))
    }

    /// Returns `(g, c)` with `self = c·g`, `g` integral with coprime
    /// coefficients and `c > 0`.
    pub fn primitive_part(&self) -> Result<(MultiPoly, Rat)> {
        let c = self.content().ok_or(Error::Degenerate("primitive part of the zero polynomial"))?;
        Ok((self.scale(&c.recip()), c))
    }

    /// Evaluates at rational values for every variable.
    pub fn eval(&self, values: &[Rat]) -> Rat {
        assert_eq!(values.len(), self.vars.len());
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    t *= num_traits::pow(values[k].clone(), x as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Parses `-54 a_0^2 a_3^2 + 36*a1*a3 ...` over the given variables.
    /// Factors may be separated by spaces or `*`; `a_{10}` and `a10` are
    /// the same variable name `a10`.
    pub fn parse(vars: Arc<[String]>, src: &str) -> Result<MultiPoly> {
        let cleaned: String = src.replace(['{', '}', '\\', '&'], "").replace("a_", "a");
        let mut out = Self::zero(vars.clone());
        let mut chars = cleaned.chars().peekable();
        let mut sign = Rat::one();
        let mut term = String::new();
        let flush = |term: &mut String, sign: &Rat, out: &mut MultiPoly| -> Result<()> {
            if term.trim().is_empty() {
                return Ok(());
            }
            let (e, c) = parse_term(&vars, term.trim())?;
            out.add_term(e, c * sign);
            term.clear();
            Ok(())
        };
        while let Some(ch) = chars.next() {
            match ch {
                '+' | '-' if !term.trim().is_empty() && !term.trim_end().ends_with('^') => {
                    flush(&mut term, &sign, &mut out)?;
                    sign = if ch == '-' { -Rat::one() } else { Rat::one() };
                }
                '+' => {}
                '-' => sign = -sign,
                _ => term.push(ch),
            }
        }
        flush(&mut term, &sign, &mut out)?;
        Ok(out)
    }
}

fn parse_term(vars: &Arc<[String]>, s: &str) -> Result<(Exponents, Rat)> {
    let mut e = vec![0; vars.len()];
    let mut c = Rat::one();
    for tok in s.split(|ch: char| ch == '*' || ch.is_whitespace()).filter(|t| !t.is_empty()) {
        if tok.chars().next().is_some_and(|ch| ch.is_ascii_digit()) {
            c *= crate::arith::parse_rat(tok)?;
            continue;
        }
        let (name, exp) = match tok.split_once('^') {
            Some((n, x)) => (n, x.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?),
            None => (tok, 1),
        };
        e[index_of(vars, name)?] += exp;
    }
    Ok((e, c))
}

fn index_of(vars: &[String], name: &str) -> Result<usize> {
    vars.iter().position(|v| v == name).ok_or_else(|| Error::UndeclaredVariable(name.to_string()))
}

pub fn var_list<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Arc<[String]> {
    names.into_iter().map(|s| s.as_ref().to_string()).collect()
}

/// `a0 < a1 < … < ad`.
pub fn coefficient_vars(d: u32) -> Vec<String> {
    (0..=d).map(|i| format!("a{i}")).collect()
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], x) })
                .collect();
            let coeff = crate::arith::fmt_rat(&a);
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.vars.join(","), self)
    }
}

impl FromStr for MultiPoly {
    type Err = Error;

    /// Parses with variables inferred from the text, sorted `a0 < … < ad < x < y`.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.replace(['{', '}', '\\', '&'], "").replace("a_", "a");
        let mut names: Vec<String> = Vec::new();
        let mut cur = String::new();
        for ch in cleaned.chars().chain(std::iter::once(' ')) {
            if ch.is_ascii_alphanumeric() && !(cur.is_empty() && ch.is_ascii_digit()) {
                cur.push(ch);
            } else if !cur.is_empty() {
                if !names.contains(&cur) {
                    names.push(cur.clone());
                }
                cur.clear();
            }
        }
        names.sort_by_key(|n| var_rank(n));
        Self::parse(var_list(names), s)
    }
}

fn var_rank(name: &str) -> (u32, u32, String) {
    if let Some(rest) = name.strip_prefix('a') {
        if let Ok(i) = rest.parse::<u32>() {
            return (0, i, String::new());
        }
    }
    match name {
        "x" => (2, 0, String::new()),
        "y" => (3, 0, String::new()),
        _ => (1, 0, name.to_string()),
    }
}

// ---------------------------------------------------------------------------
// Univariate helpers (dense, ascending coefficients) for squarefree work.

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn deriv(p: &[Rat]) -> Vec<Rat> {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * Rat::from_integer(BigInt::from(i))).collect())
}

fn divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().expect("nonzero divisor").clone();
    let mut q = vec![Rat::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (k, bk) in b.iter().enumerate() {
            let t = &r[shift + k] - &c * bk;
            r[shift + k] = t;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(p: Vec<Rat>) -> Vec<Rat> {
    match p.last().cloned() {
        Some(l) => p.into_iter().map(|c| c / &l).collect(),
        None => p,
    }
}

fn gcd_uni(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

impl MultiPoly {
    /// Dense ascending coefficients of a polynomial in one variable.
    fn univariate_dense(&self) -> Result<(usize, Vec<Rat>)> {
        let active: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect();
        let i = match active.as_slice() {
            [] => 0,
            [i] => *i,
            _ => return Err(Error::Degenerate("squarefree decomposition needs a univariate polynomial")),
        };
        let deg = self.terms.keys().map(|e| e.get(i).copied().unwrap_or(0)).max().unwrap_or(0) as usize;
        let mut dense = vec![Rat::zero(); deg + 1];
        for (e, c) in &self.terms {
            dense[e.get(i).copied().unwrap_or(0) as usize] = c.clone();
        }
        Ok((i, dense))
    }

    fn from_dense(&self, i: usize, dense: &[Rat]) -> MultiPoly {
        let n = self.vars.len();
        MultiPoly::from_terms(
            self.vars.clone(),
            dense.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; n];
                if n > 0 {
                    e[i] = k as u32;
                }
                (e, c.clone())
            }),
        )
    }
}

/// Yun's squarefree decomposition over ℚ: `u = c · ∏ vᵢ^{mᵢ}` with the
/// `vᵢ` squarefree and pairwise coprime. Factors are returned as primitive
/// integer polynomials with positive leading coefficient, ordered by
/// increasing multiplicity. Constants yield an empty list.
pub fn squarefree_multiplicities(u: &MultiPoly) -> Result<Vec<(MultiPoly, u32)>> {
    if u.is_zero() {
        return Err(Error::Degenerate("squarefree decomposition of the zero polynomial"));
    }
    let (var, f) = u.univariate_dense()?;
    let mut out = Vec::new();
    if f.len() <= 1 {
        return Ok(out);
    }
    let df = deriv(&f);
    let a0 = gcd_uni(&f, &df);
    let mut b = divrem(&f, &a0).0;
    let c = divrem(&df, &a0).0;
    let mut d = sub_dense(&c, &deriv(&b));
    let mut i = 1;
    while b.len() > 1 {
        let a = gcd_uni(&b, &d);
        let nb = divrem(&b, &a).0;
        let nc = divrem(&d, &a).0;
        if a.len() > 1 {
            let (prim, _) = u.from_dense(var, &a).primitive_part()?;
            out.push((normalize_lead(prim), i));
        }
        d = sub_dense(&nc, &deriv(&nb));
        b = nb;
        i += 1;
    }
    Ok(out)
}

fn normalize_lead(p: MultiPoly) -> MultiPoly {
    match p.leading_term() {
        Some((_, c)) if c.is_negative() => p.neg(),
        _ => p,
    }
}

fn sub_dense(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|k| a.get(k).cloned().unwrap_or_else(Rat::zero) - b.get(k).cloned().unwrap_or_else(Rat::zero))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    fn quad_vars() -> Arc<[String]> {
        var_list(["a0", "a1", "a2", "x", "y"])
    }

    #[test]
    fn derivative_examples() {
        let f = MultiPoly::parse(quad_vars(), "a2 x^2 + a1 x y + a0 y^2").unwrap();
        let d2 = f.partial_derivative("x", 2).unwrap();
        assert_eq!(d2, MultiPoly::parse(quad_vars(), "2 a2").unwrap());
        assert_eq!(f.partial_derivative("x", 0).unwrap(), f);
        assert!(matches!(f.partial_derivative("z", 1), Err(Error::UndeclaredVariable(_))));

        let vars = var_list(coefficient_vars(4).into_iter().chain(["x".into(), "y".into()]));
        let quartic =
            MultiPoly::parse(vars.clone(), "a4 x^4 + a3 x^3 y + a2 x^2 y^2 + a1 x y^3 + a0 y^4").unwrap();
        assert_eq!(quartic.partial_derivative("x", 4).unwrap(), MultiPoly::parse(vars, "24 a4").unwrap());
    }

    #[test]
    fn primitive_part_examples() {
        let vars = var_list(coefficient_vars(4));
        let f = MultiPoly::parse(vars.clone(), "2 a0 a4 - 1/2 a1 a3 + 1/6 a2^2").unwrap();
        let (g, c) = f.primitive_part().unwrap();
        assert_eq!(g, MultiPoly::parse(vars.clone(), "12 a0 a4 - 3 a1 a3 + a2^2").unwrap());
        assert_eq!(c, ratio(1, 6));

        let vars2 = var_list(coefficient_vars(2));
        let h = MultiPoly::parse(vars2, "4 a0 a2 - a1^2").unwrap();
        assert_eq!(h.primitive_part().unwrap(), (h.clone(), rat(1)));

        let (g, c) = p("6 x^2").primitive_part().unwrap();
        assert_eq!((g, c), (p("x^2"), rat(6)));

        let (g, c) = p("-4 x + 6").primitive_part().unwrap();
        assert_eq!((g, c), (p("-2 x + 3"), rat(2)));
        assert!(MultiPoly::zero(quad_vars()).primitive_part().is_err());
    }

    #[test]
    fn squarefree_examples() {
        let sf = squarefree_multiplicities(&p("x^3 - x^2")).unwrap();
        assert_eq!(sf, vec![(p("x - 1"), 1), (p("x"), 2)]);

        // x^3 + 5 is squarefree: gcd(u, u') = 1
        let u = p("x^3 + 5");
        assert_eq!(super::gcd_uni(&u.univariate_dense().unwrap().1, &deriv(&u.univariate_dense().unwrap().1)).len(), 1);
        assert_eq!(squarefree_multiplicities(&u).unwrap(), vec![(u, 1)]);

        let sf = squarefree_multiplicities(&p("x^4 + 2 x^2 + 1")).unwrap();
        assert_eq!(sf, vec![(p("x^2 + 1"), 2)]);
        assert!(squarefree_multiplicities(&p("x").scale(&rat(0))).is_err());
    }

    #[test]
    fn display_uses_grlex_with_late_variables_dominant() {
        let f = p("a2^2 - 3 a1 a3 + 12 a0 a4");
        assert_eq!(f.to_string(), "12*a0*a4 - 3*a1*a3 + a2^2");
        assert_eq!(p("y + x^2 + x").to_string(), "x^2 + y + x");
    }

    #[test]
    fn parse_latex_style_indices() {
        let f = p("280 a_0 a_{8}-35 a_1 a_{7}");
        assert_eq!(f.vars().len(), 4);
        assert_eq!(f.to_string(), "280*a0*a8 - 35*a1*a7");
        assert_eq!(p("-a3^6 + 8*a2*a3^4*a4").len(), 2);
    }

    fn small_poly() -> impl proptest::strategy::Strategy<Value = MultiPoly> {
        use proptest::prelude::*;
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3), -6i64..7, 1i64..4), 1..5).prop_map(|ts| {
            let vars = var_list(["a", "b", "x"]);
            let mut out = MultiPoly::zero(vars.clone());
            for ((i, j, k), n, d) in ts {
                out = out.add(&MultiPoly::monomial(vars.clone(), vec![i, j, k], ratio(n, d))).unwrap();
            }
            out
        })
    }

    fn uni_poly() -> impl proptest::strategy::Strategy<Value = MultiPoly> {
        use proptest::prelude::*;
        (proptest::collection::vec((-3i64..4, 1u32..4), 1..4), -5i64..6).prop_map(|(roots, lead)| {
            let vars = var_list(["x"]);
            let x = MultiPoly::var(vars.clone(), "x").unwrap();
            let lead = if lead == 0 { 1 } else { lead };
            let mut u = MultiPoly::constant(vars.clone(), rat(lead));
            for (r, m) in roots {
                let lin = x.sub(&MultiPoly::constant(vars.clone(), rat(r))).unwrap();
                u = u.mul(&lin.pow(m)).unwrap();
            }
            u
        })
    }

    proptest::proptest! {
        #[test]
        fn gauss_lemma(f in small_poly(), g in small_poly()) {
            proptest::prop_assume!(!f.is_zero() && !g.is_zero());
            let fg = f.mul(&g).unwrap();
            let lhs = fg.primitive_part().unwrap().0;
            let rhs = f.primitive_part().unwrap().0.mul(&g.primitive_part().unwrap().0).unwrap();
            proptest::prop_assert!(lhs == rhs || lhs == rhs.neg());
        }

        #[test]
        fn squarefree_reconstructs(u in uni_poly()) {
            let sf = squarefree_multiplicities(&u).unwrap();
            let mut prod = MultiPoly::constant(u.vars().clone(), rat(1));
            for (v, m) in &sf {
                prod = prod.mul(&v.pow(*m)).unwrap();
            }
            let (a, _) = u.primitive_part().unwrap();
            let (b, _) = prod.primitive_part().unwrap();
            proptest::prop_assert!(a == b || a == b.neg());
            for w in sf.windows(2) {
                proptest::prop_assert!(w[0].1 < w[1].1);
            }
        }
    }
}
