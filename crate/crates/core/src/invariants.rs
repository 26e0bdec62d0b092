//! Generating invariants ξ₀..ξₙ of binary forms of degree 2..=10.
//!
//! Each system is a declarative table of transvectant chains interpreted
//! by [`ChainExpr`]. Canonical scaling constants are frozen in the tables:
//! `canonical ξᵢ = scaling · (raw chain value)`, where the canonical
//! polynomial is the displayed classical expansion when one is recorded,
//! and otherwise the primitive integer polynomial whose graded-lex leading
//! coefficient is positive.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_rat, parse_rat, Rat};
use crate::chain::{ChainExpr, Shape};
use crate::error::{Error, Result};
use crate::form::{BinaryForm, Covariant};
use crate::poly::{coefficient_vars, var_list, MultiPoly};
use crate::weighted::ModuliPoint;

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 10;
/// Largest degree for which symbolic expansion is offered.
pub const MAX_SYMBOLIC_DEGREE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Intermediate {
    pub name: String,
    pub expr: ChainExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "note", rename_all = "camelCase")]
pub enum Flag {
    /// The classical table was amended; the note says how.
    Corrected(String),
    /// The classical table is ambiguous here and the shipped chain is a best reading.
    Unresolved(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantDef {
    pub index: usize,
    pub expr: ChainExpr,
    pub weight: u32,
    /// `canonical = scaling · raw`.
    #[serde(with = "opt_rat")]
    pub scaling: Option<Rat>,
    /// Classical expansion in `a0..ad` that the canonical polynomial must equal.
    pub reference: Option<String>,
    pub sign: SignRule,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<Flag>,
}

/// How the sign of the canonical polynomial is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SignRule {
    /// Equal to the recorded expansion.
    Reference,
    /// Graded-lex leading coefficient positive.
    LeadingPositive,
    /// Graded-lex leading coefficient negative; used where the tabulated
    /// values at `x^{d/2} y^{d/2}` fix the opposite sign.
    LeadingNegative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantSystem {
    pub degree: u32,
    pub intermediates: Vec<Intermediate>,
    pub invariants: Vec<InvariantDef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<Flag>,
}

mod opt_rat {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_some(&fmt_rat(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rat>, D::Error> {
        let v: Option<String> = Option::deserialize(d)?;
        v.map(|s| parse_rat(&s).map_err(serde::de::Error::custom)).transpose()
    }
}

struct Row {
    chain: &'static str,
    weight: u32,
    scaling: Option<&'static str>,
    reference: Option<&'static str>,
    sign: SignRule,
    flag: Option<Flag>,
}

const fn row(chain: &'static str, weight: u32, scaling: &'static str) -> Row {
    Row { chain, weight, scaling: Some(scaling), reference: None, sign: SignRule::LeadingPositive, flag: None }
}

const fn negated(chain: &'static str, weight: u32, scaling: &'static str) -> Row {
    Row { chain, weight, scaling: Some(scaling), reference: None, sign: SignRule::LeadingNegative, flag: None }
}

const fn displayed(chain: &'static str, weight: u32, scaling: &'static str, reference: &'static str) -> Row {
    Row { chain, weight, scaling: Some(scaling), reference: Some(reference), sign: SignRule::Reference, flag: None }
}

const QUADRATIC_DISC: &str = "a1^2 - 4 a0 a2";

const CUBIC_XI0: &str = "-54 a_0^2 a_3^2+36 a_1 a_3 a_0 a_2-8 a_2^3 a_0-8 a_1^3 a_3+2 a_2^2 a_1^2";

const QUARTIC_XI0: &str = "12 a_0 a_4-3 a_1 a_3+a_2^2";
const QUARTIC_XI1: &str = "72 a_0 a_2 a_4-27 a_0 a_3^2-27 a_1^2 a_4+9 a_1 a_2 a_3-2 a_2^3";

const SEXTIC_XI0: &str = "120 a_0 a_6-20 a_1 a_5+8 a_2 a_4-3 a_3^2";
const SEXTIC_XI1: &str = "7500 a_0^2 a_6^2-2500 a_1 a_6 a_0 a_5-200 a_2 a_6 a_0 a_4+500 a_2 a_5^2 a_0
 +300 a_0 a_6 a_3^2-300 a_3 a_5 a_0 a_4+80 a_4^3 a_0+500 a_1^2 a_6 a_4-300 a_2 a_6 a_1 a_3
 -100 a_2 a_5 a_1 a_4+100 a_3^2 a_5 a_1-20 a_4^2 a_1 a_3+80 a_2^3 a_6-20 a_3 a_5 a_2^2+28 a_4^2 a_2^2
 -16 a_3^2 a_4 a_2+3 a_3^4";
const SEXTIC_XI2: &str = "-125000 a_0^3 a_6^3+62500 a_0^2 a_1 a_5 a_6^2+35000 a_0^2 a_2 a_4 a_6^2-25000 a_0^2 a_2 a_5^2 a_6-7500 a_0^2 a_3^2 a_6^2
 -7500 a_0^2 a_3 a_4 a_5 a_6+6250 a_0^2 a_3 a_5^3+4000 a_0^2 a_4^3 a_6-2500 a_0^2 a_4^2 a_5^2-25000 a_0 a_1^2 a_4 a_6^2
 -7500 a_0 a_1 a_2 a_3 a_6^2 +10000 a_0 a_1 a_2 a_4 a_5 a_6+6250 a_0 a_1 a_3^2 a_5 a_6-3500 a_0 a_1 a_3 a_4^2 a_6
 -2500 a_0 a_1 a_3 a_4 a_5^2+1000 a_0 a_1 a_4^3 a_5+4000 a_0 a_2^3 a_6^2 -3500 a_0 a_2^2 a_3 a_5 a_6-600 a_0 a_2^2 a_4^2 a_6
 +1100 a_0 a_2 a_3^2 a_4 a_6+250 a_0 a_2 a_3^2 a_5^2+300 a_0 a_2 a_3 a_4^2 a_5-160 a_0 a_2 a_4^4 -150 a_0 a_3^4 a_6+250 a_1^2 a_3^2 a_4 a_6
 -150 a_0 a_3^3 a_4 a_5 + 60 a_0 a_3^2 a_4^3+6250 a_1^3 a_3 a_6^2-2500 a_1^2 a_2^2 a_6^2-2500 a_1^2 a_2 a_3 a_5 a_6+250 a_1^2 a_3 a_4^2 a_5
 -100 a_1^2 a_4^4+1000 a_1 a_2^3 a_5 a_6+300 a_1 a_2^2 a_3 a_4 a_6+250 a_1 a_2^2 a_3 a_5^2 -100 a_1 a_2^2 a_4^2 a_5-150 a_1 a_2 a_3^3 a_6
 -350 a_1 a_2 a_3^2 a_4 a_5+140 a_1 a_2 a_3 a_4^3+100 a_1 a_3^4 a_5-40 a_1 a_3^3 a_4^2-160 a_2^4 a_4 a_6-100 a_2^4 a_5^2
 +60 a_2^3 a_3^2 a_6+140 a_2^3 a_3 a_4 a_5-24 a_2^3 a_4^3-40 a_2^2 a_3^3 a_5-8 a_2^2 a_3^2 a_4^2+8 a_2 a_3^4 a_4-a_3^6";

const OCTAVIC_XI0: &str = "280 a_0 a_{8}-35 a_1 a_{7}+10 a_2 a_6-5 a_3 a_5+2 a_4^2";
const OCTAVIC_XI1: &str = "3920 a_{8} a_0 a_4-2450 a_{7} a_0 a_5  +1050 a_0 a_6^2-2450 a_{8} a_1 a_3+735 a_{7} a_1 a_4-175 a_6 a_1 a_5
 +1050 a_{8} a_2^2-175 a_{7} a_2 a_3-110 a_6 a_2 a_4+75 a_2 a_5^2+75 a_6 a_3^2-45 a_5 a_3 a_4+12 a_4^3";
const OCTAVIC_WEIGHT4: &str = "2458624 a_0^2 a_{8}^2-614656 a_1 a_{8} a_0 a_{7}-12544 a_2 a_{8} a_0 a_6+82320 a_2 a_{7}^2 a_0
 +53312 a_0 a_{8} a_3 a_5-35280 a_3 a_{7} a_0 a_6-25088 a_0 a_{8} a_4^2+4704 a_4 a_5 a_0 a_{7}+8064 a_4 a_6^2 a_0
 -3360 a_5^2 a_0 a_6+82320 a_1^2 a_{8} a_6+2401 a_1^2 a_{7}^2-35280 a_2 a_{8} a_1 a_5-13132 a_2 a_{7} a_1 a_6
 +4704 a_1 a_{8} a_3 a_4+3626 a_3 a_{7} a_1 a_5+3780 a_3 a_6^2 a_1+784 a_1 a_{7} a_4^2-3864 a_4 a_6 a_1 a_5
 +1260 a_5^3 a_1+8064 a_2^2 a_{8} a_4+3780 a_2^2 a_{7} a_5+256 a_2^2 a_6^2-3360 a_2 a_{8} a_3^2-3864 a_3 a_{7} a_2 a_{4 }
 -1516 a_3 a_6 a_2 a_5+1984 a_4^2 a_6 a_2-504 a_5^2 a_2 a_4+1260 a_3^3 a_{7}-504 a_4 a_6 a_3^2+589 a_5^2 a_3^{2 }
 -320 a_4^2 a_5 a_3+64 a_4^4";

const DECIMIC_WEIGHT2: &str = "2520 a_0 a_{10}-252 a_1 a_{9}+56 a_2 a_{8}-21 a_3 a_{7}+12 a_4 a_6-5 a_5^2";

fn table(d: u32) -> Option<(Vec<(&'static str, &'static str)>, Vec<Row>, Vec<Flag>)> {
    let t = match d {
        2 => (vec![], vec![displayed("(f, f)_2", 2, "-2", QUADRATIC_DISC)], vec![]),
        3 => (vec![], vec![displayed("((f, f)_2, (f, f)_2)_2", 4, "27", CUBIC_XI0)], vec![]),
        4 => (
            vec![],
            vec![
                displayed("(f, f)_4", 2, "6", QUARTIC_XI0),
                displayed("(f, (f, f)_2)_4", 3, "72", QUARTIC_XI1),
            ],
            vec![],
        ),
        5 => (
            vec![("c1", "(f, f)_4"), ("c2", "(f, f)_2"), ("c3", "(f, c1)_2"), ("c4", "(c3, c3)_2")],
            vec![row("(c1, c1)_2", 4, "-625/2"), row("(c4, c1)_2", 8, "1562500"), row("(c4, c4)_2", 12, "7812500000/3")],
            vec![Flag::Corrected("c2 = (f, f)_2 is defined in the classical table but never used".into())],
        ),
        6 => (
            vec![("c1", "(f, f)_4"), ("c3", "(f, c1)_4"), ("c4", "(c1, c1)_2")],
            vec![
                displayed("(f, f)_6", 2, "60", SEXTIC_XI0),
                displayed("(c1, c1)_4", 4, "11250", SEXTIC_XI1),
                displayed("(c4, c1)_4", 6, "562500", SEXTIC_XI2),
                negated("(c4, c3^2)_4", 10, "341718750000"),
            ],
            vec![],
        ),
        7 => (
            vec![
                ("c1", "(f, f)_6"),
                ("c2", "(f, f)_4"),
                ("c4", "(f, c1)_2"),
                ("c5", "(c2, c2)_4"),
                ("c7", "(c4, c4)_4"),
            ],
            vec![
                row("(c1, c1)_2", 4, "-12005/2"),
                row("(c7, c1)_2", 8, "10809001875/8"),
                row("((c5, c5)_2, c5)_4", 12, "-32846023338310546875/16"),
                row("((c4, c4)_2, c1^3)_6", 12, "-1946431012640625/16"),
                row("((c2, c5)_4^2, (c5, c5)_2)_4", 20, "-3594706369482186162604522705078125/64"),
            ],
            vec![],
        ),
        8 => (
            vec![("c1", "(f, f)_6"), ("c2", "(f, c1)_4"), ("c3", "(f, f)_4"), ("c5", "(c1, c1)_2")],
            vec![
                displayed("(f, f)_8", 2, "140", OCTAVIC_XI0),
                displayed("(f, c3)_8", 3, "137200/3", OCTAVIC_XI1),
                Row {
                    flag: Some(Flag::Corrected(
                        "the displayed degree-4 expansion labelled xi_3 is the expansion of xi_2 = (c1, c1)_4"
                            .into(),
                    )),
                    ..displayed("(c1, c1)_4", 4, "3687936", OCTAVIC_WEIGHT4)
                },
                row("(c1, c2)_4", 5, "43025920"),
                Row {
                    flag: Some(Flag::Corrected(
                        "the classical list names two xi_5; (c5, c1)_4 has weight 6 and is xi_4".into(),
                    )),
                    ..negated("(c5, c1)_4", 6, "17348050944")
                },
                negated("((c1, c2)_2, c1)_4", 7, "202393927680"),
            ],
            vec![],
        ),
        9 => (
            vec![
                ("c1", "(f, f)_8"),
                ("c2", "(f, f)_6"),
                ("c4", "(f, f)_2"),
                ("c5", "(f, c1)_2"),
                ("c6", "(f, c2)_6"),
                ("c7", "(c2, c2)_4"),
                ("c9", "(c5, c5)_4"),
                ("c21", "(f, c2)_2"),
                ("c25", "(c4, c4)_10"),
                ("c27", "(c6^3, c6)_3"),
            ],
            vec![
                row("(c1, c1)_2", 4, "-2571912"),
                row("(c2, c6^2)_6", 8, "-2614316039032320"),
                row("(((c25, f)_6, c21)_5, c2)_6", 10, "-1428989774274455199206400"),
                row("((c7, c7)_2, c7)_4", 12, "-12354965581365184409856000000"),
                row("(c9, c1^3)_6", 12, "-170125068991760225280"),
                Row {
                    flag: Some(Flag::Unresolved(
                        "the classical entry ((c2, c27)_3)_6 is not a well-formed transvectant; shipped as \
                         (c2, c27)_6, the only reading of weight 14 and order 0"
                            .into(),
                    )),
                    ..row("(c2, c27)_6", 14, "-273334547182795190894592")
                },
                row("((c5, c5)_2, c1^5)_10", 16, "-19295809754036458681346789376"),
            ],
            vec![],
        ),
        10 => (
            vec![
                ("c1", "(f, f)_8"),
                ("c2", "(f, f)_6"),
                ("c5", "(f, c1)_4"),
                ("c6", "(f, c2)_8"),
                ("c7", "(c2, c2)_6"),
                ("c8", "(c5, c5)_4"),
                ("c9", "(c2, c7)_4"),
                ("c10", "(c1, c1)_2"),
                ("c16", "(c5, c5)_2"),
                ("c19", "(c5, c1)_1"),
                ("c25", "(c7, c7)_2"),
            ],
            vec![
                Row {
                    flag: Some(Flag::Corrected(
                        "the displayed degree-2 expansion labelled xi_1 is the expansion of xi_0 = (f, f)_10".into(),
                    )),
                    ..displayed("(f, f)_10", 2, "1260", DECIMIC_WEIGHT2)
                },
                row("(c1, c1)_4", 4, "535815000"),
                row("(c5, c5)_6", 6, "141776649000000"),
                row("(c6, c6)_2", 6, "5040947520000"),
                row("(c1, c8)_4", 8, "502420999893750000"),
                row("(c19, c1^2)_8", 9, "-106332486750000000"),
                row("(c16, c1^2)_8", 10, "886270643812575000000000"),
                row("(c25, c9)_4", 14, "7972257626164859734425600000000"),
                row("(c10^2, c16)_8", 14, "2849262630086609241750000000000000"),
            ],
            vec![],
        ),
        _ => return None,
    };
    Some(t)
}

fn build(d: u32) -> Result<InvariantSystem> {
    let (inter, rows, flags) = table(d).ok_or(Error::UnsupportedDegree(d))?;
    let intermediates = inter
        .into_iter()
        .map(|(name, src)| Ok(Intermediate { name: name.to_string(), expr: ChainExpr::parse(src)? }))
        .collect::<Result<Vec<_>>>()?;
    let invariants = rows
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            Ok(InvariantDef {
                index,
                expr: ChainExpr::parse(r.chain)?,
                weight: r.weight,
                scaling: r.scaling.map(parse_rat).transpose()?,
                reference: r.reference.map(|s| s.split_whitespace().collect::<Vec<_>>().join(" ")),
                sign: r.sign,
                flags: r.flag.into_iter().collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sys = InvariantSystem { degree: d, intermediates, invariants, flags };
    sys.validate()?;
    Ok(sys)
}

/// The built-in generating set for degree `d`.
pub fn system_for_degree(d: u32) -> Result<&'static InvariantSystem> {
    static SYSTEMS: OnceLock<Vec<InvariantSystem>> = OnceLock::new();
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&d) {
        return Err(Error::UnsupportedDegree(d));
    }
    let all = SYSTEMS.get_or_init(|| {
        (MIN_DEGREE..=MAX_DEGREE).map(|d| build(d).expect("built-in invariant tables are well-formed")).collect()
    });
    Ok(&all[(d - MIN_DEGREE) as usize])
}

impl InvariantSystem {
    pub fn weights(&self) -> Vec<u32> {
        self.invariants.iter().map(|i| i.weight).collect()
    }

    pub fn coefficient_vars(&self) -> std::sync::Arc<[String]> {
        var_list(coefficient_vars(self.degree))
    }

    /// Checks definition order, transvectant orders, and that every
    /// invariant has order 0 and degree equal to its weight.
    pub fn validate(&self) -> Result<()> {
        let mut env: HashMap<String, Shape> = HashMap::new();
        for i in &self.intermediates {
            let s = i.expr.shape(self.degree, &env)?;
            if env.insert(i.name.clone(), s).is_some() {
                return Err(Error::MalformedSystem(format!("`{}` defined twice", i.name)));
            }
        }
        for inv in &self.invariants {
            let s = inv.expr.shape(self.degree, &env)?;
            if s.order != 0 {
                return Err(Error::MalformedSystem(format!("xi_{} = {} has order {}", inv.index, inv.expr, s.order)));
            }
            if s.degree != inv.weight {
                return Err(Error::MalformedSystem(format!(
                    "xi_{} = {} has degree {} but weight {}",
                    inv.index, inv.expr, s.degree, inv.weight
                )));
            }
            if inv.scaling.as_ref().is_some_and(|c| c.is_zero()) {
                return Err(Error::MalformedSystem(format!("xi_{} has zero scaling", inv.index)));
            }
        }
        Ok(())
    }

    /// Raw chain values (no scaling) at a source covariant.
    pub fn eval_raw(&self, source: &Covariant) -> Result<Vec<MultiPoly>> {
        let mut env: HashMap<String, Covariant> = HashMap::new();
        let mut memo = HashMap::new();
        for i in &self.intermediates {
            let c = i.expr.eval(source, &env, &mut memo)?;
            env.insert(i.name.clone(), c);
        }
        self.invariants
            .iter()
            .map(|inv| Ok(inv.expr.eval(source, &env, &mut memo)?.poly))
            .collect()
    }

    fn raw_symbolic(&self, index: usize) -> Result<MultiPoly> {
        let inv = self.invariants.get(index).ok_or(Error::NoSuchInvariant { degree: self.degree, index })?;
        let source = Covariant::generic(self.degree);
        let mut env: HashMap<String, Covariant> = HashMap::new();
        let mut memo = HashMap::new();
        let mut needed = Vec::new();
        inv.expr.references(&mut needed);
        // pull in transitive dependencies only
        let mut k = 0;
        while k < needed.len() {
            if let Some(def) = self.intermediates.iter().find(|i| i.name == needed[k]) {
                def.expr.references(&mut needed);
            }
            k += 1;
        }
        for i in &self.intermediates {
            if needed.contains(&i.name) {
                let c = i.expr.eval(&source, &env, &mut memo)?;
                env.insert(i.name.clone(), c);
            }
        }
        let raw = inv.expr.eval(&source, &env, &mut memo)?.poly;
        raw.with_vars(self.coefficient_vars())
    }

    pub fn reference(&self, index: usize) -> Result<Option<MultiPoly>> {
        let inv = self.invariants.get(index).ok_or(Error::NoSuchInvariant { degree: self.degree, index })?;
        inv.reference.as_deref().map(|s| MultiPoly::parse(self.coefficient_vars(), s)).transpose()
    }
}

/// Canonical scaling of a raw symbolic invariant: match the reference when
/// one exists, otherwise the primitive integer polynomial with the sign
/// given by `rule`. Returns `(canonical, scaling)`.
pub fn canonicalize(raw: &MultiPoly, reference: Option<&MultiPoly>, rule: SignRule) -> Result<(MultiPoly, Rat)> {
    let (_, raw_lead) = raw.leading_term().ok_or(Error::Degenerate("zero invariant"))?;
    if let Some(reference) = reference {
        let (_, ref_lead) = reference.leading_term().ok_or(Error::Degenerate("empty reference"))?;
        let scaling = ref_lead / raw_lead;
        return Ok((raw.scale(&scaling), scaling));
    }
    let (_, content) = raw.primitive_part()?;
    let positive = raw_lead.is_positive() == (rule != SignRule::LeadingNegative);
    let scaling = if positive { content.recip() } else { -content.recip() };
    Ok((raw.scale(&scaling), scaling))
}

impl InvariantSystem {
    /// Raw symbolic chain value and its canonical scaling, computed afresh
    /// (the frozen constant is not consulted).
    pub fn expand_raw(&self, index: usize) -> Result<(MultiPoly, Rat)> {
        let raw = self.raw_symbolic(index)?;
        let reference = self.reference(index)?;
        let (_, scaling) = canonicalize(&raw, reference.as_ref(), self.invariants[index].sign)?;
        Ok((raw, scaling))
    }

    /// Canonical integer expansion of ξᵢ, checked against the recorded
    /// classical expansion (if any) and the frozen scaling constant.
    pub fn expand_checked(&self, index: usize) -> Result<MultiPoly> {
        let (raw, scaling) = self.expand_raw(index)?;
        let canonical = raw.scale(&scaling);
        if let Some(reference) = self.reference(index)? {
            if canonical != reference {
                return Err(Error::MalformedSystem(format!(
                    "xi_{index} for degree {} does not match its recorded expansion",
                    self.degree
                )));
            }
        }
        if self.invariants[index].scaling.as_ref() != Some(&scaling) {
            return Err(Error::MalformedSystem(format!(
                "xi_{index} for degree {}: frozen scaling {} differs from computed {}",
                self.degree,
                self.invariants[index].scaling.as_ref().map(fmt_rat).unwrap_or_else(|| "none".into()),
                fmt_rat(&scaling)
            )));
        }
        Ok(canonical)
    }

    /// ξ(f) with the frozen scaling, exact.
    pub fn evaluate(&self, f: &BinaryForm) -> Result<ModuliPoint> {
        if f.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: f.degree() });
        }
        let raw = self.eval_raw(&Covariant::from_form(f))?;
        let coords = raw
            .iter()
            .zip(&self.invariants)
            .map(|(p, inv)| {
                let v = p
                    .as_constant()
                    .ok_or_else(|| Error::MalformedSystem(format!("xi_{} is not constant", inv.index)))?;
                Ok(match &inv.scaling {
                    Some(s) => v * s,
                    None => v,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ModuliPoint::new(self.weights(), coords)
    }
}

/// Symbolic expansion of ξᵢ for `d ≤ 8`: the canonical integer polynomial
/// in `a0..ad`.
pub fn expand_symbolic(d: u32, index: usize) -> Result<MultiPoly> {
    let sys = system_for_degree(d)?;
    if d > MAX_SYMBOLIC_DEGREE {
        return Err(Error::SymbolicUnsupported(d));
    }
    sys.expand_checked(index)
}

/// Raw symbolic expansion and its canonical scaling for any supported
/// degree; slow beyond degree 8.
pub fn expand_raw(d: u32, index: usize) -> Result<(MultiPoly, Rat)> {
    system_for_degree(d)?.expand_raw(index)
}

/// ξ(f) with canonical scaling, as exact rationals.
pub fn evaluate(f: &BinaryForm) -> Result<ModuliPoint> {
    system_for_degree(f.degree())?.evaluate(f)
}

/// Evaluates with an explicitly checked degree.
pub fn evaluate_degree(d: u32, f: &BinaryForm) -> Result<ModuliPoint> {
    if f.degree() != d {
        return Err(Error::DegreeMismatch { expected: d, found: f.degree() });
    }
    evaluate(f)
}
