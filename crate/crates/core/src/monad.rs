//! Finite-support values for the four shipped branching monads
//! (powerset, nonempty powerset, exact-rational distributions, and
//! distributions with an absorbing failure outcome), their monad
//! structure, Eilenberg-Moore algebras on the truth-value object, and the
//! Kantorovich distance between distributions.
//!
//! The failure-aware kind keeps values normalized: any positive mass on
//! the absorbing outcome collapses the whole value to the pure failure,
//! so absorption is an invariant of the representation.

pub mod enumerate;
pub mod transport;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantale::{Rat, Value};
use crate::report::{LawReport, LawResult};
use crate::vcat::FinVCat;

/// The branching type of a machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MonadKind {
    /// Finite powerset: nondeterminism with possible deadlock.
    #[serde(rename = "pow")]
    Pow,
    /// Nonempty finite powerset: deadlock-free nondeterminism.
    #[serde(rename = "nepow")]
    NePow,
    /// Finitely supported probability distributions, exact rationals.
    #[serde(rename = "dist")]
    Dist,
    /// Distributions with a distinguished absorbing outcome `*`: positive
    /// mass on `*` collapses the value to pure `*` (black-hole failure).
    #[serde(rename = "dist-bh")]
    DistBh,
}

impl MonadKind {
    /// Affine monads preserve the singleton: `T1` has exactly one element.
    /// For the non-affine kinds `T1` is a two-point set, and depth-n word
    /// tables carry a frontier recording which of the two points is hit.
    pub fn is_affine(self) -> bool {
        match self {
            MonadKind::NePow | MonadKind::Dist => true,
            MonadKind::Pow | MonadKind::DistBh => false,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonadKind::Pow => "pow",
            MonadKind::NePow => "nepow",
            MonadKind::Dist => "dist",
            MonadKind::DistBh => "dist-bh",
        }
    }
}

impl fmt::Display for MonadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Either a carrier element or the absorbing outcome `*`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StarOr<T> {
    Elem(T),
    Star,
}

impl<T> StarOr<T> {
    pub fn as_elem(&self) -> Option<&T> {
        match self {
            StarOr::Elem(t) => Some(t),
            StarOr::Star => None,
        }
    }
}

/// A finite-support value of the branching monad over carrier `T`.
///
/// Invariants: `NeSet` is nonempty; `Dist`/`BhDist` weights are positive
/// rationals summing to exactly 1; `BhDist` supports never contain `*`
/// (a value that would is represented as `BhStar`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MonadValue<T: Ord> {
    Set(BTreeSet<T>),
    NeSet(BTreeSet<T>),
    Dist(BTreeMap<T, Rat>),
    BhStar,
    BhDist(BTreeMap<T, Rat>),
}

impl<T: Ord + Clone> MonadValue<T> {
    pub fn kind(&self) -> MonadKind {
        match self {
            MonadValue::Set(_) => MonadKind::Pow,
            MonadValue::NeSet(_) => MonadKind::NePow,
            MonadValue::Dist(_) => MonadKind::Dist,
            MonadValue::BhStar | MonadValue::BhDist(_) => MonadKind::DistBh,
        }
    }

    /// Monad unit: singleton set or point distribution.
    pub fn unit(kind: MonadKind, x: T) -> MonadValue<T> {
        match kind {
            MonadKind::Pow => MonadValue::Set(BTreeSet::from_iter([x])),
            MonadKind::NePow => MonadValue::NeSet(BTreeSet::from_iter([x])),
            MonadKind::Dist => MonadValue::Dist(BTreeMap::from_iter([(x, Rat::one())])),
            MonadKind::DistBh => MonadValue::BhDist(BTreeMap::from_iter([(x, Rat::one())])),
        }
    }

    /// Unit over an explicit carrier-or-`*` argument; `*` is rejected
    /// because it is adjoined to the carrier rather than part of it.
    pub fn unit_star_or(kind: MonadKind, x: StarOr<T>) -> Result<MonadValue<T>> {
        match x {
            StarOr::Elem(t) => Ok(MonadValue::unit(kind, t)),
            StarOr::Star => Err(Error::domain(
                "the absorbing outcome * is not a carrier element",
            )),
        }
    }

    /// Validating constructor for distribution-like values.
    pub fn dist(kind: MonadKind, weights: BTreeMap<T, Rat>) -> Result<MonadValue<T>> {
        let mut total = Rat::zero();
        for w in weights.values() {
            if w.is_zero() || !w.in_unit_interval() {
                return Err(Error::domain(format!(
                    "distribution weight {w} is not a positive rational in (0,1]"
                )));
            }
            total = total.add(w);
        }
        if !total.is_one() {
            return Err(Error::domain(format!(
                "distribution weights sum to {total}, expected 1"
            )));
        }
        match kind {
            MonadKind::Dist => Ok(MonadValue::Dist(weights)),
            MonadKind::DistBh => Ok(MonadValue::BhDist(weights)),
            _ => Err(Error::domain(format!(
                "kind {kind} does not carry distribution payloads"
            ))),
        }
    }

    /// Validating constructor for set-like values.
    pub fn set(kind: MonadKind, elems: BTreeSet<T>) -> Result<MonadValue<T>> {
        match kind {
            MonadKind::Pow => Ok(MonadValue::Set(elems)),
            MonadKind::NePow => {
                if elems.is_empty() {
                    Err(Error::domain(
                        "nonempty powerset value must have at least one element",
                    ))
                } else {
                    Ok(MonadValue::NeSet(elems))
                }
            }
            _ => Err(Error::domain(format!(
                "kind {kind} does not carry set payloads"
            ))),
        }
    }

    /// Functor action: image set / pushforward distribution. Masses of
    /// collided elements are added; the absorbing value maps to itself.
    pub fn fmap<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> MonadValue<U> {
        match self {
            MonadValue::Set(s) => MonadValue::Set(s.iter().map(&mut f).collect()),
            MonadValue::NeSet(s) => MonadValue::NeSet(s.iter().map(&mut f).collect()),
            MonadValue::Dist(m) => MonadValue::Dist(pushforward(m, f)),
            MonadValue::BhStar => MonadValue::BhStar,
            MonadValue::BhDist(m) => MonadValue::BhDist(pushforward(m, f)),
        }
    }

    /// The image of the value under `T!` where `!` is the map into the
    /// singleton: `None` for affine kinds (`T1` is trivial), otherwise
    /// `Some(alive)` where `alive` is false exactly on the empty set / the
    /// absorbed value.
    pub fn t1_image(&self) -> Option<bool> {
        match self {
            MonadValue::Set(s) => Some(!s.is_empty()),
            MonadValue::BhStar => Some(false),
            MonadValue::BhDist(_) => Some(true),
            MonadValue::NeSet(_) | MonadValue::Dist(_) => None,
        }
    }

    pub fn support(&self) -> Vec<&T> {
        match self {
            MonadValue::Set(s) | MonadValue::NeSet(s) => s.iter().collect(),
            MonadValue::Dist(m) | MonadValue::BhDist(m) => m.keys().collect(),
            MonadValue::BhStar => Vec::new(),
        }
    }
}

fn pushforward<T: Ord, U: Ord>(
    m: &BTreeMap<T, Rat>,
    mut f: impl FnMut(&T) -> U,
) -> BTreeMap<U, Rat> {
    let mut out: BTreeMap<U, Rat> = BTreeMap::new();
    for (x, w) in m {
        let y = f(x);
        match out.get_mut(&y) {
            Some(acc) => *acc = acc.add(w),
            None => {
                out.insert(y, w.clone());
            }
        }
    }
    out
}

/// Monad multiplication. Sets flatten by union; distributions by exact
/// weighted mixture; for the failure-aware kind the mixture treats `*` as
/// an ordinary outcome and the result is re-normalized, so any positive
/// probability of an absorbed inner value collapses the whole mixture.
pub fn mult<T: Ord + Clone>(tt: &MonadValue<MonadValue<T>>) -> Result<MonadValue<T>> {
    let outer_kind = tt.kind();
    let check_inner = |inner: &MonadValue<T>| -> Result<()> {
        if inner.kind() != outer_kind {
            return Err(Error::domain(format!(
                "mixed monad kinds in multiplication: outer {outer_kind}, inner {}",
                inner.kind()
            )));
        }
        Ok(())
    };
    match tt {
        MonadValue::Set(ss) => {
            let mut out = BTreeSet::new();
            for inner in ss {
                check_inner(inner)?;
                if let MonadValue::Set(s) = inner {
                    out.extend(s.iter().cloned());
                }
            }
            Ok(MonadValue::Set(out))
        }
        MonadValue::NeSet(ss) => {
            let mut out = BTreeSet::new();
            for inner in ss {
                check_inner(inner)?;
                if let MonadValue::NeSet(s) = inner {
                    out.extend(s.iter().cloned());
                }
            }
            Ok(MonadValue::NeSet(out))
        }
        MonadValue::Dist(mm) => {
            let mut out: BTreeMap<T, Rat> = BTreeMap::new();
            for (inner, w) in mm {
                check_inner(inner)?;
                if let MonadValue::Dist(m) = inner {
                    accumulate_mixture(&mut out, m, w);
                }
            }
            Ok(MonadValue::Dist(out))
        }
        MonadValue::BhStar => Ok(MonadValue::BhStar),
        MonadValue::BhDist(mm) => {
            let mut out: BTreeMap<T, Rat> = BTreeMap::new();
            for (inner, w) in mm {
                check_inner(inner)?;
                match inner {
                    // positive weight on an absorbed value collapses all
                    MonadValue::BhStar => return Ok(MonadValue::BhStar),
                    MonadValue::BhDist(m) => accumulate_mixture(&mut out, m, w),
                    _ => unreachable!("kind checked above"),
                }
            }
            Ok(MonadValue::BhDist(out))
        }
    }
}

fn accumulate_mixture<T: Ord + Clone>(
    out: &mut BTreeMap<T, Rat>,
    inner: &BTreeMap<T, Rat>,
    weight: &Rat,
) {
    for (x, wx) in inner {
        let add = weight.mul(wx);
        match out.get_mut(x) {
            Some(acc) => *acc = acc.add(&add),
            None => {
                out.insert(x.clone(), add);
            }
        }
    }
}

/// Collapses a distribution over `carrier + {*}` to normal form: if `*`
/// carries positive mass the result is the pure absorbed value, otherwise
/// the (star-free) distribution itself. This is the distributive law that
/// composes the failure outcome with probabilistic branching.
pub fn bh_flatten<T: Ord + Clone>(weights: &BTreeMap<StarOr<T>, Rat>) -> Result<MonadValue<T>> {
    let mut total = Rat::zero();
    for w in weights.values() {
        if w.is_zero() || !w.in_unit_interval() {
            return Err(Error::domain(format!(
                "distribution weight {w} is not a positive rational in (0,1]"
            )));
        }
        total = total.add(w);
    }
    if !total.is_one() {
        return Err(Error::domain(format!(
            "distribution weights sum to {total}, expected 1"
        )));
    }
    if weights.contains_key(&StarOr::Star) {
        return Ok(MonadValue::BhStar);
    }
    let map = weights
        .iter()
        .map(|(k, w)| match k {
            StarOr::Elem(t) => (t.clone(), w.clone()),
            StarOr::Star => unreachable!(),
        })
        .collect();
    Ok(MonadValue::BhDist(map))
}

/// Eilenberg-Moore algebra structures on the truth-value object that the
/// shipped machine signatures use as output algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputAlgebra {
    /// `o(X) = T iff T in X` on (nonempty) powersets of Booleans.
    Join,
    /// Expected value on exact-rational distributions over `[0,1]`. On
    /// failure-aware values the absorbed value evaluates to 0 (rejection);
    /// this clause belongs to the machine-step semantics rather than to
    /// the distribution-monad algebra laws.
    Expect,
}

impl OutputAlgebra {
    pub fn name(self) -> &'static str {
        match self {
            OutputAlgebra::Join => "o_join",
            OutputAlgebra::Expect => "o_expect",
        }
    }

    /// Evaluates the algebra on a monad value over output values.
    pub fn apply(self, v: &MonadValue<Value>) -> Result<Value> {
        match (self, v) {
            (OutputAlgebra::Join, MonadValue::Set(s) | MonadValue::NeSet(s)) => {
                for x in s {
                    x.as_bool()?;
                }
                Ok(Value::Bool(s.contains(&Value::Bool(true))))
            }
            (OutputAlgebra::Expect, MonadValue::Dist(m) | MonadValue::BhDist(m)) => {
                let mut acc = Rat::zero();
                for (x, w) in m {
                    acc = acc.add(&x.as_rat()?.mul(w));
                }
                Ok(Value::Rat(acc))
            }
            (OutputAlgebra::Expect, MonadValue::BhStar) => Ok(Value::rat(0, 1)),
            _ => Err(Error::domain(format!(
                "algebra {} is not defined on {:?} values",
                self.name(),
                v.kind()
            ))),
        }
    }

    /// The algebra canonically associated with a monad kind.
    pub fn for_kind(kind: MonadKind) -> OutputAlgebra {
        match kind {
            MonadKind::Pow | MonadKind::NePow => OutputAlgebra::Join,
            MonadKind::Dist | MonadKind::DistBh => OutputAlgebra::Expect,
        }
    }
}

/// Exact Kantorovich distance between two distributions over the carrier
/// of a symmetric ground space: the minimal expected ground distance over
/// all couplings, computed as an exact rational transportation problem.
pub fn kantorovich(
    ground: &FinVCat,
    mu: &BTreeMap<usize, Rat>,
    nu: &BTreeMap<usize, Rat>,
) -> Result<Rat> {
    if ground.quantale != crate::quantale::Quantale::UnitIntervalOplus {
        return Err(Error::domain(
            "kantorovich requires a ground space over the unit interval quantale",
        ));
    }
    if !ground.symmetric {
        return Err(Error::domain(
            "kantorovich requires a symmetric ground distance",
        ));
    }
    for m in [mu, nu] {
        let mut total = Rat::zero();
        for (&x, w) in m {
            if x >= ground.len() {
                return Err(Error::domain(format!(
                    "support element {x} outside ground carrier"
                )));
            }
            if w.is_zero() {
                return Err(Error::domain("zero mass in support"));
            }
            total = total.add(w);
        }
        if !total.is_one() {
            return Err(Error::domain(format!(
                "distribution mass {total}, expected 1"
            )));
        }
    }
    let rows: Vec<(usize, Rat)> = mu.iter().map(|(&x, w)| (x, w.clone())).collect();
    let cols: Vec<(usize, Rat)> = nu.iter().map(|(&x, w)| (x, w.clone())).collect();
    let cost = |i: usize, j: usize| -> Result<Rat> {
        // over the unit interval the V-category distance is already the
        // numeric (symmetric) ground distance
        Ok(ground.dist(rows[i].0, cols[j].0).as_rat()?.clone())
    };
    transport::min_cost_transport(
        &rows.iter().map(|(_, w)| w.clone()).collect::<Vec<_>>(),
        &cols.iter().map(|(_, w)| w.clone()).collect::<Vec<_>>(),
        cost,
    )
}

/// Verifies the monad laws of `kind` (exhaustively for set-like kinds over
/// bounded nesting universes, over deterministic dyadic grids for the
/// distribution kinds) together with the unit and multiplication laws of
/// the kind's output algebra.
pub fn check_monad_and_algebra_laws(kind: MonadKind) -> LawReport {
    let mut report = check_monad_laws(kind);
    report.merge(check_algebra_laws(OutputAlgebra::for_kind(kind), kind));
    report
}

/// Monad laws: both unit laws and associativity of multiplication.
pub fn check_monad_laws(kind: MonadKind) -> LawReport {
    let mut report = LawReport::new(format!("monad laws ({kind})"));
    let carrier: Vec<u8> = vec![0, 1, 2];
    let tx = enumerate::monad_values(kind, &carrier);

    report.push(law(
        "left-unit (mult . unit = id)",
        (|| {
            for t in &tx {
                let wrapped = MonadValue::unit(kind, t.clone());
                if &mult(&wrapped)? != t {
                    return Ok(Some(format!("t={t:?}")));
                }
            }
            Ok(None)
        })(),
    ));

    report.push(law(
        "right-unit (mult . fmap unit = id)",
        (|| {
            for t in &tx {
                let wrapped = t.fmap(|x| MonadValue::unit(kind, x.clone()));
                if &mult(&wrapped)? != t {
                    return Ok(Some(format!("t={t:?}")));
                }
            }
            Ok(None)
        })(),
    ));

    report.push(law(
        "associativity (mult . mult = mult . fmap mult)",
        (|| {
            // nested values over a bounded universe of inner values
            let inner_universe = enumerate::bounded(&tx, 4);
            let ttx = enumerate::monad_values(kind, &inner_universe);
            let ttt_universe = enumerate::bounded(&ttx, 4);
            let tttx = enumerate::monad_values(kind, &ttt_universe);
            for ttt in &tttx {
                let lhs = mult(&mult(ttt)?)?;
                let flattened_inner = ttt.fmap(|tt| mult(tt).expect("kind-checked"));
                let rhs = mult(&flattened_inner)?;
                if lhs != rhs {
                    return Ok(Some(format!("ttt={ttt:?}")));
                }
            }
            Ok(None)
        })(),
    ));

    report
}

/// Unit and multiplication laws of an output algebra over its carrier
/// grid. For the failure-aware kind the algebra is checked on the
/// distribution part (star-free nestings), where it lives.
pub fn check_algebra_laws(alg: OutputAlgebra, kind: MonadKind) -> LawReport {
    let mut report = LawReport::new(format!("algebra laws ({} over {kind})", alg.name()));
    let carrier: Vec<Value> = match alg {
        OutputAlgebra::Join => vec![Value::bot(), Value::top()],
        OutputAlgebra::Expect => (0..=4).map(|i| Value::rat(i, 4)).collect(),
    };
    let law_kind = match kind {
        // the algebra of the failure-aware signature is the one on the
        // distribution monad; the absorbed value is handled by the machine
        // step, not by these laws
        MonadKind::DistBh => MonadKind::Dist,
        k => k,
    };
    let ta = enumerate::monad_values(law_kind, &carrier);

    report.push(law(
        "algebra-unit (o . unit = id)",
        (|| {
            for a in &carrier {
                let got = alg.apply(&MonadValue::unit(law_kind, a.clone()))?;
                if &got != a {
                    return Ok(Some(format!("a={a}, o(unit a)={got}")));
                }
            }
            Ok(None)
        })(),
    ));

    report.push(law(
        "algebra-mult (o . mult = o . fmap o)",
        (|| {
            let inner_universe = enumerate::bounded(&ta, 5);
            let tta = enumerate::monad_values(law_kind, &inner_universe);
            for tt in &tta {
                let lhs = alg.apply(&mult(tt)?)?;
                let pushed = tt.fmap(|t| alg.apply(t).expect("carrier-checked"));
                let rhs = alg.apply(&pushed)?;
                if lhs != rhs {
                    return Ok(Some(format!("tt={tt:?}, o(mult)={lhs}, o(fmap o)={rhs}")));
                }
            }
            Ok(None)
        })(),
    ));

    report
}

fn law(name: &str, out: Result<Option<String>>) -> LawResult {
    match out {
        Ok(None) => LawResult::pass(name),
        Ok(Some(w)) => LawResult::fail(name, w),
        Err(e) => LawResult::fail(name, format!("error while checking: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::Quantale;
    use proptest::prelude::*;

    fn dirac(kind: MonadKind, x: u8) -> MonadValue<u8> {
        MonadValue::unit(kind, x)
    }

    #[test]
    fn units() {
        assert_eq!(
            dirac(MonadKind::Pow, 0),
            MonadValue::Set(BTreeSet::from_iter([0]))
        );
        assert_eq!(
            dirac(MonadKind::Dist, 1),
            MonadValue::Dist(BTreeMap::from_iter([(1, Rat::one())]))
        );
        assert!(MonadValue::<u8>::unit_star_or(MonadKind::DistBh, StarOr::Star).is_err());
    }

    #[test]
    fn mult_examples() {
        // Pow: {{a},{a,b}} -> {a,b}
        let tt = MonadValue::Set(BTreeSet::from_iter([
            MonadValue::Set(BTreeSet::from_iter([0u8])),
            MonadValue::Set(BTreeSet::from_iter([0u8, 1])),
        ]));
        assert_eq!(
            mult(&tt).unwrap(),
            MonadValue::Set(BTreeSet::from_iter([0, 1]))
        );

        // Dist: [[a 1/2, b 1/2] 1/2, [a 1] 1/2] -> [a 3/4, b 1/4]
        let inner1 = MonadValue::Dist(BTreeMap::from_iter([
            (0u8, Rat::new(1, 2)),
            (1, Rat::new(1, 2)),
        ]));
        let inner2 = MonadValue::Dist(BTreeMap::from_iter([(0u8, Rat::one())]));
        let tt = MonadValue::Dist(BTreeMap::from_iter([
            (inner1, Rat::new(1, 2)),
            (inner2, Rat::new(1, 2)),
        ]));
        assert_eq!(
            mult(&tt).unwrap(),
            MonadValue::Dist(BTreeMap::from_iter([
                (0, Rat::new(3, 4)),
                (1, Rat::new(1, 4))
            ]))
        );

        // NePow: {{a}} -> {a}
        let tt = MonadValue::NeSet(BTreeSet::from_iter([MonadValue::NeSet(
            BTreeSet::from_iter([7u8]),
        )]));
        assert_eq!(mult(&tt).unwrap(), MonadValue::NeSet(BTreeSet::from_iter([7])));

        // mixed kinds rejected
        let bad: MonadValue<MonadValue<u8>> = MonadValue::Set(BTreeSet::from_iter([
            MonadValue::NeSet(BTreeSet::from_iter([0u8])),
        ]));
        assert!(mult(&bad).is_err());
    }

    #[test]
    fn fmap_examples() {
        let s = MonadValue::Set(BTreeSet::from_iter([0u8, 1]));
        assert_eq!(
            s.fmap(|_| 9u8),
            MonadValue::Set(BTreeSet::from_iter([9u8]))
        );

        let d = MonadValue::Dist(BTreeMap::from_iter([
            (0u8, Rat::new(1, 2)),
            (1, Rat::new(1, 2)),
        ]));
        assert_eq!(
            d.fmap(|_| 5u8),
            MonadValue::Dist(BTreeMap::from_iter([(5u8, Rat::one())]))
        );

        let star: MonadValue<u8> = MonadValue::BhStar;
        assert_eq!(star.fmap(|x| *x), MonadValue::BhStar);
    }

    #[test]
    fn bh_flatten_examples() {
        let mixed = BTreeMap::from_iter([
            (StarOr::Elem(0u8), Rat::new(1, 2)),
            (StarOr::Star, Rat::new(1, 2)),
        ]);
        assert_eq!(bh_flatten(&mixed).unwrap(), MonadValue::BhStar);

        let clean = BTreeMap::from_iter([
            (StarOr::Elem(0u8), Rat::new(1, 3)),
            (StarOr::Elem(1), Rat::new(2, 3)),
        ]);
        assert_eq!(
            bh_flatten(&clean).unwrap(),
            MonadValue::BhDist(BTreeMap::from_iter([
                (0, Rat::new(1, 3)),
                (1, Rat::new(2, 3))
            ]))
        );

        let pure_star = BTreeMap::from_iter([(StarOr::<u8>::Star, Rat::one())]);
        assert_eq!(bh_flatten(&pure_star).unwrap(), MonadValue::BhStar);
    }

    #[test]
    fn bh_mixture_collapses() {
        let tt = MonadValue::BhDist(BTreeMap::from_iter([
            (MonadValue::<u8>::BhStar, Rat::new(1, 2)),
            (
                MonadValue::BhDist(BTreeMap::from_iter([(0u8, Rat::one())])),
                Rat::new(1, 2),
            ),
        ]));
        assert_eq!(mult(&tt).unwrap(), MonadValue::BhStar);
    }

    #[test]
    fn affinity_flags() {
        assert!(!MonadKind::Pow.is_affine());
        assert!(MonadKind::NePow.is_affine());
        assert!(MonadKind::Dist.is_affine());
        assert!(!MonadKind::DistBh.is_affine());
        // T1 sizes witness the flags
        let one = vec![()];
        for kind in [
            MonadKind::Pow,
            MonadKind::NePow,
            MonadKind::Dist,
            MonadKind::DistBh,
        ] {
            let t1 = enumerate::monad_values(kind, &one);
            if kind.is_affine() {
                assert_eq!(t1.len(), 1, "{kind}");
            } else {
                assert_eq!(t1.len(), 2, "{kind}");
            }
        }
    }

    #[test]
    fn algebra_examples() {
        let alg = OutputAlgebra::Join;
        let s = MonadValue::NeSet(BTreeSet::from_iter([Value::bot()]));
        assert_eq!(alg.apply(&s).unwrap(), Value::bot());
        let s = MonadValue::NeSet(BTreeSet::from_iter([Value::bot(), Value::top()]));
        assert_eq!(alg.apply(&s).unwrap(), Value::top());
        let empty = MonadValue::Set(BTreeSet::<Value>::new());
        assert_eq!(OutputAlgebra::Join.apply(&empty).unwrap(), Value::bot());

        let e = OutputAlgebra::Expect;
        let d = MonadValue::Dist(BTreeMap::from_iter([
            (Value::rat(0, 1), Rat::new(1, 2)),
            (Value::rat(1, 1), Rat::new(1, 2)),
        ]));
        assert_eq!(e.apply(&d).unwrap(), Value::rat(1, 2));
        assert_eq!(e.apply(&MonadValue::BhStar).unwrap(), Value::rat(0, 1));
    }

    #[test]
    fn law_suites_pass_for_all_kinds() {
        for kind in [
            MonadKind::Pow,
            MonadKind::NePow,
            MonadKind::Dist,
            MonadKind::DistBh,
        ] {
            let report = check_monad_and_algebra_laws(kind);
            assert!(report.all_passed(), "{kind}:\n{report}");
        }
    }

    fn ground_abc() -> FinVCat {
        // d(a,b) = 1/2, d(a,c) = 1, d(b,c) = 1/2
        let h = Value::rat(1, 2);
        let o = Value::rat(0, 1);
        let one = Value::rat(1, 1);
        FinVCat::from_table(
            Quantale::UnitIntervalOplus,
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                o.clone(), h.clone(), one.clone(),
                h.clone(), o.clone(), h.clone(),
                one.clone(), h.clone(), o.clone(),
            ],
            true,
            false,
        )
        .unwrap()
    }

    #[test]
    fn kantorovich_identity_and_dirac() {
        let g = ground_abc();
        let mu = BTreeMap::from_iter([(0usize, Rat::new(1, 2)), (2, Rat::new(1, 2))]);
        assert_eq!(kantorovich(&g, &mu, &mu).unwrap(), Rat::zero());

        let da = BTreeMap::from_iter([(0usize, Rat::one())]);
        let dc = BTreeMap::from_iter([(2usize, Rat::one())]);
        assert_eq!(kantorovich(&g, &da, &dc).unwrap(), Rat::one());
    }

    #[test]
    fn kantorovich_forced_coupling() {
        let g = ground_abc();
        let mu = BTreeMap::from_iter([(0usize, Rat::new(1, 2)), (2, Rat::new(1, 2))]);
        let nu = BTreeMap::from_iter([(1usize, Rat::one())]);
        // unique coupling: 1/2 * d(a,b) + 1/2 * d(c,b) = 1/2
        assert_eq!(kantorovich(&g, &mu, &nu).unwrap(), Rat::new(1, 2));
    }

    #[test]
    fn kantorovich_rejects_asymmetric_ground() {
        let g = FinVCat::from_table(
            Quantale::UnitIntervalOplus,
            vec!["a".into(), "b".into()],
            vec![
                Value::rat(0, 1), Value::rat(1, 2),
                Value::rat(1, 4), Value::rat(0, 1),
            ],
            false,
            false,
        )
        .unwrap();
        let da = BTreeMap::from_iter([(0usize, Rat::one())]);
        let db = BTreeMap::from_iter([(1usize, Rat::one())]);
        assert!(kantorovich(&g, &da, &db).is_err());
    }

    proptest! {
        #[test]
        fn mixture_mass_is_preserved(w1 in 1i64..8, split in 1i64..8) {
            let w = Rat::new(w1, 8);
            let rest = w.monus_from(&Rat::one());
            let s = Rat::new(split, 8);
            let s_rest = s.monus_from(&Rat::one());
            let inner1 = MonadValue::Dist(BTreeMap::from_iter([
                (0u8, s.clone()),
                (1, s_rest.clone()),
            ]));
            let inner2 = MonadValue::Dist(BTreeMap::from_iter([(2u8, Rat::one())]));
            let tt = if rest.is_zero() {
                MonadValue::Dist(BTreeMap::from_iter([(inner1, Rat::one())]))
            } else {
                MonadValue::Dist(BTreeMap::from_iter([(inner1, w), (inner2, rest)]))
            };
            let flat = mult(&tt).unwrap();
            if let MonadValue::Dist(m) = flat {
                let total = m.values().fold(Rat::zero(), |acc, x| acc.add(x));
                prop_assert!(total.is_one());
            } else {
                prop_assert!(false, "wrong kind");
            }
        }
    }
}
