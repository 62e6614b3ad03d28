//! Commutative unital quantales: the shared domain of truth values and
//! distances. Two instances ship: the two-element Boolean quantale and the
//! unit interval under truncated addition with reversed order.
//!
//! All elements are exact: Booleans, or rationals in lowest terms. The
//! reversed order on the unit interval means that joins are numeric infima
//! and the bottom element is the number 1; this is what makes truncated
//! addition distribute over the empty join.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{LawReport, LawResult};

/// Exact rational number. Stored in lowest terms; parsed from `"p/q"` or
/// `"p"` (decimal notation is rejected to preserve exactness).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_big(r: BigRational) -> Self {
        Rat(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// True iff the value lies in the closed unit interval.
    pub fn in_unit_interval(&self) -> bool {
        !self.0.is_negative() && self.0 <= BigRational::one()
    }

    pub fn add(&self, other: &Rat) -> Rat {
        Rat(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Rat) -> Rat {
        Rat(&self.0 - &other.0)
    }

    pub fn mul(&self, other: &Rat) -> Rat {
        Rat(&self.0 * &other.0)
    }

    pub fn div(&self, other: &Rat) -> Rat {
        assert!(!other.is_zero(), "division by zero");
        Rat(&self.0 / &other.0)
    }

    /// Truncated addition `min(a + b, 1)`.
    pub fn oplus(&self, other: &Rat) -> Rat {
        let s = &self.0 + &other.0;
        if s > BigRational::one() {
            Rat::one()
        } else {
            Rat(s)
        }
    }

    /// Truncated subtraction `max(b - a, 0)` (this is `self` subtracted
    /// from `other`).
    pub fn monus_from(&self, other: &Rat) -> Rat {
        let d = &other.0 - &self.0;
        if d.is_negative() {
            Rat::zero()
        } else {
            Rat(d)
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        if s.contains('.') {
            return Err(Error::parse(format!(
                "decimal literals are not accepted, write '{s}' as p/q"
            )));
        }
        let parse_int = |t: &str| -> Result<BigInt> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::parse(format!("invalid integer '{t}'")))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let num = parse_int(p)?;
                let den = parse_int(q)?;
                if den.is_zero() {
                    return Err(Error::parse(format!("zero denominator in '{s}'")));
                }
                Ok(Rat(BigRational::new(num, den)))
            }
            None => Ok(Rat(BigRational::from_integer(parse_int(s)?))),
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of one of the shipped quantales (also used for machine
/// outputs and formula values).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Bool(bool),
    Rat(Rat),
}

impl Value {
    pub fn top() -> Value {
        Value::Bool(true)
    }

    pub fn bot() -> Value {
        Value::Bool(false)
    }

    pub fn rat(num: i64, den: i64) -> Value {
        Value::Rat(Rat::new(num, den))
    }

    pub fn as_bool(&self) -> Result<bool> {
        match self {
            Value::Bool(b) => Ok(*b),
            Value::Rat(r) => Err(Error::domain(format!("expected Boolean value, got {r}"))),
        }
    }

    pub fn as_rat(&self) -> Result<&Rat> {
        match self {
            Value::Rat(r) => Ok(r),
            Value::Bool(b) => Err(Error::domain(format!("expected rational value, got {b}"))),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(true) => write!(f, "T"),
            Value::Bool(false) => write!(f, "F"),
            Value::Rat(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Operations every quantale exposes. The trait exists so that law checking
/// can also run against deliberately broken structures in tests; production
/// code uses the [`Quantale`] enum directly.
pub trait QuantaleOps {
    fn name(&self) -> &str;

    /// Carrier membership.
    fn contains(&self, v: &Value) -> bool;

    /// Monoid unit `k`.
    fn unit(&self) -> Value;

    /// Least element of the lattice order.
    fn bottom(&self) -> Value;

    /// Greatest element of the lattice order.
    fn top(&self) -> Value;

    fn tensor(&self, a: &Value, b: &Value) -> Result<Value>;

    /// Lattice order `a <= b`.
    fn leq(&self, a: &Value, b: &Value) -> Result<bool>;

    /// Join of a finite family; the empty join is `bottom`.
    fn join(&self, items: &[Value]) -> Result<Value>;

    /// Meet of a finite family; the empty meet is `top`.
    fn meet(&self, items: &[Value]) -> Result<Value>;

    /// Internal hom `[b, c]`: the largest `a` with `a (x) b <= c`.
    fn hom(&self, b: &Value, c: &Value) -> Result<Value>;

    /// Symmetrized self-distance `[a,b] /\ [b,a]`.
    fn sym_dist(&self, a: &Value, b: &Value) -> Result<Value> {
        let lr = self.hom(a, b)?;
        let rl = self.hom(b, a)?;
        self.meet(&[lr, rl])
    }
}

/// The two shipped quantales.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantale {
    /// `({F,T}, /\, T, <=)`: Boolean truth values, hom is implication.
    #[serde(rename = "bool")]
    Bool2,
    /// Exact rationals in `[0,1]` under truncated addition, unit 0, with
    /// the REVERSED numeric order: `a <= b` iff `a >= b` numerically.
    /// Hom is truncated subtraction, joins are numeric infima.
    #[serde(rename = "unit")]
    UnitIntervalOplus,
}

impl Quantale {
    fn check_member(&self, v: &Value) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{v} is not in the carrier of quantale {}",
                self.name()
            )))
        }
    }
}

impl QuantaleOps for Quantale {
    fn name(&self) -> &str {
        match self {
            Quantale::Bool2 => "bool",
            Quantale::UnitIntervalOplus => "unit",
        }
    }

    fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (Quantale::Bool2, Value::Bool(_)) => true,
            (Quantale::UnitIntervalOplus, Value::Rat(r)) => r.in_unit_interval(),
            _ => false,
        }
    }

    fn unit(&self) -> Value {
        match self {
            Quantale::Bool2 => Value::Bool(true),
            Quantale::UnitIntervalOplus => Value::Rat(Rat::zero()),
        }
    }

    fn bottom(&self) -> Value {
        match self {
            Quantale::Bool2 => Value::Bool(false),
            Quantale::UnitIntervalOplus => Value::Rat(Rat::one()),
        }
    }

    fn top(&self) -> Value {
        match self {
            Quantale::Bool2 => Value::Bool(true),
            Quantale::UnitIntervalOplus => Value::Rat(Rat::zero()),
        }
    }

    fn tensor(&self, a: &Value, b: &Value) -> Result<Value> {
        self.check_member(a)?;
        self.check_member(b)?;
        match self {
            Quantale::Bool2 => Ok(Value::Bool(a.as_bool()? && b.as_bool()?)),
            Quantale::UnitIntervalOplus => Ok(Value::Rat(a.as_rat()?.oplus(b.as_rat()?))),
        }
    }

    fn leq(&self, a: &Value, b: &Value) -> Result<bool> {
        self.check_member(a)?;
        self.check_member(b)?;
        match self {
            Quantale::Bool2 => Ok(!a.as_bool()? || b.as_bool()?),
            // reversed numeric order
            Quantale::UnitIntervalOplus => Ok(a.as_rat()? >= b.as_rat()?),
        }
    }

    fn join(&self, items: &[Value]) -> Result<Value> {
        let mut acc = self.bottom();
        for v in items {
            self.check_member(v)?;
            acc = match self {
                Quantale::Bool2 => Value::Bool(acc.as_bool()? || v.as_bool()?),
                Quantale::UnitIntervalOplus => {
                    // join in the reversed order = numeric min
                    if v.as_rat()? < acc.as_rat()? {
                        v.clone()
                    } else {
                        acc
                    }
                }
            };
        }
        Ok(acc)
    }

    fn meet(&self, items: &[Value]) -> Result<Value> {
        let mut acc = self.top();
        for v in items {
            self.check_member(v)?;
            acc = match self {
                Quantale::Bool2 => Value::Bool(acc.as_bool()? && v.as_bool()?),
                Quantale::UnitIntervalOplus => {
                    // meet in the reversed order = numeric max
                    if v.as_rat()? > acc.as_rat()? {
                        v.clone()
                    } else {
                        acc
                    }
                }
            };
        }
        Ok(acc)
    }

    fn hom(&self, b: &Value, c: &Value) -> Result<Value> {
        self.check_member(b)?;
        self.check_member(c)?;
        match self {
            Quantale::Bool2 => Ok(Value::Bool(!b.as_bool()? || c.as_bool()?)),
            Quantale::UnitIntervalOplus => Ok(Value::Rat(b.as_rat()?.monus_from(c.as_rat()?))),
        }
    }
}

/// Exhaustively verifies the quantale axioms over a finite sample of the
/// carrier: commutative monoid laws, lattice consistency, join-continuity
/// of the tensor and the hom adjunction. Reports one result per law with a
/// witness for the first violation found.
pub fn check_quantale_laws(q: &dyn QuantaleOps, sample: &[Value]) -> LawReport {
    let mut report = LawReport::new(format!("quantale laws ({})", q.name()));

    for v in sample {
        if !q.contains(v) {
            report.push(LawResult::fail(
                "carrier",
                format!("sample element {v} is outside the carrier"),
            ));
            return report;
        }
    }

    report.push(run_law("tensor-commutative", || {
        for a in sample {
            for b in sample {
                if q.tensor(a, b)? != q.tensor(b, a)? {
                    return Ok(Some(format!("a={a}, b={b}")));
                }
            }
        }
        Ok(None)
    }));

    report.push(run_law("tensor-associative", || {
        for a in sample {
            for b in sample {
                for c in sample {
                    let lhs = q.tensor(&q.tensor(a, b)?, c)?;
                    let rhs = q.tensor(a, &q.tensor(b, c)?)?;
                    if lhs != rhs {
                        return Ok(Some(format!("a={a}, b={b}, c={c}")));
                    }
                }
            }
        }
        Ok(None)
    }));

    report.push(run_law("tensor-unit", || {
        let k = q.unit();
        for a in sample {
            if q.tensor(a, &k)? != *a {
                return Ok(Some(format!("a={a}")));
            }
        }
        Ok(None)
    }));

    report.push(run_law("order-reflexive-antisymmetric-transitive", || {
        for a in sample {
            if !q.leq(a, a)? {
                return Ok(Some(format!("a={a} (reflexivity)")));
            }
            for b in sample {
                if q.leq(a, b)? && q.leq(b, a)? && a != b {
                    return Ok(Some(format!("a={a}, b={b} (antisymmetry)")));
                }
                for c in sample {
                    if q.leq(a, b)? && q.leq(b, c)? && !q.leq(a, c)? {
                        return Ok(Some(format!("a={a}, b={b}, c={c} (transitivity)")));
                    }
                }
            }
        }
        Ok(None)
    }));

    report.push(run_law("join-meet-are-bounds", || {
        for a in sample {
            for b in sample {
                let j = q.join(&[a.clone(), b.clone()])?;
                let m = q.meet(&[a.clone(), b.clone()])?;
                if !q.leq(a, &j)? || !q.leq(b, &j)? || !q.leq(&m, a)? || !q.leq(&m, b)? {
                    return Ok(Some(format!("a={a}, b={b}")));
                }
                // least upper bound / greatest lower bound against the sample
                for c in sample {
                    if q.leq(a, c)? && q.leq(b, c)? && !q.leq(&j, c)? {
                        return Ok(Some(format!("a={a}, b={b}, c={c} (join not least)")));
                    }
                    if q.leq(c, a)? && q.leq(c, b)? && !q.leq(c, &m)? {
                        return Ok(Some(format!("a={a}, b={b}, c={c} (meet not greatest)")));
                    }
                }
            }
        }
        Ok(None)
    }));

    report.push(run_law("empty-join-bottom-empty-meet-top", || {
        if q.join(&[])? != q.bottom() {
            return Ok(Some("empty join is not bottom".into()));
        }
        if q.meet(&[])? != q.top() {
            return Ok(Some("empty meet is not top".into()));
        }
        for a in sample {
            if !q.leq(&q.bottom(), a)? || !q.leq(a, &q.top())? {
                return Ok(Some(format!("a={a} not between bottom and top")));
            }
        }
        Ok(None)
    }));

    report.push(run_law("tensor-join-continuity", || {
        // (\/_i u_i) (x) v = \/_i (u_i (x) v) over all families of size <= 2
        // drawn from the sample, plus the empty family.
        let mut families: Vec<Vec<Value>> = vec![vec![]];
        for a in sample {
            families.push(vec![a.clone()]);
            for b in sample {
                families.push(vec![a.clone(), b.clone()]);
            }
        }
        for us in &families {
            for v in sample {
                let lhs = q.tensor(&q.join(us)?, v)?;
                let mut parts = Vec::with_capacity(us.len());
                for u in us {
                    parts.push(q.tensor(u, v)?);
                }
                let rhs = q.join(&parts)?;
                if lhs != rhs {
                    return Ok(Some(format!("family={us:?}, v={v}")));
                }
            }
        }
        Ok(None)
    }));

    report.push(run_law("hom-adjunction", || {
        for a in sample {
            for b in sample {
                for c in sample {
                    let tensor_leq = q.leq(&q.tensor(a, b)?, c)?;
                    let hom_leq = q.leq(a, &q.hom(b, c)?)?;
                    if tensor_leq != hom_leq {
                        return Ok(Some(format!("a={a}, b={b}, c={c}")));
                    }
                }
            }
        }
        Ok(None)
    }));

    report
}

fn run_law(
    name: &str,
    body: impl FnOnce() -> Result<Option<String>>,
) -> LawResult {
    match body() {
        Ok(None) => LawResult::pass(name),
        Ok(Some(witness)) => LawResult::fail(name, witness),
        Err(e) => LawResult::fail(name, format!("error while checking: {e}")),
    }
}

/// The canonical 5-point sample `{0, 1/4, 1/2, 3/4, 1}` used by the shipped
/// law suite for the unit interval quantale.
pub fn unit_interval_sample() -> Vec<Value> {
    [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)]
        .iter()
        .map(|&(n, d)| Value::rat(n, d))
        .collect()
}

/// The full two-element carrier of the Boolean quantale.
pub fn bool2_sample() -> Vec<Value> {
    vec![Value::bot(), Value::top()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing_is_exact() {
        let r: Rat = "3/4".parse().unwrap();
        assert_eq!(r, Rat::new(3, 4));
        assert_eq!(r.to_string(), "3/4");
        let n: Rat = "2".parse().unwrap();
        assert_eq!(n.to_string(), "2");
        assert_eq!("6/8".parse::<Rat>().unwrap().to_string(), "3/4");
        assert!("0.5".parse::<Rat>().is_err());
        assert!("1/0".parse::<Rat>().is_err());
    }

    #[test]
    fn bool2_tensor_and_hom() {
        let q = Quantale::Bool2;
        assert_eq!(
            q.tensor(&Value::top(), &Value::bot()).unwrap(),
            Value::bot()
        );
        assert_eq!(q.hom(&Value::top(), &Value::bot()).unwrap(), Value::bot());
        assert_eq!(q.hom(&Value::bot(), &Value::bot()).unwrap(), Value::top());
    }

    #[test]
    fn unit_interval_tensor_truncates() {
        let q = Quantale::UnitIntervalOplus;
        assert_eq!(
            q.tensor(&Value::rat(7, 10), &Value::rat(3, 5)).unwrap(),
            Value::rat(1, 1)
        );
        assert_eq!(
            q.tensor(&Value::rat(1, 4), &Value::rat(1, 4)).unwrap(),
            Value::rat(1, 2)
        );
    }

    #[test]
    fn unit_interval_hom_is_truncated_subtraction() {
        let q = Quantale::UnitIntervalOplus;
        assert_eq!(
            q.hom(&Value::rat(3, 10), &Value::rat(4, 5)).unwrap(),
            Value::rat(1, 2)
        );
        assert_eq!(
            q.hom(&Value::rat(4, 5), &Value::rat(3, 10)).unwrap(),
            Value::rat(0, 1)
        );
    }

    #[test]
    fn unit_law_of_adjunction() {
        for q in [Quantale::Bool2, Quantale::UnitIntervalOplus] {
            let sample = match q {
                Quantale::Bool2 => bool2_sample(),
                Quantale::UnitIntervalOplus => unit_interval_sample(),
            };
            for c in &sample {
                assert_eq!(&q.hom(&q.unit(), c).unwrap(), c);
                assert_eq!(&q.tensor(c, &q.unit()).unwrap(), c);
            }
        }
    }

    #[test]
    fn sym_dist_examples() {
        let q = Quantale::UnitIntervalOplus;
        // hom(1/5, 9/10) = 7/10, hom(9/10, 1/5) = 0, V-meet = numeric max
        assert_eq!(
            q.sym_dist(&Value::rat(1, 5), &Value::rat(9, 10)).unwrap(),
            Value::rat(7, 10)
        );
        let b = Quantale::Bool2;
        assert_eq!(b.sym_dist(&Value::top(), &Value::top()).unwrap(), Value::top());
        // symmetry
        for x in unit_interval_sample() {
            for y in unit_interval_sample() {
                assert_eq!(q.sym_dist(&x, &y).unwrap(), q.sym_dist(&y, &x).unwrap());
            }
        }
    }

    #[test]
    fn reversed_order_edges() {
        let q = Quantale::UnitIntervalOplus;
        assert_eq!(q.join(&[]).unwrap(), Value::rat(1, 1));
        assert_eq!(q.meet(&[]).unwrap(), Value::rat(0, 1));
        assert!(q.leq(&Value::rat(1, 2), &Value::rat(1, 4)).unwrap());
        assert!(!q.leq(&Value::rat(1, 4), &Value::rat(1, 2)).unwrap());
    }

    #[test]
    fn law_suite_passes_on_shipped_quantales() {
        let rb = check_quantale_laws(&Quantale::Bool2, &bool2_sample());
        assert!(rb.all_passed(), "{rb}");
        let ru = check_quantale_laws(&Quantale::UnitIntervalOplus, &unit_interval_sample());
        assert!(ru.all_passed(), "{ru}");
    }

    /// Wrapper with `a (x) b := a`; used to confirm the checker catches a
    /// broken tensor with a commutativity witness.
    struct BrokenTensor;

    impl QuantaleOps for BrokenTensor {
        fn name(&self) -> &str {
            "broken-tensor"
        }
        fn contains(&self, v: &Value) -> bool {
            Quantale::Bool2.contains(v)
        }
        fn unit(&self) -> Value {
            Quantale::Bool2.unit()
        }
        fn bottom(&self) -> Value {
            Quantale::Bool2.bottom()
        }
        fn top(&self) -> Value {
            Quantale::Bool2.top()
        }
        fn tensor(&self, a: &Value, _b: &Value) -> Result<Value> {
            Ok(a.clone())
        }
        fn leq(&self, a: &Value, b: &Value) -> Result<bool> {
            Quantale::Bool2.leq(a, b)
        }
        fn join(&self, items: &[Value]) -> Result<Value> {
            Quantale::Bool2.join(items)
        }
        fn meet(&self, items: &[Value]) -> Result<Value> {
            Quantale::Bool2.meet(items)
        }
        fn hom(&self, b: &Value, c: &Value) -> Result<Value> {
            Quantale::Bool2.hom(b, c)
        }
    }

    #[test]
    fn broken_tensor_is_reported_with_witness() {
        let report = check_quantale_laws(&BrokenTensor, &bool2_sample());
        assert!(!report.all_passed());
        let failed = report.first_failure().unwrap();
        assert_eq!(failed.law, "tensor-commutative");
        assert!(failed.witness.is_some());
    }
}
