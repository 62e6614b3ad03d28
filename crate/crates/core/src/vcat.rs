//! Finite quantale-enriched categories: sets with a quantale-valued
//! distance table satisfying `k <= d(x,x)` and the tensor-triangle law.
//! These generalize setoids (Boolean quantale) and 1-bounded pseudometric
//! spaces (unit interval quantale).

use crate::error::{Error, Result};
use crate::quantale::{Quantale, QuantaleOps, Value};
use crate::report::{LawReport, LawResult};

/// A finite V-category given by a dense distance table over an indexed
/// carrier. Immutable after construction.
#[derive(Clone, Debug)]
pub struct FinVCat {
    pub quantale: Quantale,
    /// Element labels; indices into this vector are the carrier.
    pub labels: Vec<String>,
    /// Row-major distance table, `len = labels.len()^2`.
    table: Vec<Value>,
    pub symmetric: bool,
    pub separated: bool,
}

impl FinVCat {
    /// Builds a V-category from an explicit table, checking carrier
    /// membership of every entry (the V-category laws themselves are
    /// verified by [`check_vcat`]).
    pub fn from_table(
        quantale: Quantale,
        labels: Vec<String>,
        table: Vec<Value>,
        symmetric: bool,
        separated: bool,
    ) -> Result<Self> {
        let n = labels.len();
        if table.len() != n * n {
            return Err(Error::domain(format!(
                "distance table has {} entries, expected {}",
                table.len(),
                n * n
            )));
        }
        for v in &table {
            if !quantale.contains(v) {
                return Err(Error::domain(format!(
                    "distance value {v} outside quantale carrier"
                )));
            }
        }
        Ok(FinVCat {
            quantale,
            labels,
            table,
            symmetric,
            separated,
        })
    }

    /// The discrete V-category: `d(x,x) = k`, distinct points at bottom.
    pub fn discrete(quantale: Quantale, labels: Vec<String>) -> Self {
        let n = labels.len();
        let mut table = vec![quantale.bottom(); n * n];
        for i in 0..n {
            table[i * n + i] = quantale.unit();
        }
        FinVCat {
            quantale,
            labels,
            table,
            symmetric: true,
            separated: true,
        }
    }

    /// The quantale itself as a symmetric V-category on a finite carrier:
    /// `d(x,y) = [x,y] /\ [y,x]`. Duplicate points are collapsed.
    pub fn symmetrized_quantale(quantale: Quantale, points: &[Value]) -> Result<Self> {
        let mut uniq: Vec<Value> = Vec::new();
        for p in points {
            if !uniq.contains(p) {
                uniq.push(p.clone());
            }
        }
        let n = uniq.len();
        let mut table = Vec::with_capacity(n * n);
        for x in &uniq {
            for y in &uniq {
                table.push(quantale.sym_dist(x, y)?);
            }
        }
        Ok(FinVCat {
            quantale,
            labels: uniq.iter().map(|v| v.to_string()).collect(),
            table,
            symmetric: true,
            separated: true,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dist(&self, x: usize, y: usize) -> &Value {
        &self.table[x * self.len() + y]
    }

    /// The categorical power `base^index`: carrier are all functions from a
    /// finite index set into the base carrier, distance is the meet of the
    /// componentwise distances (the numeric sup-distance over the unit
    /// interval quantale). An empty index yields the singleton at top.
    pub fn product_power(base: &FinVCat, index_size: usize) -> Result<FinVCat> {
        let n = base.len();
        if n == 0 && index_size > 0 {
            return Err(Error::domain("power of an empty carrier"));
        }
        let mut elements: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..index_size {
            let mut next = Vec::new();
            for e in &elements {
                for b in 0..n {
                    let mut e2 = e.clone();
                    e2.push(b);
                    next.push(e2);
                }
            }
            elements = next;
        }
        let q = base.quantale;
        let mut table = Vec::with_capacity(elements.len() * elements.len());
        for f in &elements {
            for g in &elements {
                let parts: Vec<Value> = (0..index_size)
                    .map(|i| base.dist(f[i], g[i]).clone())
                    .collect();
                table.push(q.meet(&parts)?);
            }
        }
        let labels = elements
            .iter()
            .map(|f| {
                let parts: Vec<&str> = f.iter().map(|&i| base.labels[i].as_str()).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        FinVCat::from_table(q, labels, table, base.symmetric, base.separated)
    }
}

/// A map between V-categories, by carrier index.
#[derive(Clone, Debug)]
pub struct VMap {
    /// `image[x]` is the index of the image of `x` in the codomain.
    pub image: Vec<usize>,
}

impl VMap {
    pub fn new(image: Vec<usize>) -> Self {
        VMap { image }
    }
}

/// Checks that `f` is a V-functor: `d(x,y) <= d(fx,fy)` everywhere.
/// Performed eagerly by [`is_initial_source`]; downstream results assume
/// nonexpansiveness.
pub fn check_vfunctor(dom: &FinVCat, cod: &FinVCat, f: &VMap) -> Result<()> {
    if f.image.len() != dom.len() {
        return Err(Error::domain("map image length does not match domain"));
    }
    for &i in &f.image {
        if i >= cod.len() {
            return Err(Error::domain("map image index outside codomain"));
        }
    }
    let q = dom.quantale;
    for x in 0..dom.len() {
        for y in 0..dom.len() {
            let dxy = dom.dist(x, y);
            let dfxy = cod.dist(f.image[x], f.image[y]);
            if !q.leq(dxy, dfxy)? {
                return Err(Error::domain(format!(
                    "not a V-functor: d({},{}) = {} but d(f{},f{}) = {}",
                    dom.labels[x], dom.labels[y], dxy, dom.labels[x], dom.labels[y], dfxy
                )));
            }
        }
    }
    Ok(())
}

/// Outcome of an initial-source test; on failure carries the witness pair
/// with both sides of the defining equation.
#[derive(Clone, Debug)]
pub struct InitialSourceOutcome {
    pub initial: bool,
    pub witness: Option<String>,
}

/// Tests whether a finite family of V-functors out of `dom` is initial:
/// `d(x, y) = /\_i d(f_i x, f_i y)` for all pairs. Every map is first
/// checked to be a V-functor.
pub fn is_initial_source(
    dom: &FinVCat,
    maps: &[(&FinVCat, VMap)],
) -> Result<InitialSourceOutcome> {
    for (cod, f) in maps {
        check_vfunctor(dom, cod, f)?;
    }
    let q = dom.quantale;
    for x in 0..dom.len() {
        for y in 0..dom.len() {
            let mut parts = Vec::with_capacity(maps.len());
            for (cod, f) in maps {
                parts.push(cod.dist(f.image[x], f.image[y]).clone());
            }
            let meet = q.meet(&parts)?;
            if meet != *dom.dist(x, y) {
                return Ok(InitialSourceOutcome {
                    initial: false,
                    witness: Some(format!(
                        "pair ({}, {}): d = {} but meet over images = {}",
                        dom.labels[x],
                        dom.labels[y],
                        dom.dist(x, y),
                        meet
                    )),
                });
            }
        }
    }
    Ok(InitialSourceOutcome {
        initial: true,
        witness: None,
    })
}

/// Exhaustively verifies the V-category laws of `v` (and its symmetry /
/// separation flags when set).
pub fn check_vcat(v: &FinVCat) -> LawReport {
    let mut report = LawReport::new("V-category laws");
    let q = v.quantale;

    let refl = (|| -> Result<Option<String>> {
        for x in 0..v.len() {
            if !q.leq(&q.unit(), v.dist(x, x))? {
                return Ok(Some(format!("x={}: k <= d(x,x) fails", v.labels[x])));
            }
        }
        Ok(None)
    })();
    report.push(law_result("reflexivity", refl));

    let tri = (|| -> Result<Option<String>> {
        for x in 0..v.len() {
            for y in 0..v.len() {
                for z in 0..v.len() {
                    let lhs = q.tensor(v.dist(x, y), v.dist(y, z))?;
                    if !q.leq(&lhs, v.dist(x, z))? {
                        return Ok(Some(format!(
                            "x={}, y={}, z={}: {} (x) {} </= {}",
                            v.labels[x],
                            v.labels[y],
                            v.labels[z],
                            v.dist(x, y),
                            v.dist(y, z),
                            v.dist(x, z)
                        )));
                    }
                }
            }
        }
        Ok(None)
    })();
    report.push(law_result("tensor-triangle", tri));

    if v.symmetric {
        let sym = (|| -> Result<Option<String>> {
            for x in 0..v.len() {
                for y in 0..v.len() {
                    if v.dist(x, y) != v.dist(y, x) {
                        return Ok(Some(format!("x={}, y={}", v.labels[x], v.labels[y])));
                    }
                }
            }
            Ok(None)
        })();
        report.push(law_result("symmetry", sym));
    }

    if v.separated {
        let sep = (|| -> Result<Option<String>> {
            for x in 0..v.len() {
                for y in 0..v.len() {
                    if x != y && q.leq(&q.unit(), v.dist(x, y))? {
                        return Ok(Some(format!(
                            "x={}, y={}: k <= d but x != y",
                            v.labels[x], v.labels[y]
                        )));
                    }
                }
            }
            Ok(None)
        })();
        report.push(law_result("separation", sep));
    }

    report
}

fn law_result(name: &str, out: Result<Option<String>>) -> LawResult {
    match out {
        Ok(None) => LawResult::pass(name),
        Ok(Some(w)) => LawResult::fail(name, w),
        Err(e) => LawResult::fail(name, format!("error while checking: {e}")),
    }
}

fn index_labels(n: usize, prefix: &str) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Convenience constructor used by tests and the law suites.
pub fn discrete(quantale: Quantale, n: usize) -> FinVCat {
    FinVCat::discrete(quantale, index_labels(n, "x"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::Rat;
    use proptest::prelude::*;

    #[test]
    fn discrete_spaces() {
        let d3 = discrete(Quantale::Bool2, 3);
        assert_eq!(d3.dist(0, 0), &Value::top());
        assert_eq!(d3.dist(0, 1), &Value::bot());
        assert!(check_vcat(&d3).all_passed());

        let d2 = discrete(Quantale::UnitIntervalOplus, 2);
        assert_eq!(d2.dist(0, 1), &Value::rat(1, 1));
        assert_eq!(d2.dist(1, 1), &Value::rat(0, 1));
        assert!(check_vcat(&d2).all_passed());

        let s = discrete(Quantale::UnitIntervalOplus, 1);
        assert_eq!(s.dist(0, 0), &Value::rat(0, 1));
    }

    #[test]
    fn product_power_distances() {
        // base = {0, 1/4, 1/2} with sym_dist; f=(0,1/2), g=(1/4,1/4)
        let pts = vec![Value::rat(0, 1), Value::rat(1, 4), Value::rat(1, 2)];
        let base = FinVCat::symmetrized_quantale(Quantale::UnitIntervalOplus, &pts).unwrap();
        let pow = FinVCat::product_power(&base, 2).unwrap();
        // elements are enumerated in base-index order; f = (0, 2), g = (1, 1)
        let f = 0 * 3 + 2;
        let g = 1 * 3 + 1;
        assert_eq!(pow.dist(f, g), &Value::rat(1, 4));
        assert!(check_vcat(&pow).all_passed());
    }

    #[test]
    fn product_power_empty_index_is_singleton_at_top() {
        let base = discrete(Quantale::UnitIntervalOplus, 2);
        let pow = FinVCat::product_power(&base, 0).unwrap();
        assert_eq!(pow.len(), 1);
        assert_eq!(pow.dist(0, 0), &Value::rat(0, 1));
    }

    #[test]
    fn pairwise_equality_as_bool_power() {
        let base = discrete(Quantale::Bool2, 2);
        let pow = FinVCat::product_power(&base, 2).unwrap();
        for f in 0..pow.len() {
            for g in 0..pow.len() {
                let expected = Value::Bool(f == g);
                assert_eq!(pow.dist(f, g), &expected);
            }
        }
    }

    #[test]
    fn identity_map_is_initial() {
        let d = discrete(Quantale::Bool2, 3);
        let id = VMap::new(vec![0, 1, 2]);
        let out = is_initial_source(&d, &[(&d, id)]).unwrap();
        assert!(out.initial);
    }

    #[test]
    fn empty_family_initial_iff_all_top() {
        let mut table = vec![Value::rat(0, 1); 4];
        table[1] = Value::rat(0, 1);
        let all_top = FinVCat::from_table(
            Quantale::UnitIntervalOplus,
            vec!["a".into(), "b".into()],
            table,
            true,
            false,
        )
        .unwrap();
        assert!(is_initial_source(&all_top, &[]).unwrap().initial);

        let disc = discrete(Quantale::UnitIntervalOplus, 2);
        let out = is_initial_source(&disc, &[]).unwrap();
        assert!(!out.initial);
        assert!(out.witness.is_some());
    }

    #[test]
    fn projections_out_of_power_are_initial() {
        let pts = vec![Value::rat(0, 1), Value::rat(1, 2), Value::rat(1, 1)];
        let base = FinVCat::symmetrized_quantale(Quantale::UnitIntervalOplus, &pts).unwrap();
        let pow = FinVCat::product_power(&base, 2).unwrap();
        // projection i maps function-element f to f(i); enumeration order is
        // lexicographic with the last index fastest.
        let proj0 = VMap::new((0..9).map(|e| e / 3).collect());
        let proj1 = VMap::new((0..9).map(|e| e % 3).collect());
        let out = is_initial_source(&pow, &[(&base, proj0), (&base, proj1)]).unwrap();
        assert!(out.initial, "{:?}", out.witness);
    }

    #[test]
    fn triangle_violation_detected() {
        // d(x,y)=0, d(y,z)=0, d(x,z)=1 over the unit interval
        let zero = Value::rat(0, 1);
        let one = Value::rat(1, 1);
        let table = vec![
            zero.clone(), zero.clone(), one.clone(),
            zero.clone(), zero.clone(), zero.clone(),
            one.clone(), zero.clone(), zero.clone(),
        ];
        let v = FinVCat::from_table(
            Quantale::UnitIntervalOplus,
            vec!["x".into(), "y".into(), "z".into()],
            table,
            true,
            false,
        )
        .unwrap();
        let report = check_vcat(&v);
        assert!(!report.all_passed());
        assert_eq!(report.first_failure().unwrap().law, "tensor-triangle");
    }

    #[test]
    fn symmetrized_self_distance_table_passes() {
        let pts = vec![Value::rat(0, 1), Value::rat(1, 2), Value::rat(1, 1)];
        let v = FinVCat::symmetrized_quantale(Quantale::UnitIntervalOplus, &pts).unwrap();
        assert!(check_vcat(&v).all_passed());
    }

    #[test]
    fn nonexpansive_check_rejects_expanding_map() {
        let pts = vec![Value::rat(0, 1), Value::rat(1, 1)];
        let base = FinVCat::symmetrized_quantale(Quantale::UnitIntervalOplus, &pts).unwrap();
        let disc = discrete(Quantale::UnitIntervalOplus, 2);
        // identity on indices maps distance-1 "metric" points onto
        // distance-1 discrete points: fine. Map from a 0-distance pair to
        // distinct discrete points: expanding.
        let mut table = vec![Value::rat(0, 1); 4];
        table[0] = Value::rat(0, 1);
        table[3] = Value::rat(0, 1);
        let indiscrete = FinVCat::from_table(
            Quantale::UnitIntervalOplus,
            vec!["p".into(), "q".into()],
            table,
            true,
            false,
        )
        .unwrap();
        assert!(check_vfunctor(&indiscrete, &disc, &VMap::new(vec![0, 1])).is_err());
        assert!(check_vfunctor(&base, &disc, &VMap::new(vec![0, 1])).is_ok());
    }

    fn rat_grid() -> Vec<Rat> {
        (0..=4).map(|i| Rat::new(i, 4)).collect()
    }

    proptest! {
        // Composition of initial sources is initial: projections out of a
        // power composed with (initial) identity-style maps stay initial.
        #[test]
        fn composed_initial_sources_are_initial(pair in (0usize..5, 0usize..5)) {
            let grid = rat_grid();
            let pts: Vec<Value> = vec![
                Value::Rat(grid[pair.0].clone()),
                Value::Rat(grid[pair.1].clone()),
                Value::rat(1, 1),
            ];
            let base = FinVCat::symmetrized_quantale(Quantale::UnitIntervalOplus, &pts).unwrap();
            let pow = FinVCat::product_power(&base, 2).unwrap();
            let n = base.len();
            let proj0 = VMap::new((0..n * n).map(|e| e / n).collect());
            let proj1 = VMap::new((0..n * n).map(|e| e % n).collect());
            // the identity on base is an initial singleton family
            let id = VMap::new((0..n).collect());
            let comp0 = VMap::new(proj0.image.iter().map(|&i| id.image[i]).collect());
            let comp1 = VMap::new(proj1.image.iter().map(|&i| id.image[i]).collect());
            let out = is_initial_source(&pow, &[(&base, comp0), (&base, comp1)]).unwrap();
            prop_assert!(out.initial);
        }

        // product_power preserves the V-category laws
        #[test]
        fn power_preserves_laws(a in 0usize..5, b in 0usize..5) {
            let grid = rat_grid();
            let pts = vec![
                Value::Rat(grid[a].clone()),
                Value::Rat(grid[b].clone()),
            ];
            let base = FinVCat::symmetrized_quantale(Quantale::UnitIntervalOplus, &pts).unwrap();
            let pow = FinVCat::product_power(&base, 2).unwrap();
            prop_assert!(check_vcat(&pow).all_passed());
        }
    }
}
