//! Finite machines of Moore shape over a branching monad: every state has
//! an output and, per letter, a monad-valued successor. The module builds
//! the distributive law canonically from the output algebra, determinizes
//! machines by the generalized powerset construction, and machine-checks
//! the distributive-law diagrams.
//!
//! For the failure-aware kind the absorbing outcome lives in the step
//! type: a transition is either a (star-free) distribution or the definite
//! failure, and a mixture that touches failure collapses. Determinized
//! state spaces reify the collapsed successor as an absorbing sink node.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::monad::{mult, MonadKind, MonadValue, OutputAlgebra, StarOr};
use crate::quantale::{Quantale, QuantaleOps, Value};
use crate::report::{LawReport, LawResult};

/// Letters are indices into the signature's alphabet.
pub type LetterId = usize;
/// States are indices into the machine's state table.
pub type StateId = usize;

/// The static type of a machine: alphabet, branching monad, quantale of
/// distances, and the induced output space and algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub quantale: Quantale,
    pub monad: MonadKind,
    pub alphabet: Vec<String>,
}

impl Signature {
    /// Builds a signature, enforcing the four shipped presets:
    /// `pow`/`nepow` over the Boolean quantale with Boolean outputs,
    /// `dist` over the unit interval with rational outputs, and `dist-bh`
    /// over the Boolean quantale (two-valued distances) with rational
    /// outputs.
    pub fn new(quantale: Quantale, monad: MonadKind, alphabet: Vec<String>) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::signature("alphabet must be nonempty"));
        }
        let mut seen = alphabet.to_vec();
        seen.sort();
        seen.dedup();
        if seen.len() != alphabet.len() {
            return Err(Error::signature("alphabet letters must be distinct"));
        }
        let ok = matches!(
            (monad, quantale),
            (MonadKind::Pow | MonadKind::NePow, Quantale::Bool2)
                | (MonadKind::Dist, Quantale::UnitIntervalOplus)
                | (MonadKind::DistBh, Quantale::Bool2)
        );
        if !ok {
            return Err(Error::signature(format!(
                "unsupported preset: monad {monad} over quantale {}",
                quantale.name()
            )));
        }
        Ok(Signature {
            quantale,
            monad,
            alphabet,
        })
    }

    pub fn algebra(&self) -> OutputAlgebra {
        OutputAlgebra::for_kind(self.monad)
    }

    pub fn letter_count(&self) -> usize {
        self.alphabet.len()
    }

    pub fn letter_id(&self, name: &str) -> Result<LetterId> {
        self.alphabet
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::signature(format!("unknown letter '{name}'")))
    }

    /// Whether `v` is a valid output value for this signature.
    pub fn output_in_carrier(&self, v: &Value) -> bool {
        match self.monad {
            MonadKind::Pow | MonadKind::NePow => matches!(v, Value::Bool(_)),
            MonadKind::Dist | MonadKind::DistBh => match v {
                Value::Rat(r) => r.in_unit_interval(),
                _ => false,
            },
        }
    }

    /// Distance between two output values. Rational outputs over the unit
    /// interval quantale use the symmetrized quantale distance; everything
    /// over the Boolean quantale (including the rational outputs of the
    /// failure-aware preset) is compared discretely.
    pub fn output_distance(&self, a: &Value, b: &Value) -> Result<Value> {
        match self.quantale {
            Quantale::UnitIntervalOplus => self.quantale.sym_dist(a, b),
            Quantale::Bool2 => Ok(Value::Bool(a == b)),
        }
    }

    /// A small deterministic grid of output values, for law checking.
    pub fn output_grid(&self) -> Vec<Value> {
        match self.monad {
            MonadKind::Pow | MonadKind::NePow => vec![Value::bot(), Value::top()],
            MonadKind::Dist | MonadKind::DistBh => {
                vec![Value::rat(0, 1), Value::rat(1, 2), Value::rat(1, 1)]
            }
        }
    }
}

/// An element of the step functor over carrier `C`: an output value plus
/// one successor slot per letter. A `Star` slot is the definite failure
/// and is only admissible for the failure-aware monad kind.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FElem<C: Ord> {
    pub out: Value,
    pub next: Vec<StarOr<C>>,
}

impl<C: Ord + Clone> FElem<C> {
    pub fn new(out: Value, next: Vec<StarOr<C>>) -> Self {
        FElem { out, next }
    }

    pub fn map_slots<D: Ord + Clone>(&self, mut f: impl FnMut(&C) -> D) -> FElem<D> {
        FElem {
            out: self.out.clone(),
            next: self
                .next
                .iter()
                .map(|s| match s {
                    StarOr::Elem(c) => StarOr::Elem(f(c)),
                    StarOr::Star => StarOr::Star,
                })
                .collect(),
        }
    }
}

/// Encodes a per-letter monad value as a successor slot: the absorbed
/// value is the failure slot, everything else is an ordinary element.
pub fn to_slot<C: Ord + Clone>(v: MonadValue<C>) -> StarOr<MonadValue<C>> {
    match v {
        MonadValue::BhStar => StarOr::Star,
        other => StarOr::Elem(other),
    }
}

/// Inverse of [`to_slot`].
pub fn from_slot<C: Ord + Clone>(
    kind: MonadKind,
    s: &StarOr<MonadValue<C>>,
) -> Result<MonadValue<C>> {
    match s {
        StarOr::Elem(v) => Ok(v.clone()),
        StarOr::Star => {
            if kind == MonadKind::DistBh {
                Ok(MonadValue::BhStar)
            } else {
                Err(Error::signature(format!(
                    "failure slot is not admissible for monad kind {kind}"
                )))
            }
        }
    }
}

/// Applies the distributive law to a monad value over step elements:
/// the output component evaluates the output algebra on the pushed-out
/// outputs, and each letter component is the pushed-out successor slot
/// (normalized, so for the failure kind any positive failure mass
/// collapses that letter's slot).
pub fn zeta_apply<C: Ord + Clone>(
    sig: &Signature,
    t: &MonadValue<FElem<C>>,
) -> Result<(Value, Vec<MonadValue<C>>)> {
    zeta_apply_perm(sig, t, None)
}

/// Like [`zeta_apply`] but reading letter `i` from slot `perm[i]`; used by
/// the law suites to demonstrate that a miswired law breaks the diagrams.
/// `None` is the identity wiring.
pub fn zeta_apply_perm<C: Ord + Clone>(
    sig: &Signature,
    t: &MonadValue<FElem<C>>,
    perm: Option<&[usize]>,
) -> Result<(Value, Vec<MonadValue<C>>)> {
    if t.kind() != sig.monad {
        return Err(Error::signature(format!(
            "monad value of kind {} under signature of kind {}",
            t.kind(),
            sig.monad
        )));
    }
    let letters = sig.letter_count();
    let slot = |i: usize| -> usize {
        match perm {
            Some(p) => p[i],
            None => i,
        }
    };
    // validate slot arity and star admissibility
    for fe in t.support() {
        if fe.next.len() != letters {
            return Err(Error::signature(format!(
                "step element has {} slots, alphabet has {letters}",
                fe.next.len()
            )));
        }
        if !sig.output_in_carrier(&fe.out) {
            return Err(Error::domain(format!(
                "output value {} outside the signature's output space",
                fe.out
            )));
        }
        if sig.monad != MonadKind::DistBh && fe.next.iter().any(|s| matches!(s, StarOr::Star)) {
            return Err(Error::signature(format!(
                "failure slot is not admissible for monad kind {}",
                sig.monad
            )));
        }
    }

    let out = sig.algebra().apply(&t.fmap(|fe| fe.out.clone()))?;

    let mut per_letter = Vec::with_capacity(letters);
    for i in 0..letters {
        let j = slot(i);
        let component = match t {
            MonadValue::Set(s) => {
                let mut elems = std::collections::BTreeSet::new();
                for fe in s {
                    match &fe.next[j] {
                        StarOr::Elem(c) => {
                            elems.insert(c.clone());
                        }
                        StarOr::Star => unreachable!("validated above"),
                    }
                }
                MonadValue::Set(elems)
            }
            MonadValue::NeSet(s) => {
                let mut elems = std::collections::BTreeSet::new();
                for fe in s {
                    match &fe.next[j] {
                        StarOr::Elem(c) => {
                            elems.insert(c.clone());
                        }
                        StarOr::Star => unreachable!("validated above"),
                    }
                }
                MonadValue::NeSet(elems)
            }
            MonadValue::Dist(m) => {
                let mut pushed: BTreeMap<C, crate::quantale::Rat> = BTreeMap::new();
                for (fe, w) in m {
                    match &fe.next[j] {
                        StarOr::Elem(c) => match pushed.get_mut(c) {
                            Some(acc) => *acc = acc.add(w),
                            None => {
                                pushed.insert(c.clone(), w.clone());
                            }
                        },
                        StarOr::Star => unreachable!("validated above"),
                    }
                }
                MonadValue::Dist(pushed)
            }
            // the absorbed value unfolds to the absorbing step: output was
            // already evaluated, every successor slot stays absorbed
            MonadValue::BhStar => MonadValue::BhStar,
            MonadValue::BhDist(m) => {
                // pushforward onto carrier + star, then collapse
                let mut pushed: BTreeMap<StarOr<C>, crate::quantale::Rat> = BTreeMap::new();
                for (fe, w) in m {
                    let key = fe.next[j].clone();
                    match pushed.get_mut(&key) {
                        Some(acc) => *acc = acc.add(w),
                        None => {
                            pushed.insert(key, w.clone());
                        }
                    }
                }
                crate::monad::bh_flatten(&pushed)?
            }
        };
        per_letter.push(component);
    }
    Ok((out, per_letter))
}

/// A finite machine: outputs and per-letter monad-valued transitions over
/// an indexed state set. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Machine {
    pub sig: Signature,
    pub state_names: Vec<String>,
    pub out: Vec<Value>,
    /// `trans[state][letter]`
    pub trans: Vec<Vec<MonadValue<StateId>>>,
}

impl Machine {
    pub fn new(
        sig: Signature,
        state_names: Vec<String>,
        out: Vec<Value>,
        trans: Vec<Vec<MonadValue<StateId>>>,
    ) -> Result<Self> {
        let n = state_names.len();
        if n == 0 {
            return Err(Error::validation(
                "states",
                "machine must have at least one state",
            ));
        }
        {
            let mut sorted = state_names.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return Err(Error::validation("states", "state names must be distinct"));
            }
        }
        if out.len() != n || trans.len() != n {
            return Err(Error::validation(
                "out/trans",
                "output and transition tables must cover every state",
            ));
        }
        for (x, v) in out.iter().enumerate() {
            if !sig.output_in_carrier(v) {
                return Err(Error::validation(
                    format!("out.{}", state_names[x]),
                    format!("output {v} outside the signature's output space"),
                ));
            }
        }
        for (x, row) in trans.iter().enumerate() {
            if row.len() != sig.letter_count() {
                return Err(Error::validation(
                    format!("trans.{}", state_names[x]),
                    "transition row must cover every letter",
                ));
            }
            for (l, v) in row.iter().enumerate() {
                let path = format!("trans.{}.{}", state_names[x], sig.alphabet[l]);
                if v.kind() != sig.monad {
                    return Err(Error::validation(
                        path,
                        format!("value of kind {} under monad {}", v.kind(), sig.monad),
                    ));
                }
                validate_monad_value(v, n, &path)?;
            }
        }
        Ok(Machine {
            sig,
            state_names,
            out,
            trans,
        })
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_id(&self, name: &str) -> Result<StateId> {
        self.state_names
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::signature(format!("unknown state '{name}'")))
    }
}

fn validate_monad_value(v: &MonadValue<StateId>, n_states: usize, path: &str) -> Result<()> {
    let check_bounds = |xs: Vec<&StateId>| -> Result<()> {
        for &x in xs {
            if x >= n_states {
                return Err(Error::validation(
                    path,
                    format!("state index {x} out of range"),
                ));
            }
        }
        Ok(())
    };
    match v {
        MonadValue::Set(_) => check_bounds(v.support()),
        MonadValue::NeSet(s) => {
            if s.is_empty() {
                return Err(Error::validation(path, "nonempty powerset value is empty"));
            }
            check_bounds(v.support())
        }
        MonadValue::Dist(m) | MonadValue::BhDist(m) => {
            let mut total = crate::quantale::Rat::zero();
            for (x, w) in m {
                if *x >= n_states {
                    return Err(Error::validation(
                        path,
                        format!("state index {x} out of range"),
                    ));
                }
                if w.is_zero() || !w.in_unit_interval() {
                    return Err(Error::validation(path, format!("weight {w} not in (0,1]")));
                }
                total = total.add(w);
            }
            if !total.is_one() {
                return Err(Error::validation(
                    path,
                    format!("weights sum to {total}, expected 1"),
                ));
            }
            Ok(())
        }
        MonadValue::BhStar => Ok(()),
    }
}

/// One state of the determinized machine.
pub type DetState = MonadValue<StateId>;

/// Evaluates the determinized transition structure at one state: output
/// through the algebra, successor per letter by pushing the transition map
/// through the state and flattening. The collapsed state is absorbing.
pub fn det_step(m: &Machine, s: &DetState) -> Result<(Value, Vec<DetState>)> {
    if s.kind() != m.sig.monad {
        return Err(Error::signature(format!(
            "determinized state of kind {} under monad {}",
            s.kind(),
            m.sig.monad
        )));
    }
    for &x in &s.support() {
        if *x >= m.state_count() {
            return Err(Error::domain(format!("state index {x} out of range")));
        }
    }
    let out = m.sig.algebra().apply(&s.fmap(|&x| m.out[x].clone()))?;
    let mut succs = Vec::with_capacity(m.sig.letter_count());
    for l in 0..m.sig.letter_count() {
        let pushed = s.fmap(|&x| m.trans[x][l].clone());
        succs.push(mult(&pushed)?);
    }
    Ok((out, succs))
}

/// The reachable part of the determinization, explored breadth-first from
/// the given roots up to `depth` steps. Nodes are deduplicated by
/// structural equality of normalized monad values; `node_depth` records
/// the BFS level and transitions are expanded for nodes strictly below
/// the depth bound.
#[derive(Clone, Debug)]
pub struct DetGraph {
    pub nodes: Vec<DetState>,
    pub outputs: Vec<Value>,
    /// `succs[node][letter]`; `None` on unexpanded frontier nodes.
    pub succs: Vec<Option<Vec<usize>>>,
    pub node_depth: Vec<usize>,
    pub roots: Vec<usize>,
    index: BTreeMap<DetState, usize>,
}

impl DetGraph {
    pub fn node_index(&self, s: &DetState) -> Option<usize> {
        self.index.get(s).copied()
    }
}

pub const DEFAULT_STATE_CAP: usize = 10_000;

pub fn reachable_determinization(
    m: &Machine,
    roots: &[DetState],
    depth: usize,
    cap: usize,
) -> Result<DetGraph> {
    let mut graph = DetGraph {
        nodes: Vec::new(),
        outputs: Vec::new(),
        succs: Vec::new(),
        node_depth: Vec::new(),
        roots: Vec::new(),
        index: BTreeMap::new(),
    };
    fn intern(
        m: &Machine,
        g: &mut DetGraph,
        s: &DetState,
        level: usize,
        cap: usize,
    ) -> Result<usize> {
        if let Some(&i) = g.index.get(s) {
            return Ok(i);
        }
        if g.nodes.len() >= cap {
            return Err(Error::ResourceCap(format!(
                "determinization exceeded the cap of {cap} explored states"
            )));
        }
        let (out, _) = det_step(m, s)?;
        let i = g.nodes.len();
        g.nodes.push(s.clone());
        g.outputs.push(out);
        g.succs.push(None);
        g.node_depth.push(level);
        g.index.insert(s.clone(), i);
        Ok(i)
    }

    let mut frontier: Vec<usize> = Vec::new();
    for r in roots {
        let fresh = graph.index.get(r).is_none();
        let i = intern(m, &mut graph, r, 0, cap)?;
        if fresh {
            frontier.push(i);
        }
        if !graph.roots.contains(&i) {
            graph.roots.push(i);
        }
    }
    for level in 0..depth {
        let mut next = Vec::new();
        for &i in &frontier {
            if graph.succs[i].is_some() {
                continue;
            }
            let (_, succs) = det_step(m, &graph.nodes[i])?;
            let mut ids = Vec::with_capacity(succs.len());
            for s in &succs {
                let fresh = graph.index.get(s).is_none();
                let j = intern(m, &mut graph, s, level + 1, cap)?;
                if fresh {
                    next.push(j);
                }
                ids.push(j);
            }
            graph.succs[i] = Some(ids);
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(graph)
}

/// Verifies the distributive-law diagrams (unit square and multiplication
/// pentagon) for the signature's canonical law on small carriers, using
/// the signature's own alphabet. Set-like kinds enumerate exhaustively
/// over bounded universes, distribution kinds over deterministic dyadic
/// grids. Identity wiring must pass; a miswired variant (see
/// [`zeta_apply_perm`]) must fail with a witness.
pub fn check_em_law(sig: &Signature) -> LawReport {
    check_em_law_perm(sig, None)
}

pub fn check_em_law_perm(sig: &Signature, perm: Option<&[usize]>) -> LawReport {
    let mut report = LawReport::new(format!(
        "distributive law ({} over {})",
        sig.monad,
        sig.quantale.name()
    ));
    let carrier: Vec<u8> = vec![0, 1, 2];
    let fx = step_universe(sig, &carrier);

    report.push(law(
        "unit square (zeta . unit = F unit)",
        (|| {
            for fe in &fx {
                let t = MonadValue::unit(sig.monad, fe.clone());
                let (out, slots) = zeta_apply_perm(sig, &t, perm)?;
                if out != fe.out {
                    return Ok(Some(format!("fe={fe:?}: output {out} != {}", fe.out)));
                }
                for (l, got) in slots.iter().enumerate() {
                    let expected = match &fe.next[l] {
                        StarOr::Elem(x) => MonadValue::unit(sig.monad, *x),
                        StarOr::Star => MonadValue::BhStar,
                    };
                    if got != &expected {
                        return Ok(Some(format!(
                            "fe={fe:?}, letter {l}: {got:?} != {expected:?}"
                        )));
                    }
                }
            }
            Ok(None)
        })(),
    ));

    report.push(law(
        "multiplication pentagon (F mult . zeta T . T zeta = zeta . mult)",
        (|| {
            use crate::monad::enumerate;
            let inner_universe = enumerate::bounded(&fx, 5);
            let t_layer = enumerate::monad_values(sig.monad, &inner_universe);
            let tt_universe = enumerate::bounded(&t_layer, 5);
            let tts = enumerate::monad_values(sig.monad, &tt_universe);
            for tt in &tts {
                // right leg: flatten first, then the law
                let rhs = zeta_apply_perm(sig, &mult(tt)?, perm)?;
                // left leg: law inside, law at the T-carrier, flatten slots
                let inner_applied: MonadValue<FElem<MonadValue<u8>>> =
                    map_monad(tt, |t| -> Result<FElem<MonadValue<u8>>> {
                        let (out, slots) = zeta_apply_perm(sig, t, perm)?;
                        Ok(FElem::new(out, slots.into_iter().map(to_slot).collect()))
                    })?;
                let (out, slots) = zeta_apply_perm(sig, &inner_applied, perm)?;
                let mut lhs_slots = Vec::with_capacity(slots.len());
                for s in slots {
                    lhs_slots.push(mult(&s)?);
                }
                if (out.clone(), lhs_slots.clone()) != rhs {
                    return Ok(Some(format!(
                        "tt={tt:?}: left=({out}, {lhs_slots:?}) right=({}, {:?})",
                        rhs.0, rhs.1
                    )));
                }
            }
            Ok(None)
        })(),
    ));

    report
}

/// Maps a fallible function over the elements of a monad value.
pub fn map_monad<T: Ord + Clone, U: Ord + Clone>(
    v: &MonadValue<T>,
    mut f: impl FnMut(&T) -> Result<U>,
) -> Result<MonadValue<U>> {
    // collect images first so errors propagate before reassembly
    let mut images: BTreeMap<&T, U> = BTreeMap::new();
    for x in v.support() {
        images.insert(x, f(x)?);
    }
    Ok(v.fmap(|x| images[x].clone()))
}

/// A deterministic universe of step elements over a carrier: output grid
/// times all slot assignments; for the failure-aware kind the slots
/// include the failure.
pub fn step_universe(sig: &Signature, carrier: &[u8]) -> Vec<FElem<u8>> {
    let outs = sig.output_grid();
    let mut slot_values: Vec<StarOr<u8>> = carrier.iter().map(|&x| StarOr::Elem(x)).collect();
    if sig.monad == MonadKind::DistBh {
        slot_values.push(StarOr::Star);
    }
    let letters = sig.letter_count();
    let mut assignments: Vec<Vec<StarOr<u8>>> = vec![vec![]];
    for _ in 0..letters {
        let mut next = Vec::new();
        for a in &assignments {
            for sv in &slot_values {
                let mut a2 = a.clone();
                a2.push(sv.clone());
                next.push(a2);
            }
        }
        assignments = next;
    }
    let mut out = Vec::new();
    for o in &outs {
        for a in &assignments {
            out.push(FElem::new(o.clone(), a.clone()));
        }
    }
    out
}

fn law(name: &str, out: Result<Option<String>>) -> LawResult {
    match out {
        Ok(None) => LawResult::pass(name),
        Ok(Some(w)) => LawResult::fail(name, w),
        Err(e) => LawResult::fail(name, format!("error while checking: {e}")),
    }
}
