//! Exact solver for the balanced transportation problem at desk scale:
//! masses are scaled by their common denominator to big integers and the
//! optimum is found by successive shortest augmenting paths on the
//! bipartite flow network, with all arithmetic over exact rationals.
//! The optimum of a transportation LP is attained at a basic solution, so
//! the returned cost is the exact Kantorovich value.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quantale::Rat;

struct Edge {
    to: usize,
    cap: BigInt,
    flow: BigInt,
    cost: BigRational,
}

struct Network {
    edges: Vec<Edge>,
    /// adjacency: node -> edge indices (even = forward, odd = residual)
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: BigInt, cost: BigRational) {
        let id = self.edges.len();
        self.edges.push(Edge {
            to,
            cap,
            flow: BigInt::zero(),
            cost: cost.clone(),
        });
        self.edges.push(Edge {
            to: from,
            cap: BigInt::zero(),
            flow: BigInt::zero(),
            cost: -cost,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
    }

    fn residual(&self, e: usize) -> BigInt {
        if e % 2 == 0 {
            &self.edges[e].cap - &self.edges[e].flow
        } else {
            self.edges[e - 1].flow.clone()
        }
    }

    fn push(&mut self, e: usize, amount: &BigInt) {
        if e % 2 == 0 {
            self.edges[e].flow += amount;
        } else {
            self.edges[e - 1].flow -= amount;
        }
    }
}

/// Minimal total cost of transporting `supplies` onto `demands` with the
/// given per-cell cost. Both sides must carry equal total mass.
pub fn min_cost_transport(
    supplies: &[Rat],
    demands: &[Rat],
    cost: impl Fn(usize, usize) -> Result<Rat>,
) -> Result<Rat> {
    let m = supplies.len();
    let n = demands.len();
    if m == 0 || n == 0 {
        return Err(Error::domain("empty marginal in transportation"));
    }

    // scale all masses to integers by the lcm of the denominators
    let mut lcm = BigInt::one();
    for r in supplies.iter().chain(demands.iter()) {
        lcm = lcm.lcm(r.as_big().denom());
    }
    let scaled = |r: &Rat| -> BigInt { (r.as_big() * BigRational::from_integer(lcm.clone())).to_integer() };
    let total_supply: BigInt = supplies.iter().map(&scaled).sum();
    let total_demand: BigInt = demands.iter().map(&scaled).sum();
    if total_supply != total_demand {
        return Err(Error::domain(format!(
            "unbalanced transportation problem: supply {total_supply} vs demand {total_demand}"
        )));
    }

    // nodes: source, rows, columns, sink
    let source = 0;
    let sink = m + n + 1;
    let mut net = Network::new(m + n + 2);
    for (i, s) in supplies.iter().enumerate() {
        net.add_edge(source, 1 + i, scaled(s), BigRational::zero());
    }
    for (j, d) in demands.iter().enumerate() {
        net.add_edge(1 + m + j, sink, scaled(d), BigRational::zero());
    }
    for i in 0..m {
        for j in 0..n {
            let c = cost(i, j)?;
            net.add_edge(1 + i, 1 + m + j, total_supply.clone(), c.as_big().clone());
        }
    }

    let mut remaining = total_supply.clone();
    // the only capacitated arcs are the 2(m+n) boundary arcs; this bound is
    // far beyond what successive shortest paths can need here
    let mut budget = 4 * (m + n + 2) * (m * n + m + n);
    while remaining.is_positive() {
        budget = budget
            .checked_sub(1)
            .ok_or_else(|| Error::domain("transportation solver failed to converge"))?;
        let path = shortest_path(&net, source, sink)
            .ok_or_else(|| Error::domain("transportation network disconnected"))?;
        let mut delta = remaining.clone();
        for &e in &path {
            let r = net.residual(e);
            if r < delta {
                delta = r;
            }
        }
        debug_assert!(delta.is_positive());
        for &e in &path {
            net.push(e, &delta);
        }
        remaining -= &delta;
    }

    let mut total = BigRational::zero();
    for e in (0..net.edges.len()).step_by(2) {
        if !net.edges[e].flow.is_zero() {
            total += BigRational::from_integer(net.edges[e].flow.clone()) * &net.edges[e].cost;
        }
    }
    Ok(Rat::from_big(total / BigRational::from_integer(lcm)))
}

/// Bellman-Ford on the residual network (residual arcs carry negated
/// costs, so a label-correcting search is required). Returns the edge
/// sequence of a cheapest augmenting path.
fn shortest_path(net: &Network, source: usize, sink: usize) -> Option<Vec<usize>> {
    let nodes = net.adj.len();
    let mut dist: Vec<Option<BigRational>> = vec![None; nodes];
    let mut parent: Vec<Option<usize>> = vec![None; nodes];
    dist[source] = Some(BigRational::zero());
    for _ in 0..nodes {
        let mut changed = false;
        for u in 0..nodes {
            let du = match &dist[u] {
                Some(d) => d.clone(),
                None => continue,
            };
            for &e in &net.adj[u] {
                if !net.residual(e).is_positive() {
                    continue;
                }
                let v = net.edges[e].to;
                let cand = &du + &net.edges[e].cost;
                if dist[v].as_ref().map_or(true, |dv| &cand < dv) {
                    dist[v] = Some(cand);
                    parent[v] = Some(e);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist[sink].as_ref()?;
    let mut path = Vec::new();
    let mut node = sink;
    while node != source {
        let e = parent[node]?;
        path.push(e);
        // the source endpoint of edge e is the target of its twin
        node = net.edges[e ^ 1].to;
    }
    path.reverse();
    Some(path)
}
