use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{assert_dim, Direction, Membership, Objective, TargetKind, TargetSet};
use crate::bitcore::{complement, BitString};
use crate::error::{check_dim, domain, Result};

/// An undirected simple graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct GraphInstance {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawGraph> for GraphInstance {
    type Error = crate::error::Error;
    fn try_from(raw: RawGraph) -> Result<Self> {
        GraphInstance::new(raw.n, raw.edges)
    }
}

impl GraphInstance {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return domain("graph needs at least one vertex");
        }
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return domain(format!("edge ({u}, {v}) references a vertex outside 0..{n}"));
            }
            if u == v {
                return domain(format!("self-loop at vertex {u}"));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return domain(format!("duplicate edge ({u}, {v})"));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return domain("a cycle needs at least 3 vertices");
        }
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// A proper 2-colouring when the graph is connected and bipartite.
    pub fn two_colouring(&self) -> Option<BitString> {
        let adj = self.adjacency();
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        colour[0] = Some(false);
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].unwrap();
            for &v in &adj[u] {
                match colour[v] {
                    None => {
                        colour[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return None,
                    Some(_) => {}
                }
            }
        }
        let bits: Option<Vec<bool>> = colour.into_iter().collect();
        bits.map(|b| BitString::from_bits(&b))
    }
}

pub fn bichromatic_edges(g: &GraphInstance, x: &BitString) -> Result<f64> {
    check_dim(g.n, x.len())?;
    Ok(count_bichromatic(g, x) as f64)
}

fn count_bichromatic(g: &GraphInstance, x: &BitString) -> usize {
    g.edges.iter().filter(|&&(u, v)| x.get(u) != x.get(v)).count()
}

/// Two disjoint cliques on `0..n/2` and `n/2..n`.
pub fn gen_two_cliques(n: usize) -> Result<GraphInstance> {
    if n < 4 || n % 2 != 0 {
        return domain(format!("two-clique instances need an even n >= 4, got {n}"));
    }
    let h = n / 2;
    let mut edges = Vec::with_capacity(2 * h * (h - 1) / 2);
    for base in [0, h] {
        for u in base..base + h {
            for v in u + 1..base + h {
                edges.push((u, v));
            }
        }
    }
    GraphInstance::new(n, edges)
}

/// Number of bichromatic edges, maximised (vertex colouring) or minimised
/// (Ising model).
#[derive(Clone, Debug)]
pub struct Bichromatic {
    graph: GraphInstance,
    direction: Direction,
}

impl Bichromatic {
    pub fn new(graph: GraphInstance, direction: Direction) -> Self {
        Self { graph, direction }
    }

    pub fn graph(&self) -> &GraphInstance {
        &self.graph
    }
}

impl Objective for Bichromatic {
    fn name(&self) -> String {
        match self.direction {
            Direction::Maximise => "bichromatic".into(),
            Direction::Minimise => "ising".into(),
        }
    }
    fn dimension(&self) -> usize {
        self.graph.n
    }
    fn direction(&self) -> Direction {
        self.direction
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.graph.n, x);
        count_bichromatic(&self.graph, x) as f64
    }
    fn global_optima(&self) -> Result<TargetSet> {
        match (self.direction, self.graph.two_colouring()) {
            (Direction::Maximise, Some(c)) => {
                let cc = complement(&c);
                Ok(TargetSet::points(TargetKind::GlobalOptima, vec![c, cc]))
            }
            (Direction::Minimise, _) if is_connected(&self.graph) => Ok(TargetSet::points(
                TargetKind::GlobalOptima,
                vec![BitString::zeros(self.graph.n), BitString::ones(self.graph.n)],
            )),
            _ => super::target::exhaustive_global_optima(self),
        }
    }
}

fn is_connected(g: &GraphInstance) -> bool {
    let adj = g.adjacency();
    let mut seen = vec![false; g.n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !std::mem::replace(&mut seen[v], true) {
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Minimum cut over non-empty bipartitions. Assignments that put every
/// vertex on one side are infeasible and score `|E| + 1`.
#[derive(Clone, Debug)]
pub struct MinCut {
    graph: GraphInstance,
    two_cliques: bool,
}

impl MinCut {
    pub fn new(graph: GraphInstance) -> Self {
        Self {
            graph,
            two_cliques: false,
        }
    }

    pub fn two_cliques(n: usize) -> Result<Self> {
        Ok(Self {
            graph: gen_two_cliques(n)?,
            two_cliques: true,
        })
    }

    pub fn penalty(&self) -> f64 {
        (self.graph.edges.len() + 1) as f64
    }

    pub fn graph(&self) -> &GraphInstance {
        &self.graph
    }

    fn clique_split(&self) -> Vec<BitString> {
        let n = self.graph.n;
        let first = BitString::with_ones(n, &(0..n / 2).collect::<Vec<_>>());
        let second = complement(&first);
        vec![first, second]
    }
}

impl Objective for MinCut {
    fn name(&self) -> String {
        if self.two_cliques {
            "mincut-two-cliques"
        } else {
            "mincut"
        }
        .into()
    }
    fn dimension(&self) -> usize {
        self.graph.n
    }
    fn direction(&self) -> Direction {
        Direction::Minimise
    }
    fn evaluate(&self, x: &BitString) -> f64 {
        assert_dim(self.graph.n, x);
        if x.is_all_zeros() || x.is_all_ones() {
            self.penalty()
        } else {
            count_bichromatic(&self.graph, x) as f64
        }
    }
    fn global_optima(&self) -> Result<TargetSet> {
        if self.two_cliques {
            Ok(TargetSet::points(TargetKind::GlobalOptima, self.clique_split()))
        } else {
            super::target::exhaustive_global_optima(self)
        }
    }
    /// Clique-aligned cuts plus every single-vertex cut (one 1-bit or one
    /// 0-bit). With cliques of size 2 the single-vertex cuts can still
    /// improve, so only the aligned cuts remain.
    fn local_optima_closed_form(&self) -> Option<TargetSet> {
        if !self.two_cliques {
            return None;
        }
        let n = self.graph.n;
        let aligned = Membership::Points(self.clique_split());
        let membership = if n / 2 >= 3 {
            Membership::Union(vec![aligned, Membership::OnesCount(BTreeSet::from([1, n - 1]))])
        } else {
            aligned
        };
        Some(TargetSet::new(TargetKind::LocalOptima, n, membership))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::local_optima;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn bichromatic_cycle_examples() {
        let c4 = GraphInstance::cycle(4).unwrap();
        assert_eq!(bichromatic_edges(&c4, &bs("0101")).unwrap(), 4.0);
        assert_eq!(bichromatic_edges(&c4, &bs("0000")).unwrap(), 0.0);
        assert_eq!(bichromatic_edges(&c4, &bs("1111")).unwrap(), 0.0);
        assert_eq!(bichromatic_edges(&c4, &bs("0011")).unwrap(), 2.0);
        assert!(bichromatic_edges(&c4, &bs("011")).is_err());
    }

    #[test]
    fn invalid_graphs_rejected() {
        assert!(GraphInstance::new(3, vec![(0, 0)]).is_err());
        assert!(GraphInstance::new(3, vec![(0, 1), (1, 0)]).is_err());
        assert!(GraphInstance::new(3, vec![(0, 3)]).is_err());
        let err = serde_json::from_str::<GraphInstance>(r#"{"n":3,"edges":[[1,1]]}"#);
        assert!(err.is_err());
    }

    #[test]
    fn two_cliques_examples() {
        let g = gen_two_cliques(4).unwrap();
        assert_eq!(g.edges, vec![(0, 1), (2, 3)]);
        let cut = MinCut::two_cliques(4).unwrap();
        assert_eq!(cut.evaluate(&bs("0011")), 0.0);
        assert_eq!(cut.evaluate(&bs("0000")), 3.0);
        let cut6 = MinCut::two_cliques(6).unwrap();
        assert_eq!(cut6.evaluate(&bs("010000")), 2.0);
        assert!(gen_two_cliques(5).is_err());
        assert!(gen_two_cliques(2).is_err());
    }

    #[test]
    fn single_vertex_cut_is_local_optimum() {
        let cut6 = MinCut::two_cliques(6).unwrap();
        let local = local_optima(&cut6).unwrap();
        assert!(local.contains(&bs("010000"), 2.0));
    }

    #[test]
    fn bipartite_optima_are_the_two_colourings() {
        let g = GraphInstance::cycle(6).unwrap();
        let obj = Bichromatic::new(g, Direction::Maximise);
        let closed = obj.global_optima().unwrap();
        let scanned = super::super::target::exhaustive_global_optima(&obj).unwrap();
        assert_eq!(closed.enumerate(&obj).unwrap(), scanned.enumerate(&obj).unwrap());
        assert_eq!(closed.enumerate(&obj).unwrap().len(), 2);
    }
}
