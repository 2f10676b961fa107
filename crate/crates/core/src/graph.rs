//! Feynman graphs: directed edges, external legs, incidence matrices,
//! cycle matroids, tree/forest enumeration and momentum routing.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{rat_int, QMatrix, Rat};
use crate::matroid::RepresentedMatroid;
use crate::momentum::{MomSym, MomentumExpr};
use crate::util::{combinations, UnionFind};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
    pub mass2: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExternalLeg {
    pub id: String,
    pub vertex: usize,
    pub symbol: String,
}

/// A directed multigraph with external legs carrying momentum symbols.
/// Momentum conservation (the declared symbols summing to zero) is a relation
/// imposed during routing and evaluation, never baked into the symbols.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FeynGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    externals: Vec<ExternalLeg>,
}

/// On-disk JSON form of a graph.
#[derive(Clone, Serialize, Deserialize, PartialEq, Debug)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub externals: Vec<LegDoc>,
}

#[derive(Clone, Serialize, Deserialize, PartialEq, Debug)]
pub struct EdgeDoc {
    pub id: String,
    pub tail: String,
    pub head: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass2: Option<String>,
}

#[derive(Clone, Serialize, Deserialize, PartialEq, Debug)]
pub struct LegDoc {
    pub id: String,
    pub vertex: String,
    pub symbol: String,
}

impl FeynGraph {
    pub fn from_doc(doc: &GraphDoc) -> Result<FeynGraph> {
        let vertices = doc.vertices.clone();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::Schema(format!("duplicate vertex `{v}`")));
            }
        }
        let vid = |name: &str| -> Result<usize> {
            vertices
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| Error::Schema(format!("unknown vertex `{name}`")))
        };
        let mut edges = Vec::new();
        let mut ids = BTreeSet::new();
        for e in &doc.edges {
            if !ids.insert(e.id.clone()) {
                return Err(Error::Schema(format!("duplicate edge id `{}`", e.id)));
            }
            edges.push(Edge {
                id: e.id.clone(),
                tail: vid(&e.tail)?,
                head: vid(&e.head)?,
                mass2: e.mass2.clone(),
            });
        }
        let mut externals = Vec::new();
        let mut symbols = BTreeSet::new();
        for l in &doc.externals {
            if !ids.insert(l.id.clone()) {
                return Err(Error::Schema(format!("duplicate leg id `{}`", l.id)));
            }
            if !symbols.insert(l.symbol.clone()) {
                return Err(Error::Schema(format!(
                    "duplicate external momentum symbol `{}`",
                    l.symbol
                )));
            }
            externals.push(ExternalLeg {
                id: l.id.clone(),
                vertex: vid(&l.vertex)?,
                symbol: l.symbol.clone(),
            });
        }
        Ok(FeynGraph {
            vertices,
            edges,
            externals,
        })
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    tail: self.vertices[e.tail].clone(),
                    head: self.vertices[e.head].clone(),
                    mass2: e.mass2.clone(),
                })
                .collect(),
            externals: self
                .externals
                .iter()
                .map(|l| LegDoc {
                    id: l.id.clone(),
                    vertex: self.vertices[l.vertex].clone(),
                    symbol: l.symbol.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<FeynGraph> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| Error::Schema(format!("graph JSON: {e}")))?;
        FeynGraph::from_doc(&doc)
    }

    /// Builder used by fixtures and tests: vertices by name, edges and legs
    /// referring to them by name.
    pub fn build(
        vertices: &[&str],
        edges: &[(&str, &str, &str)],
        externals: &[(&str, &str, &str)],
    ) -> Result<FeynGraph> {
        let doc = GraphDoc {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            edges: edges
                .iter()
                .map(|(id, t, h)| EdgeDoc {
                    id: id.to_string(),
                    tail: t.to_string(),
                    head: h.to_string(),
                    mass2: None,
                })
                .collect(),
            externals: externals
                .iter()
                .map(|(id, v, s)| LegDoc {
                    id: id.to_string(),
                    vertex: v.to_string(),
                    symbol: s.to_string(),
                })
                .collect(),
        };
        FeynGraph::from_doc(&doc)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn externals(&self) -> &[ExternalLeg] {
        &self.externals
    }

    pub fn edge_ids(&self) -> Vec<String> {
        self.edges.iter().map(|e| e.id.clone()).collect()
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::Lookup(format!("edge `{id}`")))
    }

    pub fn mass2_of(&self, id: &str) -> Option<String> {
        self.edges
            .iter()
            .find(|e| e.id == id)
            .and_then(|e| e.mass2.clone())
    }

    /// v-by-e incidence matrix: -1 where the edge begins, +1 where it ends.
    /// A self-loop contributes a zero column.
    pub fn incidence_matrix(&self) -> QMatrix {
        let rows: Vec<Vec<Rat>> = (0..self.vertices.len())
            .map(|v| {
                self.edges
                    .iter()
                    .map(|e| {
                        if e.tail == e.head {
                            rat_int(0)
                        } else if e.tail == v {
                            rat_int(-1)
                        } else if e.head == v {
                            rat_int(1)
                        } else {
                            rat_int(0)
                        }
                    })
                    .collect()
            })
            .collect();
        QMatrix::from_rows(rows, self.edge_ids()).expect("edge ids are distinct")
    }

    /// Connected components as sorted vertex-index lists, ordered by their
    /// smallest vertex. Isolated vertices form their own components.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.tail, e.head);
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.vertices.len() {
            by_root.entry(uf.find(v)).or_default().push(v);
        }
        let mut comps: Vec<Vec<usize>> = by_root.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Cycle matroid: the incidence matrix with one row removed per connected
    /// component (the row of the component's highest-indexed vertex), which
    /// leaves a full-row-rank representation whose circuits are the simple
    /// cycles of the graph.
    pub fn cycle_matroid(&self) -> RepresentedMatroid<Rat> {
        let inc = self.incidence_matrix();
        let mut drop: BTreeSet<usize> = BTreeSet::new();
        for comp in self.components() {
            drop.insert(*comp.last().expect("components are nonempty"));
        }
        let rows: Vec<Vec<Rat>> = (0..self.vertices.len())
            .filter(|v| !drop.contains(v))
            .map(|v| inc.row(v).to_vec())
            .collect();
        let mat = QMatrix::from_rows(rows, self.edge_ids()).expect("labels stay distinct");
        RepresentedMatroid::new(mat).expect("reduced incidence matrix has full row rank")
    }

    /// Graph with every external leg turned into an edge from a new vertex
    /// (ordered last) to its attach vertex, carrying the leg's id.
    pub fn extended_graph(&self) -> Result<FeynGraph> {
        let mut name = "inf".to_string();
        while self.vertices.contains(&name) {
            name.push('_');
        }
        let mut vertices = self.vertices.clone();
        vertices.push(name.clone());
        let inf = vertices.len() - 1;
        let mut edges = self.edges.clone();
        for l in &self.externals {
            edges.push(Edge {
                id: l.id.clone(),
                tail: inf,
                head: l.vertex,
                mass2: None,
            });
        }
        Ok(FeynGraph {
            vertices,
            edges,
            externals: Vec::new(),
        })
    }

    fn check_connected(&self) -> Result<()> {
        let comps = self.components();
        if comps.len() > 1 {
            let names: Vec<String> = comps
                .iter()
                .map(|c| {
                    let vs: Vec<&str> = c.iter().map(|&v| self.vertices[v].as_str()).collect();
                    format!("{{{}}}", vs.join(","))
                })
                .collect();
            return Err(Error::Domain(format!(
                "graph is disconnected: components {}",
                names.join(" ")
            )));
        }
        Ok(())
    }

    fn subset_is_acyclic(&self, subset: &[usize]) -> bool {
        let mut uf = UnionFind::new(self.vertices.len());
        subset.iter().all(|&i| {
            let e = &self.edges[i];
            e.tail != e.head && uf.union(e.tail, e.head)
        })
    }

    /// All spanning trees, by exhaustive filtration of (v-1)-subsets.
    pub fn spanning_trees(&self) -> Result<Vec<BTreeSet<usize>>> {
        self.check_connected()?;
        if self.vertices.is_empty() {
            return Ok(vec![]);
        }
        let k = self.vertices.len() - 1;
        Ok(combinations(self.edges.len(), k)
            .filter(|s| self.subset_is_acyclic(s))
            .map(|s| s.into_iter().collect())
            .collect())
    }

    /// All spanning 2-forests, each with its vertex bipartition. The part
    /// containing the lowest-indexed vertex comes first.
    pub fn two_forests(&self) -> Result<Vec<TwoForest>> {
        self.check_connected()?;
        if self.vertices.len() < 2 {
            return Err(Error::Domain(
                "two-forests need at least two vertices".into(),
            ));
        }
        let k = self.vertices.len() - 2;
        let mut out = Vec::new();
        for subset in combinations(self.edges.len(), k) {
            if !self.subset_is_acyclic(&subset) {
                continue;
            }
            let mut uf = UnionFind::new(self.vertices.len());
            for &i in &subset {
                uf.union(self.edges[i].tail, self.edges[i].head);
            }
            let root0 = uf.find(0);
            let (mut part0, mut part1) = (BTreeSet::new(), BTreeSet::new());
            for v in 0..self.vertices.len() {
                if uf.find(v) == root0 {
                    part0.insert(v);
                } else {
                    part1.insert(v);
                }
            }
            out.push(TwoForest {
                edges: subset.into_iter().collect(),
                parts: (part0, part1),
            });
        }
        Ok(out)
    }

    /// Deterministic momentum routing.
    ///
    /// Loop momenta run along the fundamental cycles of the lexicographically
    /// first spanning forest; external momenta run along tree paths to each
    /// component's root. Within a component the last declared leg's symbol is
    /// eliminated through momentum conservation, so the routing satisfies the
    /// vertex conservation identity exactly, with no relation left implicit.
    pub fn route_momenta(&self) -> Result<Routing> {
        let comps = self.components();
        // legs per component
        let mut comp_of_vertex = vec![0usize; self.vertices.len()];
        for (ci, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of_vertex[v] = ci;
            }
        }
        let mut legs_by_comp: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
        for (li, leg) in self.externals.iter().enumerate() {
            legs_by_comp[comp_of_vertex[leg.vertex]].push(li);
        }
        let with_legs = legs_by_comp.iter().filter(|l| !l.is_empty()).count();
        if with_legs > 1 && comps.len() > 1 {
            return Err(Error::Consistency(
                "external momenta attach to more than one component; \
                 per-component conservation cannot be satisfied"
                    .into(),
            ));
        }

        // leg injections: last leg of its component is eliminated
        let mut injections: Vec<MomentumExpr> = self
            .externals
            .iter()
            .map(|l| MomentumExpr::sym(MomSym::Ext(l.symbol.clone())))
            .collect();
        for legs in &legs_by_comp {
            if let Some((&last, rest)) = legs.split_last() {
                let mut e = MomentumExpr::zero();
                for &li in rest {
                    e.add_scaled(&injections[li], &rat_int(-1));
                }
                injections[last] = e;
            }
        }

        // lexicographically first spanning forest
        let mut uf = UnionFind::new(self.vertices.len());
        let mut in_tree = vec![false; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail != e.head && uf.union(e.tail, e.head) {
                in_tree[i] = true;
            }
        }
        // tree adjacency
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.vertices.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if in_tree[i] {
                adj[e.tail].push((e.head, i));
                adj[e.head].push((e.tail, i));
            }
        }
        // parents by BFS from each component root (its lowest vertex)
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.vertices.len()];
        let mut order = Vec::new();
        for comp in &comps {
            let root = comp[0];
            let mut queue = std::collections::VecDeque::from([root]);
            let mut seen: BTreeSet<usize> = [root].into_iter().collect();
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &(w, ei) in &adj[v] {
                    if seen.insert(w) {
                        parent[w] = Some((v, ei));
                        queue.push_back(w);
                    }
                }
            }
        }
        let path_to_root = |mut v: usize| -> Vec<(usize, bool)> {
            // (edge index, traversed tail->head?)
            let mut path = Vec::new();
            while let Some((p, ei)) = parent[v] {
                let forward = self.edges[ei].tail == v && self.edges[ei].head == p;
                path.push((ei, forward));
                v = p;
            }
            path
        };

        let mut momenta: Vec<MomentumExpr> = vec![MomentumExpr::zero(); self.edges.len()];
        // loop momenta along fundamental cycles
        let mut loop_edges = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if in_tree[i] {
                continue;
            }
            loop_edges.push(i);
            let sym = MomentumExpr::sym(MomSym::Loop(loop_edges.len() as u32));
            momenta[i].add_scaled(&sym, &rat_int(1));
            if e.tail == e.head {
                continue;
            }
            // close the cycle: walk head -> tail through the two root paths
            let (ph, pt) = (path_to_root(e.head), path_to_root(e.tail));
            // drop the shared suffix
            let mut lh = ph.len();
            let mut lt = pt.len();
            while lh > 0 && lt > 0 && ph[lh - 1] == pt[lt - 1] {
                lh -= 1;
                lt -= 1;
            }
            for &(ei, forward) in &ph[..lh] {
                // traversal from head toward the meeting point
                momenta[ei].add_scaled(&sym, &if forward { rat_int(1) } else { rat_int(-1) });
            }
            for &(ei, forward) in &pt[..lt] {
                // and back up from the meeting point to tail
                momenta[ei].add_scaled(&sym, &if forward { rat_int(-1) } else { rat_int(1) });
            }
        }
        // external momenta along tree paths to the root
        for (li, leg) in self.externals.iter().enumerate() {
            let inj = injections[li].clone();
            for (ei, forward) in path_to_root(leg.vertex) {
                momenta[ei].add_scaled(&inj, &if forward { rat_int(1) } else { rat_int(-1) });
            }
        }

        let routing = Routing {
            edge_momenta: momenta,
            loop_edges,
            injections,
        };
        routing.verify_conservation(self)?;
        Ok(routing)
    }
}

/// A spanning 2-forest with its vertex bipartition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwoForest {
    pub edges: BTreeSet<usize>,
    pub parts: (BTreeSet<usize>, BTreeSet<usize>),
}

/// Result of `route_momenta`.
#[derive(Clone, PartialEq, Debug)]
pub struct Routing {
    /// Momentum of each edge, indexed like `FeynGraph::edges`.
    pub edge_momenta: Vec<MomentumExpr>,
    /// Non-tree edges, in ground order; entry k-1 carries loop symbol l_k.
    pub loop_edges: Vec<usize>,
    /// Injected momentum per external leg, after conservation elimination.
    pub injections: Vec<MomentumExpr>,
}

impl Routing {
    pub fn momentum_of(&self, g: &FeynGraph, edge_id: &str) -> Result<MomentumExpr> {
        Ok(self.edge_momenta[g.edge_index(edge_id)?].clone())
    }

    /// Check `B k + q_in = 0` at every vertex, as an identity in the free
    /// symbols. A failure is an integrity bug, not a user error.
    pub fn verify_conservation(&self, g: &FeynGraph) -> Result<()> {
        for v in 0..g.vertices().len() {
            let mut sum = MomentumExpr::zero();
            for (i, e) in g.edges().iter().enumerate() {
                if e.tail == e.head {
                    continue;
                }
                if e.tail == v {
                    sum.add_scaled(&self.edge_momenta[i], &rat_int(-1));
                }
                if e.head == v {
                    sum.add_scaled(&self.edge_momenta[i], &rat_int(1));
                }
            }
            for (li, leg) in g.externals().iter().enumerate() {
                if leg.vertex == v {
                    sum.add_scaled(&self.injections[li], &rat_int(1));
                }
            }
            if !sum.is_zero() {
                return Err(Error::Integrity(format!(
                    "momentum conservation fails at vertex `{}`: residue {}",
                    g.vertices()[v],
                    sum
                )));
            }
        }
        Ok(())
    }
}
