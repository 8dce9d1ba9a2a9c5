use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use petgraph::algo::{connected_components, is_cyclic_undirected};
use petgraph::graph::UnGraph;
use petgraph::unionfind::UnionFind;

use crate::charspace::{build_V, Character};
use crate::error::{Error, Result};
use crate::exactalg::{module_action, GroupElement, LocalizedElement, QMonomial, Setup};
use crate::valuations::{val_eval, ExtInt, ValuationId};

/// `β = -(2 + Σ dᵢ)` for the designated block.
pub fn compute_beta(setup: &Setup) -> i64 {
    setup.beta()
}

/// The data fixing one character tree `Γ_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeContext {
    pub setup: Setup,
    pub v: ValuationId,
    pub character: Character,
    pub q_v: QMonomial,
    pub beta: i64,
}

impl TreeContext {
    /// Context for a member of `V` (`w` or some `vᵢ`).
    pub fn new(setup: &Setup, v: ValuationId) -> Result<Self> {
        v.check(setup)?;
        let entry = build_V(setup)?
            .into_iter()
            .find(|e| e.id == v)
            .ok_or_else(|| Error::Unsupported(format!("{} is not a member of V", v)))?;
        Ok(TreeContext { setup: setup.clone(), v, character: entry.character, q_v: entry.q_v, beta: setup.beta() })
    }

    /// `v(q)`; integral because members of `V` are discrete.
    pub fn height_of(&self, q: &QMonomial) -> Result<i64> {
        let r = self.character.eval(q);
        r.to_integer()
            .to_i64()
            .filter(|_| r.is_integer())
            .ok_or_else(|| Error::Precondition("character value is not a machine integer".into()))
    }

    /// Coset equality of `(z, a)` and `(z', b)`.
    pub fn same_vertex(&self, x: &TreeVertex, y: &TreeVertex) -> Result<bool> {
        if x.z != y.z {
            return Ok(false);
        }
        Ok(line_intersection_sup(self, &x.label, &y.label)? >= x.z)
    }
}

/// The vertex `G(v) q_v^z a`; two labels give the same vertex exactly when
/// [`TreeContext::same_vertex`] says so, so the derived equality is only structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeVertex {
    pub z: i64,
    pub label: LocalizedElement,
}

/// `v(e) ≥ c`, i.e. `e ∈ A_v ∘ q_v^c`.
pub fn av_membership(ctx: &TreeContext, e: &LocalizedElement, c: i64) -> Result<bool> {
    Ok(val_eval(ctx.v, e)? >= c)
}

/// `z₀ = v(a − b) − β`: the lines through `a` and `b` share every vertex of height `≤ z₀`.
pub fn line_intersection_sup(ctx: &TreeContext, a: &LocalizedElement, b: &LocalizedElement) -> Result<ExtInt> {
    Ok(val_eval(ctx.v, &a.checked_sub(b)?)?.shift(ctx.beta))
}

/// Right action `(z, a) * (b, q) = (z + v(q), a∘q + b)`.
pub fn act_on_vertex(ctx: &TreeContext, vert: &TreeVertex, g: &GroupElement) -> Result<TreeVertex> {
    Ok(TreeVertex {
        z: vert.z + ctx.height_of(&g.q)?,
        label: module_action(&vert.label, &g.q)?.checked_add(&g.a)?,
    })
}

/// A finite union of lines; vertices at equal height merged by coset equality.
#[derive(Clone, Debug)]
pub struct TreeBall {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeBall {
    pub fn is_tree(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut g = UnGraph::<(), ()>::new_undirected();
        let nodes: Vec<_> = self.vertices.iter().map(|_| g.add_node(())).collect();
        for &(a, b) in &self.edges {
            g.add_edge(nodes[a], nodes[b], ());
        }
        self.edges.len() + 1 == self.vertices.len() && connected_components(&g) == 1 && !is_cyclic_undirected(&g)
    }
}

/// The seed lines `L_{a,v}` over heights `z_lo..=z_hi`.
pub fn tree_ball(ctx: &TreeContext, seeds: &[LocalizedElement], z_lo: i64, z_hi: i64) -> Result<TreeBall> {
    if z_lo > z_hi || seeds.is_empty() {
        return Ok(TreeBall { vertices: Vec::new(), edges: Vec::new() });
    }
    let width = (z_hi - z_lo + 1) as usize;
    let id = |s: usize, z: i64| s * width + (z - z_lo) as usize;
    let mut uf = UnionFind::<usize>::new(seeds.len() * width);
    for i in 0..seeds.len() {
        for j in i + 1..seeds.len() {
            let z0 = line_intersection_sup(ctx, &seeds[i], &seeds[j])?;
            for z in z_lo..=z_hi {
                if z0 >= z {
                    uf.union(id(i, z), id(j, z));
                }
            }
        }
    }
    let labels = uf.into_labeling();
    let mut index = std::collections::BTreeMap::new();
    let mut vertices = Vec::new();
    for (s, seed) in seeds.iter().enumerate() {
        for z in z_lo..=z_hi {
            index.entry(labels[id(s, z)]).or_insert_with(|| {
                vertices.push(TreeVertex { z, label: seed.clone() });
                vertices.len() - 1
            });
        }
    }
    let mut edges = BTreeSet::new();
    for s in 0..seeds.len() {
        for z in z_lo..z_hi {
            let a = index[&labels[id(s, z)]];
            let b = index[&labels[id(s, z + 1)]];
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Ok(TreeBall { vertices, edges: edges.into_iter().collect() })
}
