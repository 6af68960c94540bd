//! Finite covers of tubular graphs of groups: the mod-M cover that makes all
//! inclusions maximal, the (Z/2)^b homology cover, and their composition.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::characters::{find_fbyc_character, normalize_character, CharacterError, CharacterZ, FbycDecision};
use crate::gog::{GraphError, Side, TubularGraph};
use crate::lattice::{congruence_sublattice_basis, int, rat, Int, Mat2Q};

/// Largest first Betti number accepted by [`homology2_cover`].
pub const MAX_HOMOLOGY_RANK: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("character is not surjective")]
    NonSurjectiveCharacter,
    #[error("character vanishes on edge #{0}")]
    ZeroEdgeValue(usize),
    #[error("character does not satisfy the equation of edge #{0}")]
    NotACharacter(usize),
    #[error("first Betti number {0} is too large for an explicit homology cover")]
    TooLarge(usize),
    #[error("step {0} of the path does not leave the current vertex")]
    NotAPath(usize),
    #[error("path does not return to its start")]
    PathNotClosed,
    #[error("cover check failed: {0}")]
    CheckFailed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexLift {
    pub base_vertex: usize,
    pub coset: Int,
    /// Columns are the basis of the lifted vertex group in base coordinates.
    pub basis_change: Mat2Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLift {
    pub base_edge: usize,
    pub coset: Int,
    /// The lifted edge group is generated by this power of the base one.
    pub power: Int,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverResult {
    pub cover: TubularGraph,
    pub index: Int,
    pub vertex_fiber: Vec<VertexLift>,
    pub edge_fiber: Vec<EdgeLift>,
}

impl CoverResult {
    pub fn identity(g: &TubularGraph) -> CoverResult {
        CoverResult {
            cover: g.clone(),
            index: Int::one(),
            vertex_fiber: (0..g.num_vertices())
                .map(|v| VertexLift { base_vertex: v, coset: Int::zero(), basis_change: Mat2Q::identity() })
                .collect(),
            edge_fiber: (0..g.num_edges())
                .map(|e| EdgeLift { base_edge: e, coset: Int::zero(), power: Int::one() })
                .collect(),
        }
    }

    /// Check that over every base vertex and edge the indices in the fiber add
    /// up to the degree, and that the cover is connected.
    pub fn check_fibers(&self, base: &TubularGraph) -> Result<(), CoverError> {
        let mut vsum = vec![Int::zero(); base.num_vertices()];
        for lift in &self.vertex_fiber {
            vsum[lift.base_vertex] += lift.basis_change.det().abs().to_integer();
        }
        let mut esum = vec![Int::zero(); base.num_edges()];
        for lift in &self.edge_fiber {
            esum[lift.base_edge] += &lift.power;
        }
        if let Some(v) = vsum.iter().position(|s| s != &self.index) {
            return Err(CoverError::CheckFailed(format!("vertex {v} fiber sums to {}", vsum[v])));
        }
        if let Some(e) = esum.iter().position(|s| s != &self.index) {
            return Err(CoverError::CheckFailed(format!("edge #{e} fiber sums to {}", esum[e])));
        }
        if !self.cover.is_connected() {
            return Err(CoverError::CheckFailed("cover is disconnected".into()));
        }
        Ok(())
    }

    /// Restrict a base character to the cover, in the cover's vertex bases.
    pub fn pull_back_character(&self, chi: &CharacterZ) -> CharacterZ {
        let vertex = self
            .vertex_fiber
            .iter()
            .map(|lift| {
                let (m, n) = (rat(&chi.vertex[lift.base_vertex].0), rat(&chi.vertex[lift.base_vertex].1));
                let b = &lift.basis_change;
                let val = |j: usize| (&m * &b.m[0][j] + &n * &b.m[1][j]).to_integer();
                (val(0), val(1))
            })
            .collect();
        CharacterZ { vertex, stable: Default::default() }
    }

    /// Compose with a cover of `self.cover`.
    pub fn then(&self, upper: &CoverResult) -> CoverResult {
        CoverResult {
            cover: upper.cover.clone(),
            index: &self.index * &upper.index,
            vertex_fiber: upper
                .vertex_fiber
                .iter()
                .map(|l| {
                    let mid = &self.vertex_fiber[l.base_vertex];
                    VertexLift {
                        base_vertex: mid.base_vertex,
                        coset: l.coset.clone(),
                        basis_change: mid.basis_change.mul(&l.basis_change),
                    }
                })
                .collect(),
            edge_fiber: upper
                .edge_fiber
                .iter()
                .map(|l| {
                    let mid = &self.edge_fiber[l.base_edge];
                    EdgeLift { base_edge: mid.base_edge, coset: l.coset.clone(), power: &mid.power * &l.power }
                })
                .collect(),
        }
    }
}

/// Edge ends whose inclusion is not primitive.
pub fn non_maximal_ends(g: &TubularGraph) -> Vec<(usize, Side)> {
    let mut out = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        for side in [Side::Src, Side::Dst] {
            if !e.inclusion(side).is_primitive() {
                out.push((i, side));
            }
        }
    }
    out
}

/// The cover corresponding to the kernel of `G -> Z/M`, `x -> chi(x) mod M`,
/// with `M` the lcm of the edge values. Every inclusion in it is maximal.
///
/// Vertex lifts over `v` are labelled by residues mod `gcd(m_v, n_v, M)`, edge
/// lifts over `e` by residues mod `|chi(e)|`. A lift of a tree edge at label
/// `c` joins the lifts labelled `c` at both ends; a lift of a non-tree edge
/// shifts the label at its target by the stable letter's value.
pub fn maximality_cover(g: &TubularGraph, chi: &CharacterZ) -> Result<CoverResult, CoverError> {
    g.ensure_valid()?;
    if chi.vertex.len() != g.num_vertices() {
        return Err(CoverError::CheckFailed("character has the wrong number of vertices".into()));
    }
    let mut values = Vec::with_capacity(g.num_edges());
    for e in 0..g.num_edges() {
        let c = chi.edge_value(g, e);
        if c.is_zero() {
            return Err(CoverError::ZeroEdgeValue(e));
        }
        if !chi.is_balanced_on(g, e) {
            return Err(CoverError::NotACharacter(e));
        }
        values.push(c.abs());
    }
    if !chi.is_surjective() {
        return Err(CoverError::NonSurjectiveCharacter);
    }
    let modulus = values.iter().fold(Int::one(), |acc, c| acc.lcm(c));
    let tree: BTreeSet<usize> = g.spanning_tree().into_iter().collect();

    let mut cover = TubularGraph::new();
    let mut vertex_fiber = Vec::new();
    let mut first_lift = Vec::with_capacity(g.num_vertices());
    let mut labels = Vec::with_capacity(g.num_vertices());
    for (v, name) in g.vertices.iter().enumerate() {
        let (m, n) = &chi.vertex[v];
        let count = m.gcd(n).gcd(&modulus);
        let (basis, _) = congruence_sublattice_basis(m, n, &modulus)
            .map_err(|e| CoverError::CheckFailed(e.to_string()))?;
        first_lift.push(vertex_fiber.len());
        let k = count.to_usize().ok_or_else(|| CoverError::CheckFailed("fiber too large".into()))?;
        for c in 0..k {
            cover.add_vertex(format!("{name}#{c}"));
            vertex_fiber.push(VertexLift { base_vertex: v, coset: Int::from(c), basis_change: basis.clone() });
        }
        labels.push(count);
    }

    let mut edge_fiber = Vec::new();
    for (e, edge) in g.edges.iter().enumerate() {
        let power = &modulus / &values[e];
        let lift_end = |v: usize, x: &crate::lattice::LatticeVec| -> Result<_, CoverError> {
            let inv = vertex_fiber[first_lift[v]].basis_change.inverse().expect("basis is nondegenerate");
            let w = inv
                .apply_int(&x.scale(&power))
                .to_lattice()
                .ok_or_else(|| CoverError::CheckFailed(format!("lift of edge #{e} is not integral")))?;
            if !w.is_primitive() {
                return Err(CoverError::CheckFailed(format!("lift of edge #{e} is not primitive")));
            }
            Ok(w)
        };
        let a = lift_end(edge.src, &edge.inc_src)?;
        let b = lift_end(edge.dst, &edge.inc_dst)?;
        let shift = if tree.contains(&e) { Int::zero() } else { chi.stable_value(e) };
        let k = values[e].to_usize().ok_or_else(|| CoverError::CheckFailed("fiber too large".into()))?;
        for c in 0..k {
            let c = Int::from(c);
            let s = c.mod_floor(&labels[edge.src]).to_usize().expect("small");
            let d = (&c + &shift).mod_floor(&labels[edge.dst]).to_usize().expect("small");
            cover.add_edge(
                format!("{}#{}", edge.id, c),
                first_lift[edge.src] + s,
                first_lift[edge.dst] + d,
                a.clone(),
                b.clone(),
            );
            edge_fiber.push(EdgeLift { base_edge: e, coset: c, power: power.clone() });
        }
    }

    let result = CoverResult { cover, index: modulus, vertex_fiber, edge_fiber };
    result.check_fibers(g)?;
    Ok(result)
}

/// The cover corresponding to `G -> H_1(graph; Z/2)`: one copy of each vertex
/// per element of `(Z/2)^b`, with the i-th non-tree edge flipping bit i.
/// Every closed path in it crosses each base edge an even number of times, so
/// it has no self loops.
pub fn homology2_cover(g: &TubularGraph) -> Result<CoverResult, CoverError> {
    g.ensure_valid()?;
    let b = g.betti()?;
    if b > MAX_HOMOLOGY_RANK {
        return Err(CoverError::TooLarge(b));
    }
    let size = 1usize << b;
    let non_tree = g.non_tree_edges();
    let bit = |e: usize| non_tree.iter().position(|&x| x == e).map_or(0, |i| 1usize << i);

    let mut cover = TubularGraph::new();
    let mut vertex_fiber = Vec::new();
    for (v, name) in g.vertices.iter().enumerate() {
        for x in 0..size {
            cover.add_vertex(format!("{name}#{x}"));
            vertex_fiber.push(VertexLift { base_vertex: v, coset: Int::from(x), basis_change: Mat2Q::identity() });
        }
    }
    let mut edge_fiber = Vec::new();
    for (e, edge) in g.edges.iter().enumerate() {
        let flip = bit(e);
        for x in 0..size {
            cover.add_edge(
                format!("{}#{x}", edge.id),
                edge.src * size + x,
                edge.dst * size + (x ^ flip),
                edge.inc_src.clone(),
                edge.inc_dst.clone(),
            );
            edge_fiber.push(EdgeLift { base_edge: e, coset: Int::from(x), power: Int::one() });
        }
    }
    let result = CoverResult { cover, index: Int::from(size), vertex_fiber, edge_fiber };
    if result.cover.has_self_loop() {
        return Err(CoverError::CheckFailed("homology cover has a self loop".into()));
    }
    result.check_fibers(g)?;
    Ok(result)
}

/// An edge path in a cover, given by its start vertex and the edges crossed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverPath {
    pub start: usize,
    pub edges: Vec<usize>,
}

/// Whether the projection of a closed path crosses every base edge an even
/// number of times.
pub fn even_multiplicity_check(base: &TubularGraph, cover: &CoverResult, path: &CoverPath) -> Result<bool, CoverError> {
    let mut at = path.start;
    let mut counts = vec![0usize; base.num_edges()];
    for (step, &e) in path.edges.iter().enumerate() {
        let edge = cover.cover.edges.get(e).ok_or(CoverError::NotAPath(step))?;
        if edge.src == at {
            at = edge.dst;
        } else if edge.dst == at {
            at = edge.src;
        } else {
            return Err(CoverError::NotAPath(step));
        }
        counts[cover.edge_fiber[e].base_edge] += 1;
    }
    if at != path.start {
        return Err(CoverError::PathNotClosed);
    }
    Ok(counts.iter().all(|c| c % 2 == 0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaWitness {
    pub stage1: Option<CoverResult>,
    pub stage2: CoverResult,
    /// Normalized character used for the first stage, if any.
    pub character: Option<CharacterZ>,
    pub total_index: Int,
    pub all_inclusions_maximal: bool,
    pub no_self_loops: bool,
    pub notes: Vec<String>,
}

impl StaWitness {
    /// Record a disagreement with an index known from elsewhere.
    pub fn annotate_reference_index(&mut self, reference: &Int) {
        if &self.total_index != reference {
            self.notes.push(format!(
                "computed index {} differs from the published index {}; no smaller subgroup is constructed here",
                self.total_index, reference
            ));
        }
    }

    /// The composite cover of the base graph.
    pub fn composite(&self) -> CoverResult {
        match &self.stage1 {
            Some(s1) => s1.then(&self.stage2),
            None => self.stage2.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StaOutcome {
    Witness(Box<StaWitness>),
    Inapplicable { reason: String },
}

impl StaOutcome {
    pub fn witness(&self) -> Option<&StaWitness> {
        match self {
            StaOutcome::Witness(w) => Some(w),
            StaOutcome::Inapplicable { .. } => None,
        }
    }
}

/// A finite cover with maximal inclusions and no self loops, when one can be
/// built: directly if the inclusions are already maximal, via the mod-M cover
/// when the group is free-by-Z.
pub fn sta_pipeline(g: &TubularGraph) -> Result<StaOutcome, CoverError> {
    g.ensure_valid()?;
    let (stage1, character) = if non_maximal_ends(g).is_empty() {
        (None, None)
    } else {
        match find_fbyc_character(g)? {
            FbycDecision::FreeByZ(raw) => {
                let chi = normalize_character(&raw)?;
                (Some(maximality_cover(g, &chi)?), Some(chi))
            }
            FbycDecision::NotFreeByZ { witness_edge } => {
                return Ok(StaOutcome::Inapplicable {
                    reason: format!(
                        "inclusions are not all maximal and every character vanishes on edge {}",
                        g.edges[witness_edge].id
                    ),
                })
            }
        }
    };
    let middle = stage1.as_ref().map_or(g, |c| &c.cover);
    let stage2 = homology2_cover(middle)?;
    let total_index = stage1.as_ref().map_or_else(Int::one, |c| c.index.clone()) * &stage2.index;
    let witness = StaWitness {
        all_inclusions_maximal: non_maximal_ends(&stage2.cover).is_empty(),
        no_self_loops: !stage2.cover.has_self_loop(),
        stage1,
        stage2,
        character,
        total_index,
        notes: Vec::new(),
    };
    if !witness.all_inclusions_maximal || !witness.no_self_loops {
        return Err(CoverError::CheckFailed("final cover is not certified".into()));
    }
    Ok(StaOutcome::Witness(Box::new(witness)))
}

/// `2^b` as an integer.
pub fn two_pow(b: usize) -> Int {
    int(2).pow(b as u32)
}
