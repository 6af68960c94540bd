//! Homomorphisms `G -> Z` (and `G -> Q`) of a tubular group, the free-by-Z
//! decision, and extension of vertex homomorphisms over trees.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::gog::{Generator, GraphError, Presentation, Side, TubularGraph};
use crate::lattice::{ext_gcd, integer_kernel, rat, Int, LatticeVec, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("character is identically zero")]
    AllZero,
    #[error("inclusion of edge #{edge} at its {side} end is not primitive")]
    NonPrimitiveInclusion { edge: usize, side: Side },
    #[error("prescribed values cannot be met at edge #{edge}")]
    InconsistentPrescription { edge: usize },
    #[error("edge #{edge} closes a cycle or is a self loop; expected a tree")]
    NotATree { edge: usize },
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
}

/// Values a character can take.
pub trait Scalar:
    Clone + PartialEq + Zero + fmt::Display + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn from_int(x: &Int) -> Self;
}

impl Scalar for Int {
    fn from_int(x: &Int) -> Self {
        x.clone()
    }
}

impl Scalar for Rat {
    fn from_int(x: &Int) -> Self {
        rat(x)
    }
}

/// A homomorphism from a tubular group, given by its values `(m_v, n_v)` on
/// each vertex basis and its values on the stable letters (keyed by edge
/// index; absent means zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character<T> {
    pub vertex: Vec<(T, T)>,
    pub stable: BTreeMap<usize, T>,
}

pub type CharacterZ = Character<Int>;
pub type CharacterQ = Character<Rat>;

impl<T: Scalar> Character<T> {
    pub fn zero(num_vertices: usize) -> Self {
        Character { vertex: vec![(T::zero(), T::zero()); num_vertices], stable: BTreeMap::new() }
    }

    pub fn value_on(&self, v: usize, x: &LatticeVec) -> T {
        let (m, n) = &self.vertex[v];
        m.clone() * T::from_int(&x.p) + n.clone() * T::from_int(&x.q)
    }

    pub fn end_value(&self, g: &TubularGraph, e: usize, side: Side) -> T {
        let edge = &g.edges[e];
        self.value_on(edge.vertex(side), edge.inclusion(side))
    }

    /// Value on the edge group generator (read at the source end).
    pub fn edge_value(&self, g: &TubularGraph, e: usize) -> T {
        self.end_value(g, e, Side::Src)
    }

    pub fn is_balanced_on(&self, g: &TubularGraph, e: usize) -> bool {
        self.end_value(g, e, Side::Src) == self.end_value(g, e, Side::Dst)
    }

    /// Every edge equation holds.
    pub fn satisfies(&self, g: &TubularGraph) -> bool {
        self.vertex.len() == g.num_vertices() && (0..g.num_edges()).all(|e| self.is_balanced_on(g, e))
    }

    pub fn stable_value(&self, e: usize) -> T {
        self.stable.get(&e).cloned().unwrap_or_else(T::zero)
    }

    pub fn generator_values(&self, pres: &Presentation) -> Vec<T> {
        pres.generators
            .iter()
            .map(|g| match *g {
                Generator::X(v) => self.vertex[v].0.clone(),
                Generator::Y(v) => self.vertex[v].1.clone(),
                Generator::Stable(e) => self.stable_value(e),
            })
            .collect()
    }

    pub fn nonzero_on_all_edges(&self, g: &TubularGraph) -> bool {
        (0..g.num_edges()).all(|e| !self.edge_value(g, e).is_zero())
    }
}

impl CharacterZ {
    pub fn from_generator_values(pres: &Presentation, values: &[Int]) -> Self {
        let nv = pres.generators.iter().filter(|g| matches!(g, Generator::X(_))).count();
        let mut chi = CharacterZ::zero(nv);
        for (g, x) in pres.generators.iter().zip(values) {
            match *g {
                Generator::X(v) => chi.vertex[v].0 = x.clone(),
                Generator::Y(v) => chi.vertex[v].1 = x.clone(),
                Generator::Stable(e) => {
                    if !x.is_zero() {
                        chi.stable.insert(e, x.clone());
                    }
                }
            }
        }
        chi
    }

    fn values(&self) -> impl Iterator<Item = &Int> {
        self.vertex.iter().flat_map(|(m, n)| [m, n]).chain(self.stable.values())
    }

    pub fn gcd_of_values(&self) -> Int {
        self.values().fold(Int::zero(), |acc, x| acc.gcd(x))
    }

    pub fn is_zero(&self) -> bool {
        self.values().all(Zero::is_zero)
    }

    pub fn is_surjective(&self) -> bool {
        self.gcd_of_values().is_one()
    }

    fn divided_by(&self, d: &Int) -> CharacterZ {
        Character {
            vertex: self.vertex.iter().map(|(m, n)| (m / d, n / d)).collect(),
            stable: self.stable.iter().map(|(&e, x)| (e, x / d)).filter(|(_, x)| !x.is_zero()).collect(),
        }
    }

    pub fn to_rational(&self) -> CharacterQ {
        Character {
            vertex: self.vertex.iter().map(|(m, n)| (rat(m), rat(n))).collect(),
            stable: self.stable.iter().map(|(&e, x)| (e, rat(x))).collect(),
        }
    }
}

impl CharacterQ {
    /// Scale by the lcm of all denominators so every value is an integer.
    pub fn to_integral(&self) -> CharacterZ {
        let all = self.vertex.iter().flat_map(|(m, n)| [m, n]).chain(self.stable.values());
        let l = all.fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        let scale = |x: &Rat| (x * rat(&l)).to_integer();
        Character {
            vertex: self.vertex.iter().map(|(m, n)| (scale(m), scale(n))).collect(),
            stable: self.stable.iter().map(|(&e, x)| (e, scale(x))).collect(),
        }
    }
}

impl<T: Scalar> fmt::Display for Character<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vertex
            .iter()
            .enumerate()
            .map(|(v, (m, n))| format!("v{v}:({m},{n})"))
            .chain(self.stable.iter().map(|(e, x)| format!("t#{e}:{x}")))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A `Z`-basis of `Hom(G, Z)`, from the integer kernel of the abelianized
/// relation matrix. Only edges impose equations.
pub fn hom_basis(g: &TubularGraph) -> Result<Vec<CharacterZ>, CharacterError> {
    let pres = g.presentation()?;
    let kernel = integer_kernel(&pres.relation_matrix());
    Ok(kernel.iter().map(|k| CharacterZ::from_generator_values(&pres, k)).collect())
}

/// Rank of `H_1(G)` modulo torsion.
pub fn first_betti_of_group(g: &TubularGraph) -> Result<usize, CharacterError> {
    Ok(hom_basis(g)?.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FbycDecision {
    /// A surjective character, nonzero on every edge group.
    FreeByZ(CharacterZ),
    /// Every character vanishes on this edge group.
    NotFreeByZ { witness_edge: usize },
}

impl FbycDecision {
    pub fn character(&self) -> Option<&CharacterZ> {
        match self {
            FbycDecision::FreeByZ(c) => Some(c),
            FbycDecision::NotFreeByZ { .. } => None,
        }
    }
}

/// Decide whether the tubular group is free-by-Z, by looking for a character
/// that is nonzero on every edge group.
///
/// Each edge gives a linear functional on `Hom(G, Q)`. If one of them vanishes
/// identically there is no such character. Otherwise the characters
/// `sum_i k^i B_i` (over the basis vectors `B_i` that some edge sees) are tried
/// for `k = 1, 2, ...`; an edge functional is a nonzero polynomial in `k` of
/// degree below the number of terms, so the search stops within
/// `E (d - 1) + 1` steps.
pub fn find_fbyc_character(g: &TubularGraph) -> Result<FbycDecision, CharacterError> {
    let basis = hom_basis(g)?;
    let ne = g.num_edges();
    let funcs: Vec<Vec<Int>> =
        (0..ne).map(|e| basis.iter().map(|b| b.edge_value(g, e)).collect()).collect();
    if let Some(e) = funcs.iter().position(|f| f.iter().all(Zero::is_zero)) {
        return Ok(FbycDecision::NotFreeByZ { witness_edge: e });
    }
    let relevant: Vec<usize> =
        (0..basis.len()).filter(|&i| funcs.iter().any(|f| !f[i].is_zero())).collect();
    if relevant.is_empty() {
        // no edges at all: the group is Z^2
        let chi = basis.first().cloned().ok_or(CharacterError::AllZero)?;
        return Ok(FbycDecision::FreeByZ(chi));
    }
    let bound = ne * (relevant.len() - 1) + 1;
    for k in 1..=bound {
        let k = Int::from(k);
        let mut coeff = Int::one();
        let mut chi = CharacterZ::zero(g.num_vertices());
        for &i in &relevant {
            chi = add_scaled(&chi, &basis[i], &coeff);
            coeff *= &k;
        }
        if chi.nonzero_on_all_edges(g) {
            let d = chi.gcd_of_values();
            return Ok(FbycDecision::FreeByZ(chi.divided_by(&d)));
        }
    }
    unreachable!("generic point search exceeded its bound")
}

fn add_scaled(a: &CharacterZ, b: &CharacterZ, k: &Int) -> CharacterZ {
    let vertex = a.vertex.iter().zip(&b.vertex).map(|((m, n), (bm, bn))| (m + bm * k, n + bn * k)).collect();
    let mut stable = a.stable.clone();
    for (&e, x) in &b.stable {
        let entry = stable.entry(e).or_insert_with(Int::zero);
        *entry += x * k;
    }
    stable.retain(|_, x| !x.is_zero());
    Character { vertex, stable }
}

/// Send every stable letter to zero and divide out the gcd, keeping the
/// vertex values (and hence the edge values, up to that factor).
pub fn normalize_character(chi: &CharacterZ) -> Result<CharacterZ, CharacterError> {
    let flat = Character { vertex: chi.vertex.clone(), stable: BTreeMap::new() };
    let d = flat.gcd_of_values();
    if d.is_zero() {
        return Err(CharacterError::AllZero);
    }
    Ok(flat.divided_by(&d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeConstraint {
    Exact(Rat),
    NonZero,
}

/// Extend a homomorphism on one vertex group over a tree of vertex groups.
#[derive(Clone, Debug)]
pub struct TreeExtension<'a> {
    pub graph: &'a TubularGraph,
    pub tree_edges: &'a [usize],
    pub root: usize,
    pub root_values: (Rat, Rat),
    /// Extra conditions on edge values; edges without an entry are free.
    pub constraints: BTreeMap<usize, EdgeConstraint>,
    /// Accept non-primitive inclusions (the extension is then only rational).
    pub allow_non_primitive: bool,
}

impl<'a> TreeExtension<'a> {
    pub fn new(graph: &'a TubularGraph, tree_edges: &'a [usize], root: usize, root_values: (Rat, Rat)) -> Self {
        TreeExtension {
            graph,
            tree_edges,
            root,
            root_values,
            constraints: BTreeMap::new(),
            allow_non_primitive: false,
        }
    }
}

fn functional_value(mn: &(Rat, Rat), x: &LatticeVec) -> Rat {
    &mn.0 * rat(&x.p) + &mn.1 * rat(&x.q)
}

/// Extend `root_values` over the vertex groups of the tree.
///
/// At a newly reached vertex the incoming edge fixes the value `s` on its
/// inclusion `(p, q)`; with `a p + b q = 1` the solutions are
/// `s (a, b) + lambda (q, -p)`. `lambda` is pinned by any exact constraint,
/// otherwise it is the smallest non-negative integer that keeps every
/// `NonZero` edge at this vertex nonzero (and keeps the vertex homomorphism
/// nontrivial when `s = 0`). Vertices outside the tree get zero.
pub fn extend_over_tree(problem: &TreeExtension) -> Result<CharacterQ, CharacterError> {
    let g = problem.graph;
    if problem.root >= g.num_vertices() {
        return Err(CharacterError::NoSuchVertex(problem.root));
    }
    let tree: BTreeSet<usize> = problem.tree_edges.iter().copied().collect();
    for &e in &tree {
        let edge = &g.edges[e];
        if edge.is_self_loop() {
            return Err(CharacterError::NotATree { edge: e });
        }
        if !problem.allow_non_primitive {
            for side in [Side::Src, Side::Dst] {
                if !edge.inclusion(side).is_primitive() {
                    return Err(CharacterError::NonPrimitiveInclusion { edge: e, side });
                }
            }
        }
    }

    let end_at = |e: usize, v: usize| -> &LatticeVec {
        let edge = &g.edges[e];
        if edge.src == v {
            &edge.inc_src
        } else {
            &edge.inc_dst
        }
    };

    let mut values: Vec<Option<(Rat, Rat)>> = vec![None; g.num_vertices()];
    values[problem.root] = Some(problem.root_values.clone());
    for &e in &tree {
        let edge = &g.edges[e];
        if edge.src == problem.root || edge.dst == problem.root {
            check_constraint(problem, e, &functional_value(&problem.root_values, end_at(e, problem.root)))?;
        }
    }

    let mut used = BTreeSet::new();
    let mut queue = VecDeque::from([problem.root]);
    while let Some(u) = queue.pop_front() {
        let here = values[u].clone().expect("queued vertices have values");
        for &e in &tree {
            let edge = &g.edges[e];
            if (edge.src != u && edge.dst != u) || used.contains(&e) {
                continue;
            }
            used.insert(e);
            let w = edge.other_end(u);
            if values[w].is_some() {
                return Err(CharacterError::NotATree { edge: e });
            }
            let s = functional_value(&here, end_at(e, u));
            let incoming = end_at(e, w);
            let c = incoming.content();
            let (pp, qq) = (&incoming.p / &c, &incoming.q / &c);
            let target = &s / rat(&c);
            let (_, alpha, beta) = ext_gcd(&pp, &qq);
            let base = (&target * rat(&alpha), &target * rat(&beta));
            let dir = (rat(&qq), -rat(&pp));

            let others: Vec<usize> = tree
                .iter()
                .copied()
                .filter(|&f| f != e && (g.edges[f].src == w || g.edges[f].dst == w))
                .collect();
            let mut forced: Option<Rat> = None;
            let mut excluded: Vec<Rat> = Vec::new();
            for &f in &others {
                let z = end_at(f, w);
                let off = functional_value(&base, z);
                let coeff = functional_value(&dir, z);
                match problem.constraints.get(&f) {
                    Some(EdgeConstraint::Exact(want)) => {
                        if coeff.is_zero() {
                            if &off != want {
                                return Err(CharacterError::InconsistentPrescription { edge: f });
                            }
                        } else {
                            let lam = (want - &off) / &coeff;
                            if forced.as_ref().is_some_and(|x| x != &lam) {
                                return Err(CharacterError::InconsistentPrescription { edge: f });
                            }
                            forced = Some(lam);
                        }
                    }
                    Some(EdgeConstraint::NonZero) => {
                        if coeff.is_zero() {
                            if off.is_zero() {
                                return Err(CharacterError::InconsistentPrescription { edge: f });
                            }
                        } else {
                            excluded.push(-&off / &coeff);
                        }
                    }
                    None => {}
                }
            }
            let lambda = match forced {
                Some(lam) => {
                    if excluded.contains(&lam) {
                        return Err(CharacterError::InconsistentPrescription { edge: e });
                    }
                    lam
                }
                None => {
                    if s.is_zero() {
                        excluded.push(Rat::zero());
                    }
                    let mut lam = Rat::zero();
                    while excluded.contains(&lam) {
                        lam += Rat::one();
                    }
                    lam
                }
            };
            values[w] = Some((&base.0 + &lambda * &dir.0, &base.1 + &lambda * &dir.1));
            queue.push_back(w);
        }
    }

    let mut chi = CharacterQ::zero(g.num_vertices());
    for (v, val) in values.into_iter().enumerate() {
        if let Some(val) = val {
            chi.vertex[v] = val;
        }
    }
    Ok(chi)
}

fn check_constraint(problem: &TreeExtension, e: usize, value: &Rat) -> Result<(), CharacterError> {
    match problem.constraints.get(&e) {
        Some(EdgeConstraint::Exact(want)) if want != value => Err(CharacterError::InconsistentPrescription { edge: e }),
        Some(EdgeConstraint::NonZero) if value.is_zero() => Err(CharacterError::InconsistentPrescription { edge: e }),
        _ => Ok(()),
    }
}

/// Edge values of an integer character, in edge order.
pub fn edge_values(chi: &CharacterZ, g: &TubularGraph) -> Vec<Int> {
    (0..g.num_edges()).map(|e| chi.edge_value(g, e).abs()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int;

    fn v(p: i64, q: i64) -> LatticeVec {
        LatticeVec::new(p, q)
    }

    fn bouquet(loops: &[((i64, i64), (i64, i64))]) -> TubularGraph {
        let mut g = TubularGraph::new();
        g.add_vertex("v0");
        for (i, &(a, b)) in loops.iter().enumerate() {
            g.add_edge(format!("e{}", i + 1), 0, 0, v(a.0, a.1), v(b.0, b.1));
        }
        g
    }

    fn burns() -> TubularGraph {
        bouquet(&[((1, 0), (0, 1))])
    }
    fn gersten() -> TubularGraph {
        bouquet(&[((1, 0), (-1, 2)), ((1, 0), (0, 1))])
    }
    fn woodhouse() -> TubularGraph {
        bouquet(&[((1, 1), (2, 0)), ((1, 1), (0, 2))])
    }
    fn wise_simple(n: i64) -> TubularGraph {
        bouquet(&[((n, 1), (1, 1)), ((1, n), (1, 1))])
    }
    fn wise_nonhopfian() -> TubularGraph {
        bouquet(&[((1, 0), (2, 2)), ((0, 1), (2, 2))])
    }

    fn chi(vertex: &[(i64, i64)], stable: &[(usize, i64)]) -> CharacterZ {
        Character {
            vertex: vertex.iter().map(|&(m, n)| (int(m), int(n))).collect(),
            stable: stable.iter().map(|&(e, x)| (e, int(x))).collect(),
        }
    }

    #[test]
    fn edge_value_examples() {
        let c = chi(&[(1, 1)], &[]);
        assert_eq!(c.edge_value(&burns(), 0), int(1));
        let w = woodhouse();
        assert_eq!(c.edge_value(&w, 0), int(2));
        assert_eq!(c.edge_value(&w, 1), int(2));
        assert!(c.satisfies(&w));
    }

    #[test]
    fn hom_basis_examples() {
        assert_eq!(hom_basis(&burns()).unwrap(), vec![chi(&[(1, 1)], &[]), chi(&[(0, 0)], &[(0, 1)])]);
        assert_eq!(hom_basis(&gersten()).unwrap().len(), 3);
        let nh = hom_basis(&wise_nonhopfian()).unwrap();
        assert_eq!(nh.len(), 2);
        assert!(nh.iter().all(|c| c.vertex[0] == (int(0), int(0))));
    }

    #[test]
    fn fbyc_examples() {
        assert_eq!(find_fbyc_character(&gersten()).unwrap(), FbycDecision::FreeByZ(chi(&[(1, 1)], &[])));
        assert_eq!(find_fbyc_character(&burns()).unwrap(), FbycDecision::FreeByZ(chi(&[(1, 1)], &[])));
        for n in 2..5 {
            assert!(matches!(find_fbyc_character(&wise_simple(n)).unwrap(), FbycDecision::NotFreeByZ { .. }));
        }
        let mut tree = TubularGraph::new();
        tree.add_vertex("a");
        tree.add_vertex("b");
        tree.add_vertex("c");
        tree.add_edge("e0", 0, 1, v(2, 0), v(0, 3));
        tree.add_edge("e1", 1, 2, v(1, 1), v(4, -1));
        let d = find_fbyc_character(&tree).unwrap();
        let c = d.character().expect("trees are free-by-Z");
        assert!(c.satisfies(&tree) && c.nonzero_on_all_edges(&tree) && c.is_surjective());
    }

    #[test]
    fn z2_is_free_by_z() {
        let d = find_fbyc_character(&bouquet(&[])).unwrap();
        assert_eq!(d, FbycDecision::FreeByZ(chi(&[(1, 0)], &[])));
    }

    #[test]
    fn normalize_examples() {
        let raw = chi(&[(2, 2)], &[(0, 5)]);
        let n = normalize_character(&raw).unwrap();
        assert_eq!(n, chi(&[(1, 1)], &[]));
        assert_eq!(normalize_character(&n).unwrap(), n);
        assert_eq!(normalize_character(&chi(&[(3, 3)], &[])).unwrap(), chi(&[(1, 1)], &[]));
        assert_eq!(normalize_character(&chi(&[(0, 0)], &[(0, 4)])), Err(CharacterError::AllZero));
    }

    #[test]
    fn extend_two_vertex_tree() {
        let mut g = TubularGraph::new();
        g.add_vertex("a");
        g.add_vertex("b");
        g.add_edge("e", 0, 1, v(0, 1), v(1, 0));
        let tree = [0];
        let p = TreeExtension::new(&g, &tree, 0, (Rat::one(), Rat::zero()));
        let h = extend_over_tree(&p).unwrap();
        assert_eq!(h.vertex[0], (Rat::one(), Rat::zero()));
        assert_eq!(h.vertex[1], (Rat::zero(), -Rat::one()));
        assert!(h.satisfies(&g));
    }

    #[test]
    fn extend_single_vertex() {
        let g = bouquet(&[]);
        let vals = (rat(&int(3)), rat(&int(-2)));
        let h = extend_over_tree(&TreeExtension::new(&g, &[], 0, vals.clone())).unwrap();
        assert_eq!(h.vertex[0], vals);
    }

    #[test]
    fn extend_star_avoiding_zero() {
        let mut g = TubularGraph::new();
        g.add_vertex("hub");
        for i in 0..3 {
            g.add_vertex(format!("leaf{i}"));
        }
        g.add_edge("e0", 0, 1, v(1, 0), v(2, 1));
        g.add_edge("e1", 0, 2, v(0, 1), v(1, 1));
        g.add_edge("e2", 0, 3, v(1, 1), v(3, 2));
        let tree = [0, 1, 2];
        let mut p = TreeExtension::new(&g, &tree, 0, (Rat::one(), Rat::from_integer(int(2))));
        for e in tree {
            p.constraints.insert(e, EdgeConstraint::NonZero);
        }
        let h = extend_over_tree(&p).unwrap();
        assert!(h.satisfies(&g));
        assert!(h.nonzero_on_all_edges(&g));
    }

    #[test]
    fn extend_errors() {
        let mut g = TubularGraph::new();
        g.add_vertex("a");
        g.add_vertex("b");
        g.add_edge("e", 0, 1, v(2, 0), v(1, 0));
        let tree = [0];
        let p = TreeExtension::new(&g, &tree, 0, (Rat::one(), Rat::zero()));
        assert_eq!(
            extend_over_tree(&p),
            Err(CharacterError::NonPrimitiveInclusion { edge: 0, side: Side::Src })
        );
        let mut p = p.clone();
        p.allow_non_primitive = true;
        let h = extend_over_tree(&p).unwrap();
        assert!(h.satisfies(&g));

        let mut g = TubularGraph::new();
        g.add_vertex("a");
        g.add_vertex("b");
        g.add_edge("e", 0, 1, v(0, 1), v(1, 0));
        let mut p = TreeExtension::new(&g, &tree, 0, (Rat::one(), Rat::zero()));
        p.constraints.insert(0, EdgeConstraint::NonZero);
        assert_eq!(extend_over_tree(&p), Err(CharacterError::InconsistentPrescription { edge: 0 }));
    }

    #[test]
    fn extend_exact_prescription_pins_parameter() {
        // a -- b -- c, ask for value 5 on the b-c edge
        let mut g = TubularGraph::new();
        for n in ["a", "b", "c"] {
            g.add_vertex(n);
        }
        g.add_edge("e0", 0, 1, v(1, 0), v(1, 0));
        g.add_edge("e1", 1, 2, v(0, 1), v(1, 0));
        let tree = [0, 1];
        let mut p = TreeExtension::new(&g, &tree, 0, (Rat::one(), Rat::zero()));
        p.constraints.insert(1, EdgeConstraint::Exact(Rat::from_integer(int(5))));
        let h = extend_over_tree(&p).unwrap();
        assert!(h.satisfies(&g));
        assert_eq!(h.edge_value(&g, 1), Rat::from_integer(int(5)));
    }

    #[test]
    fn rational_to_integral_scaling() {
        let q: CharacterQ = Character {
            vertex: vec![(Rat::new(int(1), int(2)), Rat::new(int(1), int(3)))],
            stable: BTreeMap::new(),
        };
        assert_eq!(q.to_integral(), chi(&[(3, 2)], &[]));
    }
}
