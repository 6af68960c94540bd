//! Group-theoretic verdicts on a tubular graph: maximal inclusions,
//! acylindrical hyperbolicity, residual freeness and largeness, the last with
//! explicit, checked surjections onto the free group `F(u, v)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::alexander::{alexander_report, AlexanderError, AlexanderReport};
use crate::characters::{
    extend_over_tree, find_fbyc_character, CharacterError, CharacterQ, CharacterZ, FbycDecision, TreeExtension,
};
use crate::covers::{homology2_cover, non_maximal_ends, sta_pipeline, CoverError, CoverResult, StaOutcome};
use crate::equitable::{construct_equitable, EquitableError, EquitableSet};
use crate::gog::{Generator, GraphError, Presentation, Side, TubularGraph, Word};
use crate::lattice::{integer_kernel, rat, Int, LatticeVec, Rat};

/// Generator index of `u` in the target free group.
pub const U: usize = 0;
/// Generator index of `v` in the target free group.
pub const V: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Equitable(#[from] EquitableError),
    #[error(transparent)]
    Alexander(#[from] AlexanderError),
    #[error("map has no image for generator {0}")]
    MissingGenerator(usize),
}

/// A homomorphism to `F(u, v)`: one word per generator of the presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2Map {
    pub images: Vec<Word>,
}

impl F2Map {
    pub fn display(&self, pres: &Presentation) -> Vec<(String, String)> {
        let names = ["u".to_string(), "v".to_string()];
        pres.names
            .iter()
            .zip(&self.images)
            .map(|(n, w)| {
                let s = if w.is_empty() { "1".to_string() } else { w.display_with(&names) };
                (n.clone(), s)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidualFreeness {
    /// `G` is `F_n x Z`.
    Yes(usize),
    No(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Largeness {
    IsZ2,
    SurjectsF2(F2Map),
    /// The map is defined on the presentation of `cover.cover`.
    IndexTwoSurjects(Box<CoverResult>, F2Map),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StaVerdict {
    Witness(Box<crate::covers::StaWitness>),
    /// Not covered by the construction; the question stays open.
    Unknown { reason: String },
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub is_z2: bool,
    /// The character found by the free-by-Z search, before normalization.
    pub fbyc: Option<CharacterZ>,
    /// Edge on which every character vanishes, when not free-by-Z.
    pub fbyc_witness_edge: Option<usize>,
    pub maximal_inclusions: bool,
    pub offenders: Vec<(usize, Side)>,
    pub acylindrically_hyperbolic: bool,
    pub residually_free: ResidualFreeness,
    pub largeness: Largeness,
    pub sta: StaVerdict,
    pub equitable: Option<EquitableSet>,
    pub alexander: Option<AlexanderReport>,
}

impl ClassificationReport {
    /// Checks the implications between fields.
    pub fn is_consistent(&self) -> bool {
        let fbyc_ok = self.fbyc.is_some() == self.equitable.is_some() && self.fbyc.is_some() == self.alexander.is_some();
        let sta_ok = !self.maximal_inclusions || matches!(self.sta, StaVerdict::Witness(_));
        let rf_ok = !matches!(self.residually_free, ResidualFreeness::Yes(_)) || !self.acylindrically_hyperbolic;
        let z2_ok = self.is_z2 == matches!(self.largeness, Largeness::IsZ2);
        fbyc_ok && sta_ok && rf_ok && z2_ok
    }
}

pub fn maximal_inclusions(g: &TubularGraph) -> (bool, Vec<(usize, Side)>) {
    let off = non_maximal_ends(g);
    (off.is_empty(), off)
}

/// Replace every inclusion by the primitive vector it is a multiple of.
pub fn saturate(g: &TubularGraph) -> TubularGraph {
    let mut h = g.clone();
    for e in &mut h.edges {
        e.inc_src = e.inc_src.primitive_part();
        e.inc_dst = e.inc_dst.primitive_part();
    }
    h
}

fn vectors_at(g: &TubularGraph, v: usize) -> Vec<&LatticeVec> {
    g.incident_ends(v).into_iter().map(|(e, s)| g.edges[e].inclusion(s)).collect()
}

pub fn acylindrically_hyperbolic(g: &TubularGraph) -> bool {
    (0..g.num_vertices()).any(|v| {
        let vs = vectors_at(g, v);
        vs.iter().any(|a| vs.iter().any(|b| !a.det(b).is_zero()))
    })
}

fn find(parent: &mut [usize], parity: &mut [bool], x: usize) -> (usize, bool) {
    if parent[x] == x {
        return (x, false);
    }
    let (r, p) = find(parent, parity, parent[x]);
    parent[x] = r;
    parity[x] ^= p;
    (r, parity[x])
}

pub fn residually_free(g: &TubularGraph) -> Result<ResidualFreeness, ClassifyError> {
    g.ensure_valid()?;
    let n = g.num_vertices();
    let mut base: Vec<Option<LatticeVec>> = vec![None; n];
    for (v, b) in base.iter_mut().enumerate() {
        for x in vectors_at(g, v) {
            if !x.is_primitive() {
                return Ok(ResidualFreeness::No(format!(
                    "inclusion ({},{}) at {} is not maximal",
                    x.p, x.q, g.vertices[v]
                )));
            }
            match b {
                None => *b = Some(x.clone()),
                Some(p) if x == p || *x == -&*p => {}
                Some(p) => {
                    return Ok(ResidualFreeness::No(format!(
                        "inclusions ({},{}) and ({},{}) at {} span different cyclic subgroups",
                        p.p, p.q, x.p, x.q, g.vertices[v]
                    )))
                }
            }
        }
    }
    let sign = |v: usize, x: &LatticeVec| base[v].as_ref().is_some_and(|b| b != x);
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parity = vec![false; n];
    for e in &g.edges {
        let want = sign(e.src, &e.inc_src) ^ sign(e.dst, &e.inc_dst);
        let (ra, pa) = find(&mut parent, &mut parity, e.src);
        let (rb, pb) = find(&mut parent, &mut parity, e.dst);
        if ra == rb {
            if pa ^ pb != want {
                return Ok(ResidualFreeness::No(format!("orientations cannot be chosen consistently around edge {}", e.id)));
            }
        } else {
            parent[ra] = rb;
            parity[ra] = pa ^ pb ^ want;
        }
    }
    let pres = g.presentation()?;
    let rank = integer_kernel(&pres.relation_matrix()).len();
    Ok(ResidualFreeness::Yes(rank - 1))
}

fn commutator(a: &Word, b: &Word) -> Word {
    a.concat(b).concat(&a.inverse()).concat(&b.inverse()).reduce()
}

/// True when every relator dies and the image is non-abelian.
pub fn verify_f2_map(pres: &Presentation, f: &F2Map) -> Result<bool, ClassifyError> {
    if f.images.len() < pres.num_generators() {
        return Err(ClassifyError::MissingGenerator(f.images.len()));
    }
    if !pres.relators.iter().all(|r| r.substitute(&f.images).reduce().is_empty()) {
        return Ok(false);
    }
    let imgs = &f.images[..pres.num_generators()];
    Ok(imgs.iter().enumerate().any(|(i, a)| imgs[i + 1..].iter().any(|b| !commutator(a, b).is_empty())))
}

/// Where a vertex group goes: powers of `u`, of `v`, or of `v u v^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Trivial,
    U,
    V,
    ConjU,
}

/// Vertex homomorphisms into cyclic subgroups of `F(u, v)`, rational until
/// [`Assignment::into_map`] clears denominators.
struct Assignment {
    funcs: Vec<(Rat, Rat)>,
    target: Vec<Target>,
    stable: BTreeMap<usize, Word>,
}

impl Assignment {
    fn new(n: usize) -> Self {
        Assignment {
            funcs: vec![(Rat::zero(), Rat::zero()); n],
            target: vec![Target::Trivial; n],
            stable: BTreeMap::new(),
        }
    }

    /// Copy the part of `chi` living on `verts`, scaled by `c`.
    fn take(&mut self, chi: &CharacterQ, verts: &BTreeSet<usize>, c: &Rat, t: Target) {
        for &v in verts {
            let (m, n) = &chi.vertex[v];
            self.funcs[v] = (m * c, n * c);
            self.target[v] = t;
        }
    }

    fn into_map(self, pres: &Presentation) -> F2Map {
        let l = self.funcs.iter().flat_map(|(m, n)| [m, n]).fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        let l = rat(&l);
        let power = |v: usize, x: &Rat| -> Word {
            let k = (x * &l).to_integer();
            if k.is_zero() {
                return Word::empty();
            }
            match self.target[v] {
                Target::Trivial => Word::empty(),
                Target::U => Word::letter(U, k),
                Target::V => Word::letter(V, k),
                Target::ConjU => {
                    let mut w = Word::letter(V, 1);
                    w.push(U, k);
                    w.push(V, Int::from(-1));
                    w
                }
            }
        };
        let images = pres
            .generators
            .iter()
            .map(|g| match *g {
                Generator::X(v) => power(v, &self.funcs[v].0),
                Generator::Y(v) => power(v, &self.funcs[v].1),
                Generator::Stable(e) => self.stable.get(&e).cloned().unwrap_or_else(Word::empty),
            })
            .collect();
        F2Map { images }
    }
}

/// The functional `z -> det(x_sat, z)`, which kills `x`.
fn killer(x: &LatticeVec) -> (Rat, Rat) {
    let s = x.primitive_part();
    (rat(&-s.q), rat(&s.p))
}

fn value(f: &(Rat, Rat), x: &LatticeVec) -> Rat {
    &f.0 * rat(&x.p) + &f.1 * rat(&x.q)
}

/// Vertices reachable from `root` through `edges`, and the extension of
/// `root_values` over them.
fn extend_side(
    g: &TubularGraph,
    edges: &BTreeSet<usize>,
    root: usize,
    root_values: (Rat, Rat),
) -> Result<(BTreeSet<usize>, CharacterQ), ClassifyError> {
    let verts = g.reachable(root, edges);
    let side: Vec<usize> = edges
        .iter()
        .copied()
        .filter(|&e| verts.contains(&g.edges[e].src) && verts.contains(&g.edges[e].dst))
        .collect();
    let mut problem = TreeExtension::new(g, &side, root, root_values);
    problem.allow_non_primitive = true;
    Ok((verts, extend_over_tree(&problem)?))
}

/// Cut tree edge `cut`; each side gets a homomorphism killing the cut
/// inclusion at its end, extended over that side.
fn split_at(
    g: &TubularGraph,
    tree: &BTreeSet<usize>,
    cut: usize,
) -> Result<[(BTreeSet<usize>, CharacterQ); 2], ClassifyError> {
    let mut rest = tree.clone();
    rest.remove(&cut);
    let e = &g.edges[cut];
    let a = extend_side(g, &rest, e.src, killer(&e.inc_src))?;
    let b = extend_side(g, &rest, e.dst, killer(&e.inc_dst))?;
    Ok([a, b])
}

/// Tree path from `from` to `to` as a list of edges.
fn tree_path(g: &TubularGraph, tree: &BTreeSet<usize>, from: usize, to: usize) -> Vec<usize> {
    let mut prev: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &i in tree {
            let e = &g.edges[i];
            if e.src == x || e.dst == x {
                let y = e.other_end(x);
                if seen.insert(y) {
                    prev.insert(y, (x, i));
                    queue.push_back(y);
                }
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, i) = prev[&cur];
        path.push(i);
        cur = p;
    }
    path.reverse();
    path
}

fn tree_case(g: &TubularGraph, tree: &BTreeSet<usize>) -> Result<Assignment, ClassifyError> {
    let cut = *tree.iter().next().expect("tree with an edge");
    let [(va, ca), (vb, cb)] = split_at(g, tree, cut)?;
    let mut asg = Assignment::new(g.num_vertices());
    asg.take(&ca, &va, &Rat::one(), Target::U);
    asg.take(&cb, &vb, &Rat::one(), Target::V);
    Ok(asg)
}

/// One loop through several vertices, stable edge `t`.
fn loop_case(g: &TubularGraph, tree: &BTreeSet<usize>, t: usize) -> Result<Assignment, ClassifyError> {
    let te = &g.edges[t];
    let n = g.num_vertices();
    let mut asg = Assignment::new(n);
    asg.stable.insert(t, Word::letter(V, 1));
    let path = tree_path(g, tree, te.dst, te.src);
    let mut on_loop = vec![te.dst];
    for &i in &path {
        let last = *on_loop.last().unwrap();
        on_loop.push(g.edges[i].other_end(last));
    }
    let loop_edges: BTreeSet<usize> = path.iter().copied().chain([t]).collect();
    let hanging: BTreeSet<usize> = tree.iter().copied().filter(|e| !loop_edges.contains(e)).collect();

    // a loop vertex whose two loop inclusions are parallel takes everything
    let mut order = on_loop.clone();
    order.sort_unstable();
    for w in order {
        let ends: Vec<&LatticeVec> = g
            .incident_ends(w)
            .into_iter()
            .filter(|(e, _)| loop_edges.contains(e))
            .map(|(e, s)| g.edges[e].inclusion(s))
            .collect();
        if ends.len() == 2 && ends[0].det(ends[1]).is_zero() {
            let (verts, chi) = extend_side(g, &hanging, w, killer(ends[0]))?;
            asg.take(&chi, &verts, &Rat::one(), Target::U);
            return Ok(asg);
        }
    }

    // cut the first path edge: the far side (holding the src of t) goes to
    // powers of u, the near side to conjugates by v, matched across t
    let [(va, ca), (vb, cb)] = split_at(g, tree, path[0])?;
    let (near, far) = if va.contains(&te.dst) { ((va, ca), (vb, cb)) } else { ((vb, cb), (va, ca)) };
    let a_val = value(&far.1.vertex[te.src], &te.inc_src);
    let b_val = value(&near.1.vertex[te.dst], &te.inc_dst);
    let (cf, cn) = match (a_val.is_zero(), b_val.is_zero()) {
        (false, false) => (b_val, a_val),
        (true, true) => (Rat::one(), Rat::one()),
        (true, false) => (Rat::one(), Rat::zero()),
        (false, true) => (Rat::zero(), Rat::one()),
    };
    asg.take(&far.1, &far.0, &cf, Target::U);
    asg.take(&near.1, &near.0, &cn, Target::ConjU);
    Ok(asg)
}

fn self_loop_case(g: &TubularGraph, tree: &BTreeSet<usize>, t: usize) -> Result<Option<Assignment>, ClassifyError> {
    let te = &g.edges[t];
    let w = te.src;
    let mut asg = Assignment::new(g.num_vertices());
    asg.stable.insert(t, Word::letter(V, 1));
    if te.inc_src.det(&te.inc_dst).is_zero() {
        let (verts, chi) = extend_side(g, tree, w, killer(&te.inc_src))?;
        asg.take(&chi, &verts, &Rat::one(), Target::U);
        return Ok(Some(asg));
    }
    // kill the loop vertex and map the branch behind its first tree edge
    let Some(&(e, side)) = g.incident_ends(w).iter().find(|(e, _)| tree.contains(e)) else {
        return Ok(None);
    };
    let edge = &g.edges[e];
    let other = match side {
        Side::Src => Side::Dst,
        Side::Dst => Side::Src,
    };
    let mut rest = tree.clone();
    rest.remove(&e);
    let (verts, chi) = extend_side(g, &rest, edge.vertex(other), killer(edge.inclusion(other)))?;
    asg.take(&chi, &verts, &Rat::one(), Target::U);
    Ok(Some(asg))
}

/// An explicit surjection of `G` onto a non-abelian subgroup of `F(u, v)`,
/// checked against the presentation of `g` before it is returned.
pub fn surject_f2(g: &TubularGraph) -> Result<Option<F2Map>, ClassifyError> {
    let pres = g.presentation()?;
    let tree: BTreeSet<usize> = pres.tree_edges.iter().copied().collect();
    let asg = match pres.stable_edges.as_slice() {
        [] if tree.is_empty() => return Ok(None),
        [] => tree_case(g, &tree)?,
        [t] if g.edges[*t].is_self_loop() => match self_loop_case(g, &tree, *t)? {
            Some(a) => a,
            None => return Ok(None),
        },
        [t] => loop_case(g, &tree, *t)?,
        [t1, t2, ..] => {
            let mut a = Assignment::new(g.num_vertices());
            a.stable.insert(*t1, Word::letter(U, 1));
            a.stable.insert(*t2, Word::letter(V, 1));
            a
        }
    };
    let map = asg.into_map(&pres);
    Ok(if verify_f2_map(&pres, &map)? { Some(map) } else { None })
}

pub fn largeness(g: &TubularGraph) -> Result<Option<Largeness>, ClassifyError> {
    g.ensure_valid()?;
    if g.num_edges() == 0 {
        return Ok(Some(Largeness::IsZ2));
    }
    if let Some(f) = surject_f2(g)? {
        return Ok(Some(Largeness::SurjectsF2(f)));
    }
    let cover = homology2_cover(g)?;
    Ok(surject_f2(&cover.cover)?.map(|f| Largeness::IndexTwoSurjects(Box::new(cover), f)))
}

pub fn classify_all(g: &TubularGraph) -> Result<ClassificationReport, ClassifyError> {
    g.ensure_valid()?;
    let (maximal, offenders) = maximal_inclusions(g);
    let (fbyc, fbyc_witness_edge) = match find_fbyc_character(g)? {
        FbycDecision::FreeByZ(chi) => (Some(chi), None),
        FbycDecision::NotFreeByZ { witness_edge } => (None, Some(witness_edge)),
    };
    let (equitable, alexander) = match &fbyc {
        Some(chi) => (Some(construct_equitable(g, chi)?), Some(alexander_report(g, chi)?)),
        None => (None, None),
    };
    let sta = match sta_pipeline(g)? {
        StaOutcome::Witness(w) => StaVerdict::Witness(w),
        StaOutcome::Inapplicable { reason } => StaVerdict::Unknown { reason },
    };
    let largeness = largeness(g)?
        .ok_or_else(|| CoverError::CheckFailed("no surjection onto F2 found on the double cover".into()))?;
    Ok(ClassificationReport {
        is_z2: g.num_vertices() == 1 && g.num_edges() == 0,
        fbyc,
        fbyc_witness_edge,
        maximal_inclusions: maximal,
        offenders,
        acylindrically_hyperbolic: acylindrically_hyperbolic(g),
        residually_free: residually_free(g)?,
        largeness,
        sta,
        equitable,
        alexander,
    })
}
