//! Equitable sets: checking the edge compatibility condition and building
//! two-vector equitable sets from a character that is nonzero on every edge.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::characters::CharacterZ;
use crate::gog::{GraphError, TubularGraph};
use crate::lattice::{rat, Int, LatticeVec, Mat2Q, Rat, RationalVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquitableError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no family given for vertex {0}")]
    MissingVertexFamily(usize),
    #[error("character vanishes on edge #{0}")]
    CharacterZeroOnEdge(usize),
    #[error("character does not satisfy the equation of edge #{0}")]
    NotACharacter(usize),
}

/// One finite family of vectors per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquitableSet {
    pub families: Vec<Vec<LatticeVec>>,
}

impl EquitableSet {
    pub fn scaled(&self, c: &Int) -> EquitableSet {
        EquitableSet { families: self.families.iter().map(|f| f.iter().map(|x| x.scale(c)).collect()).collect() }
    }
}

/// `|det2(x, s)|`.
pub fn intersection_number(x: &LatticeVec, s: &LatticeVec) -> Int {
    x.det(s).abs()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeBalance {
    pub edge: usize,
    pub src_sum: Int,
    pub dst_sum: Int,
}

impl EdgeBalance {
    pub fn balanced(&self) -> bool {
        self.src_sum == self.dst_sum
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquitableReport {
    pub ok: bool,
    pub edges: Vec<EdgeBalance>,
    /// `|det|` of the first non-parallel pair in each family, or 0.
    pub vertex_spans: Vec<Int>,
}

fn family_span(family: &[LatticeVec]) -> Int {
    for (i, x) in family.iter().enumerate() {
        for y in &family[i + 1..] {
            let d = x.det(y).abs();
            if !d.is_zero() {
                return d;
            }
        }
    }
    Int::zero()
}

pub fn verify_equitable(g: &TubularGraph, set: &EquitableSet) -> Result<EquitableReport, EquitableError> {
    g.ensure_valid()?;
    for v in 0..g.num_vertices() {
        match set.families.get(v) {
            Some(f) if !f.is_empty() => {}
            _ => return Err(EquitableError::MissingVertexFamily(v)),
        }
    }
    let sum = |v: usize, s: &LatticeVec| -> Int { set.families[v].iter().map(|x| intersection_number(x, s)).sum() };
    let edges: Vec<EdgeBalance> = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| EdgeBalance { edge: i, src_sum: sum(e.src, &e.inc_src), dst_sum: sum(e.dst, &e.inc_dst) })
        .collect();
    let vertex_spans: Vec<Int> = (0..g.num_vertices()).map(|v| family_span(&set.families[v])).collect();
    let ok = edges.iter().all(EdgeBalance::balanced) && vertex_spans.iter().all(|d| !d.is_zero());
    Ok(EquitableReport { ok, edges, vertex_spans })
}

/// Everything computed on the way to an equitable set.
#[derive(Clone, Debug)]
pub struct EquitableConstruction {
    pub set: EquitableSet,
    /// For each tree edge in contraction order, the matrix taking the absorbed
    /// vertex's basis into root coordinates.
    pub contractions: Vec<(usize, Mat2Q)>,
    /// Per vertex, the map into root coordinates (identity at the root).
    pub vertex_maps: Vec<Mat2Q>,
    /// Edges whose values fed the choice of points.
    pub bouquet_edges: Vec<usize>,
    /// The two points at the root, before clearing denominators.
    pub points: [RationalVec; 2],
    pub multiplier: Int,
}

pub fn construct_equitable(g: &TubularGraph, chi: &CharacterZ) -> Result<EquitableSet, EquitableError> {
    construct_equitable_detailed(g, chi).map(|c| c.set)
}

/// Build an equitable set with two vectors per vertex.
///
/// Each tree edge is contracted with the matrix sending
/// `(inc_child, k_child)` to `(inc_parent, k_root)` in root coordinates, where
/// `k_v = (n_v, -m_v)` spans the kernel of the character at `v`. Both pairs
/// have determinant `-chi(edge)`, so the matrix has determinant one. On the
/// resulting bouquet, two points on the line `chi = l` are placed just below
/// the smallest and just above the largest crossing parameter of the loop
/// inclusions, which makes every loop equation telescope. The points are then
/// pulled back to every vertex and all denominators cleared together.
///
/// When the graph is a tree the tree edges themselves serve as loops.
pub fn construct_equitable_detailed(g: &TubularGraph, chi: &CharacterZ) -> Result<EquitableConstruction, EquitableError> {
    g.ensure_valid()?;
    for e in 0..g.num_edges() {
        if chi.edge_value(g, e).is_zero() {
            return Err(EquitableError::CharacterZeroOnEdge(e));
        }
        if !chi.is_balanced_on(g, e) {
            return Err(EquitableError::NotACharacter(e));
        }
    }

    let nv = g.num_vertices();
    let kernel_dir = |v: usize| {
        let (m, n) = &chi.vertex[v];
        LatticeVec { p: n.clone(), q: -m }
    };
    let root_k = kernel_dir(0).to_rational();
    let mut maps: Vec<Option<Mat2Q>> = vec![None; nv];
    maps[0] = Some(Mat2Q::identity());
    let mut contractions = Vec::new();
    for (e, parent, child) in g.spanning_tree_ordered() {
        let edge = &g.edges[e];
        let (inc_parent, inc_child) =
            if edge.src == parent { (&edge.inc_src, &edge.inc_dst) } else { (&edge.inc_dst, &edge.inc_src) };
        let q_parent = maps[parent].clone().expect("parents are contracted first");
        let plus = Mat2Q::from_columns(&q_parent.apply_int(inc_parent), &root_k);
        let minus = Mat2Q::from_int_columns(inc_child, &kernel_dir(child));
        let p = plus.mul(&minus.inverse().expect("character is nonzero on the edge"));
        debug_assert!(p.det().is_one());
        contractions.push((e, p.clone()));
        maps[child] = Some(p);
    }
    let maps: Vec<Mat2Q> = maps.into_iter().map(|m| m.expect("graph is connected")).collect();

    let non_tree = g.non_tree_edges();
    let bouquet_edges: Vec<usize> = if non_tree.is_empty() { (0..g.num_edges()).collect() } else { non_tree };

    let (m, n) = (rat(&chi.vertex[0].0), rat(&chi.vertex[0].1));
    let points = if bouquet_edges.is_empty() {
        [RationalVec::new(Rat::one(), Rat::zero()), RationalVec::new(Rat::zero(), Rat::one())]
    } else {
        // pivot coordinate has a nonzero value; the other one is free
        let swap = m.is_zero();
        let (pivot, other) = if swap { (n.clone(), m.clone()) } else { (m.clone(), n.clone()) };
        let free = |v: &RationalVec| if swap { v.p.clone() } else { v.q.clone() };
        let pair = |v: &RationalVec| &m * &v.p + &n * &v.q;

        let first = &g.edges[bouquet_edges[0]];
        let l = pair(&maps[first.src].apply_int(&first.inc_src));
        let mut crossings = Vec::new();
        for &e in &bouquet_edges {
            let edge = &g.edges[e];
            for (v, inc) in [(edge.src, &edge.inc_src), (edge.dst, &edge.inc_dst)] {
                let w = maps[v].apply_int(inc);
                crossings.push(&l * free(&w) / pair(&w));
            }
        }
        let lo = crossings.iter().min().expect("nonempty") - Rat::one();
        let hi = crossings.iter().max().expect("nonempty") + Rat::one();
        let point = |y: Rat| {
            let x = (&l - &other * &y) / &pivot;
            if swap {
                RationalVec::new(y, x)
            } else {
                RationalVec::new(x, y)
            }
        };
        [point(lo), point(hi)]
    };

    let pulled: Vec<[RationalVec; 2]> = maps
        .iter()
        .map(|q| {
            let inv = q.inverse().expect("contractions are invertible");
            [inv.apply(&points[0]), inv.apply(&points[1])]
        })
        .collect();
    let multiplier = pulled.iter().flatten().fold(Int::one(), |acc, v| acc.lcm(&v.denominator_lcm()));
    let scale = rat(&multiplier);
    let families = pulled
        .iter()
        .map(|pair| {
            pair.iter().map(|v| v.scale(&scale).to_lattice().expect("denominators cleared")).collect()
        })
        .collect();

    Ok(EquitableConstruction {
        set: EquitableSet { families },
        contractions,
        vertex_maps: maps,
        bouquet_edges,
        points,
        multiplier,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{find_fbyc_character, Character, FbycDecision};
    use crate::lattice::int;
    use crate::random::{random_fbyc_graph, RandomGraphConfig};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

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

    fn chi11() -> CharacterZ {
        Character { vertex: vec![(int(1), int(1))], stable: Default::default() }
    }

    fn fam(vs: &[(i64, i64)]) -> Vec<LatticeVec> {
        vs.iter().map(|&(p, q)| v(p, q)).collect()
    }

    #[test]
    fn intersection_numbers() {
        assert_eq!(intersection_number(&v(1, 0), &v(0, 1)), int(1));
        assert_eq!(intersection_number(&v(2, -1), &v(1, 0)), int(1));
        assert_eq!(intersection_number(&v(3, 6), &v(1, 2)), int(0));
    }

    #[test]
    fn verify_examples() {
        let burns = bouquet(&[((1, 0), (0, 1))]);
        let r = verify_equitable(&burns, &EquitableSet { families: vec![fam(&[(1, 0), (0, 1)])] }).unwrap();
        assert!(r.ok);
        assert_eq!((r.edges[0].src_sum.clone(), r.edges[0].dst_sum.clone()), (int(1), int(1)));
        let r = verify_equitable(&burns, &EquitableSet { families: vec![fam(&[(2, -1), (-1, 2)])] }).unwrap();
        assert!(r.ok);
        assert_eq!(r.edges[0].src_sum, int(3));

        let gersten = bouquet(&[((1, 0), (-1, 2)), ((1, 0), (0, 1))]);
        let r = verify_equitable(&gersten, &EquitableSet { families: vec![fam(&[(1, 0), (0, 1)])] }).unwrap();
        assert!(!r.ok);
        assert_eq!((r.edges[0].src_sum.clone(), r.edges[0].dst_sum.clone()), (int(1), int(3)));

        assert_eq!(
            verify_equitable(&burns, &EquitableSet { families: vec![] }),
            Err(EquitableError::MissingVertexFamily(0))
        );
        let parallel = verify_equitable(&burns, &EquitableSet { families: vec![fam(&[(1, 1), (2, 2)])] }).unwrap();
        assert!(!parallel.ok);
    }

    #[test]
    fn construct_burns_and_gersten() {
        let burns = bouquet(&[((1, 0), (0, 1))]);
        let c = construct_equitable_detailed(&burns, &chi11()).unwrap();
        assert_eq!(c.set.families, vec![fam(&[(2, -1), (-1, 2)])]);
        let r = verify_equitable(&burns, &c.set).unwrap();
        assert!(r.ok);
        assert_eq!(r.edges[0].src_sum, int(3));
        assert_eq!(r.vertex_spans, vec![int(3)]);

        let gersten = bouquet(&[((1, 0), (-1, 2)), ((1, 0), (0, 1))]);
        let set = construct_equitable(&gersten, &chi11()).unwrap();
        assert_eq!(set.families, vec![fam(&[(2, -1), (-2, 3)])]);
        let r = verify_equitable(&gersten, &set).unwrap();
        assert!(r.ok);
        assert!(r.edges.iter().all(|b| b.src_sum == int(4) && b.dst_sum == int(4)));
    }

    #[test]
    fn construct_woodhouse() {
        let g = bouquet(&[((1, 1), (2, 0)), ((1, 1), (0, 2))]);
        let set = construct_equitable(&g, &chi11()).unwrap();
        assert!(verify_equitable(&g, &set).unwrap().ok);
    }

    #[test]
    fn wise_simple_has_no_character() {
        let g = bouquet(&[((2, 1), (1, 1)), ((1, 2), (1, 1))]);
        assert!(matches!(find_fbyc_character(&g).unwrap(), FbycDecision::NotFreeByZ { .. }));
        // every character is trivial on the vertex group
        let chi = Character { vertex: vec![(int(0), int(0))], stable: Default::default() };
        assert_eq!(construct_equitable(&g, &chi), Err(EquitableError::CharacterZeroOnEdge(0)));
    }

    #[test]
    fn vertical_character_swaps_coordinates() {
        // chi = (0, 1): m = 0 forces the swapped parametrisation
        let g = bouquet(&[((1, 1), (3, 1)), ((0, 1), (5, 1))]);
        let chi = Character { vertex: vec![(int(0), int(1))], stable: Default::default() };
        let c = construct_equitable_detailed(&g, &chi).unwrap();
        assert!(verify_equitable(&g, &c.set).unwrap().ok);
    }

    #[test]
    fn trees_and_contractions() {
        let mut g = TubularGraph::new();
        for n in ["a", "b", "c"] {
            g.add_vertex(n);
        }
        g.add_edge("e0", 0, 1, v(1, 0), v(0, 1));
        g.add_edge("e1", 1, 2, v(1, 2), v(3, 1));
        let chi = match find_fbyc_character(&g).unwrap() {
            FbycDecision::FreeByZ(c) => c,
            other => panic!("{other:?}"),
        };
        let c = construct_equitable_detailed(&g, &chi).unwrap();
        assert_eq!(c.contractions.len(), 2);
        for (_, p) in &c.contractions {
            assert!(p.det().abs().is_one());
        }
        assert!(verify_equitable(&g, &c.set).unwrap().ok);
        assert!(c.set.families.iter().all(|f| f.len() == 2));
    }

    #[test]
    fn single_vertex_without_edges() {
        let g = bouquet(&[]);
        let chi = Character { vertex: vec![(int(1), int(0))], stable: Default::default() };
        let set = construct_equitable(&g, &chi).unwrap();
        assert!(verify_equitable(&g, &set).unwrap().ok);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip_on_random_fbyc_graphs(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (g, chi) = random_fbyc_graph(&mut rng, &RandomGraphConfig::default());
            let c = construct_equitable_detailed(&g, &chi).unwrap();
            for (_, p) in &c.contractions {
                prop_assert!(p.det().is_one());
            }
            let [x, y] = &c.points;
            prop_assert!(!x.det(y).is_zero());
            let r = verify_equitable(&g, &c.set).unwrap();
            prop_assert!(r.ok, "{:?}", r);
        }

        #[test]
        fn global_scaling_preserves_validity(seed in any::<u64>(), k in 1i64..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (g, chi) = random_fbyc_graph(&mut rng, &RandomGraphConfig::default());
            let set = construct_equitable(&g, &chi).unwrap();
            let scaled = set.scaled(&int(k));
            let r0 = verify_equitable(&g, &set).unwrap();
            let r1 = verify_equitable(&g, &scaled).unwrap();
            prop_assert!(r1.ok);
            for (a, b) in r0.edges.iter().zip(&r1.edges) {
                prop_assert_eq!(&a.src_sum * k, b.src_sum.clone());
            }
        }
    }
}
