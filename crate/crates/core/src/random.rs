//! Random tubular graphs for testing and the CLI's fuzz mode.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::characters::{Character, CharacterZ};
use crate::gog::TubularGraph;
use crate::lattice::{Int, LatticeVec};

#[derive(Clone, Copy, Debug)]
pub struct RandomGraphConfig {
    /// Vertices in the underlying tree; at least one.
    pub max_vertices: usize,
    /// Extra edges on top of the tree (self loops allowed).
    pub max_loops: usize,
    /// Bound on the absolute value of raw coordinates.
    pub max_coord: i64,
}

impl Default for RandomGraphConfig {
    fn default() -> Self {
        RandomGraphConfig { max_vertices: 6, max_loops: 3, max_coord: 3 }
    }
}

fn nonzero_vec<R: Rng>(rng: &mut R, bound: i64) -> LatticeVec {
    loop {
        let v = LatticeVec::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        if !v.is_zero() {
            return v;
        }
    }
}

/// Shape of a random graph: number of vertices and the `(src, dst)` pairs,
/// tree edges first.
fn random_shape<R: Rng>(rng: &mut R, cfg: &RandomGraphConfig) -> (usize, Vec<(usize, usize)>) {
    let nv = rng.gen_range(1..=cfg.max_vertices.max(1));
    let mut ends = Vec::new();
    for child in 1..nv {
        let parent = rng.gen_range(0..child);
        if rng.gen_bool(0.5) {
            ends.push((parent, child));
        } else {
            ends.push((child, parent));
        }
    }
    for _ in 0..rng.gen_range(0..=cfg.max_loops) {
        ends.push((rng.gen_range(0..nv), rng.gen_range(0..nv)));
    }
    (nv, ends)
}

fn empty_graph(nv: usize) -> TubularGraph {
    let mut g = TubularGraph::new();
    for v in 0..nv {
        g.add_vertex(format!("v{v}"));
    }
    g
}

/// A random valid tubular graph with arbitrary nonzero inclusions.
pub fn random_graph<R: Rng>(rng: &mut R, cfg: &RandomGraphConfig) -> TubularGraph {
    let (nv, ends) = random_shape(rng, cfg);
    let mut g = empty_graph(nv);
    for (i, (s, d)) in ends.into_iter().enumerate() {
        let a = nonzero_vec(rng, cfg.max_coord);
        let b = nonzero_vec(rng, cfg.max_coord);
        g.add_edge(format!("e{i}"), s, d, a, b);
    }
    g
}

/// A random free-by-Z tubular graph together with a character that is
/// nonzero on every edge group.
///
/// The vertex values are drawn first; each edge then takes random vectors
/// `a`, `b` with nonzero values and rescales them to `a * l_b / g` and
/// `b * l_a / g`, `g = gcd(l_a, l_b)`, so both ends agree.
pub fn random_fbyc_graph<R: Rng>(rng: &mut R, cfg: &RandomGraphConfig) -> (TubularGraph, CharacterZ) {
    let (nv, ends) = random_shape(rng, cfg);
    let mut g = empty_graph(nv);
    let vertex: Vec<(Int, Int)> = (0..nv)
        .map(|_| {
            let v = nonzero_vec(rng, 2);
            (v.p, v.q)
        })
        .collect();
    let chi = Character { vertex, stable: Default::default() };
    let valued = |rng: &mut R, v: usize| loop {
        let x = nonzero_vec(rng, cfg.max_coord);
        let l = chi.value_on(v, &x);
        if !l.is_zero() {
            return (x, l);
        }
    };
    for (i, (s, d)) in ends.into_iter().enumerate() {
        let (a, la) = valued(rng, s);
        let (b, lb) = valued(rng, d);
        let gg = la.gcd(&lb);
        let a = a.scale(&(&lb / &gg).abs());
        let mut b = b.scale(&(&la / &gg).abs());
        if chi.value_on(s, &a) != chi.value_on(d, &b) {
            b = -&b;
        }
        g.add_edge(format!("e{i}"), s, d, a, b);
    }
    debug_assert!(chi.satisfies(&g));
    (g, chi)
}

/// Like [`random_fbyc_graph`] but with every inclusion primitive: edges are
/// chosen as pairs of primitive vectors with equal values, retrying as needed.
pub fn random_fbyc_graph_primitive<R: Rng>(rng: &mut R, cfg: &RandomGraphConfig) -> (TubularGraph, CharacterZ) {
    loop {
        let (g, chi) = random_fbyc_graph(rng, cfg);
        if g.edges.iter().all(|e| e.inc_src.is_primitive() && e.inc_dst.is_primitive()) {
            return (g, chi);
        }
        // fall back: replace each edge by primitive parts when that keeps the
        // edge equation, otherwise resample
        let mut h = empty_graph(g.num_vertices());
        let mut ok = true;
        for e in &g.edges {
            let (a, b) = (e.inc_src.primitive_part(), e.inc_dst.primitive_part());
            if chi.value_on(e.src, &a) != chi.value_on(e.dst, &b) {
                ok = false;
                break;
            }
            h.add_edge(e.id.clone(), e.src, e.dst, a, b);
        }
        if ok {
            return (h, chi);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_graphs_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = RandomGraphConfig::default();
        for _ in 0..200 {
            let g = random_graph(&mut rng, &cfg);
            assert!(g.validate().is_empty());
            let (g, chi) = random_fbyc_graph(&mut rng, &cfg);
            assert!(g.validate().is_empty());
            assert!(chi.satisfies(&g) && chi.nonzero_on_all_edges(&g));
        }
    }

    #[test]
    fn primitive_variant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let (g, chi) = random_fbyc_graph_primitive(&mut rng, &RandomGraphConfig::default());
            assert!(g.edges.iter().all(|e| e.inc_src.is_primitive() && e.inc_dst.is_primitive()));
            assert!(chi.satisfies(&g) && chi.nonzero_on_all_edges(&g));
        }
    }
}
