//! JSON certificates.

use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::alexander::{AlexanderReport, LaurentPoly};
use crate::characters::CharacterZ;
use crate::classify::{ClassificationReport, F2Map, Largeness, ResidualFreeness, StaVerdict};
use crate::covers::{CoverResult, StaWitness};
use crate::equitable::{EquitableReport, EquitableSet};
use crate::gog::{Presentation, Side, TubularGraph, Word};
use crate::lattice::{Int, LatticeVec, Mat2Q, Rat};

pub const FORMAT_VERSION: u32 = 1;

/// A number when it fits in an `i64`, a decimal string otherwise.
pub fn int(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn rat(x: &Rat) -> Value {
    if x.is_integer() {
        int(&x.to_integer())
    } else {
        json!(x.to_string())
    }
}

pub fn vector(x: &LatticeVec) -> Value {
    json!([int(&x.p), int(&x.q)])
}

fn matrix(m: &Mat2Q) -> Value {
    json!([[rat(&m.m[0][0]), rat(&m.m[0][1])], [rat(&m.m[1][0]), rat(&m.m[1][1])]])
}

fn side(s: Side) -> &'static str {
    match s {
        Side::Src => "src",
        Side::Dst => "dst",
    }
}

pub fn graph(g: &TubularGraph) -> Value {
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|e| {
            json!({
                "id": e.id,
                "src": g.vertices[e.src],
                "dst": g.vertices[e.dst],
                "inc_src": vector(&e.inc_src),
                "inc_dst": vector(&e.inc_dst),
            })
        })
        .collect();
    json!({ "vertices": g.vertices, "edges": edges })
}

pub fn input(source: &str, g: &TubularGraph) -> Value {
    let mut v = graph(g);
    v["source"] = json!(source);
    v["betti"] = json!(g.betti().ok());
    v
}

fn word_letters(w: &Word) -> Value {
    Value::Array(w.0.iter().map(|l| json!([l.gen, int(&l.exp)])).collect())
}

pub fn presentation(p: &Presentation, g: &TubularGraph) -> Value {
    let relators: Vec<Value> = p
        .relators
        .iter()
        .map(|r| json!({ "text": r.display_with(&p.names), "letters": word_letters(r) }))
        .collect();
    let ids = |es: &[usize]| -> Vec<String> { es.iter().map(|&e| g.edges[e].id.clone()).collect() };
    json!({
        "generators": p.names,
        "relators": relators,
        "num_generators": p.num_generators(),
        "num_relators": p.relators.len(),
        "tree_edges": ids(&p.tree_edges),
        "stable_edges": ids(&p.stable_edges),
    })
}

pub fn character(chi: &CharacterZ, g: &TubularGraph, p: &Presentation) -> Value {
    let mut vertex = Map::new();
    for (v, (m, n)) in chi.vertex.iter().enumerate() {
        vertex.insert(g.vertices[v].clone(), json!([int(m), int(n)]));
    }
    let mut gens = Map::new();
    for (name, x) in p.names.iter().zip(chi.generator_values(p)) {
        gens.insert(name.clone(), int(&x));
    }
    let mut edges = Map::new();
    for (i, e) in g.edges.iter().enumerate() {
        edges.insert(e.id.clone(), int(&chi.edge_value(g, i)));
    }
    json!({ "vertex": vertex, "generators": gens, "edge_values": edges })
}

pub fn fbyc(decision: Option<&CharacterZ>, witness: Option<usize>, g: &TubularGraph, p: &Presentation) -> Value {
    match decision {
        Some(chi) => json!({ "free_by_z": true, "character": character(chi, g, p) }),
        None => json!({
            "free_by_z": false,
            "witness_edge": witness.map(|e| g.edges[e].id.clone()),
        }),
    }
}

pub fn equitable(set: &EquitableSet, report: &EquitableReport, g: &TubularGraph) -> Value {
    let mut fams = Map::new();
    for (v, f) in set.families.iter().enumerate() {
        fams.insert(g.vertices[v].clone(), Value::Array(f.iter().map(vector).collect()));
    }
    let edges: Vec<Value> = report
        .edges
        .iter()
        .map(|b| json!({ "edge": g.edges[b.edge].id, "src_sum": int(&b.src_sum), "dst_sum": int(&b.dst_sum) }))
        .collect();
    json!({ "families": fams, "ok": report.ok, "edges": edges, "vertex_spans": report.vertex_spans.iter().map(int).collect::<Vec<_>>() })
}

pub fn cover(c: &CoverResult, base: &TubularGraph) -> Value {
    let vertices: Vec<Value> = c
        .vertex_fiber
        .iter()
        .enumerate()
        .map(|(i, l)| {
            json!({
                "name": c.cover.vertices[i],
                "base_vertex": base.vertices[l.base_vertex],
                "coset": int(&l.coset),
                "basis_change": matrix(&l.basis_change),
            })
        })
        .collect();
    let edges: Vec<Value> = c
        .edge_fiber
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let e = &c.cover.edges[i];
            json!({
                "id": e.id,
                "base_edge": base.edges[l.base_edge].id,
                "coset": int(&l.coset),
                "power": int(&l.power),
                "src": c.cover.vertices[e.src],
                "dst": c.cover.vertices[e.dst],
                "inc_src": vector(&e.inc_src),
                "inc_dst": vector(&e.inc_dst),
            })
        })
        .collect();
    json!({ "index": int(&c.index), "vertices": vertices, "edges": edges })
}

pub fn sta(w: &StaWitness, base: &TubularGraph) -> Value {
    let middle = w.stage1.as_ref().map_or(base, |c| &c.cover);
    json!({
        "status": "witness",
        "total_index": int(&w.total_index),
        "stage1": w.stage1.as_ref().map(|c| cover(c, base)),
        "stage2": cover(&w.stage2, middle),
        "all_inclusions_maximal": w.all_inclusions_maximal,
        "no_self_loops": w.no_self_loops,
        "notes": w.notes,
    })
}

pub fn sta_verdict(v: &StaVerdict, base: &TubularGraph) -> Value {
    match v {
        StaVerdict::Witness(w) => sta(w, base),
        StaVerdict::Unknown { reason } => json!({ "status": "unknown", "reason": reason }),
    }
}

pub fn poly(p: &LaurentPoly) -> Value {
    let (low, coeffs) = p.coefficients();
    json!({ "low": low, "coeffs": coeffs.iter().map(int).collect::<Vec<_>>(), "text": p.to_string() })
}

pub fn alexander(r: &AlexanderReport, g: &TubularGraph, p: &Presentation) -> Value {
    let orders: Map<String, Value> = r.cyclotomic_orders.iter().map(|(d, m)| (d.to_string(), json!(m))).collect();
    json!({
        "raw_character": character(&r.raw_character, g, p),
        "character": character(&r.character, g, p),
        "rows": r.rows,
        "cols": r.cols,
        "matrix": r.matrix.iter().map(|row| row.iter().map(poly).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "minors": r.minors.iter().map(poly).collect::<Vec<_>>(),
        "alexander_polynomial": poly(&r.alexander_poly),
        "candidate_column": p.names[r.candidate_column],
        "char_candidate": poly(&r.char_candidate),
        "cyclotomic_orders": orders,
        "non_cyclotomic_remainder": poly(&r.non_cyclotomic_remainder),
        "biorder_index": r.biorder_index,
        "theorem_violation": r.theorem_violation,
        "minor_ratio_ok": r.minor_ratio_ok,
        "fundamental_identity_ok": r.fundamental_identity_ok,
    })
}

pub fn f2_map(f: &F2Map, p: &Presentation) -> Value {
    let mut images = Map::new();
    for ((name, text), w) in f.display(p).into_iter().zip(&f.images) {
        images.insert(name, json!({ "text": text, "letters": word_letters(w) }));
    }
    Value::Object(images)
}

pub fn largeness(l: &Largeness, g: &TubularGraph) -> Value {
    match l {
        Largeness::IsZ2 => json!({ "kind": "is_z2" }),
        Largeness::SurjectsF2(f) => {
            let p = g.presentation().expect("valid graph");
            json!({ "kind": "surjects_f2", "map": f2_map(f, &p) })
        }
        Largeness::IndexTwoSurjects(c, f) => {
            let p = c.cover.presentation().expect("valid cover");
            json!({ "kind": "index_two_surjects", "cover": cover(c, g), "map": f2_map(f, &p) })
        }
    }
}

pub fn classification(r: &ClassificationReport, g: &TubularGraph) -> Value {
    let rf = match &r.residually_free {
        ResidualFreeness::Yes(n) => json!({ "verdict": true, "free_rank": n }),
        ResidualFreeness::No(reason) => json!({ "verdict": false, "reason": reason }),
    };
    let offenders: Vec<Value> =
        r.offenders.iter().map(|&(e, s)| json!({ "edge": g.edges[e].id, "side": side(s) })).collect();
    json!({
        "is_z2": r.is_z2,
        "free_by_z": r.fbyc.is_some(),
        "maximal_inclusions": r.maximal_inclusions,
        "offenders": offenders,
        "acylindrically_hyperbolic": r.acylindrically_hyperbolic,
        "residually_free": rf,
        "largeness": largeness(&r.largeness, g),
        "sta": sta_verdict(&r.sta, g),
        "biorder_index": r.alexander.as_ref().and_then(|a| a.biorder_index),
        "consistent": r.is_consistent(),
    })
}

/// The top-level certificate; sections a command does not compute stay null.
#[derive(Default)]
pub struct Certificate {
    pub input: Value,
    pub presentation: Value,
    pub fbyc: Value,
    pub equitable: Value,
    pub covers: Value,
    pub alexander: Value,
    pub classification: Value,
}

impl Certificate {
    pub fn into_value(self) -> Value {
        json!({
            "input": self.input,
            "presentation": self.presentation,
            "fbyc": self.fbyc,
            "equitable": self.equitable,
            "covers": self.covers,
            "alexander": self.alexander,
            "classification": self.classification,
            "versions": { "tubular": env!("CARGO_PKG_VERSION"), "format": FORMAT_VERSION },
        })
    }
}
