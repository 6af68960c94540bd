//! Line-oriented text format for tubular graphs.
//!
//! ```text
//! # comment
//! vertex v
//! edge t: v(1,0) -> v(0,1)
//! ```

use thiserror::Error;

use crate::equitable::EquitableSet;
use crate::gog::TubularGraph;
use crate::lattice::{Int, LatticeVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\''))
}

/// `(p,q)` with optional whitespace.
fn parse_vector(s: &str, line: usize) -> Result<LatticeVec, ParseError> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| err(line, format!("expected (p,q), found `{s}`")))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(err(line, format!("expected two coordinates in `{s}`")));
    }
    let coord = |t: &str| t.parse::<Int>().map_err(|_| err(line, format!("`{t}` is not an integer")));
    Ok(LatticeVec { p: coord(parts[0])?, q: coord(parts[1])? })
}

/// `NAME(p,q)`.
fn parse_end(s: &str, line: usize) -> Result<(String, LatticeVec), ParseError> {
    let s = s.trim();
    let open = s.find('(').ok_or_else(|| err(line, format!("expected NAME(p,q), found `{s}`")))?;
    let name = s[..open].trim();
    if !is_name(name) {
        return Err(err(line, format!("bad vertex name `{name}`")));
    }
    Ok((name.to_string(), parse_vector(&s[open..], line)?))
}

pub fn parse_graph(text: &str) -> Result<TubularGraph, ParseError> {
    let mut g = TubularGraph::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = strip_comment(raw);
        if s.is_empty() {
            continue;
        }
        let (kw, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let rest = rest.trim();
        match kw {
            "vertex" => {
                if !is_name(rest) {
                    return Err(err(line, format!("bad vertex name `{rest}`")));
                }
                if g.vertex_index(rest).is_some() {
                    return Err(err(line, format!("vertex `{rest}` declared twice")));
                }
                g.add_vertex(rest);
            }
            "edge" => {
                let (id, body) = rest.split_once(':').ok_or_else(|| err(line, "expected `edge NAME: ...`"))?;
                let id = id.trim();
                if !is_name(id) {
                    return Err(err(line, format!("bad edge name `{id}`")));
                }
                if g.edge_index(id).is_some() {
                    return Err(err(line, format!("edge `{id}` declared twice")));
                }
                let (a, b) = body.split_once("->").ok_or_else(|| err(line, "expected `->`"))?;
                let (src, inc_src) = parse_end(a, line)?;
                let (dst, inc_dst) = parse_end(b, line)?;
                let lookup = |n: &str| g.vertex_index(n).ok_or_else(|| err(line, format!("undeclared vertex `{n}`")));
                let (s, d) = (lookup(&src)?, lookup(&dst)?);
                g.add_edge(id, s, d, inc_src, inc_dst);
            }
            other => return Err(err(line, format!("unknown declaration `{other}`"))),
        }
    }
    Ok(g)
}

/// One line per vertex: `NAME: (p,q) (p,q) ...`. Vertices may come in any
/// order but each must appear once.
pub fn parse_equitable(text: &str, g: &TubularGraph) -> Result<EquitableSet, ParseError> {
    let mut families: Vec<Option<Vec<LatticeVec>>> = vec![None; g.num_vertices()];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = strip_comment(raw);
        if s.is_empty() {
            continue;
        }
        let (name, body) = s.split_once(':').ok_or_else(|| err(line, "expected `NAME: (p,q) ...`"))?;
        let v = g.vertex_index(name.trim()).ok_or_else(|| err(line, format!("unknown vertex `{}`", name.trim())))?;
        if families[v].is_some() {
            return Err(err(line, format!("vertex `{}` listed twice", name.trim())));
        }
        let mut fam = Vec::new();
        for chunk in body.split(')').map(str::trim).filter(|c| !c.is_empty()) {
            fam.push(parse_vector(&format!("{chunk})"), line)?);
        }
        families[v] = Some(fam);
    }
    let families = families
        .into_iter()
        .enumerate()
        .map(|(v, f)| f.ok_or_else(|| err(text.lines().count(), format!("no family for vertex `{}`", g.vertices[v]))))
        .collect::<Result<_, _>>()?;
    Ok(EquitableSet { families })
}

pub fn format_equitable(set: &EquitableSet, g: &TubularGraph) -> String {
    let mut s = String::new();
    for (v, fam) in set.families.iter().enumerate() {
        let vs: Vec<String> = fam.iter().map(|x| format!("({},{})", x.p, x.q)).collect();
        s.push_str(&format!("{}: {}\n", g.vertices[v], vs.join(" ")));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_graph, RandomGraphConfig};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn burns_and_gersten() {
        let g = parse_graph("vertex v0\nedge e1: v0(1,0) -> v0(0,1)").unwrap();
        assert_eq!(g.num_vertices(), 1);
        assert_eq!(g.edges[0].inc_dst, LatticeVec::new(0, 1));
        let g = parse_graph("vertex v0\nedge e1: v0(1,0) -> v0(-1,2)\nedge e2: v0(1,0) -> v0(0,1)").unwrap();
        assert_eq!(g.edges[0].inc_dst, LatticeVec::new(-1, 2));
        assert_eq!(g.num_edges(), 2);
    }

    #[test]
    fn comments_and_spacing() {
        let g = parse_graph("# a graph\n\nvertex a   # first\nvertex b\nedge e : a( 2 , -3 )->b(1,1)\n").unwrap();
        assert_eq!(g.edges[0].inc_src, LatticeVec::new(2, -3));
        assert_eq!(g.edges[0].dst, 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_graph("edge e1: v0(1,0) -> v0(0,1)").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.message.contains("undeclared"));
        assert_eq!(parse_graph("vertex a\nvertex a").unwrap_err().line, 2);
        assert_eq!(parse_graph("vertex a\n\nedge e: a(1,x) -> a(1,0)").unwrap_err().line, 3);
        assert_eq!(parse_graph("vertex a\nedge e: a(1,0) a(1,0)").unwrap_err().line, 2);
        assert_eq!(parse_graph("vertices a").unwrap_err().line, 1);
    }

    #[test]
    fn semantic_errors_are_deferred() {
        let g = parse_graph("vertex a\nedge e: a(0,0) -> a(1,0)").unwrap();
        assert!(!g.validate().is_empty());
    }

    #[test]
    fn equitable_text() {
        let g = parse_graph("vertex v\nedge t: v(1,0) -> v(0,1)").unwrap();
        let set = parse_equitable("v: (2,-1) (-1,2)", &g).unwrap();
        assert_eq!(set.families[0], vec![LatticeVec::new(2, -1), LatticeVec::new(-1, 2)]);
        assert_eq!(parse_equitable(&format_equitable(&set, &g), &g).unwrap(), set);
        assert!(parse_equitable("", &g).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(&mut rng, &RandomGraphConfig { max_vertices: 6, max_loops: 3, max_coord: 50 });
            prop_assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
        }
    }
}
