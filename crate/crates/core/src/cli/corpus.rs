//! Built-in example groups with their known properties.

use thiserror::Error;

use crate::gog::TubularGraph;
use crate::lattice::LatticeVec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown corpus entry `{0}`; known: burns, gersten, woodhouse, wise-simple-N, wise-nonsimple-N, wise-nonhopfian")]
pub struct UnknownName(pub String);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LargenessKind {
    Direct,
    IndexTwo,
    IsZ2,
}

/// Expected verdicts; `None` means not checked.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expected {
    pub fbyc: Option<bool>,
    pub maximal: Option<bool>,
    pub acylindrically_hyperbolic: Option<bool>,
    pub maximality_cover_index: Option<i64>,
    pub sta_index: Option<i64>,
    /// Index stated elsewhere that the computed one is compared against and
    /// flagged when different.
    pub reference_sta_index: Option<i64>,
    pub sta_unknown: Option<bool>,
    pub biorder_index: Option<u64>,
    pub largeness: Option<LargenessKind>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub graph: TubularGraph,
    pub expected: Expected,
}

/// Names checked by `corpus-check`.
pub const CHECKED: &[&str] = &[
    "burns",
    "gersten",
    "woodhouse",
    "wise-simple-2",
    "wise-simple-3",
    "wise-nonsimple-2",
    "wise-nonsimple-3",
    "wise-nonhopfian",
];

fn one_vertex(loops: &[(&str, (i64, i64), (i64, i64))]) -> TubularGraph {
    let mut g = TubularGraph::new();
    g.add_vertex("v");
    for &(id, a, b) in loops {
        g.add_edge(id, 0, 0, LatticeVec::new(a.0, a.1), LatticeVec::new(b.0, b.1));
    }
    g
}

fn suffix(name: &str, prefix: &str) -> Option<i64> {
    name.strip_prefix(prefix)?.parse().ok().filter(|&n| n >= 2)
}

pub fn corpus(name: &str) -> Result<CorpusEntry, UnknownName> {
    let (graph, expected) = match name {
        "burns" => (
            one_vertex(&[("t", (1, 0), (0, 1))]),
            Expected {
                fbyc: Some(true),
                maximal: Some(true),
                largeness: Some(LargenessKind::IndexTwo),
                ..Default::default()
            },
        ),
        "gersten" => (
            one_vertex(&[("s", (1, 0), (-1, 2)), ("t", (1, 0), (0, 1))]),
            Expected {
                fbyc: Some(true),
                maximal: Some(true),
                acylindrically_hyperbolic: Some(true),
                sta_index: Some(4),
                biorder_index: Some(1),
                largeness: Some(LargenessKind::Direct),
                ..Default::default()
            },
        ),
        "woodhouse" => (
            one_vertex(&[("s", (1, 1), (2, 0)), ("t", (1, 1), (0, 2))]),
            Expected {
                fbyc: Some(true),
                maximal: Some(false),
                maximality_cover_index: Some(2),
                reference_sta_index: Some(8),
                ..Default::default()
            },
        ),
        "wise-nonhopfian" => (
            one_vertex(&[("s", (1, 0), (2, 2)), ("t", (0, 1), (2, 2))]),
            Expected {
                fbyc: Some(false),
                maximal: Some(false),
                sta_unknown: Some(true),
                largeness: Some(LargenessKind::Direct),
                ..Default::default()
            },
        ),
        _ => {
            if let Some(n) = suffix(name, "wise-simple-") {
                (
                    one_vertex(&[("s", (n, 1), (1, 1)), ("t", (1, n), (1, 1))]),
                    Expected { fbyc: Some(false), maximal: Some(true), sta_index: Some(4), ..Default::default() },
                )
            } else if let Some(n) = suffix(name, "wise-nonsimple-") {
                (
                    one_vertex(&[("s", (n, 0), (1, 1)), ("t", (0, n), (1, 1))]),
                    // n = 2 is the Woodhouse group again
                    Expected { fbyc: Some(n == 2), maximal: Some(false), ..Default::default() },
                )
            } else {
                return Err(UnknownName(name.to_string()));
            }
        }
    };
    Ok(CorpusEntry { name: name.to_string(), graph, expected })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checked_entries_exist_and_are_valid() {
        for name in CHECKED {
            let e = corpus(name).unwrap();
            assert!(e.graph.validate().is_empty(), "{name}");
        }
        assert!(corpus("wise-simple-1").is_err());
        assert!(corpus("nope").is_err());
    }

    #[test]
    fn nonhopfian_encoding() {
        let g = corpus("wise-nonhopfian").unwrap().graph;
        assert_eq!(g.edges[0].inc_dst, LatticeVec::new(2, 2));
        assert_eq!(g.edges[1].inc_src, LatticeVec::new(0, 1));
    }
}
