//! Fox calculus on the standard presentation, the Alexander matrix of a
//! character, its maximal minors, and the cyclotomic analysis of the
//! resulting polynomial.

mod laurent;

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use laurent::{cyclotomic, cyclotomic_split, laurent_gcd, totient, CyclotomicSplit, LaurentPoly};

use crate::characters::{find_fbyc_character, normalize_character, CharacterError, CharacterZ, FbycDecision};
use crate::gog::{GraphError, Presentation, TubularGraph, Word};
use crate::lattice::Int;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlexanderError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error("generator {0} has no character value")]
    UnknownGenerator(usize),
    #[error("expected one more column than rows, got {rows}x{cols}")]
    ShapeMismatch { rows: usize, cols: usize },
    #[error("character vanishes on every generator")]
    NoNonzeroGenerator,
    #[error("minor is not divisible by t^{0} - 1")]
    NonDivisible(u64),
    #[error("value {0} does not fit in a machine exponent")]
    ExponentOverflow(Int),
    #[error("every character vanishes on edge {0}")]
    NotFreeByZ(String),
}

fn exponent(x: &Int) -> Result<i64, AlexanderError> {
    x.to_i64().ok_or_else(|| AlexanderError::ExponentOverflow(x.clone()))
}

/// `d w / d gen`, pushed to `Z[t, t^-1]` by `g -> t^(values[g])`.
///
/// A syllable `g^e` at prefix exponent `s` contributes
/// `t^s (1 + t^c + ... + t^((e-1)c))` for `e > 0` and
/// `-t^s (t^-c + ... + t^(ec))` for `e < 0`, where `c = values[g]`.
pub fn fox_derivative(w: &Word, gen: usize, values: &[Int]) -> Result<LaurentPoly, AlexanderError> {
    if gen >= values.len() {
        return Err(AlexanderError::UnknownGenerator(gen));
    }
    let mut out = LaurentPoly::zero();
    let mut prefix: i64 = 0;
    for l in &w.0 {
        let c = exponent(values.get(l.gen).ok_or(AlexanderError::UnknownGenerator(l.gen))?)?;
        let e = exponent(&l.exp)?;
        if l.gen == gen {
            if e > 0 {
                for k in 0..e {
                    out.add_term(prefix + k * c, Int::from(1));
                }
            } else {
                for k in 1..=-e {
                    out.add_term(prefix - k * c, Int::from(-1));
                }
            }
        }
        prefix += e * c;
    }
    Ok(out)
}

pub type PolyMatrix = Vec<Vec<LaurentPoly>>;

/// Rows are relators, columns generators.
pub fn alexander_matrix(pres: &Presentation, chi: &CharacterZ) -> Result<PolyMatrix, AlexanderError> {
    let values = chi.generator_values(pres);
    pres.relators
        .iter()
        .map(|r| (0..pres.num_generators()).map(|g| fox_derivative(r, g, &values)).collect())
        .collect()
}

/// `sum_g (d r / d g)(t^(chi g) - 1)`; zero for every relator in the kernel.
pub fn fundamental_identity_residue(row: &[LaurentPoly], values: &[Int]) -> Result<LaurentPoly, AlexanderError> {
    let mut acc = LaurentPoly::zero();
    for (entry, v) in row.iter().zip(values) {
        acc = &acc + &(entry * &LaurentPoly::t_pow_minus_one(exponent(v)?));
    }
    Ok(acc)
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut a: Vec<Vec<LaurentPoly>> = m.to_vec();
    let mut prev = LaurentPoly::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return LaurentPoly::zero() };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = LaurentPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// Determinants of the square matrices obtained by deleting each column in
/// turn (raw values, not normalized).
pub fn maximal_minors(m: &[Vec<LaurentPoly>], cols: usize) -> Result<Vec<LaurentPoly>, AlexanderError> {
    let rows = m.len();
    if cols != rows + 1 || m.iter().any(|r| r.len() != cols) {
        return Err(AlexanderError::ShapeMismatch { rows, cols });
    }
    Ok((0..cols)
        .map(|j| {
            let sub: Vec<Vec<LaurentPoly>> = m
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            determinant(&sub)
        })
        .collect())
}

/// `minor_j (t - 1) / (t^|c_j| - 1)` for the first generator with `c_j != 0`,
/// in canonical form.
pub fn char_candidate(minors: &[LaurentPoly], values: &[Int]) -> Result<(usize, LaurentPoly), AlexanderError> {
    let j = values.iter().position(|v| !v.is_zero()).ok_or(AlexanderError::NoNonzeroGenerator)?;
    let c = exponent(&values[j].abs())?;
    let num = &minors[j] * &LaurentPoly::t_pow_minus_one(1);
    let q = num.div_exact(&LaurentPoly::t_pow_minus_one(c)).ok_or(AlexanderError::NonDivisible(c as u64))?;
    Ok((j, q.canonical()))
}

/// `minor_j (t^|c_k| - 1) = +-t^s minor_k (t^|c_j| - 1)` for all `j, k` with
/// nonzero values.
pub fn minor_ratio_identity(minors: &[LaurentPoly], values: &[Int]) -> Result<bool, AlexanderError> {
    let idx: Vec<usize> = (0..values.len()).filter(|&j| !values[j].is_zero()).collect();
    let scaled = |j: usize, k: usize| -> Result<LaurentPoly, AlexanderError> {
        Ok((&minors[j] * &LaurentPoly::t_pow_minus_one(exponent(&values[k].abs())?)).canonical())
    };
    for (a, &j) in idx.iter().enumerate() {
        for &k in &idx[a + 1..] {
            if scaled(j, k)? != scaled(k, j)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The least common multiple of the cyclotomic orders, when nothing else is
/// left over.
pub fn biorder_index(split: &CyclotomicSplit) -> Option<u64> {
    if !split.remainder.is_one() {
        return None;
    }
    Some(split.orders.keys().fold(1u64, |acc, &d| acc.lcm(&d)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlexanderReport {
    /// Character as found, before normalization.
    pub raw_character: CharacterZ,
    /// Character actually used: stable letters sent to zero, gcd divided out.
    pub character: CharacterZ,
    pub rows: usize,
    pub cols: usize,
    pub matrix: PolyMatrix,
    pub minors: Vec<LaurentPoly>,
    pub alexander_poly: LaurentPoly,
    /// Column used for the candidate.
    pub candidate_column: usize,
    pub char_candidate: LaurentPoly,
    pub cyclotomic_orders: BTreeMap<u64, u32>,
    pub non_cyclotomic_remainder: LaurentPoly,
    pub biorder_index: Option<u64>,
    /// Set when a free-by-Z input produced a non-cyclotomic factor.
    pub theorem_violation: bool,
    pub minor_ratio_ok: bool,
    pub fundamental_identity_ok: bool,
}

/// Full analysis for the given character (normalized first).
pub fn alexander_report(g: &TubularGraph, raw: &CharacterZ) -> Result<AlexanderReport, AlexanderError> {
    let pres = g.presentation()?;
    let chi = normalize_character(raw)?;
    let values = chi.generator_values(&pres);
    let matrix = alexander_matrix(&pres, &chi)?;
    let mut fundamental_identity_ok = true;
    for row in &matrix {
        if !fundamental_identity_residue(row, &values)?.is_zero() {
            fundamental_identity_ok = false;
        }
    }
    let cols = pres.num_generators();
    let minors = maximal_minors(&matrix, cols)?;
    let alexander_poly = laurent_gcd(&minors);
    let (candidate_column, candidate) = char_candidate(&minors, &values)?;
    let minor_ratio_ok = minor_ratio_identity(&minors, &values)?;
    let split = cyclotomic_split(&candidate);
    let (orders, remainder) = match split.clone() {
        Some(s) => (s.orders, s.remainder),
        None => (BTreeMap::new(), LaurentPoly::zero()),
    };
    let index = split.as_ref().and_then(biorder_index);
    let free_by_z = chi.nonzero_on_all_edges(g);
    Ok(AlexanderReport {
        raw_character: raw.clone(),
        character: chi,
        rows: matrix.len(),
        cols,
        matrix,
        minors,
        alexander_poly,
        candidate_column,
        char_candidate: candidate,
        cyclotomic_orders: orders,
        non_cyclotomic_remainder: remainder,
        biorder_index: index,
        theorem_violation: free_by_z && index.is_none(),
        minor_ratio_ok,
        fundamental_identity_ok,
    })
}

/// Report for the character found by the free-by-Z search.
pub fn alexander_for_graph(g: &TubularGraph) -> Result<AlexanderReport, AlexanderError> {
    match find_fbyc_character(g)? {
        FbycDecision::FreeByZ(raw) => alexander_report(g, &raw),
        FbycDecision::NotFreeByZ { witness_edge } => {
            Err(AlexanderError::NotFreeByZ(g.edges[witness_edge].id.clone()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::Character;
    use crate::lattice::{int, LatticeVec};
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

    fn burns() -> TubularGraph {
        bouquet(&[((1, 0), (0, 1))])
    }
    fn gersten() -> TubularGraph {
        bouquet(&[((1, 0), (-1, 2)), ((1, 0), (0, 1))])
    }
    fn woodhouse() -> TubularGraph {
        bouquet(&[((1, 1), (2, 0)), ((1, 1), (0, 2))])
    }

    fn chi(m: i64, n: i64) -> CharacterZ {
        Character { vertex: vec![(int(m), int(n))], stable: Default::default() }
    }

    fn p(low: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(low, c)
    }

    fn t_minus_1() -> LaurentPoly {
        p(0, &[-1, 1])
    }

    #[test]
    fn fox_examples() {
        let comm = Word::from_letters([(0, 1), (1, 1), (0, -1), (1, -1)]);
        let ones = [int(1), int(1)];
        assert_eq!(fox_derivative(&comm, 0, &ones).unwrap(), p(0, &[1, -1]));
        assert_eq!(fox_derivative(&Word::letter(1, 3), 0, &ones).unwrap(), LaurentPoly::zero());
        assert_eq!(fox_derivative(&Word::letter(0, 4), 0, &[int(2)]).unwrap(), LaurentPoly::geometric(2, 4));
        assert_eq!(fox_derivative(&comm, 5, &ones), Err(AlexanderError::UnknownGenerator(5)));
    }

    #[test]
    fn burns_matrix_and_minors() {
        let g = burns();
        let m = alexander_matrix(&g.presentation().unwrap(), &chi(1, 1)).unwrap();
        assert_eq!(m[0], vec![p(0, &[1, -1]), p(0, &[-1, 1]), LaurentPoly::zero()]);
        assert_eq!(m[1], vec![LaurentPoly::one(), -&LaurentPoly::one(), p(0, &[1, -1])]);
        let minors = maximal_minors(&m, 3).unwrap();
        let canon: Vec<LaurentPoly> = minors.iter().map(LaurentPoly::canonical).collect();
        assert_eq!(canon, vec![t_minus_1().pow(2), t_minus_1().pow(2), LaurentPoly::zero()]);
        assert_eq!(laurent_gcd(&minors), t_minus_1().pow(2));
    }

    #[test]
    fn gersten_matrix_and_minors() {
        let g = gersten();
        let m = alexander_matrix(&g.presentation().unwrap(), &chi(1, 1)).unwrap();
        assert_eq!((m.len(), m[0].len()), (3, 4));
        assert_eq!(m[0], vec![p(0, &[1, -1]), p(0, &[-1, 1]), LaurentPoly::zero(), LaurentPoly::zero()]);
        let minors = maximal_minors(&m, 4).unwrap();
        assert_eq!(minors[0].canonical(), t_minus_1().pow(3));
        assert_eq!(minors[1].canonical(), t_minus_1().pow(3));
        assert!(minors[2].is_zero() && minors[3].is_zero());
    }

    #[test]
    fn z2_matrix() {
        let g = bouquet(&[]);
        let m = alexander_matrix(&g.presentation().unwrap(), &chi(2, 3)).unwrap();
        // d[x,y]/dx = 1 - t^n, d[x,y]/dy = t^m - 1
        assert_eq!(m, vec![vec![p(0, &[1, 0, 0, -1]), p(0, &[-1, 0, 1])]]);
    }

    #[test]
    fn minors_shape_and_zero_rows() {
        let m = vec![vec![LaurentPoly::one(), LaurentPoly::one()]];
        assert_eq!(maximal_minors(&m, 3), Err(AlexanderError::ShapeMismatch { rows: 1, cols: 3 }));
        let z = vec![
            vec![LaurentPoly::zero(); 3],
            vec![LaurentPoly::one(), t_minus_1(), LaurentPoly::t()],
        ];
        assert!(maximal_minors(&z, 3).unwrap().iter().all(LaurentPoly::is_zero));
    }

    #[test]
    fn candidates_and_indices() {
        let r = alexander_report(&burns(), &chi(1, 1)).unwrap();
        assert_eq!(r.char_candidate, t_minus_1().pow(2));
        assert_eq!(r.biorder_index, Some(1));
        let r = alexander_report(&gersten(), &chi(1, 1)).unwrap();
        assert_eq!(r.char_candidate, t_minus_1().pow(3));
        assert_eq!(r.biorder_index, Some(1));
        let r = alexander_for_graph(&woodhouse()).unwrap();
        let expected = &t_minus_1().pow(3) * &p(0, &[1, 1]).pow(2);
        assert_eq!(r.char_candidate, expected);
        assert_eq!(r.biorder_index, Some(2));
        assert!(r.minor_ratio_ok && r.fundamental_identity_ok && !r.theorem_violation);
        let synthetic = cyclotomic_split(&(&p(0, &[1, 1]) * &t_minus_1())).unwrap();
        assert_eq!(biorder_index(&synthetic), Some(2));
        let golden = cyclotomic_split(&p(0, &[-1, -1, 1])).unwrap();
        assert_eq!(biorder_index(&golden), None);
    }

    #[test]
    fn char_candidate_errors() {
        assert_eq!(char_candidate(&[LaurentPoly::one()], &[int(0)]), Err(AlexanderError::NoNonzeroGenerator));
        assert_eq!(char_candidate(&[LaurentPoly::one()], &[int(2)]), Err(AlexanderError::NonDivisible(2)));
    }

    #[test]
    fn not_free_by_z() {
        let g = bouquet(&[((2, 1), (1, 1)), ((1, 2), (1, 1))]);
        assert!(matches!(alexander_for_graph(&g), Err(AlexanderError::NotFreeByZ(_))));
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        proptest::collection::vec((0usize..3, -3i64..4), 0..6).prop_map(Word::from_letters)
    }

    fn phi(w: &Word, values: &[Int]) -> LaurentPoly {
        let e: Int = w.0.iter().map(|l| &l.exp * &values[l.gen]).sum();
        LaurentPoly::monomial(int(1), e.to_i64().unwrap())
    }

    proptest! {
        #[test]
        fn fox_product_rule(u in word_strategy(), w in word_strategy(), c in proptest::collection::vec(-2i64..3, 3), g in 0usize..3) {
            let values: Vec<Int> = c.iter().map(|&x| int(x)).collect();
            let lhs = fox_derivative(&u.concat(&w), g, &values).unwrap();
            let rhs = &fox_derivative(&u, g, &values).unwrap() + &(&phi(&u, &values) * &fox_derivative(&w, g, &values).unwrap());
            prop_assert_eq!(lhs, rhs);
            let cancel = fox_derivative(&w.concat(&w.inverse()), g, &values).unwrap();
            prop_assert!(cancel.is_zero());
        }

        #[test]
        fn random_free_by_z_reports(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cfg = RandomGraphConfig { max_vertices: 3, max_loops: 2, max_coord: 2 };
            let (g, chi) = random_fbyc_graph(&mut rng, &cfg);
            prop_assume!(normalize_character(&chi).is_ok());
            let r = alexander_report(&g, &chi).unwrap();
            prop_assert!(r.fundamental_identity_ok);
            prop_assert!(r.minor_ratio_ok);
            for m in &r.minors {
                prop_assert!(m.div_exact(&r.alexander_poly).is_some());
            }
            prop_assert!(r.non_cyclotomic_remainder.is_one(), "{}", r.char_candidate);
            prop_assert!(!r.theorem_violation);
            let expected: i64 = 1 + (0..g.num_edges()).map(|e| r.character.edge_value(&g, e).abs().to_i64().unwrap()).sum::<i64>();
            prop_assert_eq!(r.char_candidate.degree(), Some(expected as u64));
        }
    }
}
