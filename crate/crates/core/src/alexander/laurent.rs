//! Integer Laurent polynomials in one variable `t`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice::{rat, Int, Rat};

/// A finitely supported map exponent -> coefficient; zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Int>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Int::one(), 0)
    }

    pub fn t() -> Self {
        Self::monomial(Int::one(), 1)
    }

    pub fn monomial(c: Int, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// `coeffs[i]` is the coefficient of `t^(low + i)`.
    pub fn from_coeffs(low: i64, coeffs: &[i64]) -> Self {
        let mut p = Self::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(low + i as i64, Int::from(c));
        }
        p
    }

    /// `t^k - 1`.
    pub fn t_pow_minus_one(k: i64) -> Self {
        &Self::monomial(Int::one(), k) - &Self::one()
    }

    /// `1 + t^c + ... + t^((n-1)c)`.
    pub fn geometric(c: i64, n: u64) -> Self {
        let mut p = Self::zero();
        for k in 0..n as i64 {
            p.add_term(k * c, Int::one());
        }
        p
    }

    pub fn add_term(&mut self, e: i64, c: Int) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Int::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, Int> {
        &self.terms
    }

    pub fn coeff(&self, e: i64) -> Int {
        self.terms.get(&e).cloned().unwrap_or_else(Int::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Width of the support, `max - min`; `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        Some((self.max_exp()? - self.min_exp()?) as u64)
    }

    pub fn leading_coeff(&self) -> Option<&Int> {
        self.terms.values().next_back()
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, k: &Int) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect() }
    }

    pub fn content(&self) -> Int {
        self.terms.values().fold(Int::zero(), |acc, c| acc.gcd(c))
    }

    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(&e, x)| (e, x / &c)).collect() }
    }

    /// Representative up to units `+-t^k`: lowest exponent 0, positive
    /// leading coefficient.
    pub fn canonical(&self) -> Self {
        let Some(low) = self.min_exp() else { return Self::zero() };
        let p = self.shift(-low);
        if p.leading_coeff().is_some_and(|c| c.is_negative()) {
            -&p
        } else {
            p
        }
    }

    /// Ascending coefficients from exponent `low` (the minimum exponent).
    pub fn coefficients(&self) -> (i64, Vec<Int>) {
        let (Some(low), Some(high)) = (self.min_exp(), self.max_exp()) else { return (0, Vec::new()) };
        (low, (low..=high).map(|e| self.coeff(e)).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `self / d` when the quotient is again an integer Laurent polynomial.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let (d_low, dc) = d.coefficients();
        if dc.is_empty() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (low, mut r) = self.coefficients();
        let n = dc.len() - 1;
        if r.len() <= n {
            return None;
        }
        let lead = &dc[n];
        let mut q = vec![Int::zero(); r.len() - n];
        for k in (0..q.len()).rev() {
            let top = &r[k + n];
            if top.is_zero() {
                continue;
            }
            let (c, rest) = top.div_rem(lead);
            if !rest.is_zero() {
                return None;
            }
            for (i, x) in dc.iter().enumerate() {
                if !x.is_zero() {
                    r[k + i] -= &c * x;
                }
            }
            q[k] = c;
        }
        if r.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut out = Self::zero();
        for (i, c) in q.into_iter().enumerate() {
            out.add_term(low - d_low + i as i64, c);
        }
        Some(out)
    }

    pub fn eval_rational(&self, x: &Rat) -> Rat {
        self.terms.iter().fold(Rat::zero(), |acc, (&e, c)| {
            let xe = if e >= 0 { pow_rat(x, e as u32) } else { pow_rat(&x.recip(), (-e) as u32) };
            acc + rat(c) * xe
        })
    }
}

fn pow_rat(x: &Rat, n: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect() }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}{mono}")?;
            }
        }
        Ok(())
    }
}

/// Dense polynomial over Q, ascending coefficients, no trailing zeros.
fn to_q(p: &LaurentPoly) -> Vec<Rat> {
    let c = p.canonical();
    let (_, coeffs) = c.coefficients();
    coeffs.iter().map(rat).collect()
}

fn trim(v: &mut Vec<Rat>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn rem_q(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r.last().expect("nonempty") / &lead;
        for (i, x) in b.iter().enumerate() {
            r[k + i] -= &c * x;
        }
        trim(&mut r);
    }
    r
}

/// Greatest common divisor over `Q[t]` of the nonzero entries, as a primitive
/// integer polynomial in canonical form. Zero for an empty or all-zero list.
pub fn laurent_gcd(ps: &[LaurentPoly]) -> LaurentPoly {
    let mut acc: Option<Vec<Rat>> = None;
    for p in ps.iter().filter(|p| !p.is_zero()) {
        let q = to_q(p);
        acc = Some(match acc {
            None => q,
            Some(a) => {
                let (mut x, mut y) = (a, q);
                while !y.is_empty() {
                    let r = rem_q(&x, &y);
                    x = y;
                    y = r;
                }
                x
            }
        });
    }
    let Some(g) = acc else { return LaurentPoly::zero() };
    let den = g.iter().fold(Int::one(), |l, c| l.lcm(c.denom()));
    let mut p = LaurentPoly::zero();
    for (i, c) in g.iter().enumerate() {
        p.add_term(i as i64, (c * rat(&den)).to_integer());
    }
    p.primitive_part().canonical()
}

/// Euler's totient.
pub fn totient(mut n: u64) -> u64 {
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

fn mobius(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// The `d`-th cyclotomic polynomial, from `prod_{k | d} (t^k - 1)^mu(d/k)`.
pub fn cyclotomic(d: u64) -> LaurentPoly {
    assert!(d >= 1, "cyclotomic order must be positive");
    let mut num = LaurentPoly::one();
    let mut den = LaurentPoly::one();
    for k in (1..=d).filter(|k| d % k == 0) {
        match mobius(d / k) {
            1 => num = &num * &LaurentPoly::t_pow_minus_one(k as i64),
            -1 => den = &den * &LaurentPoly::t_pow_minus_one(k as i64),
            _ => {}
        }
    }
    num.div_exact(&den).expect("cyclotomic quotient is exact").canonical()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicSplit {
    /// Order `d` -> multiplicity of `Phi_d`.
    pub orders: BTreeMap<u64, u32>,
    /// What is left, in canonical form; `1` when fully cyclotomic.
    pub remainder: LaurentPoly,
}

fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, q);
        }
        a = mul_mod(a, a, q);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'outer: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A prime `q = 1 mod d` near `2^61` and an element of order exactly `d`.
fn root_of_unity_mod(d: u64) -> (u64, u64) {
    let mut q = ((1u64 << 61) / d) * d + 1;
    while !is_prime_u64(q) {
        q += d;
    }
    let factors = prime_factors(d);
    for g in 2.. {
        let z = pow_mod(g, (q - 1) / d, q);
        if factors.iter().all(|&r| pow_mod(z, d / r, q) != 1) {
            return (q, z);
        }
    }
    unreachable!()
}

/// `p(zeta) = 0` in `F_q` for a primitive `d`-th root of unity: necessary for
/// `Phi_d | p`, so a `false` rules the factor out exactly.
fn may_have_root_of_order(coeffs: &[Int], d: u64) -> bool {
    let (q, z) = root_of_unity_mod(d);
    let qi = Int::from(q);
    let mut acc = 0u64;
    for c in coeffs.iter().rev() {
        let c = c.mod_floor(&qi).to_u64_digits().1.first().copied().unwrap_or(0);
        acc = (mul_mod(acc, z, q) as u128 + c as u128).rem_euclid(q as u128) as u64;
    }
    acc == 0
}

/// Euler's totient of every `n <= limit`.
fn totient_sieve(limit: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=limit as u64).collect();
    for i in 2..=limit {
        if phi[i] == i as u64 {
            for j in (i..=limit).step_by(i) {
                phi[j] -= phi[j] / i as u64;
            }
        }
    }
    phi
}

/// Divide out cyclotomic factors. Returns `None` for the zero polynomial.
///
/// Only orders with `phi(d)` at most the remaining degree are tried, and
/// each is screened by evaluating at a root of unity modulo a prime before
/// the exact division.
pub fn cyclotomic_split(p: &LaurentPoly) -> Option<CyclotomicSplit> {
    if p.is_zero() {
        return None;
    }
    let mut rem = p.canonical();
    let mut orders = BTreeMap::new();
    let deg = rem.degree().unwrap_or(0);
    // phi(d) >= sqrt(d) once d > 6
    let bound = (deg * deg).max(6);
    let phi = totient_sieve(bound as usize);
    let mut coeffs = rem.coefficients().1;
    for d in 1..=bound {
        let left = rem.degree().unwrap_or(0);
        if left == 0 || (d > 6 && d > left * left) {
            break;
        }
        if phi[d as usize] > left || !may_have_root_of_order(&coeffs, d) {
            continue;
        }
        let cyc = cyclotomic(d);
        while let Some(q) = rem.div_exact(&cyc) {
            *orders.entry(d).or_insert(0) += 1;
            rem = q.canonical();
            if rem.degree() == Some(0) {
                break;
            }
        }
        coeffs = rem.coefficients().1;
    }
    Some(CyclotomicSplit { orders, remainder: rem })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(low: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(low, c)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(p(-2, &[1, -1]).canonical(), p(0, &[-1, 1]));
        assert_eq!(p(3, &[2, 0, -1]).canonical(), p(0, &[-2, 0, 1]));
        assert_eq!(LaurentPoly::zero().canonical(), LaurentPoly::zero());
    }

    #[test]
    fn display() {
        assert_eq!(p(0, &[1, -2, 1]).to_string(), "t^2 - 2t + 1");
        assert_eq!(p(-1, &[-3]).to_string(), "-3t^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let a = p(0, &[-1, 0, 1]);
        let b = p(0, &[-1, 1]);
        assert_eq!(a.div_exact(&b), Some(p(0, &[1, 1])));
        assert_eq!(b.div_exact(&a), None);
        assert_eq!(p(0, &[1, 1]).div_exact(&p(0, &[0, 2])), None);
        assert_eq!(p(-3, &[1, 1]).div_exact(&p(5, &[1])), Some(p(-8, &[1, 1])));
    }

    #[test]
    fn gcd_examples() {
        let t1 = p(0, &[-1, 1]);
        let burns = [t1.pow(2), -&t1.pow(2), LaurentPoly::zero()];
        assert_eq!(laurent_gcd(&burns), t1.pow(2));
        assert_eq!(laurent_gcd(&[t1.clone(), p(0, &[-1, 0, 1])]), t1);
        assert_eq!(laurent_gcd(&[]), LaurentPoly::zero());
        assert_eq!(laurent_gcd(&[LaurentPoly::zero(), LaurentPoly::zero()]), LaurentPoly::zero());
        assert_eq!(laurent_gcd(&[p(0, &[2, 2]), p(0, &[4, 0, -4])]), p(0, &[1, 1]));
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic(1), p(0, &[-1, 1]));
        assert_eq!(cyclotomic(2), p(0, &[1, 1]));
        assert_eq!(cyclotomic(3), p(0, &[1, 1, 1]));
        assert_eq!(cyclotomic(4), p(0, &[1, 0, 1]));
        assert_eq!(cyclotomic(6), p(0, &[1, -1, 1]));
        assert_eq!(cyclotomic(12), p(0, &[1, 0, -1, 0, 1]));
        for d in 1..40 {
            assert_eq!(cyclotomic(d).degree(), Some(totient(d)));
        }
    }

    #[test]
    fn split_examples() {
        let s = cyclotomic_split(&p(0, &[-1, 1]).pow(2)).unwrap();
        assert_eq!(s.orders, BTreeMap::from([(1, 2)]));
        assert!(s.remainder.is_one());
        let s = cyclotomic_split(&p(0, &[1, 1, 1])).unwrap();
        assert_eq!(s.orders, BTreeMap::from([(3, 1)]));
        let golden = p(0, &[-1, -1, 1]);
        let s = cyclotomic_split(&golden).unwrap();
        assert!(s.orders.is_empty());
        assert_eq!(s.remainder, golden);
        assert!(cyclotomic_split(&LaurentPoly::zero()).is_none());
        let mixed = &(&cyclotomic(5) * &cyclotomic(2).pow(3)) * &golden;
        let s = cyclotomic_split(&mixed.shift(-4)).unwrap();
        assert_eq!(s.orders, BTreeMap::from([(2, 3), (5, 1)]));
        assert_eq!(s.remainder, golden);
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        (-3i64..3, proptest::collection::vec(-4i64..5, 0..5)).prop_map(|(low, c)| p(low, &c))
    }

    #[test]
    fn primes_and_roots_of_unity() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(3_215_031_751));
        for d in [1, 2, 6, 12, 97, 384] {
            let (q, z) = root_of_unity_mod(d);
            assert_eq!((q - 1) % d, 0);
            assert_eq!(pow_mod(z, d, q), 1);
            assert!((1..d).all(|k| pow_mod(z, k, q) != 1));
        }
        let phi = totient_sieve(100);
        assert!((1..=100u64).all(|n| phi[n as usize] == totient(n)));
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn product_divides_exactly(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }

        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly(), c in small_poly()) {
            let x = &a * &c;
            let y = &b * &c;
            let g = laurent_gcd(&[x.clone(), y.clone()]);
            if x.is_zero() && y.is_zero() {
                prop_assert!(g.is_zero());
            } else {
                // divisibility over Q: the primitive part of x divides exactly over Z
                // by Gauss's lemma
                prop_assert!(x.primitive_part().div_exact(&g).is_some());
                prop_assert!(y.primitive_part().div_exact(&g).is_some());
                if !c.is_zero() {
                    prop_assert!(g.div_exact(&c.primitive_part().canonical()).is_some());
                }
            }
        }

        #[test]
        fn root_filter_keeps_true_factors(a in small_poly(), d in 1u64..60) {
            prop_assume!(!a.is_zero());
            let p = (&a * &cyclotomic(d)).canonical();
            prop_assert!(may_have_root_of_order(&p.coefficients().1, d));
            let split = cyclotomic_split(&p).unwrap();
            prop_assert!(split.orders.get(&d).copied().unwrap_or(0) >= 1);
        }

        #[test]
        fn evaluation_is_a_ring_map(a in small_poly(), b in small_poly(), n in 1i64..4, d in 1i64..4) {
            let x = Rat::new(Int::from(n), Int::from(d));
            prop_assert_eq!((&a * &b).eval_rational(&x), a.eval_rational(&x) * b.eval_rational(&x));
        }
    }
}
