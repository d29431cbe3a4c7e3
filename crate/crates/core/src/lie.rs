//! Index sets, sign conventions and the f-basis of the orthogonal and
//! symplectic Lie algebras in their skew-transpose matrix realization.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{qi, Q};

/// A sign `+` or `-`, identified with `±1` in formulae.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// `sign^exponent` with the exponent read in Z/2.
    pub fn pow(self, exponent: u32) -> i64 {
        if self == Sign::Minus && exponent % 2 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_value(value: i64) -> Option<Sign> {
        match value {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
            "-" | "-1" | "minus" => Ok(Sign::Minus),
            other => Err(format!("expected + or -, got {other:?}")),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v).ok_or_else(|| serde::de::Error::custom("sign must be 1 or -1"))
    }
}

/// The fixed data `(n, l, ε)` together with the derived sign `φ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Config {
    pub n: usize,
    pub l: usize,
    pub epsilon: Sign,
    pub phi: Sign,
}

impl Config {
    pub fn new(n: usize, l: usize, epsilon: Sign) -> Result<Config> {
        make_config(n, l, epsilon)
    }

    /// Size `N = n·l` of the big matrices.
    pub fn big_n(&self) -> usize {
        self.n * self.l
    }

    pub fn l_is_even(&self) -> bool {
        self.l.is_multiple_of(2)
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n, self.l, self.epsilon)
    }
}

pub fn make_config(n: usize, l: usize, epsilon: Sign) -> Result<Config> {
    if n == 0 || l == 0 {
        return Err(Error::Parameter("n and l must be positive".into()));
    }
    let phi = if l % 2 == 1 {
        epsilon
    } else {
        epsilon.negate()
    };
    if n % 2 == 1 && phi == Sign::Minus {
        return Err(Error::InvalidConfig { n, l, epsilon });
    }
    Ok(Config { n, l, epsilon, phi })
}

/// The ordered index set `{-n+1, -n+3, ..., n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexSet {
    size: usize,
}

impl IndexSet {
    pub fn new(size: usize) -> IndexSet {
        IndexSet { size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, i: i32) -> bool {
        let n = self.size as i32;
        i.abs() < n && (i + n - 1) % 2 == 0
    }

    /// Zero-based position of `i` in the ordered set.
    pub fn position(&self, i: i32) -> Option<usize> {
        self.contains(i)
            .then(|| ((i + self.size as i32 - 1) / 2) as usize)
    }

    pub fn at(&self, position: usize) -> i32 {
        2 * position as i32 - self.size as i32 + 1
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = i32> + Clone {
        let n = self.size as i32;
        (0..n).map(move |k| 2 * k - n + 1)
    }

    pub fn to_vec(&self) -> Vec<i32> {
        self.iter().collect()
    }

    pub fn check(&self, i: i32) -> Result<()> {
        if self.contains(i) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                size: self.size,
            })
        }
    }
}

/// `î`: 0 for `i ≥ 0`, 1 for `i < 0`.
pub fn hat(i: i32) -> u32 {
    (i < 0) as u32
}

/// `ĩ = (-i)^`: 0 for `i ≤ 0`, 1 for `i > 0`.
pub fn tilde(i: i32) -> u32 {
    (i > 0) as u32
}

/// An index pair `(a, b)` naming `f_{a,b}`.
pub type FPair = (i32, i32);

/// Result of rewriting `f_{a,b}` against the canonical basis: `f_{a,b} = coeff · f_{pair}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub coeff: i64,
    pub pair: Option<FPair>,
}

/// Rewrites `f_{a,b}` as a multiple of the lexicographically smaller of
/// `(a,b)` and `(-b,-a)`, using `f_{-b,-a} = -ε^{â+b̂} f_{a,b}`.
pub fn canonicalize_f(a: i32, b: i32, epsilon: Sign, big_n: usize) -> Result<Canonical> {
    let set = IndexSet::new(big_n);
    set.check(a)?;
    set.check(b)?;
    Ok(canonicalize_unchecked(a, b, epsilon))
}

pub(crate) fn canonicalize_unchecked(a: i32, b: i32, epsilon: Sign) -> Canonical {
    let partner = (-b, -a);
    if (a, b) == partner {
        // f_{a,-a} = (1 - ε^{â+(-a)^}) e_{a,-a}
        let exponent = hat(a) + hat(-a);
        if epsilon.pow(exponent) == 1 {
            return Canonical {
                coeff: 0,
                pair: None,
            };
        }
        return Canonical {
            coeff: 1,
            pair: Some((a, b)),
        };
    }
    if (a, b) < partner {
        Canonical {
            coeff: 1,
            pair: Some((a, b)),
        }
    } else {
        Canonical {
            coeff: -epsilon.pow(hat(a) + hat(b)),
            pair: Some(partner),
        }
    }
}

/// The Lie algebra `g^ε_N` with its canonical f-basis and structure constants.
#[derive(Debug)]
pub struct LieAlgebra {
    epsilon: Sign,
    big_n: usize,
    basis: Vec<FPair>,
    index: FxHashMap<FPair, usize>,
    /// `table[x * dim + y]` lists `[f_x, f_y]` in basis coordinates.
    table: Vec<Vec<(usize, i64)>>,
}

impl LieAlgebra {
    pub fn new(epsilon: Sign, big_n: usize) -> LieAlgebra {
        let set = IndexSet::new(big_n);
        let mut basis = Vec::new();
        for a in set.iter() {
            for b in set.iter() {
                let c = canonicalize_unchecked(a, b, epsilon);
                if c.coeff == 1 && c.pair == Some((a, b)) {
                    basis.push((a, b));
                }
            }
        }
        basis.sort();
        let index: FxHashMap<FPair, usize> =
            basis.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut algebra = LieAlgebra {
            epsilon,
            big_n,
            basis,
            index,
            table: Vec::new(),
        };
        let dim = algebra.dim();
        let mut table = Vec::with_capacity(dim * dim);
        for x in 0..dim {
            for y in 0..dim {
                table.push(algebra.bracket_pairs(algebra.basis[x], algebra.basis[y]));
            }
        }
        algebra.table = table;
        algebra
    }

    pub fn for_config(config: &Config) -> LieAlgebra {
        LieAlgebra::new(config.epsilon, config.big_n())
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[FPair] {
        &self.basis
    }

    pub fn index_of(&self, pair: FPair) -> Option<usize> {
        self.index.get(&pair).copied()
    }

    /// `f_{a,b}` in basis coordinates, `None` when it vanishes.
    pub fn resolve(&self, a: i32, b: i32) -> Option<(i64, usize)> {
        let c = canonicalize_unchecked(a, b, self.epsilon);
        c.pair.map(|p| (c.coeff, self.index[&p]))
    }

    /// `[f_{a,b}, f_{c,d}] = δ_{c,b} f_{a,d} − δ_{a,d} f_{c,b}
    ///   + ε^{â+b̂}(−δ_{c,−a} f_{−b,d} + δ_{−b,d} f_{c,−a})`.
    fn bracket_pairs(&self, (a, b): FPair, (c, d): FPair) -> Vec<(usize, i64)> {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        let mut push = |coeff: i64, x: i32, y: i32| {
            if let Some((s, k)) = self.resolve(x, y) {
                *acc.entry(k).or_default() += coeff * s;
            }
        };
        if c == b {
            push(1, a, d);
        }
        if a == d {
            push(-1, c, b);
        }
        let sign = self.epsilon.pow(hat(a) + hat(b));
        if c == -a {
            push(-sign, -b, d);
        }
        if -b == d {
            push(sign, c, -a);
        }
        acc.into_iter().filter(|&(_, v)| v != 0).collect()
    }

    /// Structure constants of two basis elements.
    pub fn bracket_basis(&self, x: usize, y: usize) -> &[(usize, i64)] {
        &self.table[x * self.dim() + y]
    }

    pub fn element(&self, terms: impl IntoIterator<Item = (FPair, Q)>) -> LieElement {
        let mut out = LieElement::zero(self.epsilon, self.big_n);
        for ((a, b), coeff) in terms {
            out.add_f(a, b, &coeff);
        }
        out
    }

    pub fn basis_element(&self, k: usize) -> LieElement {
        self.element([(self.basis[k], qi(1))])
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> Result<LieElement> {
        if !x.compatible(self) || !y.compatible(self) {
            return Err(Error::MismatchedAlgebra);
        }
        let mut out = LieElement::zero(self.epsilon, self.big_n);
        for (px, cx) in &x.terms {
            let kx = self.index[px];
            for (py, cy) in &y.terms {
                let ky = self.index[py];
                let prod = cx * cy;
                for &(k, s) in self.bracket_basis(kx, ky) {
                    out.add_canonical(self.basis[k], &(&prod * qi(s)));
                }
            }
        }
        Ok(out)
    }

    /// The `N × N` matrix `e_{a,b} − ε^{â+b̂} e_{−b,−a}`.
    pub fn matrix_of_f(&self, a: i32, b: i32) -> Matrix {
        let set = IndexSet::new(self.big_n);
        let mut m = Matrix::zeros(self.big_n, self.big_n);
        let (ia, ib) = (set.position(a).unwrap(), set.position(b).unwrap());
        let (ja, jb) = (set.position(-b).unwrap(), set.position(-a).unwrap());
        m.add_at(ia, ib, &qi(1));
        m.add_at(ja, jb, &qi(-self.epsilon.pow(hat(a) + hat(b))));
        m
    }

    pub fn matrix_of(&self, x: &LieElement) -> Matrix {
        let mut m = Matrix::zeros(self.big_n, self.big_n);
        for (&(a, b), c) in &x.terms {
            m = m.add(&self.matrix_of_f(a, b).scaled(c));
        }
        m
    }

    /// Basis coordinates of `x`, in basis order.
    pub fn coordinates(&self, x: &LieElement) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        for (p, c) in &x.terms {
            v[self.index[p]] = c.clone();
        }
        v
    }
}

/// A linear combination of canonical basis elements `f_{a,b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    epsilon: Sign,
    big_n: usize,
    terms: BTreeMap<FPair, Q>,
}

impl LieElement {
    pub fn zero(epsilon: Sign, big_n: usize) -> LieElement {
        LieElement {
            epsilon,
            big_n,
            terms: BTreeMap::new(),
        }
    }

    fn compatible(&self, algebra: &LieAlgebra) -> bool {
        self.epsilon == algebra.epsilon && self.big_n == algebra.big_n
    }

    pub fn terms(&self) -> &BTreeMap<FPair, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, pair: FPair) -> Q {
        self.terms.get(&pair).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `coeff · f_{a,b}` for an arbitrary (possibly non-canonical) pair.
    pub fn add_f(&mut self, a: i32, b: i32, coeff: &Q) {
        let c = canonicalize_unchecked(a, b, self.epsilon);
        if let Some(pair) = c.pair {
            self.add_canonical(pair, &(coeff * qi(c.coeff)));
        }
    }

    fn add_canonical(&mut self, pair: FPair, coeff: &Q) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(pair).or_insert_with(Q::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&pair);
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_canonical(*p, c);
        }
        out
    }

    pub fn scaled(&self, factor: &Q) -> LieElement {
        let mut out = LieElement::zero(self.epsilon, self.big_n);
        for (p, c) in &self.terms {
            out.add_canonical(*p, &(c * factor));
        }
        out
    }

    pub fn neg(&self) -> LieElement {
        self.scaled(&qi(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_examples() {
        let c = make_config(3, 2, Sign::Minus).unwrap();
        assert_eq!(c.phi, Sign::Plus);
        let c = make_config(2, 3, Sign::Minus).unwrap();
        assert_eq!(c.phi, Sign::Minus);
        assert!(matches!(
            make_config(1, 2, Sign::Plus),
            Err(Error::InvalidConfig { .. })
        ));
        assert!(make_config(1, 3, Sign::Minus).is_err());
        assert!(make_config(0, 3, Sign::Plus).is_err());
    }

    #[test]
    fn hats() {
        assert_eq!(hat(0), 0);
        assert_eq!(hat(-3), 1);
        assert_eq!(hat(5), 0);
        assert_eq!(tilde(0), 0);
        assert_eq!(tilde(5), 1);
        assert_eq!(tilde(-5), 0);
    }

    #[test]
    fn index_set_shape() {
        let s = IndexSet::new(4);
        assert_eq!(s.to_vec(), vec![-3, -1, 1, 3]);
        assert_eq!(IndexSet::new(3).to_vec(), vec![-2, 0, 2]);
        for k in 0..4 {
            assert_eq!(s.position(s.at(k)), Some(k));
        }
        assert!(!s.contains(0));
        assert!(!s.contains(5));
    }

    #[test]
    fn canonicalize_examples() {
        let c = canonicalize_f(1, 1, Sign::Minus, 2).unwrap();
        assert_eq!(
            c,
            Canonical {
                coeff: -1,
                pair: Some((-1, -1))
            }
        );
        let c = canonicalize_f(1, -1, Sign::Plus, 2).unwrap();
        assert_eq!(
            c,
            Canonical {
                coeff: 0,
                pair: None
            }
        );
        let c = canonicalize_f(-1, 1, Sign::Minus, 2).unwrap();
        assert_eq!(
            c,
            Canonical {
                coeff: 1,
                pair: Some((-1, 1))
            }
        );
        assert!(canonicalize_f(2, 1, Sign::Minus, 2).is_err());
    }

    #[test]
    fn small_bracket() {
        let g = LieAlgebra::new(Sign::Minus, 2);
        let x = g.element([((-1, 1), qi(1))]);
        let y = g.element([((1, -1), qi(1))]);
        let z = g.bracket(&x, &y).unwrap();
        assert_eq!(z, g.element([((-1, -1), qi(4))]));
        assert!(g.bracket(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn mismatched_bracket() {
        let g = LieAlgebra::new(Sign::Minus, 2);
        let h = LieAlgebra::new(Sign::Plus, 2);
        let x = g.element([((-1, 1), qi(1))]);
        let y = h.element([((-1, -1), qi(1))]);
        assert!(matches!(g.bracket(&x, &y), Err(Error::MismatchedAlgebra)));
    }

    #[test]
    fn dimensions() {
        for big_n in 1..8 {
            let so = LieAlgebra::new(Sign::Plus, big_n);
            assert_eq!(so.dim(), big_n * (big_n - 1) / 2);
            if big_n % 2 == 0 {
                let sp = LieAlgebra::new(Sign::Minus, big_n);
                assert_eq!(sp.dim(), big_n * (big_n + 1) / 2);
            }
        }
    }
}
