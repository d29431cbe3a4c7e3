//! PBW normal forms in the universal enveloping algebra `U(g)`.
//!
//! Generators are numbered by their position in a [`BasisOrder`]; a monomial
//! is a non-decreasing sequence of positions. Multiplication straightens
//! adjacent out-of-order pairs `g_i g_j = g_j g_i + [g_i, g_j]`. The products
//! `monomial · generator` are memoized per algebra, so the same straightening
//! work is shared across all elements built over one [`Uea`].

use std::hash::BuildHasherDefault;
use std::sync::Arc;

use dashmap::DashMap;
use num_traits::{One, Zero};
use rustc_hash::{FxHashMap, FxHasher};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::lie::{FPair, LieAlgebra, Sign};
use crate::scalar::{from_json_pair, qi, to_json_pair, Q};

/// Position of a generator in the basis order.
pub type GenId = u16;

/// Sorted sequence of generator positions; empty denotes `1`.
pub type Monomial = SmallVec<[GenId; 8]>;

type FxBuild = BuildHasherDefault<FxHasher>;

/// Identifies the algebra an element was built in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraKey {
    pub epsilon: Sign,
    pub big_n: usize,
    pub order_tag: u64,
}

/// Total order on the canonical f-basis: every generator of degree `≥ 0`
/// precedes every generator of negative degree; ties break by degree, then
/// lexicographically on `(a, b)`.
#[derive(Clone, Debug)]
pub struct BasisOrder {
    pairs: Vec<FPair>,
    degrees: Vec<i32>,
    position: FxHashMap<FPair, GenId>,
    m_start: usize,
}

impl BasisOrder {
    pub fn new(lie: &LieAlgebra, degree: impl Fn(FPair) -> i32) -> BasisOrder {
        let mut keyed: Vec<(bool, i32, FPair)> = lie
            .basis()
            .iter()
            .map(|&p| {
                let d = degree(p);
                (d < 0, d, p)
            })
            .collect();
        keyed.sort();
        let pairs: Vec<FPair> = keyed.iter().map(|k| k.2).collect();
        let degrees: Vec<i32> = keyed.iter().map(|k| k.1).collect();
        let m_start = keyed.iter().position(|k| k.0).unwrap_or(keyed.len());
        let position = pairs
            .iter()
            .enumerate()
            .map(|(k, &p)| (p, k as GenId))
            .collect();
        BasisOrder {
            pairs,
            degrees,
            position,
            m_start,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, g: GenId) -> FPair {
        self.pairs[g as usize]
    }

    pub fn degree(&self, g: GenId) -> i32 {
        self.degrees[g as usize]
    }

    pub fn position(&self, pair: FPair) -> Option<GenId> {
        self.position.get(&pair).copied()
    }

    /// First position belonging to the negative part.
    pub fn m_start(&self) -> GenId {
        self.m_start as GenId
    }

    pub fn is_negative(&self, g: GenId) -> bool {
        (g as usize) >= self.m_start
    }
}

/// An exact linear combination of PBW monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UeaElement {
    key: AlgebraKey,
    terms: FxHashMap<Monomial, Q>,
}

impl UeaElement {
    pub fn key(&self) -> AlgebraKey {
        self.key
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    /// Terms sorted by monomial, for deterministic output.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
        v
    }

    pub fn coeff(&self, monomial: &[GenId]) -> Q {
        self.terms.get(monomial).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of the empty monomial.
    pub fn constant_term(&self) -> Q {
        self.coeff(&[])
    }

    pub(crate) fn add_term(&mut self, monomial: Monomial, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add_assign(&mut self, other: &UeaElement) {
        assert_eq!(self.key, other.key, "mixing elements of different algebras");
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &UeaElement, factor: &Q) {
        assert_eq!(self.key, other.key, "mixing elements of different algebras");
        if factor.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * factor);
        }
    }

    pub fn add(&self, other: &UeaElement) -> UeaElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &UeaElement) -> UeaElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn scaled(&self, factor: &Q) -> UeaElement {
        if factor.is_zero() {
            return UeaElement {
                key: self.key,
                terms: FxHashMap::default(),
            };
        }
        UeaElement {
            key: self.key,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn neg(&self) -> UeaElement {
        self.scaled(&-Q::one())
    }

    /// Keeps only the monomials accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> UeaElement {
        UeaElement {
            key: self.key,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_length(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.len()).max()
    }
}

/// One serialized term: `{monomial: [[a,b],...], coeff: [num, den]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub monomial: Vec<[i32; 2]>,
    pub coeff: [String; 2],
}

/// A homomorphism given by images of generators; `None` marks generators
/// outside its domain.
pub struct GeneratorImages<'a> {
    pub images: &'a [Option<UeaElement>],
}

/// Straightened product `m · g` as PBW terms.
type Expansion = Vec<(Monomial, Q)>;

/// The enveloping algebra of a Lie algebra under a fixed basis order.
pub struct Uea {
    key: AlgebraKey,
    lie: Arc<LieAlgebra>,
    order: BasisOrder,
    brackets: Vec<Vec<(GenId, Q)>>,
    cache: DashMap<(Monomial, GenId), Arc<Expansion>, FxBuild>,
}

impl std::fmt::Debug for Uea {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Uea")
            .field("key", &self.key)
            .field("dim", &self.order.len())
            .field("cached_products", &self.cache.len())
            .finish()
    }
}

impl Uea {
    pub fn new(lie: Arc<LieAlgebra>, order: BasisOrder, order_tag: u64) -> Uea {
        let dim = order.len();
        let mut brackets = Vec::with_capacity(dim * dim);
        for x in 0..dim {
            let kx = lie.index_of(order.pair(x as GenId)).unwrap();
            for y in 0..dim {
                let ky = lie.index_of(order.pair(y as GenId)).unwrap();
                let terms = lie
                    .bracket_basis(kx, ky)
                    .iter()
                    .map(|&(k, c)| (order.position(lie.basis()[k]).unwrap(), qi(c)))
                    .collect();
                brackets.push(terms);
            }
        }
        Uea {
            key: AlgebraKey {
                epsilon: lie.epsilon(),
                big_n: lie.big_n(),
                order_tag,
            },
            lie,
            order,
            brackets,
            cache: DashMap::default(),
        }
    }

    pub fn key(&self) -> AlgebraKey {
        self.key
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn order(&self) -> &BasisOrder {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.order.len()
    }

    pub fn cached_products(&self) -> usize {
        self.cache.len()
    }

    pub fn zero(&self) -> UeaElement {
        UeaElement {
            key: self.key,
            terms: FxHashMap::default(),
        }
    }

    pub fn scalar(&self, value: Q) -> UeaElement {
        let mut out = self.zero();
        out.add_term(Monomial::new(), value);
        out
    }

    pub fn one(&self) -> UeaElement {
        self.scalar(Q::one())
    }

    pub fn generator(&self, g: GenId) -> UeaElement {
        let mut out = self.zero();
        out.add_term(Monomial::from_slice(&[g]), Q::one());
        out
    }

    /// `f_{a,b}` for an arbitrary pair, rewritten canonically (possibly zero).
    pub fn f(&self, a: i32, b: i32) -> UeaElement {
        match self.resolve(a, b) {
            Some((c, g)) => self.generator(g).scaled(&qi(c)),
            None => self.zero(),
        }
    }

    /// `f_{a,b} = coeff · generator`, or `None` when `f_{a,b} = 0`.
    pub fn resolve(&self, a: i32, b: i32) -> Option<(i64, GenId)> {
        let c = crate::lie::canonicalize_unchecked(a, b, self.lie.epsilon());
        c.pair
            .map(|p| (c.coeff, self.order.position(p).expect("canonical pair")))
    }

    /// Embeds a Lie element as a linear combination of generators.
    pub fn lie_element(&self, x: &crate::lie::LieElement) -> UeaElement {
        let mut out = self.zero();
        for (&pair, c) in x.terms() {
            let g = self.order.position(pair).expect("canonical pair");
            out.add_term(Monomial::from_slice(&[g]), c.clone());
        }
        out
    }

    /// Reads back a linear element; `None` if some monomial is not a
    /// single generator.
    pub fn as_lie_element(&self, x: &UeaElement) -> Option<crate::lie::LieElement> {
        let mut out = crate::lie::LieElement::zero(self.key.epsilon, self.key.big_n);
        for (m, c) in &x.terms {
            if m.len() != 1 {
                return None;
            }
            let (a, b) = self.order.pair(m[0]);
            out.add_f(a, b, c);
        }
        Some(out)
    }

    pub fn from_monomial(&self, monomial: Monomial, coeff: Q) -> UeaElement {
        let mut out = self.zero();
        out.add_term(monomial, coeff);
        out
    }

    /// Bracket of two generators in generator coordinates.
    pub fn bracket_generators(&self, x: GenId, y: GenId) -> &[(GenId, Q)] {
        &self.brackets[x as usize * self.dim() + y as usize]
    }

    fn check(&self, x: &UeaElement) -> Result<()> {
        if x.key == self.key {
            Ok(())
        } else {
            Err(Error::MismatchedAlgebra)
        }
    }

    /// Adds `coeff · (m · g)` in normal form to `out`.
    fn accumulate_mono_gen(
        &self,
        m: &[GenId],
        g: GenId,
        coeff: &Q,
        out: &mut FxHashMap<Monomial, Q>,
    ) {
        if m.last().is_none_or(|&h| h <= g) {
            let mut mono = Monomial::from_slice(m);
            mono.push(g);
            add_into(out, mono, coeff.clone());
            return;
        }
        let product = self.mono_gen_product(m, g);
        for (mono, c) in product.iter() {
            add_into(out, mono.clone(), c * coeff);
        }
    }

    fn mono_gen_product(&self, m: &[GenId], g: GenId) -> Arc<Vec<(Monomial, Q)>> {
        let key = (Monomial::from_slice(m), g);
        if let Some(hit) = self.cache.get(&key) {
            return Arc::clone(hit.value());
        }
        let (&h, prefix) = m.split_last().expect("nonempty");
        let mut acc: FxHashMap<Monomial, Q> = FxHashMap::default();
        // m · g = (prefix · g) · h + prefix · [h, g]
        let mut left: FxHashMap<Monomial, Q> = FxHashMap::default();
        self.accumulate_mono_gen(prefix, g, &Q::one(), &mut left);
        for (mono, c) in &left {
            self.accumulate_mono_gen(mono, h, c, &mut acc);
        }
        for (g2, c2) in self.bracket_generators(h, g) {
            self.accumulate_mono_gen(prefix, *g2, c2, &mut acc);
        }
        let result: Arc<Vec<(Monomial, Q)>> = Arc::new(acc.into_iter().collect());
        self.cache.insert(key, Arc::clone(&result));
        result
    }

    /// Normal form of `x · g` for a single generator `g`.
    pub fn mul_generator(&self, x: &UeaElement, g: GenId) -> UeaElement {
        let mut out = FxHashMap::default();
        for (m, c) in &x.terms {
            self.accumulate_mono_gen(m, g, c, &mut out);
        }
        UeaElement {
            key: self.key,
            terms: out,
        }
    }

    fn mul_monomials(
        &self,
        mx: &[GenId],
        my: &[GenId],
        coeff: Q,
        out: &mut FxHashMap<Monomial, Q>,
    ) {
        if my.is_empty() {
            add_into(out, Monomial::from_slice(mx), coeff);
            return;
        }
        if mx.last().is_none_or(|&h| h <= my[0]) {
            let mut mono = Monomial::from_slice(mx);
            mono.extend_from_slice(my);
            add_into(out, mono, coeff);
            return;
        }
        let mut current: FxHashMap<Monomial, Q> = FxHashMap::default();
        current.insert(Monomial::from_slice(mx), coeff);
        for &g in my {
            let mut next = FxHashMap::default();
            for (m, c) in &current {
                self.accumulate_mono_gen(m, g, c, &mut next);
            }
            current = next;
        }
        for (m, c) in current {
            add_into(out, m, c);
        }
    }

    pub(crate) fn mul(&self, x: &UeaElement, y: &UeaElement) -> UeaElement {
        debug_assert_eq!(x.key, self.key);
        debug_assert_eq!(y.key, self.key);
        let mut out = FxHashMap::default();
        for (mx, cx) in &x.terms {
            for (my, cy) in &y.terms {
                self.mul_monomials(mx, my, cx * cy, &mut out);
            }
        }
        UeaElement {
            key: self.key,
            terms: out,
        }
    }

    pub fn multiply(&self, x: &UeaElement, y: &UeaElement) -> Result<UeaElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub(crate) fn comm(&self, x: &UeaElement, y: &UeaElement) -> UeaElement {
        let mut out = self.mul(x, y);
        out.add_scaled(&self.mul(y, x), &-Q::one());
        out
    }

    /// `xy − yx` in normal form.
    pub fn commutator(&self, x: &UeaElement, y: &UeaElement) -> Result<UeaElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.comm(x, y))
    }

    /// Product of a sequence of generators, in the given (arbitrary) order.
    pub fn word(&self, gens: &[GenId]) -> UeaElement {
        let mut out = self.one();
        for &g in gens {
            out = self.mul_generator(&out, g);
        }
        out
    }

    /// Extends generator images multiplicatively and linearly to `x`.
    pub fn apply_hom(&self, hom: &GeneratorImages<'_>, x: &UeaElement) -> Result<UeaElement> {
        self.check(x)?;
        for img in hom.images.iter().flatten() {
            self.check(img)?;
        }
        #[cfg(debug_assertions)]
        self.debug_check_hom(hom);
        let mut out = self.zero();
        for (m, c) in &x.terms {
            let mut prod = self.scalar(c.clone());
            for &g in m.iter() {
                let img = hom
                    .images
                    .get(g as usize)
                    .and_then(Option::as_ref)
                    .ok_or_else(|| {
                        let (a, b) = self.order.pair(g);
                        Error::OutsideDomain(a, b)
                    })?;
                prod = self.mul(&prod, img);
                if prod.is_zero() {
                    break;
                }
            }
            out.add_assign(&prod);
        }
        Ok(out)
    }

    #[cfg(debug_assertions)]
    fn debug_check_hom(&self, hom: &GeneratorImages<'_>) {
        let domain: Vec<GenId> = (0..hom.images.len() as GenId)
            .filter(|&g| hom.images[g as usize].is_some())
            .collect();
        if domain.len() < 2 {
            return;
        }
        let image_of = |g: GenId| hom.images[g as usize].as_ref();
        for k in 0..8usize {
            let x = domain[(k * 7 + 1) % domain.len()];
            let y = domain[(k * 13 + 3) % domain.len()];
            let bracket = self.bracket_generators(x, y);
            if bracket.iter().any(|(g, _)| image_of(*g).is_none()) {
                continue;
            }
            let mut lhs = self.zero();
            for (g, c) in bracket {
                lhs.add_scaled(image_of(*g).unwrap(), c);
            }
            let rhs = self.comm(image_of(x).unwrap(), image_of(y).unwrap());
            debug_assert_eq!(lhs, rhs, "generator images do not respect the bracket");
        }
    }

    fn max_over_monomials(&self, x: &UeaElement, weight: impl Fn(GenId) -> i32) -> Result<i32> {
        x.terms
            .keys()
            .map(|m| m.iter().map(|&g| weight(g)).sum::<i32>())
            .max()
            .ok_or(Error::ZeroElement)
    }

    /// Kazhdan degree: generators of degree `r` weigh `r/2 + 1`.
    pub fn kazhdan_degree(&self, x: &UeaElement) -> Result<i32> {
        self.check(x)?;
        self.max_over_monomials(x, |g| self.order.degree(g) / 2 + 1)
    }

    /// Good-filtration degree: generators of degree `r` weigh `r/2`, so that
    /// `s_{i,j}(e_{p,q})` with `q − p = 2r` sits in degree `r`.
    pub fn good_degree(&self, x: &UeaElement) -> Result<i32> {
        self.check(x)?;
        self.max_over_monomials(x, |g| self.order.degree(g) / 2)
    }

    pub fn good_weight(&self, m: &[GenId]) -> i32 {
        m.iter().map(|&g| self.order.degree(g) / 2).sum()
    }

    /// Homogeneous component of good degree `d`.
    pub fn good_component(&self, x: &UeaElement, d: i32) -> UeaElement {
        x.filter(|m| self.good_weight(m) == d)
    }

    pub fn good_leading_term(&self, x: &UeaElement) -> Result<UeaElement> {
        let d = self.good_degree(x)?;
        Ok(self.good_component(x, d))
    }

    /// Component of standard (length) degree `d`.
    pub fn length_component(&self, x: &UeaElement, d: usize) -> UeaElement {
        x.filter(|m| m.len() == d)
    }

    pub fn supported_on(&self, x: &UeaElement, allowed: impl Fn(GenId) -> bool) -> bool {
        x.terms.keys().all(|m| m.iter().all(|&g| allowed(g)))
    }

    pub fn to_json(&self, x: &UeaElement) -> Vec<TermJson> {
        x.sorted_terms()
            .into_iter()
            .map(|(m, c)| TermJson {
                monomial: m
                    .iter()
                    .map(|&g| {
                        let (a, b) = self.order.pair(g);
                        [a, b]
                    })
                    .collect(),
                coeff: to_json_pair(c),
            })
            .collect()
    }

    /// Parses serialized terms; monomials need not be normal or canonical.
    pub fn from_json(&self, terms: &[TermJson]) -> Result<UeaElement> {
        let mut out = self.zero();
        for t in terms {
            let coeff = from_json_pair(&t.coeff)
                .ok_or_else(|| Error::Parameter(format!("bad coefficient {:?}", t.coeff)))?;
            let mut prod = self.scalar(coeff);
            for &[a, b] in &t.monomial {
                let set = crate::lie::IndexSet::new(self.key.big_n);
                set.check(a)?;
                set.check(b)?;
                prod = self.mul(&prod, &self.f(a, b));
            }
            out.add_assign(&prod);
        }
        Ok(out)
    }
}

fn add_into(out: &mut FxHashMap<Monomial, Q>, mono: Monomial, coeff: Q) {
    if coeff.is_zero() {
        return;
    }
    match out.entry(mono) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            *e.get_mut() += coeff;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(coeff);
        }
    }
}
