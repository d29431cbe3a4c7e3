//! Polynomials in a formal variable `u` with noncommutative coefficients,
//! and commutative polynomials for leading symbols.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::scalar::Q;

/// Additive structure with rational scaling.
pub trait Coefficient: Clone + PartialEq + Debug {
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn scaled(&self, factor: &Q) -> Self;
}

/// A unital ring whose multiplication needs no external context.
pub trait NcRing: Coefficient {
    fn zero() -> Self;
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn from_scalar(value: Q) -> Self {
        Self::one().scaled(&value)
    }
}

impl Coefficient for Q {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn scaled(&self, factor: &Q) -> Self {
        self * factor
    }
}

impl NcRing for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
}

impl Coefficient for crate::uea::UeaElement {
    fn is_zero(&self) -> bool {
        crate::uea::UeaElement::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        crate::uea::UeaElement::add_assign(self, other)
    }
    fn scaled(&self, factor: &Q) -> Self {
        crate::uea::UeaElement::scaled(self, factor)
    }
}

/// Finitely supported Laurent polynomial `Σ c_k u^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly<T> {
    terms: BTreeMap<i32, T>,
}

impl<T: Coefficient> Default for UPoly<T> {
    fn default() -> Self {
        UPoly {
            terms: BTreeMap::new(),
        }
    }
}

impl<T: Coefficient> UPoly<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(power: i32, coeff: T) -> Self {
        let mut p = Self::zero();
        p.add_term(power, coeff);
        p
    }

    pub fn constant(coeff: T) -> Self {
        Self::monomial(0, coeff)
    }

    pub fn terms(&self) -> &BTreeMap<i32, T> {
        &self.terms
    }

    pub fn coeff(&self, power: i32) -> Option<&T> {
        self.terms.get(&power)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, power: i32, coeff: T) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(power) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&coeff);
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(&-crate::scalar::one()))
    }

    pub fn scaled(&self, factor: &Q) -> Self {
        let mut out = Self::zero();
        for (&k, c) in &self.terms {
            out.add_term(k, c.scaled(factor));
        }
        out
    }

    /// Multiplies by `u^k`.
    pub fn shifted(&self, k: i32) -> Self {
        UPoly {
            terms: self
                .terms
                .iter()
                .map(|(&p, c)| (p + k, c.clone()))
                .collect(),
        }
    }

    /// Substitutes `u ↦ −u`.
    pub fn negated_variable(&self) -> Self {
        let minus = -crate::scalar::one();
        UPoly {
            terms: self
                .terms
                .iter()
                .map(|(&p, c)| {
                    (
                        p,
                        if p % 2 == 0 {
                            c.clone()
                        } else {
                            c.scaled(&minus)
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn mul_with(&self, other: &Self, mut mul: impl FnMut(&T, &T) -> T) -> Self {
        let mut out = Self::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &other.terms {
                out.add_term(a + b, mul(x, y));
            }
        }
        out
    }

    pub fn map<U: Coefficient>(&self, mut f: impl FnMut(&T) -> U) -> UPoly<U> {
        let mut out = UPoly::zero();
        for (&k, c) in &self.terms {
            out.add_term(k, f(c));
        }
        out
    }
}

impl<T: NcRing> UPoly<T> {
    /// `u + c` for a coefficient `c`.
    pub fn linear(constant: T) -> Self {
        let mut p = Self::monomial(1, T::one());
        p.add_term(0, constant);
        p
    }
}

impl<T: Coefficient> Coefficient for UPoly<T> {
    fn is_zero(&self) -> bool {
        UPoly::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        for (&k, c) in &other.terms {
            self.add_term(k, c.clone());
        }
    }
    fn scaled(&self, factor: &Q) -> Self {
        UPoly::scaled(self, factor)
    }
}

impl<T: NcRing> NcRing for UPoly<T> {
    fn zero() -> Self {
        UPoly::default()
    }
    fn one() -> Self {
        UPoly::constant(T::one())
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_with(other, T::mul)
    }
}

/// Commutative polynomial over `Q` in variables numbered by `u32`.
/// Monomials are sorted variable lists with repetition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommPoly {
    terms: BTreeMap<Vec<u32>, Q>,
}

impl CommPoly {
    pub fn zero() -> CommPoly {
        CommPoly::default()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mut monomial: Vec<u32>, coeff: Q) {
        if Zero::is_zero(&coeff) {
            return;
        }
        monomial.sort_unstable();
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if Zero::is_zero(e.get()) {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut m = a.clone();
                m.extend_from_slice(b);
                out.add_term(m, x * y);
            }
        }
        out
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Vec::len).max()
    }

    /// Replaces every variable by a linear combination of new variables.
    pub fn substitute(&self, image: impl Fn(u32) -> Vec<(u32, Q)>) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = CommPoly::zero();
            acc.add_term(Vec::new(), c.clone());
            for &v in m {
                let mut lin = CommPoly::zero();
                for (w, k) in image(v) {
                    lin.add_term(vec![w], k);
                }
                acc = acc.mul(&lin);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn eval(&self, value: impl Fn(u32) -> Q) -> Q {
        let mut total = crate::scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &v in m {
                t *= value(v);
            }
            total += t;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    #[test]
    fn upoly_product_and_substitution() {
        let p: UPoly<Q> = UPoly::linear(qi(1));
        let q: UPoly<Q> = UPoly::linear(qi(-1));
        let pq = p.mul(&q);
        assert_eq!(pq.coeff(2), Some(&qi(1)));
        assert_eq!(pq.coeff(1), None);
        assert_eq!(pq.coeff(0), Some(&qi(-1)));
        assert_eq!(p.negated_variable().coeff(1), Some(&qi(-1)));
        assert_eq!(p.shifted(-1).degree(), Some(0));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn commpoly_cancels() {
        let mut a = CommPoly::zero();
        a.add_term(vec![2, 1], qi(3));
        a.add_term(vec![1, 2], qi(-3));
        assert!(a.is_zero());
        a.add_term(vec![0], qi(2));
        let sq = a.mul(&a);
        assert_eq!(sq.terms().get(&vec![0, 0]), Some(&qi(4)));
        assert_eq!(sq.eval(|_| qi(3)), qi(36));
        let sub = a.substitute(|_| vec![(5, qi(1)), (6, qi(1))]);
        assert_eq!(sub.terms().len(), 2);
    }
}
