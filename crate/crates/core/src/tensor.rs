//! Words in the matrix units `e_{p,q}` of `gl_l`, and their linear
//! combinations in the tensor algebra.

use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::poly::{Coefficient, NcRing};
use crate::scalar::Q;

/// A matrix unit `e_{p,q}`.
pub type Letter = (i32, i32);

pub type TensorWord = SmallVec<[Letter; 6]>;

/// `e_{p,q} e_{v,w} = δ_{q,v} e_{p,w}` in `M_l`.
pub fn unit_product(x: Letter, y: Letter) -> Option<Letter> {
    (x.1 == y.0).then_some((x.0, y.1))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorElement {
    terms: BTreeMap<TensorWord, Q>,
}

impl TensorElement {
    pub fn zero() -> TensorElement {
        TensorElement::default()
    }

    pub fn scalar(value: Q) -> TensorElement {
        let mut t = TensorElement::zero();
        t.add_term(TensorWord::new(), value);
        t
    }

    pub fn letter(p: i32, q: i32) -> TensorElement {
        TensorElement::word(&[(p, q)])
    }

    pub fn word(letters: &[Letter]) -> TensorElement {
        let mut t = TensorElement::zero();
        t.add_term(TensorWord::from_slice(letters), crate::scalar::one());
        t
    }

    pub fn terms(&self) -> &BTreeMap<TensorWord, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &[Letter]) -> Q {
        self.terms
            .get(word)
            .cloned()
            .unwrap_or_else(crate::scalar::zero)
    }

    pub fn add_term(&mut self, word: TensorWord, coeff: Q) {
        if num_traits::Zero::is_zero(&coeff) {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if num_traits::Zero::is_zero(e.get()) {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        Coefficient::add_assign(&mut out, other);
        out
    }

    pub fn max_length(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }
}

impl Coefficient for TensorElement {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_assign(&mut self, other: &Self) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
    fn scaled(&self, factor: &Q) -> Self {
        if num_traits::Zero::is_zero(factor) {
            return TensorElement::zero();
        }
        TensorElement {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c * factor))
                .collect(),
        }
    }
}

impl NcRing for TensorElement {
    fn zero() -> Self {
        TensorElement::default()
    }
    fn one() -> Self {
        TensorElement::scalar(crate::scalar::one())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = TensorElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, x * y);
            }
        }
        out
    }
}
