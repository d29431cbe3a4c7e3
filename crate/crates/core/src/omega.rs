//! The matrices `Ω(u)`, `Ω̄(u)`, row determinants, the coefficients `ω_r`
//! and the generators `s_{i,j}(ω_r)` of the W-algebra.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{hat, tilde, Config, IndexSet, LieElement};
use crate::poly::{Coefficient, NcRing, UPoly};
use crate::pyramid::rho;
use crate::scalar::{qi, Q};
use crate::tensor::{unit_product, Letter, TensorElement};
use crate::uea::{TermJson, UeaElement};
use crate::walgebra::{Mutation, SMatrix, WAlgebra};

/// Polynomials in `u` over the tensor algebra.
pub type TPoly = UPoly<TensorElement>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaVariant {
    Plain,
    Barred,
}

/// Dense square matrix over a noncommutative ring.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    size: usize,
    entries: Vec<T>,
}

impl<T: NcRing> SquareMatrix<T> {
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> T) -> SquareMatrix<T> {
        let mut entries = Vec::with_capacity(size * size);
        for r in 0..size {
            for c in 0..size {
                entries.push(f(r, c));
            }
        }
        SquareMatrix { size, entries }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<SquareMatrix<T>> {
        let size = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != size) {
            return Err(Error::NotSquare {
                rows: size,
                cols: bad.len(),
            });
        }
        Ok(SquareMatrix {
            size,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r * self.size + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.entries[r * self.size + c] = value;
    }

    /// Zero strictly below the first subdiagonal.
    pub fn is_hessenberg(&self) -> bool {
        (0..self.size).all(|r| (0..r.saturating_sub(1)).all(|c| self.get(r, c).is_zero()))
    }

    /// Row determinant, using the Hessenberg recursion when the zero
    /// pattern permits.
    pub fn rdet(&self) -> T {
        if self.is_hessenberg() {
            self.rdet_hessenberg().expect("pattern checked")
        } else {
            self.rdet_full()
        }
    }

    /// `R_k = Σ_c (−1)^{c−k} M_{k,c} M_{k+1,k} ⋯ M_{c,c−1} R_{c+1}`.
    pub fn rdet_hessenberg(&self) -> Result<T> {
        if !self.is_hessenberg() {
            return Err(Error::Parameter("matrix is not upper Hessenberg".into()));
        }
        let m = self.size;
        let mut tail: Vec<T> = vec![T::zero(); m + 1];
        tail[m] = T::one();
        for k in (0..m).rev() {
            let mut acc = T::zero();
            let mut chain = T::one();
            for c in k..m {
                if c > k {
                    chain = chain.mul(self.get(c, c - 1));
                    if chain.is_zero() {
                        break;
                    }
                }
                let head = self.get(k, c);
                if head.is_zero() || tail[c + 1].is_zero() {
                    continue;
                }
                let mut term = head.mul(&chain).mul(&tail[c + 1]);
                if (c - k) % 2 == 1 {
                    term = term.scaled(&-crate::scalar::one());
                }
                acc.add_assign(&term);
            }
            tail[k] = acc;
        }
        Ok(tail.swap_remove(0))
    }

    /// Full signed sum over permutations, organised as a dynamic program on
    /// the set of columns already used by earlier rows.
    pub fn rdet_full(&self) -> T {
        assert!(self.size < 32, "matrix too large");
        let mut layer: HashMap<u32, T> = HashMap::new();
        layer.insert(0, T::one());
        for r in 0..self.size {
            let mut next: HashMap<u32, T> = HashMap::new();
            for (mask, value) in &layer {
                for c in 0..self.size {
                    if mask & (1 << c) != 0 || self.get(r, c).is_zero() {
                        continue;
                    }
                    let inversions = (mask >> (c + 1)).count_ones();
                    let mut term = value.mul(self.get(r, c));
                    if inversions % 2 == 1 {
                        term = term.scaled(&-crate::scalar::one());
                    }
                    next.entry(mask | (1 << c))
                        .and_modify(|v| v.add_assign(&term))
                        .or_insert(term);
                }
            }
            next.retain(|_, v| !v.is_zero());
            layer = next;
        }
        layer
            .remove(&((1u32 << self.size) - 1))
            .unwrap_or_else(T::zero)
    }
}

/// `Ω(u)` or `Ω̄(u)` as an `l × l` matrix indexed by `I_l`.
#[derive(Clone, Debug)]
pub struct OmegaMatrix {
    variant: OmegaVariant,
    indices: IndexSet,
    matrix: SquareMatrix<TPoly>,
}

/// Entry `(p, q)` of `Ω(u)` or `Ω̄(u)`.
pub fn omega_entry(
    config: &Config,
    variant: OmegaVariant,
    mutation: Mutation,
    p: i32,
    q: i32,
) -> TPoly {
    if variant == OmegaVariant::Barred && p == 0 && q == 0 {
        return TPoly::constant(TensorElement::letter(0, 0));
    }
    let scalar = |v: i64| TPoly::constant(TensorElement::scalar(qi(v)));
    if p < q {
        TPoly::constant(TensorElement::letter(p, q))
    } else if p == q {
        // u_q = u + e_{q,q} + ρ_q
        let c = TensorElement::letter(q, q).add(&TensorElement::scalar(rho(q, config)));
        TPoly::linear(c)
    } else if p == q + 2 {
        match p.signum() {
            -1 => scalar(-1),
            0 => {
                let phi = config.phi.value();
                scalar(if mutation == Mutation::OmegaPhiEntry {
                    phi
                } else {
                    -phi
                })
            }
            _ => scalar(1),
        }
    } else {
        TPoly::zero()
    }
}

impl OmegaMatrix {
    pub fn new(config: &Config, variant: OmegaVariant, mutation: Mutation) -> OmegaMatrix {
        let indices = IndexSet::new(config.l);
        let matrix = SquareMatrix::from_fn(config.l, |r, c| {
            omega_entry(config, variant, mutation, indices.at(r), indices.at(c))
        });
        OmegaMatrix {
            variant,
            indices,
            matrix,
        }
    }

    pub fn variant(&self) -> OmegaVariant {
        self.variant
    }

    pub fn entry(&self, p: i32, q: i32) -> &TPoly {
        let r = self.indices.position(p).expect("row index");
        let c = self.indices.position(q).expect("column index");
        self.matrix.get(r, c)
    }

    pub fn matrix(&self) -> &SquareMatrix<TPoly> {
        &self.matrix
    }

    /// Rows and columns `{p, p+2, …, q}`; empty when `p > q`.
    pub fn submatrix(&self, p: i32, q: i32) -> SquareMatrix<TPoly> {
        if p > q {
            return SquareMatrix::from_fn(0, |_, _| TPoly::zero());
        }
        let start = self.indices.position(p).expect("row index");
        let end = self.indices.position(q).expect("row index");
        SquareMatrix::from_fn(end - start + 1, |r, c| {
            self.matrix.get(start + r, start + c).clone()
        })
    }

    pub fn rdet(&self) -> TPoly {
        self.matrix.rdet()
    }
}

/// Cached `rdet Ω(u)` and, for odd `l`, `rdet Ω̄(u)`.
#[derive(Clone, Debug)]
pub struct OmegaPolys {
    pub plain: TPoly,
    pub barred: Option<TPoly>,
}

impl OmegaPolys {
    pub fn new(config: &Config, mutation: Mutation) -> OmegaPolys {
        let plain = OmegaMatrix::new(config, OmegaVariant::Plain, mutation).rdet();
        let barred = (!config.l_is_even())
            .then(|| OmegaMatrix::new(config, OmegaVariant::Barred, mutation).rdet());
        OmegaPolys { plain, barred }
    }
}

/// `[u^{l−r}]` of `A(u) + Σ_{t≥1} (−2φu)^{−t} B(u)` where `deg B ≤ l − 1`.
pub(crate) fn extract_with_tail<T: Coefficient>(
    config: &Config,
    plain: &UPoly<T>,
    barred: Option<&UPoly<T>>,
    r: usize,
    zero: T,
) -> T {
    let l = config.l as i32;
    let r = r as i32;
    let mut out = plain.coeff(l - r).cloned().unwrap_or_else(|| zero.clone());
    if let Some(barred) = barred {
        let base = qi(-2 * config.phi.value());
        for t in (r - l).max(1)..r {
            if let Some(c) = barred.coeff(l - r + t) {
                let factor = crate::scalar::one() / num_traits::pow(base.clone(), t as usize);
                out.add_assign(&c.scaled(&factor));
            }
        }
    }
    out
}

/// `ω_r` with the unmodified matrices.
pub fn omega_coefficient(r: usize, config: &Config) -> Result<TensorElement> {
    if r < 1 {
        return Err(Error::Parameter("r must be at least 1".into()));
    }
    let polys = OmegaPolys::new(config, Mutation::None);
    Ok(extract_with_tail(
        config,
        &polys.plain,
        polys.barred.as_ref(),
        r,
        TensorElement::zero(),
    ))
}

/// One exported generator `s_{i,j}(ω_r)`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorRecord {
    pub config: Config,
    pub i: i32,
    pub j: i32,
    pub r: usize,
    pub element: Vec<TermJson>,
}

impl WAlgebra {
    pub fn omega_polys(&self) -> &OmegaPolys {
        self.omega_cache
            .get_or_init(|| OmegaPolys::new(&self.config(), self.mutation()))
    }

    pub fn omega_matrix(&self, variant: OmegaVariant) -> OmegaMatrix {
        OmegaMatrix::new(&self.config(), variant, self.mutation())
    }

    pub fn omega(&self, r: usize) -> Result<TensorElement> {
        if r < 1 {
            return Err(Error::Parameter("r must be at least 1".into()));
        }
        let polys = self.omega_polys();
        Ok(extract_with_tail(
            &self.config(),
            &polys.plain,
            polys.barred.as_ref(),
            r,
            TensorElement::zero(),
        ))
    }

    /// All `s_{i,j}(ω_r)` for one `r`.
    pub fn w_generator_matrix(&self, r: usize) -> Result<Arc<SMatrix>> {
        if let Some(hit) = self.cached_generators().get(&r) {
            return Ok(Arc::clone(hit.value()));
        }
        let omega = self.omega(r)?;
        let m = Arc::new(self.s_tensor_matrix(&omega));
        for x in m.entries() {
            if !self.in_p(x) {
                return Err(Error::OutsideSubalgebra("p"));
            }
        }
        self.cached_generators().insert(r, Arc::clone(&m));
        Ok(m)
    }

    /// `s_{i,j}(ω_r)`.
    pub fn w_generator(&self, i: i32, j: i32, r: usize) -> Result<UeaElement> {
        let rows = self.rows();
        rows.check(i)?;
        rows.check(j)?;
        let m = self.w_generator_matrix(r)?;
        Ok(m.get(rows.position(i).unwrap(), rows.position(j).unwrap())
            .clone())
    }

    pub fn generator_record(&self, i: i32, j: i32, r: usize) -> Result<GeneratorRecord> {
        let x = self.w_generator(i, j, r)?;
        Ok(GeneratorRecord {
            config: self.config(),
            i,
            j,
            r,
            element: self.uea().to_json(&x),
        })
    }

    /// The weight `α_{p,q}` of `s_{i,j}(e_{p,q})` in `f_{i,j;r}`.
    pub fn alpha(&self, p: i32, q: i32) -> Q {
        let config = self.config();
        let (case, value) = if q < 0 {
            (1, 1)
        } else if p < 0 && !config.l_is_even() {
            (2, config.phi.value() * neg_one_pow(q / 2))
        } else if p < 0 {
            (3, neg_one_pow((q + 1) / 2))
        } else {
            (4, neg_one_pow((q - p) / 2))
        };
        let flip = self.mutation() == Mutation::AlphaSign(case);
        qi(if flip { -value } else { value })
    }

    /// `f_{i,j;r} = Σ_{q−p=2r} α_{p,q} s_{i,j}(e_{p,q})`.
    pub fn ge_basis_element(&self, i: i32, j: i32, r: usize) -> LieElement {
        let cols = self.cols();
        let mut acc = self.uea().zero();
        for p in cols.iter() {
            let q = p + 2 * r as i32;
            if cols.contains(q) {
                acc.add_scaled(&self.s_letter(i, j, p, q), &self.alpha(p, q));
            }
        }
        self.lie_of(&acc).expect("linear combination of generators")
    }

    /// The sign `γ` of the commutator expansion.
    pub fn gamma(&self, i: i32, j: i32, p: i32, q: i32) -> i64 {
        let c = self.config();
        let (phi, eps) = (c.phi, c.epsilon);
        match (p != 0, q != 0) {
            (true, true) => {
                phi.pow(
                    hat(i) * hat(p) + tilde(i) * tilde(p) + hat(j) * hat(q) + tilde(j) * tilde(q),
                ) * eps.pow(hat(p) + hat(q))
            }
            (false, true) => {
                phi.pow(hat(j) * hat(q) + tilde(j) * tilde(q)) * eps.pow(hat(i) + hat(q))
            }
            (true, false) => {
                phi.pow(hat(i) * hat(p) + tilde(i) * tilde(p)) * eps.pow(hat(p) + hat(j))
            }
            (false, false) => eps.pow(hat(i) + hat(j)),
        }
    }

    /// Closed form of `[s_{i,j}(e_{p,q}), s_{h,k}(y_1 ⋯ y_m)]`.
    #[allow(clippy::too_many_arguments)]
    pub fn s_commutator_expansion(
        &self,
        i: i32,
        j: i32,
        p: i32,
        q: i32,
        h: i32,
        k: i32,
        word: &[Letter],
    ) -> Result<UeaElement> {
        let rows = self.rows();
        for x in [i, j, h, k] {
            rows.check(x)?;
        }
        let cols = self.cols();
        cols.check(p)?;
        cols.check(q)?;
        let uea = self.uea();
        let s = |a: i32, b: i32, w: &[Letter]| self.s_word(a, b, w);
        let mut direct = uea.zero();
        let mut twisted = uea.zero();
        for t in 0..word.len() {
            let (before, rest) = word.split_at(t);
            let (yt, after) = (rest[0], &rest[1..]);
            // e_{p,q} y_t and y_t e_{p,q}
            if let Some(z) = unit_product((p, q), yt) {
                let mut right = vec![z];
                right.extend_from_slice(after);
                direct.add_assign(&uea.mul(&s(h, j, before)?, &s(i, k, &right)?));
            }
            if let Some(z) = unit_product(yt, (p, q)) {
                let mut left = before.to_vec();
                left.push(z);
                direct.add_scaled(
                    &uea.mul(&s(h, j, &left)?, &s(i, k, after)?),
                    &-crate::scalar::one(),
                );
            }
            // e_{−q,−p} y_t and y_t e_{−q,−p}
            if let Some(z) = unit_product((-q, -p), yt) {
                let mut right = vec![z];
                right.extend_from_slice(after);
                twisted.add_scaled(
                    &uea.mul(&s(h, -i, before)?, &s(-j, k, &right)?),
                    &-crate::scalar::one(),
                );
            }
            if let Some(z) = unit_product(yt, (-q, -p)) {
                let mut left = before.to_vec();
                left.push(z);
                twisted.add_assign(&uea.mul(&s(h, -i, &left)?, &s(-j, k, after)?));
            }
        }
        direct.add_scaled(&twisted, &qi(self.gamma(i, j, p, q)));
        Ok(direct)
    }
}

fn neg_one_pow(k: i32) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{make_config, Sign};
    fn t(p: i32, q: i32) -> TensorElement {
        TensorElement::letter(p, q)
    }

    fn scalar(v: Q) -> TensorElement {
        TensorElement::scalar(v)
    }

    #[test]
    fn one_by_one() {
        let c = make_config(1, 1, Sign::Plus).unwrap();
        let om = OmegaMatrix::new(&c, OmegaVariant::Plain, Mutation::None);
        let d = om.rdet();
        assert_eq!(d, TPoly::linear(t(0, 0)));
    }

    #[test]
    fn two_by_two_small() {
        let c = make_config(1, 2, Sign::Minus).unwrap();
        let om = OmegaMatrix::new(&c, OmegaVariant::Plain, Mutation::None);
        assert!(om.entry(1, -1).coeff(0).unwrap() == &scalar(qi(1)));
        let d = om.rdet();
        // (u + e_{−1,−1} − 1)(u + e_{1,1} + 1) − e_{−1,1}
        let um = TPoly::linear(t(-1, -1).add(&scalar(qi(-1))));
        let up = TPoly::linear(t(1, 1).add(&scalar(qi(1))));
        let expected = um.mul(&up).sub(&TPoly::constant(t(-1, 1)));
        assert_eq!(d, expected);
        assert_eq!(om.matrix().rdet_full(), expected);
        let w1 = omega_coefficient(1, &c).unwrap();
        assert_eq!(w1, t(-1, -1).add(&t(1, 1)));
    }

    #[test]
    fn l4_display() {
        let c = make_config(2, 4, Sign::Plus).unwrap();
        let om = OmegaMatrix::new(&c, OmegaVariant::Plain, Mutation::None);
        assert_eq!(om.entry(-3, -1), &TPoly::constant(t(-3, -1)));
        assert_eq!(om.entry(-1, -3), &TPoly::constant(scalar(qi(-1))));
        assert_eq!(om.entry(1, -1), &TPoly::constant(scalar(qi(1))));
        assert_eq!(om.entry(3, 1), &TPoly::constant(scalar(qi(1))));
        assert!(om.entry(3, -1).is_zero());
        assert!(om.entry(1, -3).is_zero());
        let u3 = TPoly::linear(t(3, 3).add(&scalar(rho(3, &c))));
        assert_eq!(om.entry(3, 3), &u3);
    }

    #[test]
    fn barred_and_phi_entry() {
        let c = make_config(1, 3, Sign::Plus).unwrap();
        let plain = OmegaMatrix::new(&c, OmegaVariant::Plain, Mutation::None);
        let barred = OmegaMatrix::new(&c, OmegaVariant::Barred, Mutation::None);
        assert_eq!(plain.entry(0, -2), &TPoly::constant(scalar(qi(-1))));
        assert_eq!(barred.entry(0, 0), &TPoly::constant(t(0, 0)));
        let mutated = OmegaMatrix::new(&c, OmegaVariant::Plain, Mutation::OmegaPhiEntry);
        assert_eq!(mutated.entry(0, -2), &TPoly::constant(scalar(qi(1))));
    }

    #[test]
    fn even_level_vanishes_past_l() {
        let c = make_config(1, 2, Sign::Minus).unwrap();
        for r in 3..6 {
            assert!(omega_coefficient(r, &c).unwrap().is_zero());
        }
        assert!(omega_coefficient(0, &c).is_err());
    }

    #[test]
    fn hessenberg_refuses_dense() {
        let m = SquareMatrix::from_fn(3, |_, _| qi(1));
        assert!(m.rdet_hessenberg().is_err());
        assert_eq!(m.rdet(), qi(0));
        let m = SquareMatrix::from_rows(vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]]).unwrap();
        assert_eq!(m.rdet(), qi(5));
        let m = SquareMatrix::<Q>::from_fn(0, |_, _| qi(0));
        assert_eq!(m.rdet(), qi(1));
        assert!(SquareMatrix::from_rows(vec![vec![qi(1)], vec![qi(1), qi(2)]]).is_err());
    }

    #[test]
    fn small_generators() {
        let w = WAlgebra::new(make_config(1, 2, Sign::Minus).unwrap()).unwrap();
        assert!(w.w_generator(0, 0, 1).unwrap().is_zero());
        let g2 = w.w_generator(0, 0, 2).unwrap();
        assert!(!g2.is_zero());
        assert!(w.is_in_w(&g2).unwrap().is_member());
        assert_eq!(w.gamma(0, 0, 0, 0), 1);
        assert_eq!(w.alpha(-1, 1), qi(-1));
    }

    #[test]
    fn empty_word_expansion() {
        let w = WAlgebra::new(make_config(2, 2, Sign::Plus).unwrap()).unwrap();
        assert!(w
            .s_commutator_expansion(1, -1, -1, 1, 1, 1, &[])
            .unwrap()
            .is_zero());
    }
}
