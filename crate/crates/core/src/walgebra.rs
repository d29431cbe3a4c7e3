//! The finite W-algebra context for one configuration: pyramid, grading,
//! `χ`, the projection `pr`, membership in `W`, the Miura transform and the
//! s-map from the tensor algebra of `gl_l`.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use num_traits::Zero;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::lie::{hat, Config, FPair, IndexSet, LieAlgebra, LieElement};
use crate::poly::UPoly;
use crate::pyramid::{
    build_pyramid_with, nilpotent_e, rho, ChiMap, GradedDecomposition, Labeling, Pyramid,
};
use crate::scalar::{qi, Q};
use crate::tensor::{Letter, TensorElement, TensorWord};
use crate::uea::{BasisOrder, GenId, GeneratorImages, Monomial, Uea, UeaElement};

/// Deliberate corruptions used to show the checks are not vacuous.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mutation {
    #[default]
    None,
    /// Flip the sign of case `1..=4` of the `α_{p,q}` table.
    AlphaSign(u8),
    /// Replace the `−φ` entry of `Ω(u)` by `+φ`.
    OmegaPhiEntry,
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::None => f.write_str("none"),
            Mutation::AlphaSign(k) => write!(f, "alpha{k}"),
            Mutation::OmegaPhiEntry => f.write_str("omega-phi"),
        }
    }
}

impl FromStr for Mutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mutation> {
        match s {
            "none" => Ok(Mutation::None),
            "omega-phi" => Ok(Mutation::OmegaPhiEntry),
            _ => match s.strip_prefix("alpha").and_then(|k| k.parse::<u8>().ok()) {
                Some(k @ 1..=4) => Ok(Mutation::AlphaSign(k)),
                _ => Err(Error::Parameter(format!("unknown mutation {s:?}"))),
            },
        }
    }
}

impl Mutation {
    pub fn all() -> Vec<Mutation> {
        let mut v: Vec<Mutation> = (1..=4).map(Mutation::AlphaSign).collect();
        v.push(Mutation::OmegaPhiEntry);
        v
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WOptions {
    pub labeling: Labeling,
    pub mutation: Mutation,
}

/// `n × n` matrix of UEA elements indexed by `I_n × I_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SMatrix {
    n: usize,
    entries: Vec<UeaElement>,
}

impl SMatrix {
    pub fn get(&self, i_pos: usize, j_pos: usize) -> &UeaElement {
        &self.entries[i_pos * self.n + j_pos]
    }

    pub fn entries(&self) -> &[UeaElement] {
        &self.entries
    }
}

/// Outcome of a membership test.
#[derive(Clone, Debug)]
pub enum Membership {
    Member,
    /// `pr([f, x]) = residue ≠ 0` for the m-generator `f`.
    Witness {
        generator: FPair,
        residue: UeaElement,
    },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

pub struct WAlgebra {
    config: Config,
    options: WOptions,
    pyramid: Pyramid,
    lie: Arc<LieAlgebra>,
    uea: Uea,
    decomposition: GradedDecomposition,
    e: LieElement,
    chi: ChiMap,
    chi_by_gen: Vec<Q>,
    miura_images: Vec<Option<UeaElement>>,
    s_cache: DashMap<TensorWord, Arc<SMatrix>>,
    pub(crate) omega_cache: OnceLock<crate::omega::OmegaPolys>,
    pub(crate) kappa_cache: OnceLock<crate::yangian::KappaProduct>,
    pub(crate) generator_cache: DashMap<usize, Arc<SMatrix>>,
}

impl fmt::Debug for WAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WAlgebra")
            .field("config", &self.config)
            .field("options", &self.options)
            .field("uea", &self.uea)
            .finish()
    }
}

impl WAlgebra {
    pub fn new(config: Config) -> Result<WAlgebra> {
        WAlgebra::with_options(config, WOptions::default())
    }

    pub fn with_options(config: Config, options: WOptions) -> Result<WAlgebra> {
        let pyramid = build_pyramid_with(config, options.labeling)?;
        let lie = Arc::new(LieAlgebra::for_config(&config));
        let decomposition = GradedDecomposition::new(&pyramid, &lie);
        let e = nilpotent_e(&pyramid, &lie);
        let chi = ChiMap::new(&pyramid, &lie, &e, &decomposition)?;
        let order = BasisOrder::new(&lie, |p| pyramid.degree(p));
        let tag = ((config.n as u64) << 32)
            | ((config.l as u64) << 8)
            | (options.labeling == Labeling::RowMajor) as u64;
        let uea = Uea::new(Arc::clone(&lie), order, tag);
        let order = uea.order();
        let chi_by_gen: Vec<Q> = (0..order.len())
            .map(|g| {
                let g = g as GenId;
                if order.is_negative(g) {
                    chi.value(order.pair(g))
                } else {
                    Q::zero()
                }
            })
            .collect();
        let miura_images = (0..order.len())
            .map(|g| {
                let g = g as GenId;
                let d = order.degree(g);
                if d < 0 {
                    None
                } else if d > 0 {
                    Some(uea.zero())
                } else {
                    let (a, b) = order.pair(g);
                    let mut img = uea.generator(g);
                    if a == b {
                        img.add_assign(&uea.scalar(-rho(pyramid.col(a), &config)));
                    }
                    Some(img)
                }
            })
            .collect();
        Ok(WAlgebra {
            config,
            options,
            pyramid,
            lie,
            uea,
            decomposition,
            e,
            chi,
            chi_by_gen,
            miura_images,
            s_cache: DashMap::new(),
            omega_cache: OnceLock::new(),
            kappa_cache: OnceLock::new(),
            generator_cache: DashMap::new(),
        })
    }

    pub fn config(&self) -> Config {
        self.config
    }

    pub fn options(&self) -> WOptions {
        self.options
    }

    pub fn mutation(&self) -> Mutation {
        self.options.mutation
    }

    pub fn pyramid(&self) -> &Pyramid {
        &self.pyramid
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn uea(&self) -> &Uea {
        &self.uea
    }

    pub fn decomposition(&self) -> &GradedDecomposition {
        &self.decomposition
    }

    pub fn e(&self) -> &LieElement {
        &self.e
    }

    pub fn chi_map(&self) -> &ChiMap {
        &self.chi
    }

    pub fn rows(&self) -> IndexSet {
        self.pyramid.rows()
    }

    pub fn cols(&self) -> IndexSet {
        self.pyramid.cols()
    }

    pub fn rho(&self, q: i32) -> Q {
        rho(q, &self.config)
    }

    /// Generators spanning `m`.
    pub fn m_generators(&self) -> impl Iterator<Item = GenId> + '_ {
        self.uea.order().m_start()..self.uea.dim() as GenId
    }

    pub fn in_p(&self, x: &UeaElement) -> bool {
        let m = self.uea.order().m_start();
        self.uea.supported_on(x, |g| g < m)
    }

    pub fn in_h(&self, x: &UeaElement) -> bool {
        let o = self.uea.order();
        self.uea.supported_on(x, |g| o.degree(g) == 0)
    }

    /// Projection onto `U(p)` along the left ideal generated by `x − χ(x)`.
    pub fn pr(&self, x: &UeaElement) -> UeaElement {
        let m_start = self.uea.order().m_start();
        let mut out = self.uea.zero();
        for (mono, c) in x.terms() {
            let split = mono.partition_point(|&g| g < m_start);
            let mut factor = c.clone();
            for &g in &mono[split..] {
                factor *= &self.chi_by_gen[g as usize];
                if factor.is_zero() {
                    break;
                }
            }
            if !factor.is_zero() {
                out.add_term(Monomial::from_slice(&mono[..split]), factor);
            }
        }
        out
    }

    pub fn pr_poly(&self, x: &UPoly<UeaElement>) -> UPoly<UeaElement> {
        x.map(|c| self.pr(c))
    }

    /// Tests `pr([f, x]) = 0` for every m-basis element `f`.
    pub fn is_in_w(&self, x: &UeaElement) -> Result<Membership> {
        if !self.in_p(x) {
            return Err(Error::OutsideSubalgebra("p"));
        }
        for f in self.m_generators() {
            let residue = self.pr(&self.uea.comm(&self.uea.generator(f), x));
            if !residue.is_zero() {
                return Ok(Membership::Witness {
                    generator: self.uea.order().pair(f),
                    residue,
                });
            }
        }
        Ok(Membership::Member)
    }

    /// `μ = η ∘ ξ`: kill positive degrees, then shift diagonal generators.
    pub fn miura(&self, x: &UeaElement) -> Result<UeaElement> {
        if !self.in_p(x) {
            return Err(Error::OutsideSubalgebra("p"));
        }
        self.uea.apply_hom(
            &GeneratorImages {
                images: &self.miura_images,
            },
            x,
        )
    }

    /// `s_{i,j}(e_{p,q}) = φ^{îp̂ + ĵq̂} f_{a,b}`.
    pub fn s_letter(&self, i: i32, j: i32, p: i32, q: i32) -> UeaElement {
        let a = self.pyramid.label(i, p);
        let b = self.pyramid.label(j, q);
        let sign = self.config.phi.pow(hat(i) * hat(p) + hat(j) * hat(q));
        self.uea.f(a, b).scaled(&qi(sign))
    }

    fn letter_matrix(&self, (p, q): Letter) -> SMatrix {
        let rows = self.rows();
        let entries = rows
            .iter()
            .flat_map(|i| rows.iter().map(move |j| (i, j)))
            .map(|(i, j)| self.s_letter(i, j, p, q))
            .collect();
        SMatrix {
            n: self.config.n,
            entries,
        }
    }

    fn identity_matrix(&self) -> SMatrix {
        let n = self.config.n;
        let entries = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    self.uea.one()
                } else {
                    self.uea.zero()
                }
            })
            .collect();
        SMatrix { n, entries }
    }

    fn matrix_product(&self, x: &SMatrix, y: &SMatrix) -> SMatrix {
        let n = self.config.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.uea.zero();
                for k in 0..n {
                    let (a, b) = (x.get(i, k), y.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&self.uea.mul(a, b));
                    }
                }
                entries.push(acc);
            }
        }
        SMatrix { n, entries }
    }

    /// `s(w)` as an `n × n` matrix; built from cached prefixes.
    pub fn s_matrix(&self, word: &[Letter]) -> Arc<SMatrix> {
        if let Some(hit) = self.s_cache.get(word) {
            return Arc::clone(hit.value());
        }
        let value = match word.split_last() {
            None => self.identity_matrix(),
            Some((&last, prefix)) => {
                let left = self.s_matrix(prefix);
                self.matrix_product(&left, &self.letter_matrix(last))
            }
        };
        let value = Arc::new(value);
        self.s_cache
            .insert(TensorWord::from_slice(word), Arc::clone(&value));
        value
    }

    fn check_letters(&self, word: &[Letter]) -> Result<()> {
        let cols = self.cols();
        for &(p, q) in word {
            cols.check(p)?;
            cols.check(q)?;
        }
        Ok(())
    }

    /// `s_{i,j}(w)` for a single word.
    pub fn s_word(&self, i: i32, j: i32, word: &[Letter]) -> Result<UeaElement> {
        let rows = self.rows();
        rows.check(i)?;
        rows.check(j)?;
        self.check_letters(word)?;
        let m = self.s_matrix(word);
        Ok(m.get(rows.position(i).unwrap(), rows.position(j).unwrap())
            .clone())
    }

    /// `s_{i,j}` extended linearly to the tensor algebra.
    pub fn s_tensor(&self, i: i32, j: i32, x: &TensorElement) -> UeaElement {
        let rows = self.rows();
        let (ip, jp) = (
            rows.position(i).expect("row"),
            rows.position(j).expect("row"),
        );
        let mut out = self.uea.zero();
        for (w, c) in x.terms() {
            out.add_scaled(self.s_matrix(w).get(ip, jp), c);
        }
        out
    }

    /// All entries `s_{i,j}(x)` at once.
    pub fn s_tensor_matrix(&self, x: &TensorElement) -> SMatrix {
        let n = self.config.n;
        let mut entries = vec![self.uea.zero(); n * n];
        for (w, c) in x.terms() {
            let m = self.s_matrix(w);
            for (slot, v) in entries.iter_mut().zip(m.entries()) {
                slot.add_scaled(v, c);
            }
        }
        SMatrix { n, entries }
    }

    pub fn s_poly(&self, i: i32, j: i32, x: &UPoly<TensorElement>) -> UPoly<UeaElement> {
        x.map(|c| self.s_tensor(i, j, c))
    }

    /// Multiplication of polynomials with UEA coefficients.
    pub fn poly_mul(&self, x: &UPoly<UeaElement>, y: &UPoly<UeaElement>) -> UPoly<UeaElement> {
        x.mul_with(y, |a, b| self.uea.mul(a, b))
    }

    pub fn poly_comm(&self, x: &UPoly<UeaElement>, y: &UPoly<UeaElement>) -> UPoly<UeaElement> {
        self.poly_mul(x, y).sub(&self.poly_mul(y, x))
    }

    /// Scalar polynomial `Σ c_k u^k` as a UEA polynomial.
    pub fn scalar_poly(&self, coeffs: &[(i32, Q)]) -> UPoly<UeaElement> {
        let mut p = UPoly::zero();
        for (k, c) in coeffs {
            p.add_term(*k, self.uea.scalar(c.clone()));
        }
        p
    }

    /// Lie element image of `x` supported on generators of one degree.
    pub fn lie_of(&self, x: &UeaElement) -> Option<LieElement> {
        self.uea.as_lie_element(x)
    }

    pub fn chi_of_generator(&self, g: GenId) -> &Q {
        &self.chi_by_gen[g as usize]
    }

    pub(crate) fn cached_generators(&self) -> &DashMap<usize, Arc<SMatrix>> {
        &self.generator_cache
    }

    /// Count of cached s-map words, for diagnostics.
    pub fn cached_words(&self) -> usize {
        self.s_cache.len()
    }
}

/// Stable map from PBW monomials to column indices, for rank computations.
#[derive(Default)]
pub struct MonomialIndex {
    index: FxHashMap<Monomial, usize>,
}

impl MonomialIndex {
    pub fn vector(&mut self, x: &UeaElement) -> std::collections::BTreeMap<usize, Q> {
        let mut v = std::collections::BTreeMap::new();
        for (m, c) in x.terms() {
            let next = self.index.len();
            let k = *self.index.entry(m.clone()).or_insert(next);
            v.insert(k, c.clone());
        }
        v
    }
}
