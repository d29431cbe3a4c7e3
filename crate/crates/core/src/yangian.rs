//! Images `κ_l(S^{(r)}_{i,j})` of the twisted Yangian in `U(h)`, their
//! relations, leading symbols and PBW independence.

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::check::Outcome;
use crate::error::{Error, Result};
use crate::lie::{hat, Config, Sign};
use crate::linalg::{Matrix, RowEchelon};
use crate::omega::extract_with_tail;
use crate::poly::{CommPoly, UPoly};
use crate::scalar::{q, qi, Q};
use crate::tensor::{TensorElement, TensorWord};
use crate::uea::UeaElement;
use crate::walgebra::{MonomialIndex, WAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AdmissibleTriple {
    pub i: i32,
    pub j: i32,
    pub r: usize,
}

/// The parity condition selecting a PBW-generating family.
pub fn admissible(i: i32, j: i32, r: usize, config: &Config) -> bool {
    if r < 1 || r > config.l {
        return false;
    }
    let even = r.is_multiple_of(2);
    let weak = match config.phi {
        Sign::Plus => even,
        Sign::Minus => !even,
    };
    if weak {
        i + j <= 0
    } else {
        i + j < 0
    }
}

/// Admissible triples ordered by `(r, i, j)`.
pub fn admissible_triples(config: &Config) -> Vec<AdmissibleTriple> {
    let rows = crate::lie::IndexSet::new(config.n);
    let mut out = Vec::new();
    for r in 1..=config.l {
        for i in rows.iter() {
            for j in rows.iter() {
                if admissible(i, j, r, config) {
                    out.push(AdmissibleTriple { i, j, r });
                }
            }
        }
    }
    out
}

/// `n²l/2` for even `l`, `(n²l − nε)/2` for odd `l`.
pub fn centralizer_dim_formula(config: &Config) -> i64 {
    let (n, l) = (config.n as i64, config.l as i64);
    if l % 2 == 0 {
        n * n * l / 2
    } else {
        (n * n * l - n * config.epsilon.value()) / 2
    }
}

/// Products `Π_p (u + s(e_{p,p}))`, with `(u + s(e_{0,0}))` replaced by
/// `s(e_{0,0})` in the barred product, as `n × n` matrices over `U(h)[u]`.
#[derive(Clone, Debug)]
pub struct KappaProduct {
    n: usize,
    plain: Vec<UPoly<UeaElement>>,
    barred: Option<Vec<UPoly<UeaElement>>>,
}

/// Summary of a PBW independence run.
#[derive(Clone, Debug, Serialize)]
pub struct PbwReport {
    pub max_degree: usize,
    pub generators: usize,
    pub monomials: usize,
    pub rank: usize,
    pub first_dependent: Option<Vec<AdmissibleTriple>>,
}

impl PbwReport {
    pub fn independent(&self) -> bool {
        self.rank == self.monomials
    }
}

impl WAlgebra {
    /// Closed formula for `κ_l(S^{(r)}_{i,j})`.
    pub fn kappa_s(&self, i: i32, j: i32, r: usize) -> Result<UeaElement> {
        if r < 1 {
            return Err(Error::Parameter("r must be at least 1".into()));
        }
        let cols = self.cols().to_vec();
        let base = qi(-2 * self.config().phi.value());
        let mut x = TensorElement::zero();
        for subset in cols.iter().combinations(r) {
            let w: TensorWord = subset.iter().map(|&&p| (p, p)).collect();
            x.add_term(w, Q::one());
        }
        for t in 1..r {
            let factor = Q::one() / num_traits::pow(base.clone(), r - t);
            for subset in cols.iter().combinations(t) {
                if subset.iter().any(|&&p| p == 0) {
                    let w: TensorWord = subset.iter().map(|&&p| (p, p)).collect();
                    x.add_term(w, factor.clone());
                }
            }
        }
        let rows = self.rows();
        rows.check(i)?;
        rows.check(j)?;
        Ok(self.s_tensor(i, j, &x))
    }

    fn poly_matrix_mul(
        &self,
        x: &[UPoly<UeaElement>],
        y: &[UPoly<UeaElement>],
    ) -> Vec<UPoly<UeaElement>> {
        let n = self.config().n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = UPoly::zero();
                for k in 0..n {
                    acc = acc.add(&self.poly_mul(&x[i * n + k], &y[k * n + j]));
                }
                out.push(acc);
            }
        }
        out
    }

    fn evaluation_factor(&self, p: i32, with_u: bool) -> Vec<UPoly<UeaElement>> {
        let rows = self.rows();
        let uea = self.uea();
        let mut out = Vec::new();
        for i in rows.iter() {
            for j in rows.iter() {
                let mut entry = UPoly::constant(self.s_letter(i, j, p, p));
                if with_u && i == j {
                    entry.add_term(1, uea.one());
                }
                out.push(entry);
            }
        }
        out
    }

    pub fn kappa_product(&self) -> &KappaProduct {
        self.kappa_cache.get_or_init(|| {
            let n = self.config().n;
            let cols = self.cols().to_vec();
            let identity: Vec<UPoly<UeaElement>> = (0..n * n)
                .map(|k| {
                    if k / n == k % n {
                        UPoly::constant(self.uea().one())
                    } else {
                        UPoly::zero()
                    }
                })
                .collect();
            let mut plain = identity.clone();
            for &p in &cols {
                plain = self.poly_matrix_mul(&plain, &self.evaluation_factor(p, true));
            }
            let barred = (!self.config().l_is_even()).then(|| {
                let mut acc = identity;
                for &p in &cols {
                    acc = self.poly_matrix_mul(&acc, &self.evaluation_factor(p, p != 0));
                }
                acc
            });
            KappaProduct { n, plain, barred }
        })
    }

    /// `κ_l(S^{(r)}_{i,j})` read off the product of evaluation matrices.
    pub fn kappa_s_product_form(&self, i: i32, j: i32, r: usize) -> Result<UeaElement> {
        if r < 1 {
            return Err(Error::Parameter("r must be at least 1".into()));
        }
        let rows = self.rows();
        rows.check(i)?;
        rows.check(j)?;
        let k = self.kappa_product();
        let slot = rows.position(i).unwrap() * k.n + rows.position(j).unwrap();
        Ok(extract_with_tail(
            &self.config(),
            &k.plain[slot],
            k.barred.as_ref().map(|b| &b[slot]),
            r,
            self.uea().zero(),
        ))
    }

    /// For `r > l`: `κ(S^{(r)}) = 0` (even `l`) or `−φ/2 · κ(S^{(r−1)})` (odd `l`).
    pub fn check_kernel_relation(&self, r: usize) -> Result<Outcome> {
        let config = self.config();
        if r <= config.l {
            return Err(Error::Hypothesis(format!(
                "kernel relation needs r > l, got r = {r}"
            )));
        }
        let uea = self.uea();
        let factor = q(-config.phi.value(), 2);
        let mut outcomes = Vec::new();
        for i in self.rows().iter() {
            for j in self.rows().iter() {
                let lhs = self.kappa_s(i, j, r)?;
                let rhs = if config.l_is_even() {
                    uea.zero()
                } else {
                    self.kappa_s(i, j, r - 1)?.scaled(&factor)
                };
                outcomes.push(Outcome::check(
                    lhs == rhs,
                    || json!({"i": i, "j": j, "r": r, "difference": uea.to_json(&lhs.sub(&rhs))}),
                ));
            }
        }
        Ok(Outcome::all(outcomes))
    }

    /// Coefficient of `u^{−r}` in
    /// `φ^{î+ĵ} S_{−j,−i}(−u) = S_{i,j}(u) + φ (S_{i,j}(u) − S_{i,j}(−u)) / 2u`:
    /// `φ^{î+ĵ} (−1)^r S^{(r)}_{−j,−i} = S^{(r)}_{i,j} + [r even] φ S^{(r−1)}_{i,j}`.
    pub fn check_symmetry_relation(&self, max_r: usize) -> Result<Outcome> {
        if max_r < 1 {
            return Err(Error::Parameter("max_r must be at least 1".into()));
        }
        let config = self.config();
        let uea = self.uea();
        let phi = qi(config.phi.value());
        let mut outcomes = Vec::new();
        for r in 1..=max_r {
            for i in self.rows().iter() {
                for j in self.rows().iter() {
                    let sign = config.phi.pow(hat(i) + hat(j)) * if r % 2 == 0 { 1 } else { -1 };
                    let lhs = self.kappa_s(-j, -i, r)?.scaled(&qi(sign));
                    let mut rhs = self.kappa_s(i, j, r)?;
                    if r % 2 == 0 {
                        rhs.add_scaled(&self.kappa_s(i, j, r - 1)?, &phi);
                    }
                    outcomes.push(Outcome::check(lhs == rhs, || {
                        json!({"i": i, "j": j, "r": r, "difference": uea.to_json(&lhs.sub(&rhs))})
                    }));
                }
            }
        }
        Ok(Outcome::all(outcomes))
    }

    /// Index of the coordinate `x^{[p]}_{i,j}`.
    pub fn theta_variable(&self, p: i32, i: i32, j: i32) -> u32 {
        let n = self.config().n;
        let (rows, cols) = (self.rows(), self.cols());
        ((cols.position(p).unwrap() * n + rows.position(i).unwrap()) * n
            + rows.position(j).unwrap()) as u32
    }

    /// `θ*(y^{[r]}_{i,j}) = Σ x^{[p_1]}_{i,i_1} ⋯ x^{[p_r]}_{i_{r−1},j}` over `p_1 < ⋯ < p_r`.
    pub fn theta_star(&self, i: i32, j: i32, r: usize) -> CommPoly {
        let rows = self.rows().to_vec();
        let cols = self.cols().to_vec();
        let mut out = CommPoly::zero();
        for ps in cols.iter().combinations(r) {
            let paths: Vec<Vec<i32>> = if r <= 1 {
                vec![Vec::new()]
            } else {
                std::iter::repeat_n(rows.iter().copied(), r - 1)
                    .multi_cartesian_product()
                    .collect()
            };
            for mids in paths {
                let mut chain = vec![i];
                chain.extend(mids);
                chain.push(j);
                let vars = ps
                    .iter()
                    .enumerate()
                    .map(|(t, &&p)| self.theta_variable(p, chain[t], chain[t + 1]))
                    .collect();
                out.add_term(vars, Q::one());
            }
        }
        out
    }

    /// `θ*` rewritten in the h-generators via `x^{[p]}_{i,j} ↦ s_{i,j}(e_{p,p})`.
    pub fn theta_star_in_h(&self, i: i32, j: i32, r: usize) -> CommPoly {
        let n = self.config().n as u32;
        let (rows, cols) = (self.rows(), self.cols());
        self.theta_star(i, j, r).substitute(|v| {
            let p = cols.at((v / (n * n)) as usize);
            let a = rows.at(((v / n) % n) as usize);
            let b = rows.at((v % n) as usize);
            self.s_letter(a, b, p, p)
                .terms()
                .map(|(m, c)| (m[0] as u32, c.clone()))
                .collect()
        })
    }

    /// Degree-`d` symbol of `x` in `gr U(h)`, as a polynomial in generators.
    pub fn symbol(&self, x: &UeaElement, d: usize) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m, c) in x.terms() {
            if m.len() == d {
                out.add_term(m.iter().map(|&g| g as u32).collect(), c.clone());
            }
        }
        out
    }

    /// `gr_r κ_l(S^{(r)}_{i,j}) = θ*(y^{[r]}_{i,j})` as polynomials on `h`.
    pub fn check_theta_symbolic(&self, i: i32, j: i32, r: usize) -> Result<Outcome> {
        let kappa = self.kappa_s(i, j, r)?;
        let lhs = self.symbol(&kappa, r);
        let rhs = self.theta_star_in_h(i, j, r);
        let max_len = kappa.max_length().unwrap_or(0);
        Ok(Outcome::check(
            lhs == rhs && max_len <= r,
            || json!({"i": i, "j": j, "r": r, "symbol_terms": lhs.terms().len(), "theta_terms": rhs.terms().len()}),
        ))
    }

    /// A random point `(A_p)` with `A_{−p}[−j][−i] = −φ^{î+ĵ} A_p[i][j]`.
    pub fn random_theta_point(&self, rng: &mut impl Rng) -> Vec<Matrix> {
        let n = self.config().n;
        let (rows, cols) = (self.rows(), self.cols());
        let phi = self.config().phi;
        let mut values: Vec<Option<Q>> = vec![None; cols.size() * n * n];
        for p in cols.iter() {
            for i in rows.iter() {
                for j in rows.iter() {
                    let v = self.theta_variable(p, i, j) as usize;
                    if values[v].is_some() {
                        continue;
                    }
                    let partner = self.theta_variable(-p, -j, -i) as usize;
                    let s = phi.pow(hat(i) + hat(j));
                    if partner == v {
                        values[v] = Some(if s == 1 {
                            Q::zero()
                        } else {
                            random_rational(rng)
                        });
                    } else {
                        let x = random_rational(rng);
                        values[partner] = Some(-x.clone() * qi(s));
                        values[v] = Some(x);
                    }
                }
            }
        }
        cols.iter()
            .map(|p| {
                let mut m = Matrix::zeros(n, n);
                for i in rows.iter() {
                    for j in rows.iter() {
                        let v = self.theta_variable(p, i, j) as usize;
                        m.set(
                            rows.position(i).unwrap(),
                            rows.position(j).unwrap(),
                            values[v].clone().unwrap(),
                        );
                    }
                }
                m
            })
            .collect()
    }

    /// Compares the symbol of `κ_l(S^{(r)}_{i,j})` at a random point with the
    /// `(i,j)` entry of the `r`-th elementary symmetric function of the `A_p`.
    pub fn check_theta_numeric(&self, samples: usize, rng: &mut impl Rng) -> Result<Outcome> {
        let config = self.config();
        let (rows, cols) = (self.rows(), self.cols());
        let pyramid = self.pyramid();
        let order = self.uea().order();
        let mut symbols = Vec::new();
        for r in 1..=config.l {
            for i in rows.iter() {
                for j in rows.iter() {
                    symbols.push((i, j, r, self.symbol(&self.kappa_s(i, j, r)?, r)));
                }
            }
        }
        for sample in 0..samples {
            let point = self.random_theta_point(rng);
            let value = |g: u32| -> Q {
                let (a, b) = order.pair(g as crate::uea::GenId);
                let (i, p) = pyramid.coords(a);
                let j = pyramid.row(b);
                let sign = config.phi.pow(hat(p) * (hat(i) + hat(j)));
                point[cols.position(p).unwrap()]
                    .get(rows.position(i).unwrap(), rows.position(j).unwrap())
                    .clone()
                    * qi(sign)
            };
            let n = config.n;
            let mut elementary = vec![Matrix::identity(n)];
            for (k, a) in point.iter().enumerate() {
                // e_r(A_1..A_k) = e_r(A_1..A_{k−1}) + e_{r−1}(A_1..A_{k−1}) A_k
                let mut next = elementary.clone();
                next.push(Matrix::zeros(n, n));
                for r in 1..=k + 1 {
                    next[r] = next[r].add(&elementary[r - 1].mul(a));
                }
                elementary = next;
            }
            for (i, j, r, sym) in &symbols {
                let lhs = sym.eval(value);
                let rhs = elementary[*r]
                    .get(rows.position(*i).unwrap(), rows.position(*j).unwrap())
                    .clone();
                if lhs != rhs {
                    return Ok(Outcome::fail(json!({
                        "sample": sample, "i": i, "j": j, "r": r,
                        "symbol_value": lhs.to_string(), "matrix_value": rhs.to_string()
                    })));
                }
            }
        }
        Ok(Outcome::pass())
    }

    /// Ordered monomials in the admissible `κ_l(S^{(r)}_{i,j})` of total weight
    /// `Σ r ≤ max_degree`, tested for linear independence by exact rank.
    pub fn pbw_independence_check(&self, max_degree: usize) -> Result<PbwReport> {
        let triples = admissible_triples(&self.config());
        let images = triples
            .iter()
            .map(|t| self.kappa_s(t.i, t.j, t.r))
            .collect::<Result<Vec<_>>>()?;
        let mut index = MonomialIndex::default();
        let mut echelon = RowEchelon::new();
        let mut report = PbwReport {
            max_degree,
            generators: triples.len(),
            monomials: 0,
            rank: 0,
            first_dependent: None,
        };
        let mut stack: Vec<(usize, usize, UeaElement, Vec<usize>)> =
            vec![(0, 0, self.uea().one(), Vec::new())];
        while let Some((start, weight, element, picks)) = stack.pop() {
            report.monomials += 1;
            if echelon.insert(index.vector(&element)) {
                report.rank += 1;
            } else if report.first_dependent.is_none() {
                report.first_dependent = Some(picks.iter().map(|&k| triples[k]).collect());
            }
            for k in start..triples.len() {
                let w = weight + triples[k].r;
                if w > max_degree {
                    continue;
                }
                let mut next = picks.clone();
                next.push(k);
                stack.push((k, w, self.uea().mul(&element, &images[k]), next));
            }
        }
        Ok(report)
    }
}

fn random_rational(rng: &mut impl Rng) -> Q {
    let numer: i64 = rng.gen_range(-9..=9);
    let denom: i64 = rng.gen_range(1..=4);
    q(numer, denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::make_config;

    #[test]
    fn admissible_counts() {
        for (n, l, eps, expected) in [
            (1, 2, Sign::Minus, 1),
            (2, 2, Sign::Plus, 4),
            (2, 2, Sign::Minus, 4),
            (2, 3, Sign::Plus, 5),
            (2, 3, Sign::Minus, 7),
        ] {
            let c = make_config(n, l, eps).unwrap();
            assert_eq!(admissible_triples(&c).len() as i64, expected);
            assert_eq!(centralizer_dim_formula(&c), expected);
        }
        let c = make_config(1, 2, Sign::Minus).unwrap();
        assert_eq!(
            admissible_triples(&c),
            vec![AdmissibleTriple { i: 0, j: 0, r: 2 }]
        );
    }

    #[test]
    fn small_kappa() {
        let w = WAlgebra::new(make_config(1, 2, Sign::Minus).unwrap()).unwrap();
        assert!(w.kappa_s(0, 0, 1).unwrap().is_zero());
        assert!(w.kappa_s(0, 0, 3).unwrap().is_zero());
        assert_eq!(
            w.kappa_s(0, 0, 2).unwrap(),
            w.kappa_s_product_form(0, 0, 2).unwrap()
        );
        let mu = w.miura(&w.w_generator(0, 0, 2).unwrap()).unwrap();
        assert_eq!(mu, w.kappa_s(0, 0, 2).unwrap());
        assert!(w.check_kernel_relation(3).unwrap().passed);
        assert!(w.check_kernel_relation(2).is_err());
        assert!(w.check_symmetry_relation(4).unwrap().passed);
    }

    #[test]
    fn small_pbw() {
        let w = WAlgebra::new(make_config(1, 2, Sign::Minus).unwrap()).unwrap();
        let rep = w.pbw_independence_check(4).unwrap();
        // 1, κ, κ²
        assert_eq!(rep.monomials, 3);
        assert!(rep.independent());
        let rep = w.pbw_independence_check(0).unwrap();
        assert_eq!((rep.monomials, rep.rank), (1, 1));
    }

    #[test]
    fn theta_r1() {
        let w = WAlgebra::new(make_config(2, 2, Sign::Plus).unwrap()).unwrap();
        let t = w.theta_star(1, -1, 1);
        assert_eq!(t.terms().len(), 2);
        assert!(w.check_theta_symbolic(1, -1, 2).unwrap().passed);
    }
}
