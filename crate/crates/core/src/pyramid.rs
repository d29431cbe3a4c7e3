//! Rectangular pyramids: box labelings, the nilpotent `e`, the grading and
//! the character `χ`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{canonicalize_unchecked, Config, FPair, IndexSet, LieAlgebra, LieElement, Sign};
use crate::scalar::{q, qi, Q};

/// Order in which boxes receive the labels `1−nl, 3−nl, …, nl−1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Labeling {
    /// Columns left to right, each top to bottom.
    #[default]
    ColumnMajor,
    /// Rows top to bottom, each left to right. Only valid for `ε = +`.
    RowMajor,
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Labeling::ColumnMajor => "column-major",
            Labeling::RowMajor => "row-major",
        })
    }
}

impl std::str::FromStr for Labeling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Labeling> {
        match s {
            "column-major" | "column" => Ok(Labeling::ColumnMajor),
            "row-major" | "row" => Ok(Labeling::RowMajor),
            other => Err(Error::Parameter(format!("unknown labeling {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pyramid {
    config: Config,
    labeling: Labeling,
    rows: IndexSet,
    cols: IndexSet,
    labels: IndexSet,
    /// `label_at[row_pos * l + col_pos]`
    label_at: Vec<i32>,
    /// `coords[label_pos] = (row, col)`
    coords: Vec<(i32, i32)>,
}

/// JSON form of a pyramid.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PyramidDump {
    pub n: usize,
    pub l: usize,
    pub epsilon: Sign,
    pub phi: Sign,
    pub boxes: Vec<[i32; 3]>,
}

pub fn build_pyramid(config: Config) -> Pyramid {
    build_pyramid_with(config, Labeling::ColumnMajor)
        .expect("column-major labeling is always valid")
}

pub fn build_pyramid_with(config: Config, labeling: Labeling) -> Result<Pyramid> {
    let labels = IndexSet::new(config.big_n());
    let mut label_at = vec![0; config.big_n()];
    let mut next = labels.iter();
    match labeling {
        Labeling::ColumnMajor => {
            for c in 0..config.l {
                for r in 0..config.n {
                    label_at[r * config.l + c] = next.next().unwrap();
                }
            }
        }
        Labeling::RowMajor => {
            for slot in label_at.iter_mut() {
                *slot = next.next().unwrap();
            }
        }
    }
    Pyramid::from_labels(config, labeling, label_at)
}

impl Pyramid {
    /// Validates an explicit labeling given row-major by box.
    pub fn from_labels(config: Config, labeling: Labeling, label_at: Vec<i32>) -> Result<Pyramid> {
        let rows = IndexSet::new(config.n);
        let cols = IndexSet::new(config.l);
        let labels = IndexSet::new(config.big_n());
        if label_at.len() != config.big_n() {
            return Err(Error::InvalidLabeling("wrong number of boxes".into()));
        }
        let mut coords = vec![None; config.big_n()];
        for (k, &a) in label_at.iter().enumerate() {
            let pos = labels
                .position(a)
                .ok_or_else(|| Error::InvalidLabeling(format!("label {a} out of range")))?;
            if coords[pos].is_some() {
                return Err(Error::InvalidLabeling(format!("label {a} used twice")));
            }
            coords[pos] = Some((rows.at(k / config.l), cols.at(k % config.l)));
        }
        let coords: Vec<(i32, i32)> = coords.into_iter().map(Option::unwrap).collect();
        let p = Pyramid {
            config,
            labeling,
            rows,
            cols,
            labels,
            label_at,
            coords,
        };
        for a in labels.iter() {
            let (r, c) = p.coords(a);
            if p.coords(-a) != (-r, -c) {
                return Err(Error::InvalidLabeling(format!(
                    "label {a} is not skew-symmetric"
                )));
            }
            if config.epsilon == Sign::Minus && (c > 0 || (c == 0 && r > 0)) && a <= 0 {
                return Err(Error::InvalidLabeling(format!(
                    "label {a} at row {r}, column {c} must be positive"
                )));
            }
        }
        Ok(p)
    }

    pub fn config(&self) -> Config {
        self.config
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    pub fn rows(&self) -> IndexSet {
        self.rows
    }

    pub fn cols(&self) -> IndexSet {
        self.cols
    }

    pub fn labels(&self) -> IndexSet {
        self.labels
    }

    /// Label of the box in row `i`, column `p`.
    pub fn label(&self, i: i32, p: i32) -> i32 {
        let r = self.rows.position(i).expect("row index");
        let c = self.cols.position(p).expect("column index");
        self.label_at[r * self.config.l + c]
    }

    pub fn coords(&self, a: i32) -> (i32, i32) {
        self.coords[self.labels.position(a).expect("label")]
    }

    pub fn row(&self, a: i32) -> i32 {
        self.coords(a).0
    }

    pub fn col(&self, a: i32) -> i32 {
        self.coords(a).1
    }

    /// `deg f_{a,b} = col(b) − col(a)`.
    pub fn degree(&self, (a, b): FPair) -> i32 {
        self.col(b) - self.col(a)
    }

    pub fn dump(&self) -> PyramidDump {
        let mut boxes = Vec::with_capacity(self.config.big_n());
        for i in self.rows.iter() {
            for p in self.cols.iter() {
                boxes.push([i, p, self.label(i, p)]);
            }
        }
        PyramidDump {
            n: self.config.n,
            l: self.config.l,
            epsilon: self.config.epsilon,
            phi: self.config.phi,
            boxes,
        }
    }
}

/// The nilpotent element of Jordan type `(l^n)` attached to the pyramid.
pub fn nilpotent_e(pyramid: &Pyramid, lie: &LieAlgebra) -> LieElement {
    let mut e = LieElement::zero(lie.epsilon(), lie.big_n());
    let labels = pyramid.labels();
    for a in labels.iter() {
        for b in labels.iter() {
            let (ra, ca) = pyramid.coords(a);
            let (rb, cb) = pyramid.coords(b);
            if ra != rb || ca + 2 != cb {
                continue;
            }
            if cb >= 2 || (cb == 1 && ra > 0) {
                e.add_f(a, b, &qi(1));
            } else if cb == 1 && ra == 0 {
                e.add_f(a, b, &q(1, 2));
            }
        }
    }
    e
}

/// `ρ_q` for a column index `q`.
pub fn rho(q_index: i32, config: &Config) -> Q {
    let n = config.n as i64;
    let eps = config.epsilon.value();
    let q_index = q_index as i64;
    match q_index.signum() {
        1 => q(n * q_index - eps, 2),
        -1 => q(n * q_index + eps, 2),
        _ => Q::zero(),
    }
}

/// Splitting of the f-basis by degree.
#[derive(Clone, Debug)]
pub struct GradedDecomposition {
    pub degrees: BTreeMap<FPair, i32>,
    pub m: Vec<FPair>,
    pub h: Vec<FPair>,
    pub positive: Vec<FPair>,
}

impl GradedDecomposition {
    pub fn new(pyramid: &Pyramid, lie: &LieAlgebra) -> GradedDecomposition {
        let mut degrees = BTreeMap::new();
        let (mut m, mut h, mut positive) = (Vec::new(), Vec::new(), Vec::new());
        for &pair in lie.basis() {
            let d = pyramid.degree(pair);
            degrees.insert(pair, d);
            match d.signum() {
                -1 => m.push(pair),
                0 => h.push(pair),
                _ => positive.push(pair),
            }
        }
        GradedDecomposition {
            degrees,
            m,
            h,
            positive,
        }
    }

    pub fn degree(&self, pair: FPair) -> i32 {
        self.degrees[&pair]
    }

    pub fn p(&self) -> Vec<FPair> {
        self.h.iter().chain(&self.positive).copied().collect()
    }

    /// Degree of a homogeneous element; `None` for zero or mixed elements.
    pub fn homogeneous_degree(&self, x: &LieElement) -> Option<i32> {
        let mut ds = x.terms().keys().map(|&p| self.degree(p));
        let d = ds.next()?;
        ds.all(|e| e == d).then_some(d)
    }
}

/// Values of `χ` on the m-basis, computed by `½ tr(e x)` and checked against
/// the closed-form table.
#[derive(Clone, Debug)]
pub struct ChiMap {
    values: BTreeMap<FPair, Q>,
}

impl ChiMap {
    pub fn new(
        pyramid: &Pyramid,
        lie: &LieAlgebra,
        e: &LieElement,
        decomposition: &GradedDecomposition,
    ) -> Result<ChiMap> {
        let table = chi_table(pyramid, lie.epsilon());
        let e_matrix = lie.matrix_of(e);
        let half = q(1, 2);
        let mut values = BTreeMap::new();
        for &(a, b) in &decomposition.m {
            let trace = e_matrix.mul(&lie.matrix_of_f(a, b)).trace() * &half;
            let expected = table.get(&(a, b)).cloned().unwrap_or_else(Q::zero);
            if trace != expected {
                return Err(Error::ChiMismatch {
                    a,
                    b,
                    table: expected.to_string(),
                    trace: trace.to_string(),
                });
            }
            if !trace.is_zero() {
                values.insert((a, b), trace);
            }
        }
        Ok(ChiMap { values })
    }

    /// `χ` on a canonical m-basis element.
    pub fn value(&self, pair: FPair) -> Q {
        self.values.get(&pair).cloned().unwrap_or_else(Q::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&FPair, &Q)> {
        self.values.iter()
    }

    /// `χ` on an element of `m`.
    pub fn chi(&self, x: &LieElement, decomposition: &GradedDecomposition) -> Result<Q> {
        let mut total = Q::zero();
        for (&pair, c) in x.terms() {
            if decomposition.degree(pair) >= 0 {
                return Err(Error::OutsideSubalgebra("m"));
            }
            total += c * self.value(pair);
        }
        Ok(total)
    }
}

/// The case table: `χ(f_{a,b}) = 1` when `row(a) = row(b)`,
/// `col(a) = col(b) + 2` and either `col(a) ≥ 2` or `col(a) = 1, row(a) ≥ 0`.
fn chi_table(pyramid: &Pyramid, epsilon: Sign) -> BTreeMap<FPair, Q> {
    let mut table = BTreeMap::new();
    let labels = pyramid.labels();
    for a in labels.iter() {
        for b in labels.iter() {
            let (ra, ca) = pyramid.coords(a);
            let (rb, cb) = pyramid.coords(b);
            let fires = ra == rb && ca == cb + 2 && (ca >= 2 || (ca == 1 && ra >= 0));
            if !fires {
                continue;
            }
            let c = canonicalize_unchecked(a, b, epsilon);
            if let Some(pair) = c.pair {
                // χ(f_{a,b}) = 1 and f_{a,b} = c·f_pair
                table.insert(pair, Q::one() / qi(c.coeff));
            }
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::make_config;

    #[test]
    fn paper_labeling_3_2_minus() {
        let p = build_pyramid(make_config(3, 2, Sign::Minus).unwrap());
        assert_eq!(p.label(-2, -1), -5);
        assert_eq!(p.label(-2, 1), 1);
        assert_eq!(p.label(0, -1), -3);
        assert_eq!(p.label(0, 1), 3);
        assert_eq!(p.label(2, -1), -1);
        assert_eq!(p.label(2, 1), 5);
        assert_eq!((p.row(1), p.col(1)), (-2, 1));
    }

    #[test]
    fn small_labeling() {
        let p = build_pyramid(make_config(1, 2, Sign::Minus).unwrap());
        assert_eq!(p.label(0, -1), -1);
        assert_eq!(p.label(0, 1), 1);
    }

    #[test]
    fn row_major_rejected_for_minus() {
        let c = make_config(2, 2, Sign::Minus).unwrap();
        assert!(matches!(
            build_pyramid_with(c, Labeling::RowMajor),
            Err(Error::InvalidLabeling(_))
        ));
        let c = make_config(2, 2, Sign::Plus).unwrap();
        let p = build_pyramid_with(c, Labeling::RowMajor).unwrap();
        for a in p.labels().iter() {
            assert_eq!(p.coords(-a), (-p.row(a), -p.col(a)));
        }
    }

    #[test]
    fn nilpotent_examples() {
        let c = make_config(3, 2, Sign::Minus).unwrap();
        let p = build_pyramid(c);
        let lie = LieAlgebra::for_config(&c);
        let e = nilpotent_e(&p, &lie);
        let expected = lie.element([((-1, 5), qi(1)), ((-3, 3), q(1, 2))]);
        assert_eq!(e, expected);

        let c = make_config(1, 2, Sign::Minus).unwrap();
        let p = build_pyramid(c);
        let lie = LieAlgebra::for_config(&c);
        let e = nilpotent_e(&p, &lie);
        assert_eq!(e, lie.element([((-1, 1), q(1, 2))]));
    }

    #[test]
    fn rho_values() {
        let c = make_config(1, 2, Sign::Minus).unwrap();
        assert_eq!(rho(1, &c), qi(1));
        assert_eq!(rho(-1, &c), qi(-1));
        assert_eq!(rho(0, &c), qi(0));
        let c = make_config(2, 4, Sign::Plus).unwrap();
        for q_index in [1, 3] {
            assert_eq!(rho(-q_index, &c), -rho(q_index, &c));
        }
    }

    #[test]
    fn chi_small() {
        let c = make_config(1, 2, Sign::Minus).unwrap();
        let p = build_pyramid(c);
        let lie = LieAlgebra::for_config(&c);
        let e = nilpotent_e(&p, &lie);
        let d = GradedDecomposition::new(&p, &lie);
        let chi = ChiMap::new(&p, &lie, &e, &d).unwrap();
        assert_eq!(chi.value((1, -1)), qi(1));
        assert!(matches!(
            chi.chi(&lie.element([((-1, 1), qi(1))]), &d),
            Err(Error::OutsideSubalgebra("m"))
        ));
    }
}
