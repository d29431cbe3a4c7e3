//! Independent oracles, instantiation of the invariance lemmas, and the
//! suite runner that produces newline-delimited JSON reports.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::check::Outcome;
use crate::error::{Error, Result};
use crate::lie::{hat, tilde, Config, IndexSet, LieAlgebra, LieElement, Sign};
use crate::linalg::{exact_rank, Matrix};
use crate::omega::{OmegaMatrix, OmegaVariant, SquareMatrix, TPoly};
use crate::poly::UPoly;
use crate::pyramid::{build_pyramid, nilpotent_e, Labeling};
use crate::scalar::{q, qi};
use crate::tensor::{Letter, TensorElement};
use crate::uea::{GenId, UeaElement};
use crate::walgebra::{Membership, Mutation, WAlgebra, WOptions};
use crate::yangian::{admissible_triples, centralizer_dim_formula};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const THETA_SAMPLES: usize = 20;
pub const SAMPLED_TRIPLES: usize = 100;

/// The configuration grid used when no configuration is given.
pub fn default_grid() -> Vec<Config> {
    use Sign::{Minus, Plus};
    [
        (1, 2, Minus),
        (2, 2, Plus),
        (2, 2, Minus),
        (3, 2, Minus),
        (1, 3, Plus),
        (2, 3, Plus),
        (2, 3, Minus),
        (2, 4, Plus),
        (2, 4, Minus),
        (1, 4, Minus),
    ]
    .into_iter()
    .map(|(n, l, e)| Config::new(n, l, e).expect("grid configurations are valid"))
    .collect()
}

/// Every valid configuration with `l ≥ 2` and `nl ≤ max_nl`.
pub fn configs_up_to(max_nl: usize) -> Vec<Config> {
    let mut out = Vec::new();
    for n in 1..=max_nl / 2 {
        for l in 2..=max_nl / n {
            for e in [Sign::Plus, Sign::Minus] {
                if let Ok(c) = Config::new(n, l, e) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Dimension of the centralizer of `e`: the nullity of `X ↦ EX − XE`
/// restricted to the matrix realization of the Lie algebra.
pub fn oracle_centralizer_dim(config: &Config) -> usize {
    let lie = LieAlgebra::for_config(config);
    let e = lie.matrix_of(&nilpotent_e(&build_pyramid(*config), &lie));
    let vectors = lie.basis().iter().map(|&(a, b)| {
        let x = lie.matrix_of_f(a, b);
        let c = e.mul(&x).sub(&x.mul(&e));
        let big_n = c.rows();
        let mut v = std::collections::BTreeMap::new();
        for r in 0..big_n {
            for s in 0..big_n {
                let entry = c.get(r, s);
                if !num_traits::Zero::is_zero(entry) {
                    v.insert(r * big_n + s, entry.clone());
                }
            }
        }
        v
    });
    lie.dim() - exact_rank(vectors)
}

/// Jordan block sizes of `e` in decreasing order, from ranks of its powers.
pub fn oracle_jordan_type(config: &Config) -> Vec<usize> {
    let lie = LieAlgebra::for_config(config);
    let e = lie.matrix_of(&nilpotent_e(&build_pyramid(*config), &lie));
    let big_n = e.rows();
    let mut ranks = vec![big_n];
    let mut power = Matrix::identity(big_n);
    while *ranks.last().unwrap() > 0 {
        power = power.mul(&e);
        ranks.push(power.rank());
        if ranks.len() > big_n + 1 {
            break;
        }
    }
    // blocks of size ≥ k: rank(e^{k−1}) − rank(e^k)
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::new();
    for k in (1..=at_least.len()).rev() {
        let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
        parts.extend(std::iter::repeat_n(k, exact));
    }
    parts
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    #[serde(rename = "4.2")]
    RowReplaced,
    #[serde(rename = "4.3")]
    PartialMinor,
    #[serde(rename = "4.4")]
    FullDeterminant,
    #[serde(rename = "4.5")]
    EvenMiddle,
    #[serde(rename = "4.6")]
    OddMiddle,
}

impl LemmaId {
    pub fn all() -> [LemmaId; 5] {
        [
            LemmaId::RowReplaced,
            LemmaId::PartialMinor,
            LemmaId::FullDeterminant,
            LemmaId::EvenMiddle,
            LemmaId::OddMiddle,
        ]
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaId::RowReplaced => "4.2",
            LemmaId::PartialMinor => "4.3",
            LemmaId::FullDeterminant => "4.4",
            LemmaId::EvenMiddle => "4.5",
            LemmaId::OddMiddle => "4.6",
        })
    }
}

impl FromStr for LemmaId {
    type Err = Error;
    fn from_str(s: &str) -> Result<LemmaId> {
        LemmaId::all()
            .into_iter()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown lemma {s:?}")))
    }
}

/// Indices for one lemma instance. `h`, `k` are ignored by 4.2; `q` is
/// ignored by 4.5 and 4.6; `p` is used by 4.3 only.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaParams {
    pub i: i32,
    pub j: i32,
    pub h: i32,
    pub k: i32,
    pub q: i32,
    pub p: i32,
}

fn check_hypotheses(lemma: LemmaId, config: &Config, x: &LemmaParams) -> Result<()> {
    let rows = IndexSet::new(config.n);
    let cols = IndexSet::new(config.l);
    rows.check(x.i)?;
    rows.check(x.j)?;
    if lemma != LemmaId::RowReplaced {
        rows.check(x.h)?;
        rows.check(x.k)?;
    }
    let fail = |why: &str| Err(Error::Hypothesis(format!("lemma {lemma}: {why}")));
    match lemma {
        LemmaId::RowReplaced => {
            if !(cols.contains(x.q) && x.q >= 0 && cols.contains(x.q + 2)) {
                return fail("needs q ≥ 0 with q, q+2 ∈ I_l");
            }
        }
        LemmaId::PartialMinor => {
            if !(cols.contains(x.q) && x.q > 0 && cols.contains(x.q + 2)) {
                return fail("needs q > 0 with q, q+2 ∈ I_l");
            }
            if !(cols.contains(x.p) && -x.q < x.p && x.p < x.q) {
                return fail("needs p ∈ I_l with −q < p < q");
            }
        }
        LemmaId::FullDeterminant => {
            if !(cols.contains(x.q) && x.q > 0 && cols.contains(x.q + 2)) {
                return fail("needs q > 0 with q, q+2 ∈ I_l");
            }
        }
        LemmaId::EvenMiddle => {
            if !config.l_is_even() {
                return fail("needs l even");
            }
        }
        LemmaId::OddMiddle => {
            if config.l_is_even() || config.l < 3 {
                return fail("needs l odd and l ≥ 3");
            }
        }
    }
    Ok(())
}

/// Every hypothesis-respecting parameter tuple of `lemma` in `config`.
pub fn lemma_parameters(lemma: LemmaId, config: &Config) -> Vec<LemmaParams> {
    let rows = IndexSet::new(config.n).to_vec();
    let cols = IndexSet::new(config.l).to_vec();
    let mut out = Vec::new();
    let quads: Vec<(i32, i32, i32, i32)> = if lemma == LemmaId::RowReplaced {
        rows.iter()
            .flat_map(|&i| rows.iter().map(move |&j| (i, j, i, j)))
            .collect()
    } else {
        itertools::iproduct!(rows.iter(), rows.iter(), rows.iter(), rows.iter())
            .map(|(&i, &j, &h, &k)| (i, j, h, k))
            .collect()
    };
    let mut qp: Vec<(i32, i32)> = Vec::new();
    match lemma {
        LemmaId::RowReplaced | LemmaId::FullDeterminant => {
            qp.extend(cols.iter().map(|&q| (q, 0)));
        }
        LemmaId::PartialMinor => {
            for &q in &cols {
                qp.extend(cols.iter().map(|&p| (q, p)));
            }
        }
        LemmaId::EvenMiddle | LemmaId::OddMiddle => qp.push((0, 0)),
    }
    for &(i, j, h, k) in &quads {
        for &(q, p) in &qp {
            let x = LemmaParams { i, j, h, k, q, p };
            if check_hypotheses(lemma, config, &x).is_ok() {
                out.push(x);
            }
        }
    }
    out
}

fn poly_json(w: &WAlgebra, x: &UPoly<UeaElement>) -> Value {
    Value::Array(
        x.terms()
            .iter()
            .map(|(k, c)| json!({"power": k, "coeff": w.uea().to_json(c)}))
            .collect(),
    )
}

impl WAlgebra {
    fn s_rdet(&self, i: i32, j: i32, m: &SquareMatrix<TPoly>) -> UPoly<UeaElement> {
        self.s_poly(i, j, &m.rdet())
    }

    fn pr_commutator_with(&self, x: &UeaElement, y: &UPoly<UeaElement>) -> UPoly<UeaElement> {
        self.pr_poly(&self.poly_comm(&UPoly::constant(x.clone()), y))
    }

    fn variants(&self) -> Vec<OmegaVariant> {
        if self.config().l_is_even() {
            vec![OmegaVariant::Plain]
        } else {
            vec![OmegaVariant::Plain, OmegaVariant::Barred]
        }
    }

    /// Checks one instance of a determinant identity used for invariance.
    pub fn verify_section4_lemma(&self, lemma: LemmaId, x: &LemmaParams) -> Result<Outcome> {
        let config = self.config();
        check_hypotheses(lemma, &config, x)?;
        let l = config.l as i32;
        let plain = self.omega_matrix(OmegaVariant::Plain);
        let compare = |lhs: UPoly<UeaElement>, rhs: UPoly<UeaElement>, label: &str| {
            Outcome::check(
                lhs == rhs,
                || json!({"identity": label, "lhs": poly_json(self, &lhs), "rhs": poly_json(self, &rhs)}),
            )
        };
        let zero = UPoly::zero();
        let mut outcomes = Vec::new();
        match lemma {
            LemmaId::RowReplaced => {
                let factor =
                    self.scalar_poly(&[(1, qi(1)), (0, self.rho(x.q + 2) - qi(config.n as i64))]);
                let rhs_of = |m: &OmegaMatrix| {
                    self.poly_mul(
                        &factor,
                        &self.s_rdet(x.i, x.j, &m.submatrix(x.q + 4, l - 1)),
                    )
                };
                let rhs = rhs_of(&plain);
                for variant in self.variants() {
                    let om = self.omega_matrix(variant);
                    let mut m = om.submatrix(x.q, l - 1);
                    for c in 0..m.size() {
                        let col = x.q + 2 * c as i32;
                        m.set(0, c, TPoly::constant(TensorElement::letter(x.q + 2, col)));
                    }
                    let lhs = self.pr_poly(&self.s_rdet(x.i, x.j, &m));
                    outcomes.push(compare(
                        lhs.clone(),
                        rhs.clone(),
                        &format!("{variant:?} row-replaced"),
                    ));
                    outcomes.push(compare(
                        lhs,
                        rhs_of(&om),
                        &format!("{variant:?} right side"),
                    ));
                }
            }
            LemmaId::PartialMinor | LemmaId::FullDeterminant => {
                let y = self.s_letter(x.i, x.j, x.q + 2, x.q);
                let start = if lemma == LemmaId::PartialMinor {
                    x.p
                } else {
                    1 - l
                };
                for variant in self.variants() {
                    let om = self.omega_matrix(variant);
                    let lhs = self.pr_commutator_with(
                        &y,
                        &self.s_rdet(x.h, x.k, &om.submatrix(start, l - 1)),
                    );
                    outcomes.push(compare(lhs, zero.clone(), &format!("{variant:?}")));
                }
            }
            LemmaId::EvenMiddle => {
                let y = self.s_letter(x.i, x.j, 1, -1);
                let lhs = self.pr_commutator_with(&y, &self.s_rdet(x.h, x.k, plain.matrix()));
                outcomes.push(compare(lhs, zero, "Plain"));
            }
            LemmaId::OddMiddle => {
                let phi = config.phi;
                let sigma = qi(phi.pow(tilde(x.i) + hat(x.j)));
                let half_phi = q(phi.value(), 2);
                let y = self.s_letter(x.i, x.j, 2, 0);
                let a = self.poly_mul(
                    &self.s_rdet(x.h, x.j, &plain.submatrix(1 - l, -2)),
                    &self.s_rdet(x.i, x.k, &plain.submatrix(4, l - 1)),
                );
                let left = self.s_rdet(x.h, -x.i, &plain.submatrix(1 - l, -4));
                let c4 = self.poly_mul(&left, &self.s_rdet(-x.j, x.k, &plain.submatrix(4, l - 1)));
                let c2 = self.poly_mul(&left, &self.s_rdet(-x.j, x.k, &plain.submatrix(2, l - 1)));
                let plain_rhs = a
                    .scaled(&half_phi)
                    .add(&c4.scaled(&(&sigma * &half_phi)))
                    .sub(&c2.scaled(&(&sigma * q(1, 2))));
                let lhs = self.pr_commutator_with(&y, &self.s_rdet(x.h, x.k, plain.matrix()));
                outcomes.push(compare(lhs, plain_rhs, "Plain"));
                let shift = self.scalar_poly(&[(1, qi(1)), (0, half_phi.clone())]);
                let inner = a
                    .add(&c4.scaled(&sigma))
                    .sub(&c2.scaled(&(&sigma * qi(phi.value()))));
                let barred_rhs = self.poly_mul(&shift, &inner);
                let barred = self.omega_matrix(OmegaVariant::Barred);
                let lhs = self.pr_commutator_with(&y, &self.s_rdet(x.h, x.k, barred.matrix()));
                outcomes.push(compare(lhs, barred_rhs, "Barred"));
            }
        }
        Ok(Outcome::all(outcomes))
    }
}

/// Standalone form of the lemma check.
pub fn verify_section4_lemma(lemma: LemmaId, config: &Config, x: &LemmaParams) -> Result<bool> {
    Ok(WAlgebra::new(*config)?
        .verify_section4_lemma(lemma, x)?
        .passed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Invariance,
    Images,
    Kernel,
    Symmetry,
    Pbw,
    Centralizer,
    Lemma4,
    Core,
    All,
}

impl Suite {
    pub fn expand(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![
                Invariance,
                Images,
                Kernel,
                Symmetry,
                Pbw,
                Centralizer,
                Lemma4,
                Core,
            ],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Invariance => "invariance",
            Suite::Images => "images",
            Suite::Kernel => "kernel",
            Suite::Symmetry => "symmetry",
            Suite::Pbw => "pbw",
            Suite::Centralizer => "centralizer",
            Suite::Lemma4 => "lemma4",
            Suite::Core => "core",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Suite> {
        use Suite::*;
        [
            Invariance,
            Images,
            Kernel,
            Symmetry,
            Pbw,
            Centralizer,
            Lemma4,
            Core,
            All,
        ]
        .into_iter()
        .find(|x| x.name() == s)
        .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// One configuration and suite to run.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanEntry {
    pub config: Config,
    pub suite: Suite,
    pub options: WOptions,
    /// Largest `r` for generator-level checks; `None` means `l + 3`.
    pub max_r: Option<usize>,
    /// Largest total weight for PBW monomials; `None` means 4, or 3 when `nl ≥ 8`.
    pub pbw_degree: Option<usize>,
    pub seed: u64,
}

impl PlanEntry {
    pub fn new(config: Config, suite: Suite) -> PlanEntry {
        PlanEntry {
            config,
            suite,
            options: WOptions::default(),
            max_r: None,
            pbw_degree: None,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_options(mut self, options: WOptions) -> PlanEntry {
        self.options = options;
        self
    }

    pub fn with_max_r(mut self, max_r: usize) -> PlanEntry {
        self.max_r = Some(max_r);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> PlanEntry {
        self.seed = seed;
        self
    }

    fn max_r(&self) -> usize {
        self.max_r.unwrap_or(self.config.l + 3)
    }

    fn pbw_degree(&self) -> usize {
        self.pbw_degree
            .unwrap_or(if self.config.n * self.config.l >= 8 {
                3
            } else {
                4
            })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationPlan {
    pub entries: Vec<PlanEntry>,
    /// Worker threads; `0` uses the rayon default.
    pub jobs: usize,
    pub output: Option<PathBuf>,
}

impl VerificationPlan {
    pub fn new(entries: Vec<PlanEntry>) -> VerificationPlan {
        VerificationPlan {
            entries,
            jobs: 0,
            output: None,
        }
    }

    /// Every configuration of `configs` under every suite of `suite`.
    pub fn grid(configs: &[Config], suite: Suite) -> VerificationPlan {
        let entries = configs
            .iter()
            .flat_map(|&c| {
                suite
                    .expand()
                    .into_iter()
                    .map(move |s| PlanEntry::new(c, s))
            })
            .collect();
        VerificationPlan::new(entries)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub config: Config,
    pub labeling: String,
    pub mutation: String,
    pub check: String,
    pub parameters: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Value>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub version: String,
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub configs: Vec<Config>,
    pub seeds: Vec<u64>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.status == Status::Fail)
    }

    /// Rows whose check name starts with `prefix`.
    pub fn rows_for<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a ReportRow> {
        self.rows
            .iter()
            .filter(move |r| r.check.starts_with(prefix))
    }

    pub fn to_ndjson(&self) -> Result<String> {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&serde_json::to_string(row)?);
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&json!({"summary": self.summary}))?);
        out.push('\n');
        Ok(out)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = self.to_ndjson()?;
        let mut file = std::fs::File::create(path)?;
        file.write_all(text.as_bytes())?;
        Ok(())
    }
}

type Job = Box<dyn FnOnce() -> Result<Outcome> + Send>;

struct Task {
    entry: usize,
    check: String,
    parameters: Value,
    job: Job,
}

fn rng_for(seed: u64, config: &Config, salt: u64) -> ChaCha8Rng {
    let tag =
        ((config.n as u64) << 16) | ((config.l as u64) << 8) | (config.epsilon.value() + 1) as u64;
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
}

fn outcome_of(result: Result<Outcome>) -> Outcome {
    match result {
        Ok(o) => o,
        Err(e) => Outcome::fail(json!({"error": e.to_string()})),
    }
}

fn index_pairs(w: &WAlgebra) -> Vec<(i32, i32)> {
    let rows = w.rows();
    rows.iter()
        .flat_map(|i| rows.iter().map(move |j| (i, j)))
        .collect()
}

fn push(tasks: &mut Vec<Task>, entry: usize, check: &str, parameters: Value, job: Job) {
    tasks.push(Task {
        entry,
        check: check.to_string(),
        parameters,
        job,
    });
}

fn invariance_tasks(w: &Arc<WAlgebra>, entry: usize, plan: &PlanEntry, tasks: &mut Vec<Task>) {
    for r in 1..=plan.max_r() {
        for (i, j) in index_pairs(w) {
            let w = Arc::clone(w);
            push(
                tasks,
                entry,
                "invariance",
                json!({"i": i, "j": j, "r": r}),
                Box::new(move || {
                    let g = w.w_generator(i, j, r)?;
                    Ok(match w.is_in_w(&g)? {
                        Membership::Member => Outcome::pass(),
                        Membership::Witness { generator, residue } => Outcome::fail(json!({
                            "m_generator": [generator.0, generator.1],
                            "residue": w.uea().to_json(&residue),
                        })),
                    })
                }),
            );
        }
    }
}

fn images_tasks(w: &Arc<WAlgebra>, entry: usize, plan: &PlanEntry, tasks: &mut Vec<Task>) {
    for r in 1..=plan.max_r() {
        for (i, j) in index_pairs(w) {
            let wm = Arc::clone(w);
            push(
                tasks,
                entry,
                "images.miura",
                json!({"i": i, "j": j, "r": r}),
                Box::new(move || {
                    let mu = wm.miura(&wm.w_generator(i, j, r)?)?;
                    let kappa = wm.kappa_s(i, j, r)?;
                    Ok(Outcome::check(
                        mu == kappa,
                        || json!({"miura": wm.uea().to_json(&mu), "kappa": wm.uea().to_json(&kappa)}),
                    ))
                }),
            );
            let wp = Arc::clone(w);
            push(
                tasks,
                entry,
                "images.product_form",
                json!({"i": i, "j": j, "r": r}),
                Box::new(move || {
                    let a = wp.kappa_s(i, j, r)?;
                    let b = wp.kappa_s_product_form(i, j, r)?;
                    Ok(Outcome::check(
                        a == b,
                        || json!({"closed": wp.uea().to_json(&a), "product": wp.uea().to_json(&b)}),
                    ))
                }),
            );
        }
    }
}

fn pbw_tasks(w: &Arc<WAlgebra>, entry: usize, plan: &PlanEntry, tasks: &mut Vec<Task>) {
    let degree = plan.pbw_degree();
    let wi = Arc::clone(w);
    push(
        tasks,
        entry,
        "pbw.independence",
        json!({"max_degree": degree}),
        Box::new(move || {
            let report = wi.pbw_independence_check(degree)?;
            let ok = report.independent();
            Ok(Outcome::check(ok, || {
                serde_json::to_value(&report).unwrap_or(Value::Null)
            }))
        }),
    );
    for r in 1..=3 {
        for (i, j) in index_pairs(w) {
            let ws = Arc::clone(w);
            push(
                tasks,
                entry,
                "pbw.theta_symbolic",
                json!({"i": i, "j": j, "r": r}),
                Box::new(move || ws.check_theta_symbolic(i, j, r)),
            );
        }
    }
    let wn = Arc::clone(w);
    let (seed, config) = (plan.seed, plan.config);
    push(
        tasks,
        entry,
        "pbw.theta_numeric",
        json!({"samples": THETA_SAMPLES, "seed": seed}),
        Box::new(move || {
            let mut rng = rng_for(seed, &config, 1);
            wn.check_theta_numeric(THETA_SAMPLES, &mut rng)
        }),
    );
}

fn centralizer_dimension(w: &WAlgebra) -> Result<Outcome> {
    let config = w.config();
    let oracle = oracle_centralizer_dim(&config);
    let triples = admissible_triples(&config);
    let formula = centralizer_dim_formula(&config);
    let lie = w.lie();
    let e = w.e();
    let family: Vec<LieElement> = triples
        .iter()
        .map(|t| w.ge_basis_element(t.i, t.j, t.r - 1))
        .collect();
    let mut not_central = None;
    for (t, f) in triples.iter().zip(&family) {
        if !lie.bracket(e, f)?.is_zero() {
            not_central = Some(*t);
            break;
        }
    }
    let rank = exact_rank(family.iter().map(|f| {
        lie.coordinates(f)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !num_traits::Zero::is_zero(c))
            .collect()
    }));
    let ok = oracle == triples.len()
        && formula == oracle as i64
        && rank == oracle
        && not_central.is_none();
    Ok(Outcome::check(ok, || {
        json!({
            "oracle": oracle, "admissible": triples.len(), "formula": formula,
            "rank": rank, "not_central": not_central,
        })
    }))
}

fn centralizer_tasks(w: &Arc<WAlgebra>, entry: usize, _plan: &PlanEntry, tasks: &mut Vec<Task>) {
    let wd = Arc::clone(w);
    push(
        tasks,
        entry,
        "centralizer.dimension",
        json!({}),
        Box::new(move || centralizer_dimension(&wd)),
    );
    for r in 0..w.config().l {
        for (i, j) in index_pairs(w) {
            let w = Arc::clone(w);
            push(
                tasks,
                entry,
                "centralizer.leading_term",
                json!({"i": i, "j": j, "r": r}),
                Box::new(move || {
                    let g = w.w_generator(i, j, r + 1)?;
                    let f = w.uea().lie_element(&w.ge_basis_element(i, j, r));
                    // gr'_r: the degree-r component, with nothing above degree r
                    let lead = w.uea().good_component(&g, r as i32);
                    let top = if g.is_zero() {
                        0
                    } else {
                        w.uea().good_degree(&g)?
                    };
                    Ok(Outcome::check(lead == f && top <= r as i32, || {
                        json!({
                            "component": w.uea().to_json(&lead),
                            "expected": w.uea().to_json(&f),
                            "good_degree": top,
                        })
                    }))
                }),
            );
        }
    }
}

fn lemma_tasks(w: &Arc<WAlgebra>, entry: usize, _plan: &PlanEntry, tasks: &mut Vec<Task>) {
    for lemma in LemmaId::all() {
        for x in lemma_parameters(lemma, &w.config()) {
            let w = Arc::clone(w);
            let params = json!({"lemma": lemma.to_string(), "indices": x});
            push(
                tasks,
                entry,
                "lemma4",
                params,
                Box::new(move || w.verify_section4_lemma(lemma, &x)),
            );
        }
    }
}

fn random_lie_element(lie: &LieAlgebra, rng: &mut impl Rng) -> LieElement {
    let mut x = LieElement::zero(lie.epsilon(), lie.big_n());
    for _ in 0..3 {
        let k = rng.gen_range(0..lie.dim());
        let (a, b) = lie.basis()[k];
        x.add_f(a, b, &qi(rng.gen_range(-3..=3)));
    }
    x
}

fn lie_axioms(w: &WAlgebra, rng: &mut impl Rng) -> Result<Outcome> {
    let lie = w.lie();
    for sample in 0..SAMPLED_TRIPLES {
        let (x, y, z) = (
            random_lie_element(lie, rng),
            random_lie_element(lie, rng),
            random_lie_element(lie, rng),
        );
        let xy = lie.bracket(&x, &y)?;
        if !xy.add(&lie.bracket(&y, &x)?).is_zero() {
            return Ok(Outcome::fail(
                json!({"sample": sample, "law": "antisymmetry"}),
            ));
        }
        let jacobi = lie
            .bracket(&x, &lie.bracket(&y, &z)?)?
            .add(&lie.bracket(&y, &lie.bracket(&z, &x)?)?)
            .add(&lie.bracket(&z, &xy)?);
        if !jacobi.is_zero() {
            return Ok(Outcome::fail(json!({"sample": sample, "law": "jacobi"})));
        }
    }
    Ok(Outcome::pass())
}

fn matrix_oracle(w: &WAlgebra, rng: &mut impl Rng) -> Result<Outcome> {
    let lie = w.lie();
    let dim = lie.dim();
    let pairs: Vec<(usize, usize)> = if w.config().n * w.config().l <= 6 {
        (0..dim)
            .flat_map(|x| (0..dim).map(move |y| (x, y)))
            .collect()
    } else {
        (0..4 * SAMPLED_TRIPLES)
            .map(|_| (rng.gen_range(0..dim), rng.gen_range(0..dim)))
            .collect()
    };
    for (x, y) in pairs {
        let (bx, by) = (lie.basis_element(x), lie.basis_element(y));
        let (mx, my) = (lie.matrix_of(&bx), lie.matrix_of(&by));
        let lhs = lie.matrix_of(&lie.bracket(&bx, &by)?);
        if lhs != mx.mul(&my).sub(&my.mul(&mx)) {
            return Ok(Outcome::fail(
                json!({"x": lie.basis()[x], "y": lie.basis()[y]}),
            ));
        }
    }
    Ok(Outcome::pass())
}

fn associativity(w: &WAlgebra, rng: &mut impl Rng) -> Result<Outcome> {
    let uea = w.uea();
    let dim = uea.dim() as GenId;
    let random = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(1..=2);
        let gens: Vec<GenId> = (0..len).map(|_| rng.gen_range(0..dim)).collect();
        uea.word(&gens)
    };
    let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
    for sample in 0..SAMPLED_TRIPLES {
        let (x, y, z) = (random(&mut local), random(&mut local), random(&mut local));
        let left = uea.multiply(&uea.multiply(&x, &y)?, &z)?;
        let right = uea.multiply(&x, &uea.multiply(&y, &z)?)?;
        if left != right {
            return Ok(Outcome::fail(json!({
                "sample": sample, "x": uea.to_json(&x), "y": uea.to_json(&y), "z": uea.to_json(&z)
            })));
        }
    }
    Ok(Outcome::pass())
}

fn chi_character(w: &WAlgebra) -> Result<Outcome> {
    let lie = w.lie();
    let dec = w.decomposition();
    for &(a, b) in &dec.m {
        for &(c, d) in &dec.m {
            let x = lie.element([((a, b), qi(1))]);
            let y = lie.element([((c, d), qi(1))]);
            let value = w.chi_map().chi(&lie.bracket(&x, &y)?, dec)?;
            if !num_traits::Zero::is_zero(&value) {
                return Ok(Outcome::fail(
                    json!({"x": [a, b], "y": [c, d], "chi": value.to_string()}),
                ));
            }
        }
    }
    Ok(Outcome::pass())
}

/// Closed commutator expansion against direct computation: words of length
/// at most 2, exhaustive when `nl ≤ 6`, sampled otherwise.
fn commutator_expansion(w: &WAlgebra, rng: &mut impl Rng) -> Result<Outcome> {
    let rows = w.rows().to_vec();
    let cols = w.cols().to_vec();
    let letters: Vec<Letter> = cols
        .iter()
        .flat_map(|&p| cols.iter().map(move |&q| (p, q)))
        .collect();
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    words.extend(letters.iter().map(|&x| vec![x]));
    words.extend(
        letters
            .iter()
            .flat_map(|&x| letters.iter().map(move |&y| vec![x, y])),
    );
    let exhaustive = w.config().n * w.config().l <= 6;
    let mut cases = Vec::new();
    if exhaustive {
        for (&i, &j, &h, &k) in itertools::iproduct!(&rows, &rows, &rows, &rows) {
            for &(p, q) in &letters {
                for word in &words {
                    cases.push((i, j, p, q, h, k, word.clone()));
                }
            }
        }
    } else {
        let pick = |rng: &mut _| rows[Rng::gen_range(rng, 0..rows.len())];
        for _ in 0..4 * SAMPLED_TRIPLES {
            let (p, q) = letters[rng.gen_range(0..letters.len())];
            let word = words[rng.gen_range(0..words.len())].clone();
            cases.push((pick(rng), pick(rng), p, q, pick(rng), pick(rng), word));
        }
    }
    let uea = w.uea();
    for (i, j, p, q, h, k, word) in cases {
        let closed = w.s_commutator_expansion(i, j, p, q, h, k, &word)?;
        let direct = uea.commutator(&w.s_letter(i, j, p, q), &w.s_word(h, k, &word)?)?;
        if closed != direct {
            return Ok(Outcome::fail(json!({
                "i": i, "j": j, "p": p, "q": q, "h": h, "k": k, "word": word,
                "difference": uea.to_json(&closed.sub(&direct)),
            })));
        }
    }
    Ok(Outcome::pass())
}

fn core_tasks(w: &Arc<WAlgebra>, entry: usize, plan: &PlanEntry, tasks: &mut Vec<Task>) {
    let (seed, config) = (plan.seed, plan.config);
    let seeded = json!({"seed": seed});
    let wa = Arc::clone(w);
    push(
        tasks,
        entry,
        "core.lie_axioms",
        seeded.clone(),
        Box::new(move || lie_axioms(&wa, &mut rng_for(seed, &config, 2))),
    );
    let wm = Arc::clone(w);
    push(
        tasks,
        entry,
        "core.matrix_oracle",
        seeded.clone(),
        Box::new(move || matrix_oracle(&wm, &mut rng_for(seed, &config, 3))),
    );
    let wu = Arc::clone(w);
    push(
        tasks,
        entry,
        "core.associativity",
        seeded.clone(),
        Box::new(move || associativity(&wu, &mut rng_for(seed, &config, 4))),
    );
    push(
        tasks,
        entry,
        "core.jordan_type",
        json!({}),
        Box::new(move || {
            let parts = oracle_jordan_type(&config);
            let ok = parts == vec![config.l; config.n];
            Ok(Outcome::check(ok, || json!({"partition": parts})))
        }),
    );
    let wc = Arc::clone(w);
    push(
        tasks,
        entry,
        "core.chi_character",
        json!({}),
        Box::new(move || chi_character(&wc)),
    );
    let we = Arc::clone(w);
    push(
        tasks,
        entry,
        "core.commutator_expansion",
        seeded,
        Box::new(move || commutator_expansion(&we, &mut rng_for(seed, &config, 5))),
    );
}

fn tasks_for(w: &Arc<WAlgebra>, entry: usize, plan: &PlanEntry, tasks: &mut Vec<Task>) {
    for suite in plan.suite.expand() {
        match suite {
            Suite::Invariance => invariance_tasks(w, entry, plan, tasks),
            Suite::Images => images_tasks(w, entry, plan, tasks),
            Suite::Kernel => {
                let l = plan.config.l;
                for r in l + 1..=plan.max_r().max(l + 3) {
                    let w = Arc::clone(w);
                    push(
                        tasks,
                        entry,
                        "kernel",
                        json!({"r": r}),
                        Box::new(move || w.check_kernel_relation(r)),
                    );
                }
            }
            Suite::Symmetry => {
                let w = Arc::clone(w);
                let max_r = plan.max_r();
                push(
                    tasks,
                    entry,
                    "symmetry",
                    json!({"max_r": max_r}),
                    Box::new(move || w.check_symmetry_relation(max_r)),
                );
            }
            Suite::Pbw => pbw_tasks(w, entry, plan, tasks),
            Suite::Centralizer => centralizer_tasks(w, entry, plan, tasks),
            Suite::Lemma4 => lemma_tasks(w, entry, plan, tasks),
            Suite::Core => core_tasks(w, entry, plan, tasks),
            Suite::All => unreachable!("expanded"),
        }
    }
}

/// Runs every check of the plan in parallel and writes the report when an
/// output path is set.
pub fn run_suite(plan: &VerificationPlan) -> Result<Report> {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.jobs)
        .build()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        let built: Vec<std::result::Result<Arc<WAlgebra>, String>> = plan
            .entries
            .par_iter()
            .map(|e| {
                WAlgebra::with_options(e.config, e.options)
                    .map(Arc::new)
                    .map_err(|err| err.to_string())
            })
            .collect();
        let mut tasks = Vec::new();
        let mut failed_builds = Vec::new();
        for (k, (entry, w)) in plan.entries.iter().zip(&built).enumerate() {
            match w {
                Ok(w) => tasks_for(w, k, entry, &mut tasks),
                Err(msg) => failed_builds.push((k, msg.clone())),
            }
        }
        let mut rows: Vec<(usize, ReportRow)> = failed_builds
            .into_iter()
            .map(|(k, msg)| {
                let e = &plan.entries[k];
                (
                    k,
                    make_row(
                        e,
                        "construct",
                        json!({}),
                        Outcome::fail(json!({"error": msg})),
                        0.0,
                    ),
                )
            })
            .collect();
        let done: Vec<(usize, ReportRow)> = tasks
            .into_par_iter()
            .map(|t| {
                let t0 = Instant::now();
                let outcome = outcome_of((t.job)());
                let e = &plan.entries[t.entry];
                (
                    t.entry,
                    make_row(
                        e,
                        &t.check,
                        t.parameters,
                        outcome,
                        t0.elapsed().as_secs_f64(),
                    ),
                )
            })
            .collect();
        rows.extend(done);
        rows.sort_by_key(|(k, _)| *k);
        rows.into_iter().map(|(_, r)| r).collect::<Vec<_>>()
    });
    let passed = rows.iter().filter(|r| r.status == Status::Pass).count();
    let mut configs: Vec<Config> = Vec::new();
    let mut seeds: Vec<u64> = Vec::new();
    for e in &plan.entries {
        if !configs.contains(&e.config) {
            configs.push(e.config);
        }
        if !seeds.contains(&e.seed) {
            seeds.push(e.seed);
        }
    }
    let report = Report {
        summary: Summary {
            version: env!("CARGO_PKG_VERSION").to_string(),
            rows: rows.len(),
            passed,
            failed: rows.len() - passed,
            configs,
            seeds,
            seconds: start.elapsed().as_secs_f64(),
        },
        rows,
    };
    if let Some(path) = &plan.output {
        report.write(path)?;
    }
    Ok(report)
}

fn make_row(
    e: &PlanEntry,
    check: &str,
    parameters: Value,
    outcome: Outcome,
    seconds: f64,
) -> ReportRow {
    ReportRow {
        config: e.config,
        labeling: e.options.labeling.to_string(),
        mutation: e.options.mutation.to_string(),
        check: check.to_string(),
        parameters,
        status: if outcome.passed {
            Status::Pass
        } else {
            Status::Fail
        },
        witness: outcome.witness,
        seconds,
    }
}

/// Options for a mutation run, keeping the default labeling.
pub fn mutated(mutation: Mutation) -> WOptions {
    WOptions {
        labeling: Labeling::default(),
        mutation,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::make_config;

    #[test]
    fn oracles() {
        use Sign::*;
        for (n, l, e, d) in [(1, 2, Minus, 1), (2, 3, Plus, 5), (2, 3, Minus, 7)] {
            assert_eq!(oracle_centralizer_dim(&make_config(n, l, e).unwrap()), d);
        }
        assert_eq!(
            oracle_jordan_type(&make_config(1, 2, Minus).unwrap()),
            vec![2]
        );
        assert_eq!(
            oracle_jordan_type(&make_config(3, 2, Minus).unwrap()),
            vec![2, 2, 2]
        );
        assert_eq!(
            oracle_jordan_type(&make_config(2, 3, Plus).unwrap()),
            vec![3, 3]
        );
    }

    #[test]
    fn lemma_hypotheses() {
        let c = make_config(1, 2, Sign::Minus).unwrap();
        assert!(lemma_parameters(LemmaId::OddMiddle, &c).is_empty());
        assert_eq!(lemma_parameters(LemmaId::EvenMiddle, &c).len(), 1);
        let w = WAlgebra::new(c).unwrap();
        let x = LemmaParams::default();
        assert!(
            w.verify_section4_lemma(LemmaId::EvenMiddle, &x)
                .unwrap()
                .passed
        );
        assert!(matches!(
            w.verify_section4_lemma(LemmaId::OddMiddle, &x),
            Err(Error::Hypothesis(_))
        ));
        let c = make_config(1, 3, Sign::Plus).unwrap();
        assert!(verify_section4_lemma(LemmaId::OddMiddle, &c, &x).unwrap());
    }

    #[test]
    fn suite_names() {
        for s in Suite::All.expand() {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
        assert_eq!("4.3".parse::<LemmaId>().unwrap(), LemmaId::PartialMinor);
    }

    #[test]
    fn empty_plan() {
        let report = run_suite(&VerificationPlan::default()).unwrap();
        assert!(report.rows.is_empty());
        assert!(report.all_passed());
    }

    #[test]
    fn small_plan_passes() {
        let c = make_config(1, 2, Sign::Minus).unwrap();
        let report = run_suite(&VerificationPlan::grid(&[c], Suite::All)).unwrap();
        let bad: Vec<_> = report.failures().collect();
        assert!(bad.is_empty(), "{bad:?}");
    }
}
