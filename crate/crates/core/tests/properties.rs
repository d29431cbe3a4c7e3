use finite_w::lie::{Config, LieElement};
use finite_w::omega::{omega_coefficient, OmegaMatrix, OmegaVariant, SquareMatrix};
use finite_w::poly::NcRing;
use finite_w::scalar::{q, qi, Q};
use finite_w::tensor::{Letter, TensorElement};
use finite_w::uea::UeaElement;
use finite_w::verify::default_grid;
use finite_w::{Mutation, WAlgebra};
use itertools::Itertools;
use proptest::prelude::*;
use std::sync::{Arc, OnceLock};

fn algebras() -> &'static Vec<Arc<WAlgebra>> {
    static CELL: OnceLock<Vec<Arc<WAlgebra>>> = OnceLock::new();
    CELL.get_or_init(|| {
        default_grid()
            .into_iter()
            .map(|c| Arc::new(WAlgebra::new(c).unwrap()))
            .collect()
    })
}

fn lie_element(w: &WAlgebra, picks: &[(usize, i64)]) -> LieElement {
    let lie = w.lie();
    let mut x = LieElement::zero(lie.epsilon(), lie.big_n());
    for &(k, c) in picks {
        let (a, b) = lie.basis()[k % lie.dim()];
        x.add_f(a, b, &qi(c));
    }
    x
}

fn word_element(w: &WAlgebra, gens: &[usize]) -> UeaElement {
    let d = w.uea().dim();
    let ids: Vec<u16> = gens.iter().map(|&g| (g % d) as u16).collect();
    w.uea().word(&ids)
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..64, -3i64..=3), 1..4)
}

fn config_index() -> impl Strategy<Value = usize> {
    0..default_grid().len()
}

fn sign_of(perm: &[usize]) -> i64 {
    let mut inversions = 0;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Σ_σ sgn σ · a_{0,σ(0)} a_{1,σ(1)} ⋯` multiplied in row order.
fn rdet_by_permutations<T: NcRing>(m: &SquareMatrix<T>) -> T {
    let n = m.size();
    let mut total = T::zero();
    for perm in (0..n).permutations(n) {
        let mut term = T::one();
        for (r, &c) in perm.iter().enumerate() {
            term = NcRing::mul(&term, m.get(r, c));
        }
        let s = qi(sign_of(&perm));
        finite_w::poly::Coefficient::add_assign(
            &mut total,
            &finite_w::poly::Coefficient::scaled(&term, &s),
        );
    }
    total
}

fn tensor_entry(code: (i32, i32, i64)) -> TensorElement {
    let (p, q_, c) = code;
    if c == 0 {
        TensorElement::zero()
    } else if p == q_ {
        TensorElement::scalar(qi(c))
    } else {
        let mut t = TensorElement::letter(p, q_);
        t = finite_w::poly::Coefficient::scaled(&t, &qi(c));
        t
    }
}

/// `ω_r` from the recurrence `c_{k−1} = −(B_k + c_k)/(2φ)` solving
/// `(−2φu − 1)(ω(u) − rdet Ω) = rdet Ω̄`.
fn omega_by_series(config: &Config, r: usize) -> TensorElement {
    let l = config.l as i32;
    let plain = OmegaMatrix::new(config, OmegaVariant::Plain, Mutation::None).rdet();
    let head = plain
        .coeff(l - r as i32)
        .cloned()
        .unwrap_or_else(TensorElement::zero);
    if config.l_is_even() {
        return head;
    }
    let barred = OmegaMatrix::new(config, OmegaVariant::Barred, Mutation::None).rdet();
    let half_phi = q(config.phi.value(), 2);
    let target = l - r as i32;
    let mut c = TensorElement::zero();
    let mut k = l;
    while k > target {
        let b = barred.coeff(k).cloned().unwrap_or_else(TensorElement::zero);
        c = finite_w::poly::Coefficient::scaled(&b.add(&c), &-half_phi.clone());
        k -= 1;
    }
    head.add(&c)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, .. ProptestConfig::default() })]

    #[test]
    fn bracket_antisymmetric_and_jacobi(ci in config_index(), x in picks(), y in picks(), z in picks()) {
        let w = &algebras()[ci];
        let lie = w.lie();
        let (x, y, z) = (lie_element(w, &x), lie_element(w, &y), lie_element(w, &z));
        prop_assert!(lie.bracket(&x, &y).unwrap().add(&lie.bracket(&y, &x).unwrap()).is_zero());
        let j = lie.bracket(&x, &lie.bracket(&y, &z).unwrap()).unwrap()
            .add(&lie.bracket(&y, &lie.bracket(&z, &x).unwrap()).unwrap())
            .add(&lie.bracket(&z, &lie.bracket(&x, &y).unwrap()).unwrap());
        prop_assert!(j.is_zero());
    }

    #[test]
    fn matrix_realization_is_faithful(ci in config_index(), x in picks(), y in picks()) {
        let w = &algebras()[ci];
        let lie = w.lie();
        let (x, y) = (lie_element(w, &x), lie_element(w, &y));
        let (mx, my) = (lie.matrix_of(&x), lie.matrix_of(&y));
        prop_assert_eq!(lie.matrix_of(&lie.bracket(&x, &y).unwrap()), mx.mul(&my).sub(&my.mul(&mx)));
        prop_assert_eq!(lie.coordinates(&x).iter().all(|c| *c == Q::from_integer(0.into())), mx.is_zero());
    }

    #[test]
    fn uea_product_associative(ci in config_index(),
                               a in prop::collection::vec(0usize..64, 0..3),
                               b in prop::collection::vec(0usize..64, 0..3),
                               c in prop::collection::vec(0usize..64, 0..3)) {
        let w = &algebras()[ci];
        let u = w.uea();
        let (x, y, z) = (word_element(w, &a), word_element(w, &b), word_element(w, &c));
        let left = u.multiply(&u.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = u.multiply(&x, &u.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn straightening_respects_brackets(ci in config_index(), a in 0usize..64, b in 0usize..64) {
        let w = &algebras()[ci];
        let u = w.uea();
        let lie = w.lie();
        let (x, y) = (lie.basis_element(a % lie.dim()), lie.basis_element(b % lie.dim()));
        let comm = u.commutator(&u.lie_element(&x), &u.lie_element(&y)).unwrap();
        prop_assert_eq!(comm, u.lie_element(&lie.bracket(&x, &y).unwrap()));
    }

    #[test]
    fn projection_idempotent(ci in config_index(), a in prop::collection::vec(0usize..64, 0..4)) {
        let w = &algebras()[ci];
        let x = word_element(w, &a);
        let p = w.pr(&x);
        prop_assert!(w.in_p(&p));
        prop_assert_eq!(w.pr(&p), p);
    }

    #[test]
    fn json_round_trip(ci in config_index(), a in prop::collection::vec(0usize..64, 0..4), k in -5i64..5) {
        let w = &algebras()[ci];
        let u = w.uea();
        let x = word_element(w, &a).scaled(&q(k, 3));
        prop_assert_eq!(u.from_json(&u.to_json(&x)).unwrap(), x);
    }

    #[test]
    fn hessenberg_rdet_matches_permutation_sum(n in 1usize..=5,
                                               codes in prop::collection::vec((-2i32..=2, -2i32..=2, -2i64..=2), 25)) {
        let mut k = 0;
        let m = SquareMatrix::from_fn(n, |r, c| {
            let e = if r > c + 1 { TensorElement::zero() } else { tensor_entry(codes[k % 25]) };
            k += 1;
            e
        });
        let oracle = rdet_by_permutations(&m);
        prop_assert!(m.is_hessenberg());
        prop_assert_eq!(m.rdet_hessenberg().unwrap(), oracle.clone());
        prop_assert_eq!(m.rdet_full(), oracle);
    }

    #[test]
    fn dense_rdet_matches_permutation_sum(n in 1usize..=4,
                                          codes in prop::collection::vec((-2i32..=2, -2i32..=2, -2i64..=2), 16)) {
        let mut k = 0;
        let m = SquareMatrix::from_fn(n, |_, _| {
            let e = tensor_entry(codes[k % 16]);
            k += 1;
            e
        });
        prop_assert_eq!(m.rdet(), rdet_by_permutations(&m));
    }

    #[test]
    fn commutator_expansion(ci in config_index(), idx in prop::collection::vec(0usize..16, 6),
                            word in prop::collection::vec((0usize..8, 0usize..8), 0..4)) {
        let w = &algebras()[ci];
        let rows = w.rows().to_vec();
        let cols = w.cols().to_vec();
        let pick = |k: usize| rows[idx[k] % rows.len()];
        let (i, j, h, k) = (pick(0), pick(1), pick(2), pick(3));
        let (p, q_) = (cols[idx[4] % cols.len()], cols[idx[5] % cols.len()]);
        let word: Vec<Letter> = word.iter().map(|&(a, b)| (cols[a % cols.len()], cols[b % cols.len()])).collect();
        let closed = w.s_commutator_expansion(i, j, p, q_, h, k, &word).unwrap();
        let direct = w.uea().commutator(&w.s_letter(i, j, p, q_), &w.s_word(h, k, &word).unwrap()).unwrap();
        prop_assert_eq!(closed, direct);
    }
}

#[test]
fn omega_tail_matches_series_recurrence() {
    for c in default_grid() {
        for r in 1..=c.l + 3 {
            assert_eq!(
                omega_coefficient(r, &c).unwrap(),
                omega_by_series(&c, r),
                "{c} r={r}"
            );
        }
    }
}

#[test]
fn commutator_expansion_exhaustive_small() {
    for c in default_grid().into_iter().filter(|c| c.n * c.l <= 6) {
        let w = WAlgebra::new(c).unwrap();
        let rows = w.rows().to_vec();
        let cols = w.cols().to_vec();
        let letters: Vec<Letter> = cols
            .iter()
            .cartesian_product(cols.iter())
            .map(|(&a, &b)| (a, b))
            .collect();
        let mut words: Vec<Vec<Letter>> = vec![vec![]];
        words.extend(letters.iter().map(|&x| vec![x]));
        words.extend(
            letters
                .iter()
                .cartesian_product(letters.iter())
                .map(|(&x, &y)| vec![x, y]),
        );
        for (&i, &j, &h, &k) in itertools::iproduct!(&rows, &rows, &rows, &rows) {
            for &(p, q_) in &letters {
                for word in &words {
                    let closed = w.s_commutator_expansion(i, j, p, q_, h, k, word).unwrap();
                    let direct = w
                        .uea()
                        .commutator(&w.s_letter(i, j, p, q_), &w.s_word(h, k, word).unwrap())
                        .unwrap();
                    assert_eq!(closed, direct, "{c} ({i},{j},{p},{q_},{h},{k}) {word:?}");
                }
            }
        }
    }
}

#[test]
fn kernel_relation_iterates() {
    for c in default_grid().into_iter().filter(|c| !c.l_is_even()) {
        let w = WAlgebra::new(c).unwrap();
        let half = q(-c.phi.value(), 2);
        for i in w.rows().iter() {
            for j in w.rows().iter() {
                let base = w.kappa_s(i, j, c.l).unwrap();
                let far = w.kappa_s(i, j, c.l + 4).unwrap();
                let h4 = &half * &half * &half * &half;
                assert_eq!(far, base.scaled(&h4));
            }
        }
    }
}

fn kazhdan_symbol(w: &WAlgebra, x: &UeaElement) -> (i32, finite_w::poly::CommPoly) {
    let order = w.uea().order();
    let weight = |m: &[u16]| m.iter().map(|&g| order.degree(g) / 2 + 1).sum::<i32>();
    let top = x.terms().map(|(m, _)| weight(m)).max().unwrap_or(i32::MIN);
    let mut s = finite_w::poly::CommPoly::zero();
    for (m, c) in x.terms() {
        if weight(m) == top {
            s.add_term(m.iter().map(|&g| g as u32).collect(), c.clone());
        }
    }
    (top, s)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, .. ProptestConfig::default() })]

    #[test]
    fn kazhdan_filtration_multiplicative(ci in config_index(),
                                         a in prop::collection::vec(0usize..64, 1..3),
                                         b in prop::collection::vec(0usize..64, 1..3)) {
        let w = &algebras()[ci];
        let u = w.uea();
        let (x, y) = (word_element(w, &a), word_element(w, &b));
        let xy = u.multiply(&x, &y).unwrap();
        let (dx, sx) = kazhdan_symbol(w, &x);
        let (dy, sy) = kazhdan_symbol(w, &y);
        let (dxy, sxy) = kazhdan_symbol(w, &xy);
        prop_assert_eq!(u.kazhdan_degree(&xy).unwrap(), dxy);
        prop_assert_eq!(dxy, dx + dy);
        prop_assert_eq!(sxy, sx.mul(&sy));
    }

    #[test]
    fn commutator_antisymmetric(ci in config_index(),
                                a in prop::collection::vec(0usize..64, 0..3),
                                b in prop::collection::vec(0usize..64, 0..3)) {
        let w = &algebras()[ci];
        let u = w.uea();
        let (x, y) = (word_element(w, &a), word_element(w, &b));
        prop_assert!(u.commutator(&x, &y).unwrap().add(&u.commutator(&y, &x).unwrap()).is_zero());
    }

    #[test]
    fn projection_fixes_u_p(ci in config_index(), a in prop::collection::vec(0usize..64, 0..4)) {
        let w = &algebras()[ci];
        let m = w.uea().order().m_start() as usize;
        let gens: Vec<usize> = a.iter().map(|&g| g % m).collect();
        let x = word_element(w, &gens);
        prop_assert!(w.in_p(&x));
        prop_assert_eq!(w.pr(&x), x);
    }

    #[test]
    fn generators_killed_by_products_of_m(ci in config_index(), f in 0usize..64, g in 0usize..64,
                                          i in 0usize..4, j in 0usize..4, r in 1usize..4) {
        let w = &algebras()[ci];
        let u = w.uea();
        let ms: Vec<u16> = w.m_generators().collect();
        let x = u.word(&[ms[f % ms.len()], ms[g % ms.len()]]);
        let rows = w.rows().to_vec();
        let y = w.w_generator(rows[i % rows.len()], rows[j % rows.len()], r).unwrap();
        prop_assert!(w.pr(&u.commutator(&x, &y).unwrap()).is_zero());
    }
}

#[test]
fn dimension_matches_matrix_oracle() {
    use finite_w::linalg::{exact_rank, Matrix};
    for c in finite_w::verify::configs_up_to(8) {
        let w = WAlgebra::new(c).unwrap();
        let lie = w.lie();
        let n = c.big_n();
        let labels = finite_w::lie::IndexSet::new(n);
        let mut j = Matrix::zeros(n, n);
        for a in labels.iter() {
            let sign = if c.epsilon == finite_w::Sign::Minus && -a < 0 {
                -1
            } else {
                1
            };
            j.set(
                labels.position(a).unwrap(),
                labels.position(-a).unwrap(),
                qi(sign),
            );
        }
        let expected = if c.epsilon == finite_w::Sign::Plus {
            n * (n - 1) / 2
        } else {
            n * (n + 1) / 2
        };
        assert_eq!(lie.dim(), expected, "{c}");
        // nullity of x ↦ xᵀJ + Jx on all n×n matrices
        let images = (0..n * n).map(|k| {
            let mut x = Matrix::zeros(n, n);
            x.set(k / n, k % n, qi(1));
            let y = x.transpose().mul(&j).add(&j.mul(&x));
            (0..n * n)
                .filter(|&t| *y.get(t / n, t % n) != qi(0))
                .map(|t| (t, y.get(t / n, t % n).clone()))
                .collect()
        });
        assert_eq!(n * n - exact_rank(images), expected, "{c}");
        for &(a, b) in lie.basis() {
            let x = lie.matrix_of_f(a, b);
            assert!(
                x.transpose().mul(&j).add(&j.mul(&x)).is_zero(),
                "{c} f({a},{b})"
            );
        }
    }
}

#[test]
fn graded_pieces() {
    for c in default_grid() {
        let w = WAlgebra::new(c).unwrap();
        let d = w.decomposition();
        assert_eq!(d.m.len() + d.h.len() + d.positive.len(), w.lie().dim());
        assert_eq!(d.p().len(), d.h.len() + d.positive.len());
        let n = c.n;
        let small = if c.epsilon == finite_w::Sign::Plus {
            n * (n - 1) / 2
        } else {
            n * (n + 1) / 2
        };
        let expected = (c.l / 2) * n * n + if c.l_is_even() { 0 } else { small };
        assert_eq!(d.h.len(), expected, "{c}");
        assert_eq!(d.homogeneous_degree(w.e()), Some(2), "{c}");
    }
}

#[test]
fn omega_minors_rdet_exhaustive() {
    for c in finite_w::verify::configs_up_to(5)
        .into_iter()
        .filter(|c| c.n == 1)
    {
        for variant in [OmegaVariant::Plain, OmegaVariant::Barred] {
            let om = OmegaMatrix::new(&c, variant, Mutation::None);
            let cols = w_cols(&c);
            for (a, &p) in cols.iter().enumerate() {
                for &q_ in &cols[a..] {
                    let m = om.submatrix(p, q_);
                    assert!(m.is_hessenberg());
                    assert_eq!(
                        m.rdet_hessenberg().unwrap(),
                        rdet_by_permutations(&m),
                        "{c} {variant:?} ({p},{q_})"
                    );
                }
            }
        }
    }
}

fn w_cols(c: &Config) -> Vec<i32> {
    finite_w::lie::IndexSet::new(c.l).to_vec()
}

#[test]
fn reports_reproducible() {
    use finite_w::verify::{run_suite, Suite, VerificationPlan};
    let configs = [default_grid()[1], default_grid()[5]];
    let strip = |plan: &VerificationPlan| {
        let mut r = run_suite(plan).unwrap();
        for row in &mut r.rows {
            row.seconds = 0.0;
        }
        r.rows
    };
    let plan = VerificationPlan::grid(&configs, Suite::All);
    assert_eq!(strip(&plan), strip(&plan));
}
