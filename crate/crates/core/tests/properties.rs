use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use voalab::affine::{Mode, ModeCalculus, State};
use voalab::freefield::{fock, ope_level, BilinearCurrent, Field};
use voalab::geometry::{self, Conjugator};
use voalab::lattice::{self, IntegralLattice};
use voalab::liesuper::LieSuperalgebra;
use voalab::linalg::Matrix;
use voalab::parse;
use voalab::rational::{q, sign, Q};
use voalab::zhu;

fn algebras() -> Vec<LieSuperalgebra> {
    vec![
        LieSuperalgebra::sl(2).unwrap(),
        LieSuperalgebra::sl(3).unwrap(),
        LieSuperalgebra::psl(2).unwrap(),
        LieSuperalgebra::psl(3).unwrap(),
    ]
}

type RawState = Vec<(i64, i64, Vec<(usize, i64)>)>;

fn raw_state() -> impl Strategy<Value = RawState> {
    prop::collection::vec(
        (
            -4i64..=4,
            1i64..=3,
            prop::collection::vec((0usize..64, -3i64..=-1), 0..=3),
        ),
        1..=3,
    )
}

fn build(calc: &ModeCalculus, raw: &RawState) -> State {
    let dim = calc.algebra().dim();
    raw.iter().fold(calc.zero(), |acc, (num, den, modes)| {
        let ms: Vec<Mode> = modes.iter().map(|&(g, m)| Mode::new(g % dim, m)).collect();
        acc.add(&calc.product(&ms).scale(&Q::new((*num).into(), (*den).into())))
    })
}

fn homogeneous(calc: &ModeCalculus, modes: &[(usize, i64)]) -> State {
    let dim = calc.algebra().dim();
    let ms: Vec<Mode> = modes.iter().map(|&(g, m)| Mode::new(g % dim, m)).collect();
    calc.product(&ms)
}

fn field(kind: u8, i: usize) -> Field {
    match kind % 4 {
        0 => Field::Beta(i),
        1 => Field::Gamma(i),
        2 => Field::B(i),
        _ => Field::C(i),
    }
}

/// Even bilinears only: both fields bosonic or both fermionic.
fn current() -> impl Strategy<Value = BilinearCurrent> {
    prop::collection::vec((any::<bool>(), any::<bool>(), 1usize..=2, 1usize..=2, -3i64..=3), 1..=4).prop_map(|terms| {
        let mut c = BilinearCurrent::zero();
        for (fermi, flip, i, j, w) in terms {
            let base = if fermi { 2 } else { 0 };
            let (a, b) = if flip { (base + 1, base) } else { (base, base + 1) };
            c.add_term(field(a, i), field(b, j), q(w));
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn print_parse_round_trip(ai in 0usize..4, raw in raw_state(), kn in -3i64..=3) {
        let algs = algebras();
        let g = &algs[ai];
        let k = q(kn);
        let calc = ModeCalculus::new(g, k.clone());
        let s = build(&calc, &raw);
        let text = calc.format(&s);
        let back = parse::parse_state(g, &k, &text).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn mode_shifts_degree(ai in 0usize..4, modes in prop::collection::vec((0usize..64, -3i64..=-1), 0..=4), x in 0usize..64, m in -3i64..=3) {
        let algs = algebras();
        let g = &algs[ai];
        let calc = ModeCalculus::new(g, q(1));
        let s = homogeneous(&calc, &modes);
        prop_assume!(!s.is_zero());
        let d = s.degree().unwrap() as i64;
        let img = calc.apply_mode(Mode::new(x % g.dim(), m), &s);
        prop_assert!(img.is_zero() || img.degree() == Some((d - m) as u64));
        if d - m < 0 {
            prop_assert!(img.is_zero());
        }
        let t = calc.apply_t(&s);
        prop_assert!(t.is_zero() || t.degree() == Some(d as u64 + 1));
    }

    #[test]
    fn word_is_right_to_left(ai in 0usize..4, raw in raw_state(), x in (0usize..64, -2i64..=1), y in (0usize..64, -2i64..=1)) {
        let algs = algebras();
        let g = &algs[ai];
        let calc = ModeCalculus::new(g, q(1));
        let s = build(&calc, &raw);
        let (xa, ya) = (x.0 % g.dim(), y.0 % g.dim());
        let w = voalab::affine::OperatorWord::new(vec![
            voalab::affine::WordToken::Mode(g.basis_element(xa), x.1),
            voalab::affine::WordToken::T,
            voalab::affine::WordToken::Mode(g.basis_element(ya), y.1),
        ]);
        let by_hand = calc.apply_mode(Mode::new(xa, x.1), &calc.apply_t(&calc.apply_mode(Mode::new(ya, y.1), &s)));
        prop_assert_eq!(calc.apply_word(&w, &s), by_hand);
    }

    #[test]
    fn psi_respects_koszul_sign(ai in 0usize..4, x in 0usize..64, y in 0usize..64) {
        let algs = algebras();
        let g = &algs[ai];
        let calc = ModeCalculus::new(g, q(1));
        let (xa, ya) = (x % g.dim(), y % g.dim());
        let xy = calc.product(&[Mode::new(xa, -1), Mode::new(ya, -1)]);
        let yx = calc.product(&[Mode::new(ya, -1), Mode::new(xa, -1)]);
        let s = sign(g.is_odd(xa) && g.is_odd(ya));
        let (px, py) = (zhu::psi(g, &xy), zhu::psi(g, &yx));
        let mut scaled = zhu::SuperPolynomial::zero();
        for (vars, c) in py.terms() {
            scaled.add_product(g, vars, c * &s);
        }
        prop_assert_eq!(px.terms(), scaled.terms());
    }

    #[test]
    fn element_matrix_round_trip(ai in 0usize..4, coeffs in prop::collection::vec(-3i64..=3, 64)) {
        let algs = algebras();
        let g = &algs[ai];
        let x: Vec<(usize, Q)> = (0..g.dim()).filter(|&a| coeffs[a] != 0).map(|a| (a, q(coeffs[a]))).collect();
        let back = g.from_matrix(&g.to_matrix(&x)).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn ope_level_bilinear_and_symmetric(a in current(), b in current(), c in current(), l in -3i64..=3) {
        let al = a.add(&b.scale(&q(l)));
        prop_assert_eq!(ope_level(&al, &c), ope_level(&a, &c) + q(l) * ope_level(&b, &c));
        prop_assert_eq!(ope_level(&a, &b), ope_level(&b, &a));
    }

    #[test]
    fn ope_level_matches_fock(a in current(), b in current()) {
        prop_assert_eq!(ope_level(&a, &b), fock::level(&a, &b));
    }

    #[test]
    fn weight_round_trip(lam in prop::collection::vec(-40i64..=40, 2..=7)) {
        let n = lam.len();
        let d = lattice::decompose_weight(&lam).unwrap();
        let back = lattice::reconstruct(n, &d.lambda0, &d.lambda_vee);
        prop_assert!(back.iter().zip(&lam).all(|(a, b)| *a == q(*b)));
        prop_assert_eq!(&lattice::lambda_vee_by_cartan(&lam).unwrap(), &d.lambda_vee);
        let c0 = lattice::class_of_lambda0(&d.lambda0, n).unwrap();
        prop_assert_eq!(c0, lattice::class_of_lambda_vee(&d.lambda_vee, n).unwrap());
        prop_assert_eq!((c0 + d.j as i64) % n as i64, 0);
    }

    #[test]
    fn discriminant_matches_gcd_of_minors(entries in prop::collection::vec(-3i64..=3, 9)) {
        let a = Matrix::from_fn(3, 3, |i, j| q(entries[3 * i + j]));
        let gram = a.transpose().mul(&a).add(&Matrix::identity(3));
        let l = IntegralLattice::new(gram.clone()).unwrap();
        let got = lattice::discriminant_group(&l).unwrap();
        let mut prev = BigInt::one();
        let mut want = Vec::new();
        for k in 1..=3usize {
            let mut g = BigInt::zero();
            for rows in subsets3(k) {
                for cols in subsets3(k) {
                    let sub = Matrix::from_fn(k, k, |i, j| gram[(rows[i], cols[j])].clone());
                    g = g.gcd(sub.determinant().numer());
                }
            }
            let f = &g / &prev;
            if !f.is_one() {
                want.push(f);
            }
            prev = g;
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn rank_one_iff_minors_vanish(n in 2usize..=5, a in prop::collection::vec(-2i64..=2, 25), perturb in any::<bool>()) {
        let u: Vec<Q> = (0..n).map(|i| q(a[i])).collect();
        let mut v: Vec<Q> = (0..n).map(|i| q(a[n + i])).collect();
        if let Some(p) = u.iter().position(|x| !x.is_zero()) {
            let dot: Q = (0..n).filter(|&k| k != p).fold(Q::zero(), |s, k| s + &u[k] * &v[k]);
            v[p] = -dot / &u[p];
        }
        let mut z = Matrix::from_fn(n, n, |i, j| &u[i] * &v[j]);
        if perturb {
            z[(n - 1, 0)] += q(a[2 * n] + 3);
        }
        let r = geometry::in_min_orbit_closure(&z).unwrap();
        prop_assert_eq!(r, geometry::in_min_orbit_closure_by_minors(&z).unwrap());
        prop_assert!(geometry::in_sheet_closure(&z).unwrap() || n >= 3 && !r);
    }

    #[test]
    fn sheet_samples_decompose(n in 3usize..=6, seed in 0u64..1000, index in 0u64..1000) {
        let s = geometry::sample_sheet_element(n, seed, index).unwrap();
        prop_assert!(s.decomposition_holds());
        prop_assert!(s.z.trace().is_zero());
        prop_assert!(geometry::in_sheet_closure(&s.z).unwrap());
        let shift = geometry::sheet_shift(&s.z).unwrap();
        prop_assert!(s.z.sub(&Matrix::identity(n).scale(&shift)).rank() <= 1);
    }
}

fn subsets3(k: usize) -> Vec<Vec<usize>> {
    let all: [&[usize]; 7] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2], &[0, 1, 2]];
    all.iter().filter(|s| s.len() == k).map(|s| s.to_vec()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn u22_is_conjugation_stable(seed in any::<u64>(), weights in prop::collection::vec(-2i64..=2, 20)) {
        let n = 4;
        let dec = geometry::minor_decomposition(n).unwrap();
        let f = dec.u22.iter().zip(&weights).fold(voalab::poly::Poly::zero(), |acc, (b, w)| acc.add(&b.scale(&q(*w))));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = Conjugator::random(n, &mut rng);
        let g = geometry::conjugate_form(&f, &r.matrix(n), &r.inverse_matrix(n));
        let coords = geometry::minor_coordinates(n, &g).unwrap();
        prop_assert!(geometry::contraction_matrix(n).apply(&coords).iter().all(Zero::is_zero));
    }
}
