mod common;

use common::suites::*;
use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;
use rigidcalc::convolution::{build_f, middle_convolution, rank_one_system, tensor_rank_one};
use rigidcalc::field::{big_to_f64, euler_phi, rat, Precision};
use rigidcalc::hypergeometric::{from_multiplicity_function, hypergeometric_tuple};
use rigidcalc::monodromy::{
    centralizer_dim, certify_regular, is_absolutely_irreducible, is_quasi_unipotent,
    is_somewhere_maximal, jordan_type, local_jordan_types, rigidity_index,
};
use rigidcalc::purity::{functional_equation_check, weil_check, WeilPolynomial, WeilVerdict};
use rigidcalc::{CycNumber, ExactMatrix, MonodromyTuple, Puncture, RootOfUnity};

const ORDERS: [u32; 6] = [1, 2, 3, 4, 6, 12];

fn cyc_strategy(order: u32) -> impl Strategy<Value = CycNumber> {
    let d = euler_phi(order) as usize;
    proptest::collection::vec((-9i64..=9, 1i64..=4), d).prop_map(move |cs| {
        let coeffs = cs.into_iter().map(|(n, q)| rat(n, q)).collect();
        CycNumber::from_reduced(coeffs, order).unwrap()
    })
}

fn triple() -> impl Strategy<Value = (CycNumber, CycNumber, CycNumber)> {
    proptest::sample::select(ORDERS.to_vec())
        .prop_flat_map(|n| (cyc_strategy(n), cyc_strategy(n), cyc_strategy(n)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn conj_is_involutive_homomorphism((a, b, _) in triple()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn embedding_is_multiplicative((a, b, _) in triple()) {
        let n = a.order() as i64;
        let mut prec = Precision::new(256);
        for e in (1..=n.max(1)).filter(|e| num_integer::Integer::gcd(e, &n) == 1) {
            let lhs = (&a * &b).embed_with(e, &mut prec).unwrap();
            let ea = a.embed_with(e, &mut prec).unwrap();
            let eb = b.embed_with(e, &mut prec).unwrap();
            let rhs = prec.mul(&ea, &eb);
            let diff = big_to_f64(&prec.abs(&prec.sub(&lhs, &rhs)));
            let size = big_to_f64(&prec.abs(&lhs)).max(1.0);
            prop_assert!(diff <= 1e-25 * size, "diff {diff}");
        }
    }

    #[test]
    fn kernel_vectors_are_exact(
        order in proptest::sample::select(vec![1u32, 3, 4]),
        rows in 1usize..5,
        cols in 1usize..5,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let m = ExactMatrix::from_fn(rows, cols, order, |_, _| {
            if r.gen_bool(0.4) { CycNumber::zero(order) } else { random_cyc(&mut r, order, 2) }
        });
        let (rank, kernel) = m.rank_kernel();
        prop_assert_eq!(rank + kernel.len(), cols);
        prop_assert_eq!(rank, rank_oracle(&m));
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(CycNumber::is_zero));
        }
        let mut perm_rows: Vec<usize> = (0..rows).collect();
        let mut perm_cols: Vec<usize> = (0..cols).collect();
        perm_rows.rotate_left(seed as usize % rows);
        perm_cols.reverse();
        let p = ExactMatrix::from_fn(rows, cols, order, |i, j| m.get(perm_rows[i], perm_cols[j]).clone());
        prop_assert_eq!(p.rank(), rank);
    }

    #[test]
    fn inverse_is_exact(order in proptest::sample::select(vec![1u32, 2, 3, 12]), n in 1usize..5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = ExactMatrix::from_fn(n, n, order, |_, _| random_cyc(&mut r, order, 2));
        match m.inverse() {
            Ok(inv) => {
                prop_assert!((&inv * &m).is_identity());
                prop_assert!((&m * &inv).is_identity());
            }
            Err(_) => prop_assert!(m.det().is_zero()),
        }
    }
}

#[test]
fn jordan_type_matches_characteristic_polynomial() {
    for (m, order) in jordan_fixtures().into_iter().filter(|(m, _)| m.rows() <= 4) {
        let j = jordan_type(&m, order).unwrap();
        assert_eq!(j.dim(), m.rows());
        let cp = charpoly(&m);
        let mut total = 0;
        for k in 0..order as i64 {
            let z = RootOfUnity::new(k, order);
            let alg: usize = j
                .blocks()
                .iter()
                .filter(|b| b.eigenvalue == z)
                .map(|b| b.size * b.mult)
                .sum();
            assert_eq!(
                root_multiplicity(&cp, &z.to_cyc(lcm_order(&m, order))),
                alg,
                "{m} at {z}"
            );
            total += alg;
        }
        assert_eq!(total, m.rows());
    }
}

fn lcm_order(m: &ExactMatrix, order: u32) -> u32 {
    rigidcalc::field::lcm(m.order(), order)
}

#[test]
fn centralizer_matches_oracles() {
    for (m, _) in jordan_fixtures() {
        let d = centralizer_dim(&m);
        assert!(d >= m.rows());
        assert_eq!(d, centralizer_oracle(&m));
        let order = common_order(std::slice::from_ref(&m)).max(2);
        let order = rigidcalc::field::lcm(order, m.order());
        if let Ok(j) = jordan_type(&m, order) {
            assert_eq!(d, centralizer_from_jordan(&j));
        }
    }
}

#[test]
fn centralizer_at_least_n_for_random_matrices() {
    let mut r = rng(2);
    for _ in 0..40 {
        let n = r.gen_range(1..5);
        let order = [1, 3, 4][r.gen_range(0..3)];
        let m = ExactMatrix::from_fn(n, n, order, |_, _| random_cyc(&mut r, order, 2));
        let d = centralizer_dim(&m);
        assert!(d >= n);
        assert_eq!(d, centralizer_oracle(&m));
    }
}

#[test]
fn rank_one_tuples_have_index_two() {
    let mut r = rng(4);
    for _ in 0..30 {
        let order = [1, 2, 3, 4, 6][r.gen_range(0..5)];
        let k = r.gen_range(1..5);
        let scalars: Vec<CycNumber> = (0..k)
            .map(|_| random_root(&mut r, order).to_cyc(order))
            .collect();
        let pts: Vec<_> = (0..k as i64).map(rigidcalc::field::int).collect();
        let t = rank_one_system(pts, &scalars, order).unwrap();
        assert_eq!(rigidity_index(&t), 2);
        assert!(is_absolutely_irreducible(&t));
    }
}

#[test]
fn multiplicity_function_invariants() {
    let mut r = rng(6);
    for _ in 0..50 {
        let (mf, order) = random_multiplicity(&mut r, 6);
        let t = from_multiplicity_function(&mf, order).unwrap();
        assert_eq!(t.rank(), mf.total());
        let one = CycNumber::one(t.order());
        assert!(t.matrices()[1].sub_scalar(&one).rank() <= 1);
        let (witness, cert) = if mf.total() > 1 {
            (Puncture::Infinity, "RegularViaLemma(inf)")
        } else {
            (Puncture::Finite(rat(0, 1)), "RegularViaLemma(0)")
        };
        assert_eq!(is_somewhere_maximal(&t).unwrap(), Some(witness));
        assert_eq!(certify_regular(&t).unwrap().to_string(), cert);
        let types = local_jordan_types(&t).unwrap();
        assert_eq!(types[2].1, rigidcalc::JordanType::unipotent(mf.total()));
        let expected_0 =
            rigidcalc::JordanType::from_blocks(mf.entries().map(|(z, m)| (z.inv(), m, 1)));
        assert_eq!(types[0].1, expected_0);
        let dets = &(&t.at_infinity().det() * &t.matrices()[0].det()) * &t.matrices()[1].det();
        assert!(dets.is_one());
    }
}

#[test]
fn disjoint_parameters_give_rigid_irreducible_tuples() {
    let mut r = rng(7);
    for _ in 0..30 {
        let (a, b, order) = random_disjoint(&mut r, 4);
        let t = hypergeometric_tuple(&a, &b, order).unwrap();
        assert!(t.matrices()[1].sub_scalar(&CycNumber::one(order)).rank() <= 1);
        assert!(is_absolutely_irreducible(&t), "{t:?}");
        assert_eq!(rigidity_index(&t), 2);
    }
}

#[test]
fn convolution_preserves_product_relation() {
    let mut r = rng(8);
    let mut tuples: Vec<MonodromyTuple> = (0..4).map(|i| build_f(i).unwrap()).collect();
    for _ in 0..4 {
        let (mf, order) = random_multiplicity(&mut r, 3);
        tuples.push(from_multiplicity_function(&mf, order).unwrap());
    }
    for t in tuples {
        let order = t.order();
        let lambda = random_root(&mut r, order).to_cyc(order);
        if let Ok(mc) = middle_convolution(&t, &lambda) {
            let prod = t_product(&mc);
            assert!((&prod * mc.at_infinity()).is_identity());
        }
        let scalars: Vec<CycNumber> = (0..t.matrices().len())
            .map(|_| random_root(&mut r, order).to_cyc(order))
            .collect();
        let data = rigidcalc::RankOneData::new(scalars.clone()).unwrap();
        let tw = tensor_rank_one(&t, &data).unwrap();
        assert!((&t_product(&tw) * tw.at_infinity()).is_identity());
        for ((p, m), s) in tw
            .local_monodromies()
            .zip(scalars.iter().chain([&data.infinity_scalar()]))
        {
            let s_root = s.as_root_of_unity().unwrap();
            let before = jordan_type(t.monodromy_at(&p).unwrap(), order).unwrap();
            assert_eq!(
                jordan_type(m, tw.order()).unwrap(),
                before.twist(s_root),
                "at {p}"
            );
        }
    }
}

fn t_product(t: &MonodromyTuple) -> ExactMatrix {
    let n = t.rank();
    t.matrices()
        .iter()
        .fold(ExactMatrix::identity(n, t.order()), |acc, m| &acc * m)
}

#[test]
fn family_is_quasi_unipotent_of_order_two() {
    for i in 0..=8 {
        let t = build_f(i).unwrap();
        for (p, m) in t.local_monodromies() {
            assert!(is_quasi_unipotent(m, 2), "F_{i} at {p}");
        }
    }
}

fn weil_poly_from_roots(roots: &[CycNumber], q: u64, w: i64) -> WeilPolynomial {
    let order = roots
        .iter()
        .map(CycNumber::order)
        .fold(1, rigidcalc::field::lcm);
    let coeffs = rigidcalc::hypergeometric::poly_from_roots(roots, order);
    WeilPolynomial::new(coeffs, q, w).unwrap()
}

#[test]
fn products_of_weil_factors_pass() {
    let mut r = rng(9);
    for _ in 0..100 {
        let order = [1u32, 2, 3, 4, 6][r.gen_range(0..5)];
        let q = [2u64, 3, 4, 5, 7, 9][r.gen_range(0..6)];
        let w = 2 * r.gen_range(0..=2i64);
        let scale = CycNumber::from_int((q as i64).pow((w / 2) as u32), 1);
        let deg = r.gen_range(1..=4);
        let roots: Vec<CycNumber> = (0..deg)
            .map(|_| &random_root(&mut r, order).to_cyc(order) * &scale)
            .collect();
        let p = weil_poly_from_roots(&roots, q, w);
        assert!(functional_equation_check(&p), "{p}");
        assert_eq!(p.conj_reciprocal(), p);
        assert_eq!(weil_check(&p, 1e-20).unwrap(), WeilVerdict::Pass, "{p}");
    }
}

#[test]
fn elliptic_curve_corpus() {
    for p in [3i64, 5, 7, 11] {
        let a = ec_trace(p);
        assert!(a * a <= 4 * p);
        let poly = WeilPolynomial::from_ints(&[p, -a, 1], p as u64, 1).unwrap();
        assert_eq!(
            weil_check(&poly, 1e-20).unwrap(),
            WeilVerdict::Pass,
            "p={p} a={a}"
        );
        assert_eq!(poly.conj_reciprocal(), poly);
    }
}

#[test]
fn rank_oracle_agrees_on_family_matrices() {
    for i in 0..5 {
        let t = build_f(i).unwrap();
        for m in t.matrices() {
            let one = CycNumber::one(m.order());
            let d = m.sub_scalar(&one);
            assert_eq!(d.rank(), rank_oracle(&d));
        }
    }
    assert!(rigidcalc::field::Rational::zero().is_zero());
}

#[test]
fn jordan_type_is_conjugation_invariant() {
    jordan_conjugation_invariance(100);
}

#[test]
fn rigidity_index_invariances() {
    rigidity_index_invariance();
}

#[test]
fn burnside_agrees_with_shemesh_oracle() {
    let reducible = burnside_agreement(300);
    assert!(
        reducible > 10 && reducible < 290,
        "fixture mix too one-sided: {reducible}"
    );
}

#[test]
fn hodge_dual_is_an_involution() {
    hodge_dual_involution(200);
}
