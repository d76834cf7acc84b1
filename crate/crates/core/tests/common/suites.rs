//! Property checks shared by the `properties` tests and the acceptance run.
//! Each check panics with a description of the first counterexample.

use rand::Rng;
use rigidcalc::convolution::build_f;
use rigidcalc::field::rat;
use rigidcalc::hypergeometric::{
    from_multiplicity_function, hypergeometric_tuple, MultiplicityFunction,
};
use rigidcalc::monodromy::{is_absolutely_irreducible, jordan_type, rigidity_index};
use rigidcalc::purity::HodgeMultiset;
use rigidcalc::{
    hodge_conjugate_dual, hodge_is_regular, CycNumber, ExactMatrix, MonodromyTuple, RootOfUnity,
};

use super::{irreducible_oracle, random_invertible, rng};

/// Local monodromies of the family and of a few hypergeometric tuples.
pub fn jordan_fixtures() -> Vec<(ExactMatrix, u32)> {
    let mut out = Vec::new();
    for i in 0..5 {
        let t = build_f(i).unwrap();
        out.extend(t.local_monodromies().map(|(_, m)| (m.clone(), 2)));
    }
    let z = |k, n| CycNumber::zeta_pow(n, k);
    let one = |n| CycNumber::one(n);
    for (a, b, n) in [
        (vec![one(3), one(3)], vec![z(1, 3), z(2, 3)], 3),
        (
            vec![one(4), z(2, 4), z(1, 4)],
            vec![z(3, 4), z(3, 4), z(3, 4)],
            4,
        ),
        (vec![z(1, 6), z(5, 6)], vec![one(6), z(3, 6)], 6),
    ] {
        let t = hypergeometric_tuple(&a, &b, n).unwrap();
        out.extend(t.local_monodromies().map(|(_, m)| (m.clone(), n)));
    }
    out
}

pub fn rigidity_fixtures() -> Vec<MonodromyTuple> {
    let mut out: Vec<MonodromyTuple> = (0..5).map(|i| build_f(i).unwrap()).collect();
    out.push(involution_tuple());
    let mf = MultiplicityFunction::new([(RootOfUnity::new(1, 3), 2), (RootOfUnity::new(1, 2), 1)])
        .unwrap();
    out.push(from_multiplicity_function(&mf, 6).unwrap());
    out
}

/// Three involutions at 0, 1, 2 with index 0.
pub fn involution_tuple() -> MonodromyTuple {
    let m = |r: &[&[i64]]| ExactMatrix::from_ints(r, 2);
    MonodromyTuple::on_points(
        2,
        &[0, 1, 2],
        vec![
            m(&[&[1, 0], &[0, -1]]),
            m(&[&[0, 1], &[1, 0]]),
            m(&[&[1, 0], &[1, -1]]),
        ],
    )
    .unwrap()
}

/// `trials` random conjugations per fixture.
pub fn jordan_conjugation_invariance(trials: usize) {
    let mut r = rng(1);
    for (m, order) in jordan_fixtures() {
        let j = jordan_type(&m, order).unwrap();
        for _ in 0..trials {
            let p = random_invertible(&mut r, m.rows(), order);
            let c = &(&p * &m) * &p.inverse().unwrap();
            assert_eq!(
                jordan_type(&c, order).unwrap(),
                j,
                "conjugate of {m} by {p}"
            );
        }
    }
}

pub fn rigidity_index_invariance() {
    let mut r = rng(3);
    for t in rigidity_fixtures() {
        let idx = rigidity_index(&t);
        let n = t.rank();
        let trivial = t
            .with_puncture(rat(7, 3), ExactMatrix::identity(n, t.order()))
            .unwrap();
        assert_eq!(
            rigidity_index(&trivial),
            idx,
            "trivial puncture changed the index"
        );
        for _ in 0..3 {
            let p = random_invertible(&mut r, n, t.order());
            assert_eq!(
                rigidity_index(&t.conjugate(&p).unwrap()),
                idx,
                "conjugation by {p} changed the index"
            );
        }
    }
}

/// Random pairs of invertible matrices of size at most 3 with entries in
/// `{0, +-1, +-2}`; returns how many were reducible.
pub fn burnside_agreement(pairs: usize) -> usize {
    let mut r = rng(5);
    let mut reducible = 0;
    let mut checked = 0;
    while checked < pairs {
        let n = r.gen_range(1..=3);
        let mut gen = || loop {
            let m = ExactMatrix::from_fn(n, n, 1, |_, _| {
                // sparse entries make reducible pairs common
                let v = if r.gen_bool(0.5) {
                    0
                } else {
                    r.gen_range(-2..=2)
                };
                CycNumber::from_int(v, 1)
            });
            if !m.det().is_zero() {
                return m;
            }
        };
        let (a, b) = (gen(), gen());
        let Ok(t) = MonodromyTuple::on_points(1, &[0, 1], vec![a.clone(), b.clone()]) else {
            continue;
        };
        let expected = irreducible_oracle(&a, &b);
        assert_eq!(is_absolutely_irreducible(&t), expected, "A={a} B={b}");
        reducible += usize::from(!expected);
        checked += 1;
    }
    reducible
}

pub fn hodge_dual_involution(cases: usize) {
    let mut r = rng(10);
    for _ in 0..cases {
        let len = r.gen_range(1..8);
        let w = r.gen_range(-3..10);
        let values: Vec<i64> = (0..len).map(|_| r.gen_range(-2..12)).collect();
        let h = HodgeMultiset::new(values, w).unwrap();
        let d = hodge_conjugate_dual(&h);
        assert_eq!(hodge_conjugate_dual(&d), h);
        assert_eq!(d.values().len(), h.values().len());
        assert_eq!(hodge_is_regular(&d), hodge_is_regular(&h));
    }
}
