use proptest::prelude::*;

use zps_parity::codemodel::{cardinality, codes_equal, enumerate, CodeSpec};
use zps_parity::paritycheck::{dual_type, parity_check_bruteforce};
use zps_parity::{
    parity_check_iterative, parity_check_minors, standard_form, verify_parity, Matrix, RingSpec,
};

fn ring() -> impl Strategy<Value = RingSpec> {
    prop_oneof![
        Just((2u64, 1u32)),
        Just((2, 2)),
        Just((2, 3)),
        Just((3, 1)),
        Just((3, 2)),
        Just((5, 1)),
        Just((2, 4)),
    ]
    .prop_map(|(p, s)| RingSpec::new(p, s).unwrap())
}

/// Generators with rows scaled by random powers of `p`.
fn generators(max_n: usize) -> impl Strategy<Value = Matrix> {
    (ring(), 1..=max_n, 0..=max_n + 1).prop_flat_map(|(ring, n, k)| {
        let m = ring.modulus();
        let rows = prop::collection::vec((0..=ring.s(), prop::collection::vec(0..m, n)), k);
        rows.prop_map(move |rows| {
            let mut g = Matrix::zeros(ring, rows.len(), n);
            for (r, (v, entries)) in rows.iter().enumerate() {
                for (c, &x) in entries.iter().enumerate() {
                    g.set(r, c, ring.mul(x, ring.pow_p(*v)));
                }
            }
            g
        })
    })
}

fn naive_zero_product(g: &Matrix, h: &Matrix) -> bool {
    let ring = g.ring();
    g.rows().all(|u| {
        h.rows().all(|v| {
            u.iter()
                .zip(v)
                .fold(0, |acc, (&a, &b)| ring.mul_add(acc, a, b))
                == 0
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn methods_agree(g in generators(12)) {
        let sf = standard_form(&g);
        let minors = parity_check_minors(&sf);
        let iterative = parity_check_iterative(&sf);
        prop_assert_eq!(&minors.h, &iterative.h);
        prop_assert!(verify_parity(&g, &minors.h_original).unwrap().holds);
        prop_assert_eq!(minors.h.nrows(), dual_type(sf.layout()).total());
    }

    #[test]
    fn corruption_is_detected_exactly(g in generators(8), pick in any::<(u64, u64, u64)>()) {
        let sf = standard_form(&g);
        let mut h = parity_check_iterative(&sf).h_original;
        prop_assume!(h.nrows() > 0);
        let ring = g.ring();
        let (r, c) = ((pick.0 % h.nrows() as u64) as usize, (pick.1 % h.ncols() as u64) as usize);
        let delta = 1 + pick.2 % (ring.modulus() - 1).max(1);
        h.set(r, c, ring.add(h.get(r, c), ring.reduce(delta)));
        let verdict = verify_parity(&g, &h).unwrap();
        prop_assert_eq!(verdict.holds, naive_zero_product(&g, &h));
        // the corrupted entry meets column c of G; any nonzero entry there
        // times a unit delta breaks the product
        if ring.is_unit(ring.reduce(delta)) && (0..g.nrows()).any(|i| g.get(i, c) != 0) {
            prop_assert!(!verdict.holds);
        }
        if let Some(cert) = verdict.certificate {
            prop_assert!(cert.value != 0);
            prop_assert!(cert.row >= 1 && cert.row <= g.nrows());
            prop_assert!(cert.col >= 1 && cert.col <= h.nrows());
        }
    }

    #[test]
    fn span_matches_bruteforce(g in generators(4)) {
        let ring = g.ring();
        prop_assume!(ring.modulus().pow(g.ncols() as u32) <= 1 << 16);
        let h = parity_check_minors(&standard_form(&g)).h_original;
        let mut span = enumerate(&CodeSpec::new(h)).unwrap();
        let mut dual = parity_check_bruteforce(&g).unwrap().to_rows();
        span.sort();
        dual.sort();
        prop_assert_eq!(span, dual);
    }

    #[test]
    fn type_is_a_code_invariant(g in generators(10), seed in any::<u64>()) {
        let ring = g.ring();
        // mix rows with a unipotent upper-triangular matrix and add a
        // redundant row
        let k = g.nrows();
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ring.reduce(state >> 33)
        };
        let mix = Matrix::from_fn(ring, k, k, |i, j| if i == j { 1 } else if i < j { next() } else { 0 });
        let mut mixed = mix.mul(&g).unwrap();
        if k > 0 {
            let extra = Matrix::from_fn(ring, 1, k, |_, _| next()).mul(&g).unwrap();
            mixed = Matrix::vstack(ring, g.ncols(), &[&mixed, &extra]).unwrap();
        }
        let a = standard_form(&g);
        let b = standard_form(&mixed);
        prop_assert_eq!(a.layout(), b.layout());
        prop_assert!(codes_equal(&CodeSpec::new(g.clone()), &CodeSpec::new(mixed)).unwrap());
        let sizes = cardinality(ring, a.layout()).times(&cardinality(ring, &dual_type(a.layout()))).unwrap();
        prop_assert_eq!(sizes.exponent, ring.s() as u64 * g.ncols() as u64);
    }

    #[test]
    fn double_dual(g in generators(14)) {
        let code = CodeSpec::new(g);
        let h = parity_check_iterative(code.standard_form()).h_original;
        let back = parity_check_minors(&standard_form(&h)).h_original;
        prop_assert!(codes_equal(&CodeSpec::new(back), &code).unwrap());
    }
}
