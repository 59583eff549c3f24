//! Property tests for the algebraic invariants: the substitution maps are
//! ring maps, the P map round-trips, witnesses compose, and the standard
//! code transforms keep their parameter contracts.

use std::sync::Arc;

use proptest::prelude::*;

use cyclequiv::codes::{weight_enumerator, GeneratorMatrix};
use cyclequiv::cosets::{CosetMultiset, CosetTable};
use cyclequiv::equivalence::{affine_equivalent, witness_maps, Mode};
use cyclequiv::field::{gcd, mod_inverse, Field};
use cyclequiv::partition::{index_to_multiset, total_multisets};
use cyclequiv::poly::Poly;
use cyclequiv::text;

fn gf(q: u64) -> Arc<Field> {
    cyclequiv::search::field_from_order(q).unwrap()
}

fn poly_from(field: &Arc<Field>, coeffs: &[u8]) -> Poly {
    let v: Vec<u32> = coeffs.iter().map(|&c| c as u32 % field.order() as u32).collect();
    Poly::from_indices(field, &v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_grammar_roundtrips(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 9]),
                               coeffs in prop::collection::vec(0u8..9, 0..24)) {
        let field = gf(q);
        let p = poly_from(&field, &coeffs);
        let printed = text::format_poly(&p);
        let back = text::parse_poly(&field, &printed).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn division_contract(q in prop::sample::select(vec![3u64, 5, 7]),
                         a in prop::collection::vec(0u8..7, 0..20),
                         b in prop::collection::vec(0u8..7, 1..10)) {
        let field = gf(q);
        let f = poly_from(&field, &a);
        let g = poly_from(&field, &b);
        prop_assume!(!g.is_zero());
        let (quot, rem) = f.divmod(&g).unwrap();
        prop_assert_eq!(quot.mul(&g).unwrap().add(&rem).unwrap(), f);
        if let (Some(rd), Some(gd)) = (rem.degree(), g.degree()) {
            prop_assert!(rd < gd);
        }
    }

    #[test]
    fn substitution_is_a_ring_map(e_raw in 1u64..20, n in 2usize..24,
                                  a in prop::collection::vec(0u8..3, 0..24),
                                  b in prop::collection::vec(0u8..3, 0..24)) {
        let e = (e_raw as usize % n).max(1);
        prop_assume!(gcd(e as u64, n as u64) == 1);
        let field = gf(3);
        let pa = poly_from(&field, &a).reduce_mod_xn_minus_one(n);
        let pb = poly_from(&field, &b).reduce_mod_xn_minus_one(n);
        if e == n {
            return Ok(());
        }
        let lhs = pa.mulmod(&pb, n).unwrap().substitute_power(e, n);
        let rhs = pa.substitute_power(e, n).mulmod(&pb.substitute_power(e, n), n).unwrap();
        prop_assert_eq!(lhs, rhs);
        let sum = pa.add(&pb).unwrap().substitute_power(e, n);
        prop_assert_eq!(sum, pa.substitute_power(e, n).add(&pb.substitute_power(e, n)).unwrap());
        // bijectivity through the inverse exponent
        let e_inv = mod_inverse(e as u64, n as u64).unwrap() as usize;
        if e_inv > 0 && e_inv < n {
            prop_assert_eq!(pa.substitute_power(e, n).substitute_power(e_inv, n), pa);
        }
    }

    #[test]
    fn scaling_then_unscaling_is_identity(coeffs in prop::collection::vec(0u8..9, 0..16),
                                          gen_pow in 1u64..8) {
        let f9 = gf(9);
        let p = poly_from(&f9, &coeffs);
        let delta = f9.pow(f9.generator(), gen_pow);
        let back = p
            .substitute_scale(delta)
            .unwrap()
            .substitute_scale(f9.inv(delta).unwrap())
            .unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn p_map_roundtrips(case in prop::sample::select(vec![(2u64, 14u64), (2, 15), (3, 8), (3, 12), (5, 8), (2, 21)]),
                        raw_idx in 1u64..10_000) {
        let (q, n) = case;
        let field = gf(q);
        let table = CosetTable::new(&field, n).unwrap();
        let total = total_multisets(&table);
        let idx = (raw_idx as u128 - 1) % total + 1;
        let ms = index_to_multiset(idx, &table).unwrap();
        let poly = ms.to_poly().unwrap();
        prop_assert!(poly.divides(&Poly::x_pow_minus_one(&field, n as usize)).unwrap());
        let back = CosetMultiset::from_poly(&table, &poly).unwrap();
        prop_assert_eq!(back.multiplicities(), ms.multiplicities());
    }

    #[test]
    fn witness_symmetry(case in prop::sample::select(vec![(2u64, 14u64), (3, 8), (2, 21), (5, 12), (3, 30)]),
                        ia in 1u64..10_000, ib in 1u64..10_000,
                        strict in proptest::bool::ANY) {
        let (q, n) = case;
        let field = gf(q);
        let table = CosetTable::new(&field, n).unwrap();
        let total = total_multisets(&table);
        let a = index_to_multiset((ia as u128 - 1) % total + 1, &table).unwrap();
        let b = index_to_multiset((ib as u128 - 1) % total + 1, &table).unwrap();
        let mode = if strict { Mode::Strict } else { Mode::PaperLiteral };
        let nq = table.split().coprime;
        let fwd = affine_equivalent(&a, &b, mode).unwrap();
        let bwd = affine_equivalent(&b, &a, mode).unwrap();
        prop_assert_eq!(fwd.is_some(), bwd.is_some());
        if let Some(w) = fwd {
            prop_assert!(witness_maps(&a, &b, &w));
            prop_assert!(witness_maps(&b, &a, &w.inverse(nq)));
            if let Some(w2) = bwd {
                prop_assert!(witness_maps(&a, &a, &w.then(&w2, nq)));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_parameter_contracts(case in prop::sample::select(vec![(2u64, 15u64), (3, 13), (2, 9)]),
                                     raw_idx in 1u64..1_000, pos_raw in 0usize..64) {
        let (q, n) = case;
        let field = gf(q);
        let table = CosetTable::new(&field, n).unwrap();
        let total = total_multisets(&table);
        let ms = index_to_multiset((raw_idx as u128 - 1) % total + 1, &table).unwrap();
        prop_assume!(ms.total_size() < n);
        let g = ms.to_poly().unwrap();
        let m = GeneratorMatrix::circulant(&g, n as usize).unwrap();
        let k = m.rows();
        let d = cyclequiv::codes::min_positive_weight(
            &weight_enumerator(&m, 1 << 22).unwrap(),
        )
        .unwrap();
        let pos = pos_raw % n as usize;
        if let Ok(s) = m.shorten(pos) {
            prop_assert_eq!(s.cols(), n as usize - 1);
            prop_assert!(s.rows() == k - 1 || s.rows() == k);
            let ds = cyclequiv::codes::min_positive_weight(
                &weight_enumerator(&s, 1 << 22).unwrap(),
            )
            .unwrap();
            prop_assert!(ds >= d);
        }
        if let Ok(p) = m.puncture(pos) {
            prop_assert_eq!(p.cols(), n as usize - 1);
            let dp = cyclequiv::codes::min_positive_weight(
                &weight_enumerator(&p, 1 << 22).unwrap(),
            )
            .unwrap();
            prop_assert!(dp + 1 >= d);
        }
        let e = m.extend();
        prop_assert_eq!((e.rows(), e.cols()), (k, n as usize + 1));
        let de = cyclequiv::codes::min_positive_weight(
            &weight_enumerator(&e, 1 << 22).unwrap(),
        )
        .unwrap();
        prop_assert!(de >= d);
    }
}
