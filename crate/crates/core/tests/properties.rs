use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use weilres::binomial::{BinomialRing, Rationals};
use weilres::csa::{compose, hom_generator, weil_restrict_hom, BrauerClass, CsaHom, CsaObject, ModelRegistry};
use weilres::group::{all_subgroups, coset_action, left_cosets, named_group, FiniteGroup};
use weilres::motive::{dimension_identity_weighted, make_context, FieldNames};
use weilres::orbit::{act, burnside_count, orbits, LabelFunction};
use weilres::polymap::{certify_degree, cross_effect, delta, CertifiedMap, CertifyOptions, Domain, PointedMap};

fn small_groups() -> Vec<FiniteGroup> {
    vec![
        named_group("C", 4).unwrap(),
        named_group("S", 3).unwrap(),
        named_group("D", 4).unwrap(),
        FiniteGroup::direct_product(&named_group("C", 2).unwrap(), &named_group("C", 2).unwrap()).unwrap(),
    ]
}

fn arb_group_and_subgroup() -> impl Strategy<Value = (usize, usize)> {
    (0..4usize).prop_flat_map(|gi| {
        let count = all_subgroups(&small_groups()[gi]).unwrap().len();
        (Just(gi), 0..count)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_is_a_left_action((gi, hi) in arb_group_and_subgroup(), seed in any::<u64>(), n in 1u32..4) {
        let g = &small_groups()[gi];
        let h = all_subgroups(g).unwrap()[hi].clone();
        let cs = left_cosets(g, &h).unwrap();
        let d = cs.len();
        let values: Vec<u32> = (0..d).map(|p| ((seed >> (2 * p)) % n as u64) as u32 + 1).collect();
        let alpha = LabelFunction::new(values, n).unwrap();
        prop_assert_eq!(act(g, &cs, g.identity(), &alpha).unwrap(), alpha.clone());
        let r = (seed % g.order() as u64) as usize;
        let s = ((seed / 7) % g.order() as u64) as usize;
        let lhs = act(g, &cs, g.mul(r, s), &alpha).unwrap();
        let rhs = act(g, &cs, r, &act(g, &cs, s, &alpha).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coset_action_is_a_homomorphism((gi, hi) in arb_group_and_subgroup(), a in 0usize..8, b in 0usize..8) {
        let g = &small_groups()[gi];
        let h = all_subgroups(g).unwrap()[hi].clone();
        let cs = left_cosets(g, &h).unwrap();
        let act = coset_action(g, &cs).unwrap();
        let (a, b) = (a % g.order(), b % g.order());
        let composed: Vec<usize> = act.row(b).iter().map(|&p| act.row(a)[p]).collect();
        prop_assert_eq!(act.row(g.mul(a, b)).to_vec(), composed);
    }

    #[test]
    fn orbits_partition_and_match_burnside((gi, hi) in arb_group_and_subgroup(), n in 1u32..4) {
        let g = &small_groups()[gi];
        let h = all_subgroups(g).unwrap()[hi].clone();
        let cs = left_cosets(g, &h).unwrap();
        let set = orbits(g, &cs, n).unwrap();
        let total: usize = set.orbits().iter().map(|o| o.size()).sum();
        prop_assert_eq!(total as u64, (n as u64).pow(cs.len() as u32));
        prop_assert_eq!(burnside_count(g, &cs, n).unwrap().to_usize().unwrap(), set.len());
        for o in set.orbits() {
            prop_assert_eq!(o.size() * o.stabilizer().len(), g.order());
        }
    }

    #[test]
    fn weighted_dimension_identity((gi, hi) in arb_group_and_subgroup(), m in prop::collection::vec(0i64..5, 1..4)) {
        let g = small_groups()[gi].clone();
        let h = all_subgroups(&g).unwrap()[hi].clone();
        let ctx = make_context(g, h, FieldNames::default()).unwrap();
        prop_assert!(dimension_identity_weighted(&ctx, &m).unwrap().holds);
    }

    #[test]
    fn vandermonde_over_rationals(xn in -20i64..20, xd in 1i64..9, yn in -20i64..20, yd in 1i64..9, n in 0u32..7) {
        let q = Rationals;
        let x = BigRational::new(xn.into(), xd.into());
        let y = BigRational::new(yn.into(), yd.into());
        let lhs = q.binom(&q.add(&x, &y), n).unwrap();
        let mut rhs = q.zero();
        for k in 0..=n {
            rhs = q.add(&rhs, &q.mul(&q.binom(&x, k).unwrap(), &q.binom(&y, n - k).unwrap()));
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mahler_expansion_recovers_polynomials(coeffs in prop::collection::vec(-6i64..6, 1..6), x in -30i64..30) {
        let cs = coeffs.clone();
        let f = PointedMap::new("poly", 1, 1, Domain::Monoid, move |v| {
            let mut acc = BigInt::zero();
            for c in cs.iter().rev() {
                acc = acc * &v[0] + c;
            }
            vec![acc]
        });
        let cert = certify_degree(&f, &CertifyOptions::default()).unwrap();
        let expected_degree = coeffs.iter().enumerate().skip(1).filter(|(_, &c)| c != 0).map(|(i, _)| i).max().unwrap_or(0);
        prop_assert_eq!(cert.degree as usize, expected_degree);
        let direct: BigInt = coeffs.iter().enumerate().skip(1).map(|(i, &c)| BigInt::from(c) * BigInt::from(x).pow(i as u32)).sum();
        prop_assert_eq!(cert.table.eval(&[BigInt::from(x)]), vec![direct]);
    }

    #[test]
    fn cross_effects_are_symmetric(a in 0i64..6, b in 0i64..6, c in 0i64..6, e in 1u32..5) {
        let f = PointedMap::new("mix", 1, 1, Domain::Monoid, move |v| vec![v[0].pow(e) * 3 - &v[0] * 2]);
        let args = [vec![BigInt::from(a)], vec![BigInt::from(b)], vec![BigInt::from(c)]];
        let perm = [args[2].clone(), args[0].clone(), args[1].clone()];
        prop_assert_eq!(cross_effect(&f, &args).unwrap(), cross_effect(&f, &perm).unwrap());
        prop_assert_eq!(delta(&f, 2, &args).unwrap(), cross_effect(&f, &args).unwrap());
    }

    #[test]
    fn extension_is_additive_for_linear_maps(c in -9i64..9, x in -50i64..50, y in -50i64..50) {
        let m = CertifiedMap::certify(PointedMap::scale(c), &CertifyOptions::default()).unwrap().extension();
        let sum = m.eval_i64(&[x + y]).unwrap();
        let parts: Vec<BigInt> = vec![&m.eval_i64(&[x]).unwrap()[0] + &m.eval_i64(&[y]).unwrap()[0]];
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn brauer_homs_compose_by_multiplication(num in 0i64..12, den in 1i64..12, u in 1i64..20, v in 1i64..20) {
        let reg = ModelRegistry::builtin();
        let k = reg.get("K").unwrap();
        let a = CsaObject::unit(k.clone());
        let c = BrauerClass::new(num, den);
        let b = CsaObject::division(k, c).unwrap();
        prop_assert_eq!(hom_generator(&b, &b).unwrap(), 1);
        let gen = hom_generator(&a, &b).unwrap() as i64;
        let f = CsaHom::from_value(a.clone(), b.clone(), BigInt::from(u * gen)).unwrap();
        let g = CsaHom::from_value(b, a, BigInt::from(v * gen)).unwrap();
        prop_assert_eq!(compose(&f, &g).unwrap().value(), BigInt::from(u * v * gen * gen));
    }

    #[test]
    fn weil_restriction_is_multiplicative(n in -40i64..40, m in -40i64..40, d in 1u32..7) {
        let (n, m) = (BigInt::from(n), BigInt::from(m));
        prop_assert_eq!(weil_restrict_hom(&(&n * &m), d), weil_restrict_hom(&n, d) * weil_restrict_hom(&m, d));
    }
}
