use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectrum::*;

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn grid(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect()
}

/// Every admissible `(e,k)` for `n = d(m+1)`.
fn admissible(n: usize, d: usize) -> Vec<(usize, usize)> {
    let m = n / d - 1;
    let mut out = Vec::new();
    for e in 1..n {
        for k in 1..=d.min(e) {
            if in_v(e, k, d, n) && e < k * (m + 1) {
                out.push((e, k));
            }
        }
    }
    out
}

/// Smallest entry of `β`, so steps of this size or less keep `β ± h` positive.
fn min_entry(beta: &[Vec<BigRational>]) -> BigRational {
    beta.iter().flatten().min().unwrap().clone()
}

fn divisor_pairs(max_n: usize) -> Vec<(usize, usize)> {
    (2..=max_n).flat_map(|n| (1..n).filter(move |d| n % d == 0).map(move |d| (n, d))).collect()
}

#[test]
fn chi_examples() {
    let x = chi(3, 2, 2, 2).unwrap();
    assert_eq!(x, BTreeSet::from([(1, 1), (1, 2), (2, 1)]));
    for (d, m) in [(1, 3), (2, 2), (3, 1), (3, 4)] {
        assert_eq!(chi(1, 1, d, m).unwrap(), BTreeSet::from([(d, 1)]));
    }
}

#[test]
fn chi_rejects_pairs_outside_v() {
    // k > e
    assert!(chi(1, 2, 2, 2).is_err());
    // e = n
    assert!(chi(6, 2, 2, 2).is_err());
    // e ≥ k(m+1)
    assert!(matches!(chi(3, 1, 2, 2), Err(SpectrumError::TooLarge { .. })));
}

#[test]
fn omega_examples() {
    let t = SpectrumTarget::custom(6, 2, vec![(3, 2)]).unwrap();
    let beta = grid(&[&[2, 3], &[5, 7]]);
    assert_eq!(omega_eval(&t, &beta).unwrap(), vec![q(11, 1)]);
    let jac = jacobian_closed_form(&t, &beta).unwrap();
    // columns β11, β12, β21, β22
    assert_eq!(jac[0], vec![q(3, 1), q(2, 1), q(1, 1), q(0, 1)]);
}

#[test]
fn omega_rejects_bad_beta() {
    let t = SpectrumTarget::custom(6, 2, vec![(3, 2)]).unwrap();
    assert_eq!(omega_eval(&t, &grid(&[&[2, 3], &[5, 0]])), Err(SpectrumError::Beta));
    assert_eq!(omega_eval(&t, &grid(&[&[2, 3]])), Err(SpectrumError::Beta));
}

#[test]
fn support_identity_up_to_twelve() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for (n, d) in divisor_pairs(12) {
        let m = n / d - 1;
        let beta = distinct_prime_beta(d, m, &mut rng);
        for (e, k) in admissible(n, d) {
            let x = chi(e, k, d, m).unwrap();
            assert_eq!(x, chi_from_membership(e, k, d, m).unwrap(), "({e},{k}) d={d} m={m}");
            let om = OmegaMap::new(d, m, &[(e, k)]).unwrap();
            assert_eq!(om.support(0), x);
            assert!(om.polys[0].1.len() <= k);
            let t = SpectrumTarget::custom(n, d, vec![(e, k)]).unwrap();
            let jac = jacobian_closed_form(&t, &beta).unwrap();
            let nonzero: BTreeSet<(usize, usize)> = (0..d * m)
                .filter(|&c| !jac[0][c].is_zero())
                .map(|c| (c / m + 1, c % m + 1))
                .collect();
            assert_eq!(nonzero, x);
            checked += 1;
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn monomials_are_square_free_in_distinct_rows() {
    for (n, d) in divisor_pairs(12) {
        let m = n / d - 1;
        let om = OmegaMap::new(d, m, &admissible(n, d)).unwrap();
        for (_, ms) in &om.polys {
            let rows: Vec<usize> = ms.iter().filter_map(|mo| mo.first().map(|v| v.0)).collect();
            assert_eq!(rows.iter().collect::<BTreeSet<_>>().len(), rows.len());
            for mo in ms {
                assert!(mo.iter().all(|v| v.0 == mo[0].0));
                assert_eq!(mo.iter().collect::<BTreeSet<_>>().len(), mo.len());
            }
        }
    }
}

#[test]
fn families() {
    let t = SpectrumTarget::family(FamilyKind::MinAngle, 6, 2).unwrap();
    assert_eq!(t.u, vec![(1, 1), (2, 2), (3, 2), (4, 2)]);
    let t = SpectrumTarget::family(FamilyKind::LastAngleD, 6, 3).unwrap();
    assert_eq!(t.u, vec![(3, 3), (4, 3), (5, 3)]);
    let t = SpectrumTarget::family(FamilyKind::LastAngleD, 6, 2).unwrap();
    assert_eq!(t.u, vec![(2, 2), (3, 2), (4, 2), (5, 2)]);
    assert_eq!(t.u.len(), t.dm());
    assert_eq!(
        SpectrumTarget::family(FamilyKind::MinAngle, 5, 2),
        Err(SpectrumError::NotDivisible { n: 5, d: 2 })
    );
    assert!(SpectrumTarget::family(FamilyKind::MinAngle, 4, 4).is_err());
}

#[test]
fn custom_validation() {
    assert!(matches!(SpectrumTarget::custom(6, 2, vec![(3, 1)]), Err(SpectrumError::TooLarge { .. })));
    assert!(matches!(SpectrumTarget::custom(6, 2, vec![(5, 1)]), Err(SpectrumError::NotInV { .. })));
    let too_many = vec![(2, 2); 5];
    assert!(matches!(SpectrumTarget::custom(6, 2, too_many), Err(SpectrumError::TooMany { size: 5, dm: 4 })));
    let t = SpectrumTarget::custom(6, 2, vec![(2, 2), (3, 2)]).unwrap();
    assert_eq!(t.clone().with_order(vec![0, 0]), Err(SpectrumError::Order));
    assert_eq!(t.clone().with_order(vec![1]), Err(SpectrumError::Order));
    assert!(t.with_order(vec![1, 0]).is_ok());
}

#[test]
fn min_angle_family_is_triangular_in_ascending_order() {
    let t = SpectrumTarget::family(FamilyKind::MinAngle, 6, 2).unwrap();
    let w = triangular_order(&t).unwrap().unwrap();
    assert_eq!(w.order, vec![0, 1, 2, 3]);
    assert_eq!(w.fresh, vec![(2, 1), (1, 1), (1, 2), (2, 2)]);
    let c = rank_certify(&t, 10, 1).unwrap();
    assert_eq!(c.certificate_level, CertificateLevel::Triangular);
    assert_eq!(c.full_rank_trials, 10);
    assert_eq!(c.witness_order.unwrap(), t.u);
}

#[test]
fn greedy_order_recovers_a_shuffled_family() {
    // a wrong claimed order is replaced by one the greedy search finds
    let t = SpectrumTarget::custom(6, 2, vec![(4, 2), (1, 1), (3, 2), (2, 2)]).unwrap().with_order(vec![0, 1, 2, 3]).unwrap();
    let w = triangular_order(&t).unwrap().unwrap();
    let es: Vec<usize> = w.order.iter().map(|&i| t.u[i].0).collect();
    assert_eq!(es, vec![1, 2, 3, 4]);
}

#[test]
fn min_angle_minor_is_triangular_at_random_beta() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, d) in [(4, 2), (6, 2), (6, 3), (8, 2), (9, 3), (12, 4), (10, 5)] {
        let t = SpectrumTarget::family(FamilyKind::MinAngle, n, d).unwrap();
        let w = triangular_order(&t).unwrap().expect("order exists");
        let m = t.m;
        for _ in 0..20 {
            let beta = distinct_prime_beta(d, m, &mut rng);
            let jac = jacobian_closed_form(&t, &beta).unwrap();
            for (r, &a) in w.order.iter().enumerate() {
                for (c, &(i, l)) in w.fresh.iter().enumerate() {
                    let g = &jac[a][(i - 1) * m + l - 1];
                    if r < c {
                        assert!(g.is_zero());
                    }
                    if r == c {
                        assert!(g.is_positive());
                    }
                }
            }
        }
    }
}

#[test]
fn last_angle_family_has_full_rank() {
    for (n, d) in [(4, 2), (6, 2), (6, 3), (8, 2), (9, 3)] {
        let t = SpectrumTarget::family(FamilyKind::LastAngleD, n, d).unwrap();
        let c = rank_certify(&t, 100, 3).unwrap();
        assert_ne!(c.certificate_level, CertificateLevel::Unknown);
        assert_eq!(c.full_rank_trials, 100, "n={n} d={d}");
        assert_eq!(c.min_rank, d * t.m);
        assert_eq!(c.column_reduction, Some(true));
    }
}

#[test]
fn last_angle_family_has_no_fresh_order_past_md() {
    // once e > md the sets χ(e,d) sit inside χ(md,d), the full grid
    let t = SpectrumTarget::family(FamilyKind::LastAngleD, 6, 2).unwrap();
    assert!(triangular_order(&t).unwrap().is_none());
    let c = rank_certify(&t, 5, 0).unwrap();
    assert_eq!(c.certificate_level, CertificateLevel::GenericRank);
    // d = 1 has no e > md in range
    let t = SpectrumTarget::family(FamilyKind::LastAngleD, 4, 1).unwrap();
    assert_eq!(rank_certify(&t, 5, 0).unwrap().certificate_level, CertificateLevel::Triangular);
}

#[test]
fn column_reduction_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, d) in [(6, 2), (9, 3), (8, 4)] {
        let t = SpectrumTarget::family(FamilyKind::LastAngleD, n, d).unwrap();
        let m = t.m;
        let beta = distinct_prime_beta(d, m, &mut rng);
        let g = column_reduction(&t, &beta).unwrap().unwrap();
        for (row, &(e, _)) in g.iter().zip(&t.u) {
            let (v, u) = (e / d, e % d);
            let f = e.saturating_sub(m * d);
            for i in 1..=d {
                for l in 1..=m {
                    let vi = if i <= u { v + 1 } else { v };
                    let expect = l == vi && i >= 1 + f;
                    assert_eq!(!row[(l - 1) * d + i - 1].is_zero(), expect, "e={e} i={i} l={l}");
                }
            }
        }
    }
    let t = SpectrumTarget::family(FamilyKind::MinAngle, 6, 2).unwrap();
    assert!(column_reduction(&t, &grid(&[&[2, 3], &[5, 7]])).unwrap().is_none());
}

#[test]
fn duplicated_pair_is_unknown() {
    let t = SpectrumTarget::custom(6, 2, vec![(3, 2), (3, 2)]).unwrap();
    assert!(triangular_order(&t).unwrap().is_none());
    let c = rank_certify(&t, 10, 9).unwrap();
    assert_eq!(c.certificate_level, CertificateLevel::Unknown);
    assert_eq!(c.min_rank, 1);
    assert!(c.diagnostic.unwrap().contains("rank 1"));
}

#[test]
fn certificate_json_shape() {
    let t = SpectrumTarget::family(FamilyKind::MinAngle, 4, 2).unwrap();
    let c = rank_certify(&t, 2, 4).unwrap();
    let v = serde_json::to_value(&c).unwrap();
    assert_eq!(v["certificateLevel"], "triangular");
    assert_eq!(v["U"], serde_json::json!([[1, 1], [2, 2]]));
    assert!(v["witnessOrder"].is_array());
    assert!(v["witnessBeta"][0][0].as_str().unwrap().contains('/'));
}

#[test]
fn certification_is_deterministic() {
    let t = SpectrumTarget::family(FamilyKind::LastAngleD, 8, 2).unwrap();
    let a = serde_json::to_string(&rank_certify(&t, 7, 42).unwrap()).unwrap();
    let b = serde_json::to_string(&rank_certify(&t, 7, 42).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn distinct_prime_beta_entries_are_distinct() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let b = distinct_prime_beta(6, 7, &mut rng);
    let all: BTreeSet<BigRational> = b.iter().flatten().cloned().collect();
    assert_eq!(all.len(), 42);
}

#[test]
fn omega_is_multilinear_so_central_differences_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let t = SpectrumTarget::family(FamilyKind::MinAngle, 8, 2).unwrap();
    let beta = distinct_prime_beta(2, 3, &mut rng);
    let jac = jacobian_closed_form(&t, &beta).unwrap();
    for i in 1..=2 {
        for l in 1..=3 {
            let fd = finite_difference(|b| omega_eval(&t, b), &beta, (i, l), &(min_entry(&beta) * q(1, 3))).unwrap();
            for (r, x) in fd.iter().enumerate() {
                assert_eq!(x, &jac[r][(i - 1) * 3 + l - 1]);
            }
        }
    }
}

fn max_err(t: &SpectrumTarget, beta: &[Vec<BigRational>], h: &BigRational) -> BigRational {
    let jac = omega_prime_jacobian(t, beta).unwrap();
    let mut worst = BigRational::zero();
    for i in 1..=t.d {
        for l in 1..=t.m {
            let fd = finite_difference(|b| omega_prime_eval(t, b), beta, (i, l), h).unwrap();
            for (r, x) in fd.iter().enumerate() {
                let err = (x - &jac[r][(i - 1) * t.m + l - 1]).abs();
                if err > worst {
                    worst = err;
                }
            }
        }
    }
    worst
}

#[test]
fn nonlinear_map_differences_converge_at_rate_h_squared() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let t = SpectrumTarget::family(FamilyKind::LastAngleD, 6, 2).unwrap();
    for _ in 0..3 {
        let beta = distinct_prime_beta(2, 2, &mut rng);
        let mut errs = Vec::new();
        for s in 0..5 {
            errs.push(max_err(&t, &beta, &(min_entry(&beta) * q(1, 8 << s))));
        }
        for w in errs.windows(2) {
            assert!(w[1].is_positive());
            let ratio = &w[0] / &w[1];
            assert!(ratio > q(35, 10) && ratio < q(45, 10), "ratio {ratio}");
        }
    }
}

#[test]
fn omega_prime_partials_vanish_off_chi() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let t = SpectrumTarget::family(FamilyKind::MinAngle, 9, 3).unwrap();
    let beta = distinct_prime_beta(3, 2, &mut rng);
    let a = omega_prime_jacobian(&t, &beta).unwrap();
    let b = jacobian_closed_form(&t, &beta).unwrap();
    for (ra, rb) in a.iter().zip(&b) {
        for (x, y) in ra.iter().zip(rb) {
            assert_eq!(x.is_zero(), y.is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_symbolic(
        idx in 0usize..64,
        raw in proptest::collection::vec((1i64..60, 1i64..60), 36),
    ) {
        let pairs = divisor_pairs(12);
        let (n, d) = pairs[idx % pairs.len()];
        let m = n / d - 1;
        let adm = admissible(n, d);
        let take = adm.len().min(d * m);
        let t = SpectrumTarget::custom(n, d, adm.into_iter().take(take).collect()).unwrap();
        let beta: Vec<Vec<BigRational>> =
            (0..d).map(|i| (0..m).map(|l| { let (a, b) = raw[(i * m + l) % 36]; q(a, b) }).collect()).collect();
        prop_assert_eq!(jacobian_closed_form(&t, &beta).unwrap(), jacobian_symbolic(&t, &beta).unwrap());
    }

    #[test]
    fn greedy_finds_an_order_whenever_one_exists(
        nd in 0usize..8,
        picks in proptest::collection::vec(any::<proptest::sample::Index>(), 1..5),
    ) {
        let (n, d) = [(4, 2), (6, 2), (6, 3), (8, 2), (6, 1), (8, 4), (9, 3), (5, 1)][nd];
        let adm = admissible(n, d);
        let mut u: Vec<(usize, usize)> = picks.iter().map(|p| adm[p.index(adm.len())]).collect();
        u.sort();
        u.dedup();
        u.truncate(d * (n / d - 1));
        let t = SpectrumTarget::custom(n, d, u.clone()).unwrap();
        let m = t.m;
        let chis: Vec<BTreeSet<(usize, usize)>> = u.iter().map(|&(e, k)| chi(e, k, d, m).unwrap()).collect();
        let mut exists = false;
        permute(&mut (0..u.len()).collect::<Vec<_>>(), 0, &mut |o| {
            exists |= o.iter().enumerate().all(|(j, &a)| {
                chis[a].iter().any(|x| o[..j].iter().all(|&b| !chis[b].contains(x)))
            });
        });
        prop_assert_eq!(triangular_order(&t).unwrap().is_some(), exists);
    }
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}
