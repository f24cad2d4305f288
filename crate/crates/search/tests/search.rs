use std::collections::BTreeSet;

use certified::Interval;
use construct::{LineConstruction, Mode};
use exactlin::{ivec, orth_complement, RationalSubspace, Surd5};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use search::*;
use search::Strategy;

const PREC: u32 = 256;

fn line_target(n: usize, gamma: &[i64], level: usize) -> (LineConstruction, Target) {
    let g = gamma.iter().map(|&x| Surd5::from_int(x)).collect();
    let lc = LineConstruction::build(n, g, BigInt::from(5), 7, Mode::Strict).unwrap();
    let t = lc.truncated_target(level).unwrap();
    (lc, Target::Truncated(t))
}

fn pluckers(bs: &[RationalSubspace]) -> BTreeSet<Vec<BigInt>> {
    bs.iter().map(|b| b.plucker().to_vec()).collect()
}

#[test]
fn lines_in_the_plane() {
    assert_eq!(enumerate_lines(2, 1).unwrap().len(), 2);
    let l = enumerate_lines(2, 2).unwrap();
    assert_eq!(l.len(), 4);
    let want: BTreeSet<Vec<BigInt>> = [[1, 0], [0, 1], [1, 1], [1, -1]]
        .iter()
        .map(|v| RationalSubspace::from_basis_claim(2, vec![ivec(v)]).unwrap().plucker().to_vec())
        .collect();
    assert_eq!(pluckers(&l), want);
}

#[test]
fn line_heights_bounded_and_distinct() {
    let l = enumerate_lines(4, 30).unwrap();
    assert!(l.iter().all(|b| b.height_sq() <= &BigInt::from(30)));
    assert_eq!(pluckers(&l).len(), l.len());
}

#[test]
fn hyperplanes_match_lines_in_count() {
    let planes = enumerate_subspaces(3, 2, 9, None, 1, 0).unwrap();
    assert_eq!(planes.strategy, Strategy::Dual);
    assert_eq!(planes.subspaces.len(), enumerate_lines(3, 9).unwrap().len());
    assert!(planes.subspaces.iter().all(|b| b.dim() == 2 && b.height_sq() <= &BigInt::from(9)));
}

#[test]
fn full_dimension_rejected() {
    assert!(enumerate_subspaces(3, 3, 9, None, 1, 0).is_err());
    assert!(enumerate_subspaces(3, 0, 9, None, 1, 0).is_err());
    assert!(enumerate_subspaces(3, 1, 9, Some(Strategy::Dual), 1, 0).is_err());
}

#[test]
fn bounded_entries_agree_with_dual_and_primitive() {
    for bound in [1u64, 4, 11] {
        let be = enumerate_subspaces(3, 2, bound, Some(Strategy::BoundedEntries), 2, 0).unwrap();
        let du = enumerate_subspaces(3, 2, bound, Some(Strategy::Dual), 2, 0).unwrap();
        assert!(be.complete);
        assert_eq!(pluckers(&be.subspaces), pluckers(&du.subspaces), "bound {bound}");
        let be1 = enumerate_subspaces(4, 1, bound, Some(Strategy::BoundedEntries), 2, 0).unwrap();
        let pv = enumerate_subspaces(4, 1, bound, None, 2, 0).unwrap();
        assert_eq!(pluckers(&be1.subspaces), pluckers(&pv.subspaces));
    }
    let be = enumerate_subspaces(4, 3, 6, Some(Strategy::BoundedEntries), 2, 0).unwrap();
    let du = enumerate_subspaces(4, 3, 6, None, 2, 0).unwrap();
    assert_eq!(pluckers(&be.subspaces), pluckers(&du.subspaces));
}

#[test]
fn middle_dimension_closed_under_complement() {
    let en = enumerate_subspaces(4, 2, 5, None, 2, 0).unwrap();
    assert_eq!(en.strategy, Strategy::BoundedEntries);
    assert!(en.complete);
    let set = pluckers(&en.subspaces);
    let comp: BTreeSet<Vec<BigInt>> = en.subspaces.iter().map(|b| orth_complement(b).unwrap().plucker().to_vec()).collect();
    assert_eq!(set, comp);
    // the six coordinate planes and nothing of height 1 besides them
    assert_eq!(en.subspaces.iter().filter(|b| b.height_sq() == &BigInt::one()).count(), 6);
}

#[test]
fn own_line_is_excluded() {
    let a = RationalSubspace::from_basis_claim(3, vec![ivec(&[1, 2, 3])]).unwrap();
    let cfg = ScanConfig::new(3, 1, 1, 50, Target::Rational(a.clone()));
    let res = best_approx_scan(&cfg).unwrap();
    assert!(res.records.iter().all(|r| r.subspace != a));
    assert!(res.records.iter().all(|r| r.psi.as_ref().unwrap().is_positive()));
}

#[test]
fn lines_inside_a_rational_plane_are_excluded() {
    let a = exactlin::saturate(&[ivec(&[1, 1, 0]), ivec(&[0, 1, 1])]).unwrap();
    let mut cfg = ScanConfig::new(3, 1, 1, 20, Target::Rational(a.clone()));
    cfg.score_floor = BigRational::from_integer((-100).into());
    let res = best_approx_scan(&cfg).unwrap();
    let all = enumerate_lines(3, 20).unwrap();
    let inside = all
        .iter()
        .filter(|l| exactlin::saturate(&[a.basis()[0].clone(), a.basis()[1].clone(), l.basis()[0].clone()]).unwrap().dim() == 2)
        .count();
    assert!(inside > 0);
    assert_eq!(res.records.len() + inside, all.len());
}

#[test]
fn axes_always_present() {
    let (_, t) = line_target(3, &[3], 4);
    let cfg = ScanConfig::new(3, 1, 1, 1, t);
    let res = best_approx_scan(&cfg).unwrap();
    assert_eq!(res.records.len(), 3);
    assert!(res.records.iter().all(|r| r.height_sq.is_one() && r.score.is_none()));
}

fn csv_bytes(res: &ScanResult) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(&res.records, &mut buf).unwrap();
    buf
}

#[test]
fn scan_is_deterministic_across_workers() {
    let (_, t) = line_target(3, &[3], 4);
    let mut cfg = ScanConfig::new(3, 1, 1, 20_000, t);
    let a = csv_bytes(&best_approx_scan(&cfg).unwrap());
    let b = csv_bytes(&best_approx_scan(&cfg).unwrap());
    cfg.workers = 3;
    let c = csv_bytes(&best_approx_scan(&cfg).unwrap());
    assert_eq!(a, b);
    assert_eq!(a, c);
    let head = String::from_utf8(a).unwrap();
    assert!(head.starts_with("N_or_rank,heightSq,log10_H,psi_lo,psi_hi,score_lo,score_hi,plucker"));
}

#[test]
fn output_order_and_frontier() {
    let (_, t) = line_target(3, &[3], 4);
    let res = best_approx_scan(&ScanConfig::new(3, 1, 1, 50_000, t)).unwrap();
    for w in res.records.windows(2) {
        assert_ne!(record_order(&w[0], &w[1]), std::cmp::Ordering::Greater);
    }
    let mut front: Vec<&ApproximationRecord> = res.records.iter().filter(|r| r.on_frontier).collect();
    front.sort_by(|a, b| a.height_sq.cmp(&b.height_sq));
    assert!(front.len() >= 2);
    for w in front.windows(2) {
        let (p, q) = (w[0].psi.as_ref().unwrap(), w[1].psi.as_ref().unwrap());
        // a later frontier point is never certainly worse
        assert!(q.lo() <= p.hi());
    }
}

/// Every line whose exact score is certainly above the floor survives the prefilter.
#[test]
fn prefilter_loses_nothing() {
    let (_, t) = line_target(3, &[3], 2);
    let bound = 600;
    let mut cfg = ScanConfig::new(3, 1, 1, bound, t.clone());
    cfg.score_floor = BigRational::new(3.into(), 4.into());
    cfg.precision = certified::PrecisionConfig::new(96, 2).unwrap();
    let res = best_approx_scan(&cfg).unwrap();
    let got = pluckers(&res.records.iter().map(|r| r.subspace.clone()).collect::<Vec<_>>());
    let prec = cfg.precision;
    let mut must = 0;
    for l in enumerate_lines(3, bound).unwrap() {
        let r = evaluate(&t, l.clone(), 1, &prec, 0).unwrap();
        if let Some(s) = &r.score {
            if s.compare_rational(&cfg.score_floor) == Some(std::cmp::Ordering::Greater) {
                must += 1;
                assert!(got.contains(l.plucker()), "missed {:?}", l.plucker());
            }
        }
    }
    assert!(must > 5);
}

#[test]
fn dual_scan_matches_unpruned_scan() {
    let (_, t) = line_target(3, &[3], 4);
    let mut fast = ScanConfig::new(3, 2, 1, 150, t.clone());
    fast.score_floor = BigRational::new(1.into(), 2.into());
    let mut slow = fast.clone();
    slow.strategy = Some(Strategy::BoundedEntries);
    let a = best_approx_scan(&fast).unwrap();
    let b = best_approx_scan(&slow).unwrap();
    assert_eq!(a.strategy, Strategy::Dual);
    assert_eq!(csv_bytes(&a), csv_bytes(&b));
}

fn rec(height_sq: u64, psi: BigRational) -> ApproximationRecord {
    let psi = Interval::from_rational(&psi, PREC);
    let h = BigInt::from(height_sq);
    ApproximationRecord {
        n_or_rank: 0,
        subspace: RationalSubspace::from_basis_claim(2, vec![ivec(&[1, 0])]).unwrap(),
        score: score_interval(&psi, &h, PREC),
        height_sq: h,
        psi: Some(psi),
        on_frontier: false,
        flag: None,
    }
}

#[test]
fn slope_of_two_records() {
    let r = vec![rec(100, BigRational::new(1.into(), 100.into())), rec(10_000, BigRational::new(1.into(), 10_000.into()))];
    let s = exponent_estimate(&r, EstimateMode::FamilySlope, PREC).unwrap();
    assert!(s.contains_rational(&BigRational::from_integer(2.into())));
    assert!(s.abs_width_within(200));
    let m = exponent_estimate(&r, EstimateMode::FrontierMax, PREC).unwrap();
    assert!(m.contains_rational(&BigRational::from_integer(2.into())));
}

#[test]
fn degenerate_estimates() {
    let one = vec![rec(100, BigRational::new(1.into(), 100.into()))];
    assert!(matches!(exponent_estimate(&one, EstimateMode::FamilySlope, PREC), Err(SearchError::TooFewRecords(1))));
    let same = vec![rec(100, BigRational::new(1.into(), 100.into())), rec(100, BigRational::new(1.into(), 1000.into()))];
    assert!(matches!(exponent_estimate(&same, EstimateMode::FamilySlope, PREC), Err(SearchError::Degenerate(_))));
}

fn family_scan(lc: &LineConstruction, e: usize, ns: &[usize]) -> Vec<ApproximationRecord> {
    let top = ns.iter().max().unwrap() + e + 2;
    let t = Target::Truncated(lc.truncated_target(top).unwrap());
    let mut cfg = ScanConfig::new(lc.n(), e, 1, 0, t);
    cfg.strategy = Some(Strategy::ConstructedFamily);
    cfg.family = ns.iter().map(|&n| (n, lc.b_approx(n, e).unwrap())).collect();
    best_approx_scan(&cfg).unwrap().records
}

#[test]
fn family_slope_recovers_three() {
    let (lc, _) = line_target(2, &[3], 1);
    let recs = family_scan(&lc, 1, &[2, 3, 4, 5, 6]);
    assert_eq!(recs.len(), 5);
    let s = exponent_estimate(&recs, EstimateMode::FamilySlope, PREC).unwrap();
    let mid = s.mid_f64_lossy();
    assert!((mid - 3.0).abs() <= 0.3, "slope {s}");
    let m = exponent_estimate(&recs, EstimateMode::FrontierMax, PREC).unwrap();
    // the scores approach the slope from below, since −ln ψ = 3 ln H − O(1) here
    assert!((m.mid_f64_lossy() - mid).abs() <= 0.01 * mid, "slope {s}, frontier max {m}");
}

/// A fit with a negative intercept has a slope above every ratio y/x, so the largest
/// score does not bound the family slope from above.
#[test]
fn frontier_max_can_sit_below_slope() {
    let pts = [(2u32, 5u32), (4, 11), (8, 23)];
    let q = |a: u32| Interval::from_i64(a as i64, PREC);
    let xs: Vec<Interval> = pts.iter().map(|p| q(p.0)).collect();
    let ys: Vec<Interval> = pts.iter().map(|p| q(p.1)).collect();
    let s = least_squares_slope(&xs, &ys, PREC).unwrap();
    assert!(s.contains_rational(&BigRational::from_integer(3.into())));
    assert!(pts.iter().all(|p| p.1 < 3 * p.0));
}

#[test]
fn threshold_lemma_desk_scale() {
    for (e, bound, floor) in [(1usize, 60_000u64, 1), (2, 60_000, 2)] {
        let (lc, t) = line_target(3, &[3], 4);
        let mut cfg = ScanConfig::new(3, e, 1, bound, t);
        cfg.workers = 2;
        cfg.score_floor = BigRational::from_integer(floor.into());
        let res = best_approx_scan(&cfg).unwrap();
        let family: Vec<RationalSubspace> = (0..=4).map(|n| lc.b_approx(n, e).unwrap()).collect();
        let k = lc.predicted_mu(e).unwrap();
        let mu = k.as_rational().unwrap() + BigRational::new(1.into(), 4.into());
        let calib: Vec<ApproximationRecord> =
            res.records.iter().filter(|r| r.height_sq <= BigInt::from(bound / 10)).cloned().collect();
        let h0 = threshold_report(&calib, &family, &mu, PREC).unwrap().h0_sq;
        let full = threshold_report(&res.records, &family, &mu, PREC).unwrap();
        let late: Vec<_> = full.offenders.iter().filter(|&&i| res.records[i].height_sq > h0).collect();
        eprintln!("e={e}: {} records, {} qualifying, H0² = {h0}", res.records.len(), full.qualifying.len());
        for r in res.records.iter().filter(|r| r.on_frontier) {
            eprintln!("  frontier h²={} score={:?} family={}", r.height_sq, r.score.as_ref().map(|s| s.mid_f64_lossy()), family.contains(&r.subspace));
        }
        assert!(late.is_empty(), "offenders above H0: {late:?}");
        // the family members in range are scanned and sit just under the exponent
        for b in family.iter().filter(|b| b.height_sq() <= &BigInt::from(bound) && b.height_sq() > &BigInt::from(1)) {
            let r = res.records.iter().find(|r| &r.subspace == b).expect("family member scanned");
            assert!(r.on_frontier);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn line_count_matches_cube_scan(n in 2usize..5, bound in 1u64..40) {
        let r = (bound as f64).sqrt() as i64;
        let mut count = 0;
        let mut v = vec![-r; n];
        loop {
            let nz = v.iter().find(|x| **x != 0);
            if nz.is_some_and(|x| *x > 0)
                && v.iter().map(|x| x * x).sum::<i64>() <= bound as i64
                && v.iter().fold(0i64, |g, x| g.gcd(x)) == 1
            {
                count += 1;
            }
            let mut i = 0;
            while i < n && v[i] == r { v[i] = -r; i += 1; }
            if i == n { break; }
            v[i] += 1;
        }
        prop_assert_eq!(enumerate_lines(n, bound).unwrap().len(), count);
    }

    #[test]
    fn float_sines_track_exact(a in prop::collection::vec(-6i64..7, 4), b in prop::collection::vec(-6i64..7, 8)) {
        let av = ivec(&a);
        let bs = vec![ivec(&b[..4]), ivec(&b[4..])];
        prop_assume!(av.iter().any(|x| x.to_i64() != Some(0)));
        let bsub = exactlin::saturate(&bs);
        prop_assume!(bsub.as_ref().is_ok_and(|s| s.dim() == 2));
        let bsub = bsub.unwrap();
        let t = Target::Rational(RationalSubspace::from_basis_claim(4, vec![av.clone()]).unwrap());
        let f = |v: &[BigInt]| v.iter().map(|x| x.to_f64().unwrap()).collect::<Vec<_>>();
        let s = float_sines_sq(&[f(&av)], &bsub.basis().iter().map(|v| f(v)).collect::<Vec<_>>());
        match evaluate(&t, bsub, 1, &Default::default(), 0) {
            None => prop_assert!(s[0] < 1e-12),
            Some(r) => {
                let p = r.psi.unwrap().mid_f64_lossy();
                prop_assert!((p * p - s[0]).abs() < 1e-9);
            }
        }
    }
}
