use angles::*;
use exactlin::{ivec, RationalSubspace};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rv(xs: &[i64]) -> Vec<BigRational> {
    xs.iter().map(|&x| r(x, 1)).collect()
}

fn span(rows: &[&[i64]]) -> RationalSubspace {
    exactlin::saturate(&rows.iter().map(|r| ivec(r)).collect::<Vec<_>>()).unwrap()
}

fn cfg() -> PrecisionConfig {
    PrecisionConfig::default()
}

// f64 oracle: orthonormalize both sets, take the singular values of Q_Aᵀ Q_B through a
// Jacobi eigen-solve of the small symmetric matrix, and return ascending sin².
fn orthonormal(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for u in &q {
                let c: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
                w.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
            }
        }
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        q.push(w.into_iter().map(|x| x / n).collect());
    }
    q
}

fn jacobi_eigen(mut m: Vec<Vec<f64>>) -> Vec<f64> {
    let n = m.len();
    for _ in 0..100 {
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (a, b) = (m[k][p], m[k][q]);
                    m[k][p] = c * a - s * b;
                    m[k][q] = s * a + c * b;
                }
                for k in 0..n {
                    let (a, b) = (m[p][k], m[q][k]);
                    m[p][k] = c * a - s * b;
                    m[q][k] = s * a + c * b;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}

fn oracle_sines_sq(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<f64> {
    let to_f = |s: &[Vec<i64>]| s.iter().map(|v| v.iter().map(|&x| x as f64).collect()).collect::<Vec<Vec<f64>>>();
    let (mut qa, mut qb) = (orthonormal(&to_f(a)), orthonormal(&to_f(b)));
    if qa.len() > qb.len() {
        std::mem::swap(&mut qa, &mut qb);
    }
    let c: Vec<Vec<f64>> = qa.iter().map(|x| qb.iter().map(|y| x.iter().zip(y).map(|(p, q)| p * q).sum()).collect()).collect();
    let cct: Vec<Vec<f64>> =
        c.iter().map(|x| c.iter().map(|y| x.iter().zip(y).map(|(p, q)| p * q).sum()).collect()).collect();
    let mut s: Vec<f64> = jacobi_eigen(cct).into_iter().map(|c2| (1.0 - c2).clamp(0.0, 1.0)).collect();
    s.sort_by(|x, y| x.partial_cmp(y).unwrap());
    s
}

fn rats(s: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    s.iter().map(|v| rv(v)).collect()
}

fn exact_sq(e: &AngleEntry) -> BigRational {
    e.exact_sq.clone().expect("exact entry")
}

#[test]
fn vector_angle_examples() {
    assert_eq!(angle_of_vectors(&rv(&[1, 1]), &rv(&[1, 0])).unwrap(), r(1, 2));
    assert_eq!(angle_of_vectors(&rv(&[2, 4, 6]), &rv(&[1, 2, 3])).unwrap(), r(0, 1));
    assert_eq!(angle_of_vectors(&rv(&[1, 0, 0]), &rv(&[0, 1, 0])).unwrap(), r(1, 1));
    assert_eq!(angle_of_vectors(&rv(&[0, 0]), &rv(&[1, 0])), Err(AngleError::ZeroVector));
    // rational entries are scaled, not truncated
    assert_eq!(angle_of_vectors(&[r(1, 3), r(1, 3)], &[r(1, 7), r(0, 1)]).unwrap(), r(1, 2));
}

#[test]
fn line_to_subspace_examples() {
    let e1 = span(&[&[1, 0, 0]]);
    assert_eq!(first_angle_line_to_subspace(&rv(&[1, 1, 0]), &e1).unwrap(), r(1, 2));
    let b = span(&[&[1, 2, 0], &[0, 1, 1]]);
    assert_eq!(first_angle_line_to_subspace(&rv(&[2, 5, 1]), &b).unwrap(), r(0, 1));
    let plane = span(&[&[1, 0, 0], &[0, 1, 0]]);
    assert_eq!(first_angle_line_to_subspace(&rv(&[0, 0, 1]), &plane).unwrap(), r(1, 1));
    assert_eq!(first_angle_line_to_subspace(&rv(&[0, 0, 0]), &plane), Err(AngleError::ZeroVector));
}

#[test]
fn principal_sine_examples() {
    let rep = principal_sines(&rats(&[vec![1, 0, 0], vec![0, 1, 0]]), &rats(&[vec![1, 0, 0], vec![0, 1, 1]]), &cfg()).unwrap();
    assert_eq!(rep.omegas.len(), 2);
    assert_eq!(exact_sq(&rep.omegas[0]), r(0, 1));
    assert_eq!(exact_sq(&rep.omegas[1]), r(1, 2));

    let a = rats(&[vec![1, 2, 3], vec![0, 1, 4]]);
    let same = principal_sines(&a, &a, &cfg()).unwrap();
    assert!(same.omegas.iter().all(|w| exact_sq(w).is_zero()));

    let rep = principal_sines(&rats(&[vec![1, 0, 0]]), &rats(&[vec![0, 1, 0], vec![0, 0, 1]]), &cfg()).unwrap();
    assert_eq!(exact_sq(&rep.omegas[0]), r(1, 1));

    let dep = rats(&[vec![1, 2, 3], vec![2, 4, 6]]);
    assert_eq!(principal_sines(&dep, &a, &cfg()).unwrap_err(), AngleError::RankDeficient);
}

#[test]
fn irrational_sines_are_tight_brackets() {
    // sin² = (5 ± √5)/10 style values: not rational, so brackets
    let a = rats(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
    let b = rats(&[vec![1, 1, 1, 0], vec![0, 1, 2, 1]]);
    let rep = principal_sines(&a, &b, &cfg()).unwrap();
    let oracle = oracle_sines_sq(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]], &[vec![1, 1, 1, 0], vec![0, 1, 2, 1]]);
    for (w, o) in rep.omegas.iter().zip(&oracle) {
        assert!(w.omega_sq.rel_width_within(120), "{}", w.omega_sq);
        assert!((w.omega_sq.mid_f64_lossy() - o).abs() < 1e-12, "{} vs {o}", w.omega_sq);
    }
}

#[test]
fn tiny_sines_keep_relative_precision() {
    let big = BigInt::from(5).pow(400);
    let a = vec![vec![BigRational::one(), BigRational::new(BigInt::one(), big.clone())]];
    let b = vec![rv(&[1, 0])];
    let rep = principal_sines(&a, &b, &cfg()).unwrap();
    let expect = BigRational::new(BigInt::one(), &big * &big + BigInt::one());
    let w = &rep.omegas[0];
    match &w.exact_sq {
        Some(x) => assert_eq!(x, &expect),
        None => {
            assert!(w.omega_sq.contains_rational(&expect));
            assert!(w.omega_sq.rel_width_within(100));
        }
    }
}

#[test]
fn psi_examples() {
    let rep = principal_sines(&rats(&[vec![1, 0, 0], vec![0, 1, 0]]), &rats(&[vec![1, 0, 0], vec![0, 1, 1]]), &cfg()).unwrap();
    let psi = psi_from_omegas(&rep, 2, 2, 3).unwrap();
    assert_eq!(psi.len(), 1);
    assert_eq!(exact_sq(&psi[0]), r(1, 2));
    let psi4 = psi_from_omegas(&rep, 2, 2, 4).unwrap();
    assert_eq!(psi4.len(), 2);
    let line = principal_sines(&rats(&[vec![1, 1, 0]]), &rats(&[vec![1, 0, 0]]), &cfg()).unwrap();
    assert_eq!(exact_sq(&psi_from_omegas(&line, 1, 1, 3).unwrap()[0]), r(1, 2));
    // g = 1 but ω₁ = 1/√2 ≠ 0
    assert!(psi_from_omegas(&line, 1, 1, 1).is_err());
    assert_eq!(psi_from_omegas(&line, 2, 2, 1).unwrap_err(), AngleError::IndexOutOfRange);
}

#[test]
fn report_serializes_decimal_strings() {
    let rep = principal_sines(&rats(&[vec![1, 1]]), &rats(&[vec![1, 0]]), &cfg()).unwrap();
    let v = serde_json::to_value(&rep).unwrap();
    let w = &v["omegas"][0];
    assert!(w["lo"].as_str().unwrap().starts_with("7.071067811"));
    assert_eq!(w["exact"], true);
    assert_eq!(w["exactSq"], "1/2");
}

fn target(gens: Vec<Vec<i64>>, scale: i64, tail: BigRational, coords: usize) -> TruncatedTarget {
    let k = gens.len();
    TruncatedTarget::new(
        gens[0].len(),
        3,
        gens.iter().map(|g| ivec(g)).collect(),
        vec![BigInt::from(scale); k],
        tail,
        vec![coords; k],
    )
    .unwrap()
}

#[test]
fn truncated_target_contained_in_b() {
    let t = target(vec![vec![125, 31, 6]], 125, r(1, 1 << 40), 2);
    let b = span(&[&[125, 31, 6], &[0, 0, 1]]);
    let out = angle_interval_to_truncated_target(&t, &b, 1, &cfg()).unwrap();
    assert!(out.rigorous);
    assert_eq!(out.center.exact_sq, Some(BigRational::zero()));
    assert!(out.psi.lo().is_zero());
    // Δ = 2^{-40}·√2
    let d = out.psi.hi().to_f64_lossy();
    assert!((d - 2f64.sqrt() / (1u64 << 40) as f64).abs() < 1e-25);
}

#[test]
fn truncated_target_brackets_true_angle() {
    // Y = (1, 1/3): truncation in base 2 at 20 bits, B = Span{e₁}; the true ψ² is 1/10
    let num = (1i64 << 20) / 3;
    let t = target(vec![vec![1 << 20, num]], 1 << 20, r(1, 1 << 20), 1);
    let b = span(&[&[1, 0]]);
    let out = angle_interval_to_truncated_target(&t, &b, 1, &cfg()).unwrap();
    assert!(out.psi.contains(&sqrt_interval(r(1, 10))));
}

fn sqrt_interval(x: BigRational) -> certified::Interval {
    certified::Interval::from_rational(&x, 256).sqrt().unwrap()
}

#[test]
fn truncated_target_errors() {
    let t = target(vec![vec![4, 1]], 4, r(1, 8), 1);
    let b = span(&[&[1, 0]]);
    assert!(matches!(
        angle_interval_to_truncated_target(&t, &b, 1, &cfg()),
        Err(AngleError::InsufficientTruncation { .. })
    ));
    assert_eq!(angle_interval_to_truncated_target(&t, &b, 2, &cfg()).unwrap_err(), AngleError::IndexOutOfRange);
    assert!(TruncatedTarget::new(2, 1, vec![ivec(&[1, 1])], vec![BigInt::from(4)], r(1, 8), vec![1]).is_err());
}

#[test]
fn multi_generator_intervals_are_flagged() {
    let t = target(vec![vec![1 << 30, 5, 0, 0], vec![0, 0, 1 << 30, 7]], 1 << 30, r(1, 1 << 30), 1);
    let b = span(&[&[0, 1, 0, 0], &[0, 0, 0, 1]]);
    let out = angle_interval_to_truncated_target(&t, &b, 1, &cfg()).unwrap();
    assert!(!out.rigorous);
}

#[test]
fn projection_witness_examples() {
    let w = projection_lower_bound_witness(&[rv(&[1, 0, 0, 0])], &[1, 2], &[2, 2]).unwrap();
    assert_eq!(w.j, 2);
    assert!(w.exact);
    assert_eq!(w.ratio_sq_lo, r(1, 1));

    let w = projection_lower_bound_witness(&[rv(&[1, 1])], &[1, 2], &[1, 1]).unwrap();
    assert!(w.exact);
    assert_eq!(w.ratio_sq_lo, r(1, 2));
    assert!(w.ratio_sq_lo >= r(1, 5));

    assert!(matches!(
        projection_lower_bound_witness(&[rv(&[1, 0]), rv(&[0, 1])], &[1, 2], &[1, 1]),
        Err(AngleError::TooManyDimensions { dim: 2, blocks: 2 })
    ));
}

fn full_rank(vs: &[Vec<i64>]) -> bool {
    exactlin::matrix::rank_rational(&rats(vs)) == vs.len()
}

fn gens(n: usize, k: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, n), k).prop_filter("full rank", |v| full_rank(v))
}

fn pair() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    (2usize..=5).prop_flat_map(|n| (1..n, 1..n).prop_flat_map(move |(d, e)| (gens(n, d), gens(n, e))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_line_angle_sits_in_first_interval((a, b) in pair()) {
        let line = vec![a[0].clone()];
        let rep = principal_sines(&rats(&line), &rats(&b), &cfg()).unwrap();
        let sub = exactlin::saturate(&b.iter().map(|v| ivec(v)).collect::<Vec<_>>()).unwrap();
        let exact = first_angle_line_to_subspace(&rv(&a[0]), &sub).unwrap();
        prop_assert!(rep.omegas[0].omega_sq.contains_rational(&exact));
    }

    #[test]
    fn product_of_sines_is_wedge_ratio((a, b) in pair()) {
        let rep = principal_sines(&rats(&a), &rats(&b), &cfg()).unwrap();
        let prod = rep.omegas.iter().skip(1).fold(rep.omegas[0].omega_sq.clone(), |p, w| p.mul(&w.omega_sq));
        let exact = wedge_ratio_sq(&rats(&a), &rats(&b)).unwrap();
        prop_assert!(prod.contains_rational(&exact), "{} vs {}", prod, exact);
    }

    #[test]
    fn sines_match_float_oracle((a, b) in pair()) {
        let rep = principal_sines(&rats(&a), &rats(&b), &cfg()).unwrap();
        let oracle = oracle_sines_sq(&a, &b);
        prop_assert_eq!(rep.omegas.len(), oracle.len());
        for (w, o) in rep.omegas.iter().zip(&oracle) {
            prop_assert!((w.omega_sq.mid_f64_lossy() - o).abs() < 1e-9);
        }
    }

    #[test]
    fn sines_sorted_in_unit_interval((a, b) in pair()) {
        let rep = principal_sines(&rats(&a), &rats(&b), &cfg()).unwrap();
        let zero = BigRational::zero();
        let one = BigRational::one();
        for w in &rep.omegas {
            prop_assert!(w.omega.lo().cmp_rational(&zero).is_ge() && w.omega.hi().cmp_rational(&one).is_le());
        }
        for p in rep.omegas.windows(2) {
            prop_assert!(p[0].omega.lo() <= p[1].omega.lo());
        }
        let psi = psi_from_omegas(&rep, a.len(), b.len(), a[0].len()).unwrap();
        for p in psi.windows(2) {
            prop_assert!(p[0].omega.lo() <= p[1].omega.lo());
        }
    }

    #[test]
    fn shrinking_a_never_lowers_angles((a, b) in pair()) {
        prop_assume!(a.len() >= 2);
        let sub = &a[..a.len() - 1];
        let big = principal_sines(&rats(&a), &rats(&b), &cfg()).unwrap();
        let small = principal_sines(&rats(sub), &rats(&b), &cfg()).unwrap();
        for (k, w) in small.omegas.iter().enumerate() {
            prop_assert!(big.omegas[k].omega.lo() <= w.omega.hi());
        }
    }

    #[test]
    fn projection_ratio_at_least_lemma_constant(
        blocks in prop::collection::vec(1usize..=3, 2..=4),
        seed in prop::collection::vec(-5i64..=5, 40),
        dim_pick in 0usize..8,
    ) {
        let n: usize = blocks.iter().sum();
        let js: Vec<usize> = (1..=blocks.len()).collect();
        let dim = 1 + dim_pick % (js.len() - 1);
        let f: Vec<Vec<i64>> = (0..dim).map(|i| (0..n).map(|c| seed[(i * n + c) % seed.len()] + (i == c) as i64 * 7).collect()).collect();
        prop_assume!(full_rank(&f));
        let w = projection_lower_bound_witness(&rats(&f), &js, &blocks).unwrap();
        let c = BigRational::new(BigInt::one(), BigInt::from(n * n + 1));
        prop_assert!(w.ratio_sq_hi >= c, "ratio {} below {}", w.ratio_sq_hi, c);
    }
}
