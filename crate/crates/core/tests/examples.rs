//! Worked examples checked against independent oracles: closed forms,
//! direct enumeration and finite differences.

use lattice_riesz::atoms::{atom_tail_lq_bound, centered_moment, dp_degree, moment, multi_indices};
use lattice_riesz::operators::{
    kernel_lp_bound, maximal_detail, poisson_constant, separable_majorant, EvaluationBox,
};
use lattice_riesz::*;

fn pt(c: &[i64]) -> LatticePoint {
    LatticePoint::new(c.to_vec())
}

fn signal(n: usize, entries: &[(&[i64], f64)]) -> LatticeSignal {
    LatticeSignal::from_values(n, entries.iter().map(|(c, v)| (pt(c), *v))).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1e-300)
}

#[test]
fn lp_norm_examples() {
    let delta = LatticeSignal::delta(pt(&[0])).unwrap();
    for p in [0.5, 1.0, 2.0] {
        assert_eq!(lp_norm(&delta, Exponent::Finite(p)), 1.0);
    }
    assert_eq!(lp_norm(&delta, Exponent::Infinity), 1.0);
    let two = signal(1, &[(&[0], 3.0), (&[1], 4.0)]);
    assert!(close(lp_norm(&two, Exponent::Finite(2.0)), 5.0, 1e-15));
    let three = signal(1, &[(&[0], 1.0), (&[1], 1.0), (&[2], 1.0)]);
    assert!(close(lp_norm(&three, Exponent::Finite(0.5)), 9.0, 1e-15));
}

#[test]
fn partial_sum_examples() {
    let one = |_: &[i64]| 1.0;
    assert_eq!(
        partial_sum(2, 1, PartialSumMode::Quadratic, one).unwrap(),
        9.0
    );
    assert_eq!(
        partial_sum(2, 1, PartialSumMode::Circular, one).unwrap(),
        5.0
    );

    let cube = |k: &[i64]| {
        let r2 = (k[0] * k[0] + k[1] * k[1]) as f64;
        if r2 == 0.0 {
            0.0
        } else {
            r2.powf(-1.5)
        }
    };
    let mut oracle = 0.0;
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            if (a, b) != (0, 0) {
                oracle += ((a * a + b * b) as f64).powf(-1.5);
            }
        }
    }
    let got = partial_sum(2, 2, PartialSumMode::Quadratic, cube).unwrap();
    assert!(close(got, oracle, 1e-14));
}

#[test]
fn series_bound_examples() {
    let b = series_tail_bound(1, 1.0).unwrap();
    let pi2 = std::f64::consts::PI.powi(2);
    assert!(b >= 2.0 * (1.0 + pi2 / 6.0) - 1e-12);
    assert!(b <= 2.0 * (1.0 + pi2 / 6.0) + 1e-6);
    assert!(pi2 / 3.0 <= b);

    let b = series_tail_bound(2, 2.0).unwrap();
    assert!(close(b, 64.0 * (1.0 + pi2 / 6.0).powi(2), 1e-6));
    let s64 = partial_sum(
        2,
        64,
        PartialSumMode::Quadratic,
        series::inverse_power_term(2, 2.0),
    )
    .unwrap();
    assert!(s64 <= b);

    for n in 1..=3 {
        for eps in [0.5, 1.0, 2.0] {
            let s1 = partial_sum(
                n,
                1,
                PartialSumMode::Quadratic,
                series::inverse_power_term(n, eps),
            )
            .unwrap();
            assert!(s1 <= 3f64.powi(n as i32));
            assert!(3f64.powi(n as i32) <= series_tail_bound(n, eps).unwrap());
        }
    }
}

#[test]
fn elementary_inequality_examples() {
    let c = elementary_inequalities(&pt(&[1, 0, 0]), 1.0).unwrap();
    assert!(c.norm_comparison && c.multinomial);
    let c = elementary_inequalities(&pt(&[1, 1]), 0.0).unwrap();
    assert!(c.norm_comparison && c.multinomial);
}

#[test]
fn cube_examples() {
    assert_eq!(
        DiscreteCube::centered(2, 1).unwrap().cardinality().unwrap(),
        9
    );
    let q = DiscreteCube::centered(1, 3).unwrap();
    let d = q.dilate(DiscreteCube::far_field_factor(1) as i64).unwrap();
    assert_eq!(d.radius(), 12);
    assert_eq!(d.cardinality().unwrap(), 25);
    let point = DiscreteCube::centered(2, 0).unwrap();
    assert_eq!(point.cardinality().unwrap(), 1);
    assert_eq!(point.dilate(4).unwrap(), point);
}

#[test]
fn riesz_examples() {
    let delta = LatticeSignal::delta(pt(&[0])).unwrap();
    let out = EvaluationBox::centered(1, 3).unwrap();
    let g = riesz_direct(&delta, 0.5, &out).unwrap();
    assert!(close(g.get(&pt(&[2])).unwrap(), 2f64.powf(-0.5), 1e-15));
    assert_eq!(g.get(&pt(&[0])).unwrap(), 0.0);

    let pair = signal(1, &[(&[0], 1.0), (&[1], 1.0)]);
    for alpha in [0.2, 0.5, 0.9] {
        assert_eq!(
            riesz_direct(&pair, alpha, &out)
                .unwrap()
                .get(&pt(&[0]))
                .unwrap(),
            1.0
        );
    }

    let chi = LatticeSignal::indicator(&DiscreteCube::centered(2, 1).unwrap());
    let out = EvaluationBox::centered(2, 6).unwrap();
    let got = riesz_direct(&chi, 1.0, &out)
        .unwrap()
        .get(&pt(&[5, 0]))
        .unwrap();
    let mut oracle = 0.0;
    for a in -1i64..=1 {
        for b in -1i64..=1 {
            oracle += 1.0 / (((5 - a) * (5 - a) + b * b) as f64).sqrt();
        }
    }
    assert!(close(got, oracle, 1e-14));
}

#[test]
fn riesz_fft_examples() {
    let out = EvaluationBox::centered(2, 10).unwrap();
    let single = signal(2, &[(&[3, -2], 1.7)]);
    let (a, b) = (
        riesz_fft(&single, 0.7, &out).unwrap(),
        riesz_direct(&single, 0.7, &out).unwrap(),
    );
    for (x, y) in a.values().iter().zip(b.values()) {
        assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
    }
    let zero = LatticeSignal::zero(2).unwrap();
    assert!(riesz_fft(&zero, 0.7, &out)
        .unwrap()
        .values()
        .iter()
        .all(|&v| v == 0.0));
}

#[test]
fn kernel_bound_examples() {
    // p' = 3, eps = 1/2: bound = B(1, 1/2)^{1/3}
    let got = kernel_lp_bound(1, 0.5, 1.5).unwrap();
    assert!(close(
        got,
        series_tail_bound(1, 0.5).unwrap().powf(1.0 / 3.0),
        1e-14
    ));
    assert!(kernel_lp_bound(1, 0.5, 2.0).is_err());
}

#[test]
fn separable_majorant_examples() {
    let delta = LatticeSignal::delta(pt(&[0, 0])).unwrap();
    assert!(close(
        separable_majorant(&delta, 1.0, &pt(&[1, 1])).unwrap(),
        1.0,
        1e-15
    ));
    let v = separable_majorant(&delta, 1.0, &pt(&[3, 4])).unwrap();
    assert!(close(v, (3f64 * 4.0).powf(-0.5), 1e-14));
    assert!(v >= 0.2);
}

#[test]
fn j_gamma_examples() {
    let delta = LatticeSignal::delta(pt(&[0])).unwrap();
    let g = j_gamma(&delta, 0.5, &EvaluationBox::centered(1, 5).unwrap()).unwrap();
    assert_eq!(g.get(&pt(&[0])).unwrap(), 1.0);
    assert!(close(g.get(&pt(&[4])).unwrap(), 0.5, 1e-15));
}

#[test]
fn poisson_examples() {
    let grid = TGrid::covering(8, 8).unwrap();
    let out = EvaluationBox::centered(1, 8).unwrap();
    let zero = LatticeSignal::zero(1).unwrap();
    assert!(poisson_maximal(&zero, &grid, &out)
        .unwrap()
        .values()
        .iter()
        .all(|&v| v == 0.0));
    assert_eq!(hp_norm_estimate(&zero, 1.0, &grid, &out).unwrap(), 0.0);

    // sup_t C t / (t^2 + 1) = C / 2 at t = 1, which lies on the grid
    let delta = LatticeSignal::delta(pt(&[0])).unwrap();
    let g = poisson_maximal(&delta, &grid, &out).unwrap();
    assert!(close(
        g.get(&pt(&[1])).unwrap(),
        poisson_constant(1) / 2.0,
        1e-15
    ));

    let fine = poisson_maximal(&delta, &grid.refined(), &out).unwrap();
    assert!(fine.values().iter().zip(g.values()).all(|(f, c)| f >= c));

    // the dipole estimate settles as the box grows
    let dipole = signal(1, &[(&[0], 1.0), (&[1], -1.0)]);
    let estimates: Vec<f64> = [64u64, 256, 1024]
        .iter()
        .map(|&r| {
            let grid = TGrid::covering(r, 8).unwrap();
            hp_norm_estimate(&dipole, 1.0, &grid, &EvaluationBox::centered(1, r).unwrap()).unwrap()
        })
        .collect();
    assert!(estimates.iter().all(|e| e.is_finite() && *e > 2.0));
    assert!((estimates[2] - estimates[1]).abs() < (estimates[1] - estimates[0]).abs());
}

#[test]
fn maximal_examples() {
    let delta = LatticeSignal::delta(pt(&[0])).unwrap();
    for j in -30i64..=30 {
        let d = j.unsigned_abs();
        assert_eq!(
            maximal(&delta, 0.0, &pt(&[j])).unwrap(),
            1.0 / (2 * d + 1) as f64
        );
        let half = maximal_detail(&delta, 0.5, &pt(&[j])).unwrap();
        assert_eq!(half.value, 1.0 / ((2 * d + 1) as f64).powf(0.5));
        assert_eq!(half.radius, d);
    }
    let chi = LatticeSignal::indicator(&DiscreteCube::centered(2, 2).unwrap());
    let got = maximal_detail(&chi, 0.0, &pt(&[0, 0])).unwrap();
    assert_eq!(got.value, 1.0);
    assert!(got.radius <= 2);
}

#[test]
fn holder_pair_examples() {
    let exps = Exponents::sobolev(2, 1.5, 1.0).unwrap();
    let zero = LatticeSignal::zero(2).unwrap();
    assert_eq!(
        operators::holder_pointwise_pair(&zero, &exps, &pt(&[1, 2])).unwrap(),
        (0.0, 0.0)
    );
    // for a delta both sides equal (2|j|+1)^{-(n - alpha)}
    let delta = LatticeSignal::delta(pt(&[0, 0])).unwrap();
    for j in [[0, 0], [1, 0], [3, -2]] {
        let (lhs, rhs) = operators::holder_pointwise_pair(&delta, &exps, &pt(&j)).unwrap();
        let d = pt(&j).norm_inf();
        let exact = 1.0 / ((2 * d + 1) as f64);
        assert!(close(lhs, exact, 1e-14));
        assert!(close(rhs, exact, 1e-12));
    }
}

#[test]
fn degree_and_moment_examples() {
    assert_eq!(dp_degree(1.0, 5).unwrap(), 0);
    assert_eq!(dp_degree(0.5, 2).unwrap(), 2);
    assert_eq!(dp_degree(0.6, 3).unwrap(), 2);

    let delta = LatticeSignal::delta(pt(&[0, 0])).unwrap();
    for beta in multi_indices(2, 3) {
        let expected = if beta.iter().all(|&b| b == 0) {
            1.0
        } else {
            0.0
        };
        assert_eq!(moment(&delta, &beta).unwrap(), expected);
    }
    let b = signal(1, &[(&[-1], 1.0 / 3.0), (&[1], -1.0 / 3.0)]);
    assert_eq!(moment(&b, &[0]).unwrap(), 0.0);
    assert!(close(moment(&b, &[1]).unwrap(), -2.0 / 3.0, 1e-15));
}

#[test]
fn validation_examples() {
    let q = DiscreteCube::centered(1, 1).unwrap();
    let good = signal(1, &[(&[-1], 1.0 / 3.0), (&[1], -1.0 / 3.0)]);
    assert!(validate_atom(&good, &q, 1.0).unwrap().is_valid());
    let big = signal(1, &[(&[-1], 1.0), (&[1], -1.0)]);
    assert!(!validate_atom(&big, &q, 1.0).unwrap().is_valid());
    let point = DiscreteCube::centered(1, 0).unwrap();
    let lone = signal(1, &[(&[0], 0.5)]);
    for p in [1.0, 0.8, 0.5] {
        assert!(!validate_atom(&lone, &point, p).unwrap().is_valid());
    }
}

#[test]
fn generation_examples() {
    let q = DiscreteCube::centered(1, 1).unwrap();
    for seed in 0..20 {
        let a = generate_atom(&q, 1.0, seed).unwrap();
        let max = a.signal().iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
        assert_eq!(max, 1.0 / 3.0);
        assert!(moment(a.signal(), &[0]).unwrap().abs() < 1e-15);
    }
    let q = DiscreteCube::centered(2, 2).unwrap();
    let a = generate_atom(&q, 0.5, 5).unwrap();
    assert_eq!(a.d_p(), 2);
    for beta in multi_indices(2, 2) {
        assert!(
            centered_moment(a.signal(), &beta, q.center())
                .unwrap()
                .abs()
                < 1e-12
        );
    }
    assert_eq!(a.signal(), generate_atom(&q, 0.5, 5).unwrap().signal());
    assert!(generate_atom(&DiscreteCube::centered(1, 0).unwrap(), 1.0, 1).is_err());
}

#[test]
fn synthesis_examples() {
    let q = DiscreteCube::centered(1, 2).unwrap();
    let a = generate_atom(&q, 1.0, 3).unwrap();
    assert_eq!(
        &synthesize(std::slice::from_ref(&a), &[1.0]).unwrap().signal,
        a.signal()
    );
    assert!(synthesize(&[a.clone(), a.clone()], &[1.0, -1.0])
        .unwrap()
        .signal
        .is_zero());
    assert!(synthesize(std::slice::from_ref(&a), &[1.0, 2.0]).is_err());

    let mut atoms = Vec::new();
    let mut lambdas = Vec::new();
    for k in 0..10i64 {
        let cube = DiscreteCube::new(pt(&[10 * k]), 2).unwrap();
        atoms.push(generate_atom(&cube, 1.0, k as u64).unwrap());
        lambdas.push(if k % 2 == 0 { 0.5 + k as f64 } else { -1.0 });
    }
    let s = synthesize(&atoms, &lambdas).unwrap();
    let l1 = lp_norm(&s.signal, Exponent::Finite(1.0));
    let bound: f64 = atoms
        .iter()
        .zip(&lambdas)
        .map(|(a, l)| l.abs() * lp_norm(a.signal(), Exponent::Finite(1.0)))
        .sum();
    assert!(l1 <= bound * (1.0 + 1e-12));
    assert!(bound <= lambdas.iter().map(|l| l.abs()).sum::<f64>() * (1.0 + 1e-12));
}

#[test]
fn taylor_examples() {
    let q = DiscreteCube::centered(1, 2).unwrap();
    let j = pt(&[10]);
    let e1 = TaylorExpansion::new(&q, &j, 0.5, 1).unwrap();
    for i in -2..=2 {
        assert!(close(e1.polynomial(&pt(&[i])), 10f64.powf(-0.5), 1e-14));
    }
    let e2 = TaylorExpansion::new(&q, &j, 0.5, 2).unwrap();
    for i in -2i64..=2 {
        let expected = 10f64.powf(-0.5) + 0.5 * 10f64.powf(-1.5) * i as f64;
        assert!(close(e2.polynomial(&pt(&[i])), expected, 1e-14));
    }
    // forward differences converge to the first-order coefficient
    let f = |x: f64| (10.0 - x).abs().powf(-0.5);
    let c = e2.first_order_coefficient(0);
    let errs: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|h| (((f(*h) - f(0.0)) / h) - c).abs() / c)
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2]);

    // remainder at N = 1 over Q(0,2) with j = 20
    let j = pt(&[20]);
    let e = TaylorExpansion::new(&q, &j, 0.5, 1).unwrap();
    let worst = (-2..=2)
        .map(|i| (e.kernel(&pt(&[i])) - e.polynomial(&pt(&[i]))).abs())
        .fold(0.0, f64::max);
    assert!(worst <= e.remainder_constant() * 2.0 * 20f64.powf(-1.5));
    assert_eq!(e.kernel(&pt(&[0])) - e.polynomial(&pt(&[0])), 0.0);

    let envelopes: Vec<f64> = (20..60)
        .map(|d| {
            TaylorExpansion::new(&q, &pt(&[d]), 0.5, 2)
                .unwrap()
                .remainder_envelope()
        })
        .collect();
    assert!(envelopes.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn tail_bound_examples() {
    let q = DiscreteCube::centered(1, 2).unwrap();
    let a = generate_atom(&q, 1.0, 9).unwrap();
    let r = atoms::tail_threshold(&q);
    let b1 = atom_tail_lq_bound(&a, 0.5, 2.0, r).unwrap();
    let b2 = atom_tail_lq_bound(&a, 0.5, 2.0, 2 * r).unwrap();
    // n/q - (n + N - alpha) = 1/2 - 3/2
    assert!(b2 <= b1 * 2f64.powf(0.5 - 1.5) * (1.0 + 1e-9));

    let out = EvaluationBox::centered(1, 8 * r).unwrap();
    let g = riesz_direct(a.signal(), 0.5, &out).unwrap();
    let mut mass = 0.0;
    g.for_each(|j, v| {
        if j[0].unsigned_abs() > r {
            mass += v * v;
        }
    });
    assert!(mass.sqrt() <= b1);

    let zero = LatticeSignal::zero(1).unwrap();
    assert_eq!(
        atoms::remainder_tail_lq_bound(&zero, &q, 0.5, 2.0, r, 1).unwrap(),
        0.0
    );
}
