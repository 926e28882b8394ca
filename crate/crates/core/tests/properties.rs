use lattice_riesz::operators::{maximal_on_box, EvaluationBox};
use lattice_riesz::*;
use proptest::prelude::*;

fn signal_strategy(n: usize, radius: i64) -> impl Strategy<Value = LatticeSignal> {
    let side = (2 * radius + 1) as usize;
    prop::collection::vec(-4.0..4.0f64, side.pow(n as u32)).prop_map(move |vals| {
        let cube = DiscreteCube::centered(n, radius as u64).unwrap();
        LatticeSignal::from_values(n, cube.points().into_iter().zip(vals)).unwrap()
    })
}

fn max_rel_gap(a: &DenseGrid, b: &DenseGrid) -> f64 {
    let scale = b.max_abs().max(a.max_abs()).max(1e-300);
    a.values()
        .iter()
        .zip(b.values())
        .fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()))
        / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lp_norm_is_homogeneous(b in signal_strategy(2, 2), c in -5.0..5.0f64, p in 0.3..4.0f64) {
        let lhs = lp_norm(&b.scale(c), Exponent::Finite(p));
        let rhs = c.abs() * lp_norm(&b, Exponent::Finite(p));
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn lp_triangle_inequalities(a in signal_strategy(1, 4), b in signal_strategy(1, 4), p in 0.3..4.0f64) {
        let sum = a.add(&b).unwrap();
        if p >= 1.0 {
            let e = Exponent::Finite(p);
            prop_assert!(lp_norm(&sum, e) <= (lp_norm(&a, e) + lp_norm(&b, e)) * (1.0 + 1e-12));
        } else {
            let pow = |s: &LatticeSignal| {
                let v: Vec<f64> = s.iter().map(|(_, x)| x).collect();
                norms::lp_power_sum(&v, p)
            };
            prop_assert!(pow(&sum) <= (pow(&a) + pow(&b)) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn riesz_is_linear(a in signal_strategy(2, 2), b in signal_strategy(2, 2), c in -3.0..3.0f64, ratio in 0.1..0.9f64) {
        let alpha = 2.0 * ratio;
        let out = EvaluationBox::centered(2, 6).unwrap();
        let combined = riesz_direct(&a.add(&b.scale(c)).unwrap(), alpha, &out).unwrap();
        let ia = riesz_direct(&a, alpha, &out).unwrap();
        let ib = riesz_direct(&b, alpha, &out).unwrap();
        let sum: Vec<f64> = ia.values().iter().zip(ib.values()).map(|(x, y)| x + c * y).collect();
        let sum = DenseGrid::from_data(out.bounds().clone(), sum).unwrap();
        prop_assert!(max_rel_gap(&combined, &sum) <= 1e-12);
    }

    #[test]
    fn riesz_commutes_with_translation(b in signal_strategy(2, 1), h in prop::array::uniform2(-5i64..5), ratio in 0.1..0.9f64) {
        let alpha = 2.0 * ratio;
        let shift = LatticePoint::new(h.to_vec());
        let moved = b.translate(&shift).unwrap();
        for j in LatticeBox::new(vec![-4, -4], vec![4, 4]).unwrap().points() {
            let out = EvaluationBox::cube(&DiscreteCube::new(j.clone(), 0).unwrap());
            let out_moved = EvaluationBox::cube(&DiscreteCube::new(&j + &shift, 0).unwrap());
            let x = riesz_direct(&b, alpha, &out).unwrap().values()[0];
            let y = riesz_direct(&moved, alpha, &out_moved).unwrap().values()[0];
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn riesz_fft_matches_direct(b in signal_strategy(1, 6), ratio in 0.05..0.95f64) {
        let out = EvaluationBox::centered(1, 20).unwrap();
        let d = riesz_direct(&b, ratio, &out).unwrap();
        let f = riesz_fft(&b, ratio, &out).unwrap();
        prop_assert!(max_rel_gap(&f, &d) <= 1e-9);
    }

    #[test]
    fn maximal_is_sublinear_and_homogeneous(a in signal_strategy(2, 1), b in signal_strategy(2, 1), c in -3.0..3.0f64, ratio in 0.0..0.9f64) {
        let alpha = 2.0 * ratio;
        let out = EvaluationBox::centered(2, 5).unwrap();
        let ma = maximal_on_box(&a, alpha, &out).unwrap();
        let mb = maximal_on_box(&b, alpha, &out).unwrap();
        let mab = maximal_on_box(&a.add(&b).unwrap(), alpha, &out).unwrap();
        let mca = maximal_on_box(&a.scale(c), alpha, &out).unwrap();
        for k in 0..ma.values().len() {
            let (x, y, s) = (ma.values()[k], mb.values()[k], mab.values()[k]);
            prop_assert!(s <= (x + y) * (1.0 + 1e-12) + 1e-300);
            prop_assert!((mca.values()[k] - c.abs() * x).abs() <= 1e-12 * x.max(1e-300));
        }
    }

    #[test]
    fn maximal_commutes_with_translation(b in signal_strategy(1, 3), h in -20i64..20, alpha in 0.0..0.9f64) {
        let shift = LatticePoint::new(vec![h]);
        let moved = b.translate(&shift).unwrap();
        for j in -12i64..=12 {
            let x = maximal(&b, alpha, &LatticePoint::new(vec![j])).unwrap();
            let y = maximal(&moved, alpha, &LatticePoint::new(vec![j + h])).unwrap();
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn generated_atoms_are_valid(n in 1usize..=2, m in 1u64..6, p_idx in 0usize..3, seed in any::<u64>(), h in prop::array::uniform2(-50i64..50)) {
        let p = [1.0, 0.8, 0.6][p_idx];
        let cube = DiscreteCube::centered(n, m).unwrap();
        let atom = generate_atom(&cube, p, seed).unwrap();
        prop_assert!(validate_atom(atom.signal(), &cube, p).unwrap().is_valid());
        let shift = LatticePoint::new(h[..n].to_vec());
        let moved = atom.translate(&shift).unwrap();
        prop_assert!(validate_atom(moved.signal(), moved.cube(), p).unwrap().is_valid());
    }

    #[test]
    fn poisson_refinement_never_decreases(b in signal_strategy(1, 2)) {
        let out = EvaluationBox::centered(1, 12).unwrap();
        let grid = TGrid::covering(12, 4).unwrap();
        let coarse = poisson_maximal(&b, &grid, &out).unwrap();
        let fine = poisson_maximal(&b, &grid.refined(), &out).unwrap();
        for (f, c) in fine.values().iter().zip(coarse.values()) {
            prop_assert!(f >= c);
        }
    }
}
