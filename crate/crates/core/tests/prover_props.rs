use num_bigint::BigInt;
use proptest::prelude::*;
use shapecert::complex::{
    length_jacobian, squared_lengths, AbstractSimplicialComplex, Realization, SquaredLengthSpec,
};
use shapecert::embed::{heuristic_embed, EmbedConfig};
use shapecert::linalg::{gram, leading_principal_minors};
use shapecert::prover::{prove_existence, ProverConfig, Stage, Verdict};
use shapecert::rational::{RatInterval, Rational};

fn asc(data: &[&[&str]]) -> AbstractSimplicialComplex {
    let v: Vec<Vec<&str>> = data.iter().map(|s| s.to_vec()).collect();
    AbstractSimplicialComplex::from_maximal_simplices(&v).unwrap()
}

fn tetra_boundary() -> AbstractSimplicialComplex {
    asc(&[
        &["a", "b", "c"],
        &["a", "b", "d"],
        &["a", "c", "d"],
        &["b", "c", "d"],
    ])
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q).unwrap()
}

fn brackets_sqrt(iv: &RatInterval, x: &Rational) -> bool {
    !iv.lo().is_negative() && &iv.lo().square() <= x && x <= &iv.hi().square()
}

fn pd(m: &shapecert::linalg::RatMatrix) -> bool {
    leading_principal_minors(m)
        .unwrap()
        .iter()
        .all(Rational::is_positive)
}

/// Perturbed unit-corner tetrahedron and a spec near its own lengths.
fn near_exact() -> impl Strategy<Value = (Realization, SquaredLengthSpec)> {
    (
        prop::collection::vec(-50i64..=50, 12),
        prop::collection::vec(-1000i64..=1000, 6),
        prop_oneof![Just(1_000_000i64), Just(1_000i64), Just(10i64)],
    )
        .prop_map(|(noise, len_noise, scale)| {
            let base = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
            let coords = base
                .iter()
                .enumerate()
                .map(|(v, p)| {
                    (0..3)
                        .map(|k| Rational::from(p[k] as i64) + r(noise[3 * v + k], 1000))
                        .collect()
                })
                .collect();
            let real = Realization::from_ordered(tetra_boundary(), 3, coords).unwrap();
            let mut spec = SquaredLengthSpec::new();
            let c = real.complex();
            for (e, l) in squared_lengths(&real).iter().enumerate() {
                let (i, j) = c.edges()[e];
                let v = l + &r(len_noise[e], scale);
                let v = if v.is_positive() { v } else { Rational::one() };
                spec.set(&c.vertices()[i], &c.vertices()[j], v);
            }
            (real, spec)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Every reported interval is re-checked from scratch and every decision
    /// is re-made from the interval endpoints.
    #[test]
    fn soundness_chain((real, spec) in near_exact()) {
        let report = prove_existence(&real, &spec, ProverConfig::default());
        let c = real.complex();
        let (nv, ne) = (Rational::from(c.num_vertices() as i64), Rational::from(c.num_edges() as i64));

        prop_assert_eq!(report.dimension.pass, 3 * c.num_vertices() >= c.num_edges());

        let si = report.self_intersection.as_ref().unwrap();
        let cd2 = si.collision.squared().unwrap().clone();
        prop_assert_eq!(si.pass, cd2.is_positive());
        let cd = si.cd_interval.as_ref().unwrap();
        prop_assert!(brackets_sqrt(cd, &cd2));
        if !si.pass {
            prop_assert_eq!(report.verdict.failed_stage(), Some(Stage::SelfIntersection));
            return Ok(());
        }

        let sigma = &report.sigma.as_ref().unwrap().sigma_interval;
        let b = gram(&length_jacobian(&real));
        if sigma.lo().is_positive() {
            prop_assert!(pd(&b.shift_diagonal(&sigma.lo().square()).unwrap()));
        }
        prop_assert!(!pd(&b.shift_diagonal(&sigma.hi().square()).unwrap()));
        prop_assert_eq!(report.sigma.as_ref().unwrap().pass, sigma.lo().is_positive());

        let rho = report.rho.as_ref().unwrap();
        let rho2: Rational = spec
            .resolve(c)
            .unwrap()
            .iter()
            .zip(squared_lengths(&real))
            .map(|(a, b)| (a - b).square())
            .sum();
        prop_assert_eq!(&rho.rho_squared, &rho2);
        prop_assert!(brackets_sqrt(&rho.rho_interval, &rho2));
        prop_assert!(brackets_sqrt(&rho.sqrt_edges, &ne));
        // the bound interval must contain σ²/(16√E) for every admissible σ and √E
        let sixteen = Rational::from(16);
        let lo = sigma.lo().square().checked_div(&(&sixteen * rho.sqrt_edges.hi())).unwrap();
        let hi = sigma.hi().square().checked_div(&(&sixteen * rho.sqrt_edges.lo())).unwrap();
        prop_assert!(rho.bound_interval.lo() <= &lo && &hi <= rho.bound_interval.hi());
        let pass3 = rho.rho_interval.hi() < rho.bound_interval.lo();
        prop_assert_eq!(rho.pass, pass3);
        if !pass3 {
            prop_assert_eq!(report.verdict.failed_stage(), Some(Stage::Rho));
            return Ok(());
        }

        let disp = report.displacement.as_ref().unwrap();
        let eight = Rational::from(8);
        let den = &disp.lhs_den_interval;
        prop_assert!(den.lo() <= &(&eight * rho.sqrt_edges.lo()) && &(&eight * rho.sqrt_edges.hi()) <= den.hi());
        prop_assert!(den.lo().is_positive());
        // σ − √D over the admissible σ and D ranges
        let disc_hi = sigma.hi().square() - &sixteen * rho.rho_interval.lo() * rho.sqrt_edges.lo();
        let disc_lo = sigma.lo().square() - &sixteen * rho.rho_interval.hi() * rho.sqrt_edges.hi();
        prop_assert!(disc_lo.is_positive());
        let num = &disp.lhs_num_interval;
        let gap_lo = sigma.lo() - num.lo();
        prop_assert!(!gap_lo.is_negative() && gap_lo.square() >= disc_hi);
        let gap_hi = sigma.hi() - num.hi();
        prop_assert!(!gap_hi.is_positive() || gap_hi.square() <= disc_lo);
        let lhs = &disp.lhs_interval;
        let worst_hi = if num.hi().is_negative() { num.hi().checked_div(den.hi()) } else { num.hi().checked_div(den.lo()) }.unwrap();
        let worst_lo = if num.lo().is_negative() { num.lo().checked_div(den.lo()) } else { num.lo().checked_div(den.hi()) }.unwrap();
        prop_assert!(lhs.lo() <= &worst_lo && &worst_hi <= lhs.hi());
        let rhs = disp.rhs_interval.as_ref().unwrap();
        prop_assert!(rhs.lo().square() * &nv <= cd2 && cd2 <= rhs.hi().square() * &nv);
        let pass4 = disp.lhs_interval.hi() < rhs.lo();
        prop_assert_eq!(disp.pass, pass4);
        prop_assert_eq!(report.verdict.is_proven(), pass4);
    }

    #[test]
    fn more_digits_never_lose_a_proof((real, spec) in near_exact()) {
        let at = |digits| prove_existence(&real, &spec, ProverConfig { digits, ..ProverConfig::default() }).is_proven();
        let verdicts: Vec<bool> = [6, 8, 10].into_iter().map(at).collect();
        for w in verdicts.windows(2) {
            prop_assert!(!w[0] || w[1], "{verdicts:?}");
        }
    }

    #[test]
    fn embed_is_deterministic_with_decimal_denominators(seed in 0u64..1000, digits in 3u32..10) {
        let c = tetra_boundary();
        let spec = SquaredLengthSpec::with_default(Rational::one());
        let cfg = EmbedConfig { rng_seed: seed, final_round_digits: digits, phase1_iterations: 200, phase2_iterations: 400, ..EmbedConfig::default() };
        let a = heuristic_embed(&c, 3, &spec, &cfg);
        let b = heuristic_embed(&c, 3, &spec, &cfg);
        prop_assert_eq!(format!("{a:?}"), format!("{b:?}"));
        if let Ok(real) = a {
            let ten = num_traits::pow(BigInt::from(10), digits as usize);
            for x in real.coords().iter().flatten() {
                prop_assert!((&ten % x.denom()) == BigInt::from(0));
            }
        }
    }
}

#[test]
fn exact_345_triangle_is_proven() {
    let c = asc(&[&["a", "b"], &["b", "c"], &["c", "a"]]);
    let coords = vec![
        vec![Rational::from(0), Rational::from(0)],
        vec![Rational::from(3), Rational::from(0)],
        vec![Rational::from(0), Rational::from(4)],
    ];
    let real = Realization::from_ordered(c.clone(), 2, coords).unwrap();
    let mut spec = SquaredLengthSpec::new();
    for (e, l) in squared_lengths(&real).into_iter().enumerate() {
        let (i, j) = c.edges()[e];
        spec.set(&c.vertices()[i], &c.vertices()[j], l);
    }
    let report = prove_existence(&real, &spec, ProverConfig::default());
    assert_eq!(report.verdict, Verdict::Proven, "{}", report.render_log());
    assert!(report.rho.unwrap().rho_squared.is_zero());
}
