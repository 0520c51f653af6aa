//! Acceptance checks, one line of output per criterion. Runs without the
//! libtest harness so the lines always reach the terminal.

mod common;

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{fixture_path, load, realization, shapecert, stdout, FIXTURES};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shapecert::complex::{
    collision_distance_squared, length_jacobian, squared_lengths, AbstractSimplicialComplex,
    Realization, SquaredLengthSpec,
};
use shapecert::lcp::{lemke_solve, qp_to_lcp, simplex_square_distance, LcpStatus, QpProblem};
use shapecert::linalg::{
    gram, leading_principal_minors, sigma_min_bounds, RatMatrix, DEFAULT_SIGMA_DIGITS,
};
use shapecert::prover::{prove_existence, ProofReport, ProverConfig, Stage};
use shapecert::rational::{sqrt_bounds, RatInterval, Rational};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn iv(lo: &str, hi: &str) -> RatInterval {
    RatInterval::new(q(lo), q(hi)).unwrap()
}

/// Both endpoints of `x` lie within `tol` of `target`.
fn near(x: &RatInterval, target: &str, tol: &str) -> bool {
    let (t, e) = (q(target), q(tol));
    (x.lo() - &t).abs() <= e && (x.hi() - &t).abs() <= e
}

fn prove_fixture(name: &str) -> ProofReport {
    let d = load(name);
    prove_existence(realization(&d), &d.spec, ProverConfig::default())
}

fn sigma_of(report: &ProofReport) -> &RatInterval {
    &report
        .sigma
        .as_ref()
        .expect("sigma stage ran")
        .sigma_interval
}

fn cd_of(report: &ProofReport) -> &RatInterval {
    report
        .self_intersection
        .as_ref()
        .and_then(|s| s.cd_interval.as_ref())
        .expect("collision distance computed")
}

fn appendix_distance() -> Check {
    let out = shapecert(&["distance", "[[3,0,0],[0,3,0],[0,0,3]]", "[[0,1,1],[1,0,1]]"]);
    ensure(out.status.success(), || {
        format!("exit {:?}", out.status.code())
    })?;
    let line = stdout(&out).trim().to_string();
    if line == "(1 / 3, ([1 / 3, 4 / 3, 4 / 3], [0, 1, 1]))" {
        return Ok(line);
    }
    // an alternative exact minimizer is acceptable
    let pts = |v: &[[i64; 3]]| {
        v.iter()
            .map(|p| p.iter().map(|&x| Rational::from(x)).collect())
            .collect::<Vec<_>>()
    };
    let d = simplex_square_distance(
        &pts(&[[3, 0, 0], [0, 3, 0], [0, 0, 3]]),
        &pts(&[[0, 1, 1], [1, 0, 1]]),
    )
    .map_err(|e| e.to_string())?;
    ensure(d.squared == q("1/3") && line == d.to_tuple_string(), || {
        format!("got {line}")
    })?;
    Ok(format!("alternative witness {line}"))
}

fn triangle() -> Check {
    let r = prove_fixture("triangle");
    ensure(r.is_proven(), || format!("verdict {:?}", r.verdict))?;
    let cd2 = r
        .self_intersection
        .as_ref()
        .unwrap()
        .collision
        .squared()
        .unwrap()
        .clone();
    ensure(
        cd2 == q("18749999713556450281734401664681/99999999862479730000000000000000"),
        || format!("CD^2 = {cd2}"),
    )?;
    let rho2 = &r.rho.as_ref().unwrap().rho_squared;
    ensure(
        rho2 == &q("6139541520423783/50000000000000000000000000000000"),
        || format!("rho^2 = {rho2}"),
    )?;
    let sigma = sigma_of(&r);
    ensure(sigma.overlaps(&iv("1.3255", "1.3257")), || {
        format!("sigma {sigma}")
    })?;
    Ok(format!("CD^2 and rho^2 exact, sigma in {sigma}"))
}

fn icosahedron() -> Check {
    let r = prove_fixture("icosahedron");
    ensure(r.is_proven(), || format!("verdict {:?}", r.verdict))?;
    ensure(
        (r.dimension.vertices, r.dimension.edges) == (12, 30),
        || format!("{:?}", r.dimension),
    )?;
    let cd = cd_of(&r);
    ensure(near(cd, "0.85065", "1/10000"), || format!("CD {cd}"))?;
    let sigma = sigma_of(&r);
    ensure(sigma.overlaps(&iv("1.5306", "1.5308")), || {
        format!("sigma {sigma}")
    })?;
    Ok(format!(
        "|V| = 12, |E| = 30, CD ~ {}, sigma in {sigma}",
        cd.lo().to_decimal_string(5)
    ))
}

fn four_simplex() -> Check {
    let r = prove_fixture("four_simplex");
    ensure(r.is_proven(), || format!("verdict {:?}", r.verdict))?;
    let d = &r.dimension;
    ensure(d.dim * d.vertices == 20 && d.edges == 10, || {
        format!("{d:?}")
    })?;
    let cd = cd_of(&r);
    ensure(near(cd, "0.6455", "1/10000"), || format!("CD {cd}"))?;
    let sigma = sigma_of(&r);
    ensure(sigma.overlaps(&iv("1.9998", "2.0")), || {
        format!("sigma {sigma}")
    })?;
    Ok(format!(
        "d|V| = 20 >= |E| = 10, CD ~ {}, sigma in {sigma}",
        cd.lo().to_decimal_string(5)
    ))
}

fn antiprism() -> Check {
    let r = prove_fixture("antiprism");
    ensure(r.verdict.failed_stage() == Some(Stage::Rho), || {
        format!("verdict {:?}", r.verdict)
    })?;
    let rho = r.rho.as_ref().unwrap();
    ensure(near(&rho.rho_interval, "0.0062", "1/1000"), || {
        format!("rho {}", rho.rho_interval)
    })?;
    ensure(near(&rho.bound_interval, "0.00013", "1/10000"), || {
        format!("bound {}", rho.bound_interval)
    })?;
    Ok(format!(
        "failed at inequality 3: rho ~ {} vs bound ~ {}",
        rho.rho_interval.hi().to_decimal_string(5),
        rho.bound_interval.hi().to_decimal_string(5)
    ))
}

fn rand_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    Rational::new(rng.gen_range(-num..=num), rng.gen_range(1..=den)).unwrap()
}

fn sqrt_soundness(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..1000 {
        let x = Rational::new(
            rng.gen_range(0..=1_000_000_000_000i64),
            rng.gen_range(1..=1_000_000i64),
        )
        .unwrap();
        let digits = rng.gen_range(1..=12);
        let b = sqrt_bounds(&x, digits).map_err(|e| e.to_string())?;
        ensure(b.lo().square() <= x && x <= b.hi().square(), || {
            format!("sqrt({x}) not in {b}")
        })?;
    }
    Ok("1000 samples".into())
}

fn random_realization(rng: &mut ChaCha8Rng) -> Realization {
    let n = rng.gen_range(2..=6);
    let data: Vec<Vec<String>> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let mask = rng.gen_range(1u32..(1 << n));
            (0..n)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| format!("v{b}"))
                .collect()
        })
        .collect();
    let c = AbstractSimplicialComplex::from_maximal_simplices(&data).unwrap();
    let d = rng.gen_range(1..=3);
    let coords = (0..c.num_vertices())
        .map(|_| (0..d).map(|_| rand_rational(rng, 40, 4)).collect())
        .collect();
    Realization::from_ordered(c, d, coords).unwrap()
}

fn jacobian_fd(rng: &mut ChaCha8Rng) -> Check {
    let h = 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let r = random_realization(rng);
        let j = length_jacobian(&r);
        let d = r.dim();
        let x: Vec<f64> = r.stacked().iter().map(Rational::to_f64).collect();
        let lengths = |y: &[f64]| -> Vec<f64> {
            r.complex()
                .edges()
                .iter()
                .map(|&(a, b)| (0..d).map(|k| (y[d * a + k] - y[d * b + k]).powi(2)).sum())
                .collect()
        };
        for col in 0..x.len() {
            let (mut up, mut down) = (x.clone(), x.clone());
            up[col] += h;
            down[col] -= h;
            let (fu, fd) = (lengths(&up), lengths(&down));
            for row in 0..j.rows() {
                let exact = j[(row, col)].to_f64();
                let rel = ((fu[row] - fd[row]) / (2.0 * h) - exact).abs() / exact.abs().max(1.0);
                worst = worst.max(rel);
            }
        }
    }
    ensure(worst < 1e-4, || format!("relative error {worst:e}"))?;
    Ok(format!("50 realizations, worst relative error {worst:.1e}"))
}

fn taylor_identity(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..50 {
        let r = random_realization(rng);
        let eps: Vec<Vec<Rational>> = r
            .coords()
            .iter()
            .map(|p| p.iter().map(|_| rand_rational(rng, 40, 7)).collect())
            .collect();
        let moved = r
            .coords()
            .iter()
            .zip(&eps)
            .map(|(p, e)| p.iter().zip(e).map(|(a, b)| a + b).collect())
            .collect();
        let r2 = Realization::from_ordered(r.complex().clone(), r.dim(), moved).unwrap();
        let j = length_jacobian(&r);
        let flat: Vec<Rational> = eps.iter().flatten().cloned().collect();
        let (l0, l1) = (squared_lengths(&r), squared_lengths(&r2));
        for (row, &(a, b)) in r.complex().edges().iter().enumerate() {
            let linear: Rational = flat.iter().enumerate().map(|(c, e)| &j[(row, c)] * e).sum();
            let remainder: Rational = eps[a]
                .iter()
                .zip(&eps[b])
                .map(|(x, y)| (x - y).square())
                .sum();
            let gap = &l1[row] - &l0[row] - linear - remainder;
            ensure(gap.is_zero(), || format!("discrepancy {gap}"))?;
        }
    }
    Ok("50 pairs, zero discrepancy".into())
}

fn lcp_instances(rng: &mut ChaCha8Rng) -> Check {
    for _ in 0..100 {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let l = RatMatrix::from_fn(n, n, |_, _| Rational::from(rng.gen_range(-6..=6i64)));
        let h = l.transpose().matmul(&l).unwrap();
        let h = RatMatrix::from_fn(n, n, |i, j| {
            if i == j {
                &h[(i, j)] + &Rational::one()
            } else {
                h[(i, j)].clone()
            }
        });
        let c: Vec<Rational> = (0..n)
            .map(|_| Rational::from(rng.gen_range(-6..=6i64)))
            .collect();
        // non-negative rows keep every point above x0 feasible
        let a = RatMatrix::from_fn(m, n, |_, _| Rational::from(rng.gen_range(0..=4i64)));
        let x0: Vec<Rational> = (0..n)
            .map(|_| Rational::from(rng.gen_range(0..=3i64)))
            .collect();
        let b = (0..m)
            .map(|i| {
                (0..n).map(|j| &a[(i, j)] * &x0[j]).sum::<Rational>()
                    - Rational::from(rng.gen_range(0..=3i64))
            })
            .collect();
        let qp = QpProblem::new(h, c, a, b).map_err(|e| e.to_string())?;
        let lcp = qp_to_lcp(&qp);
        let sol = lemke_solve(&lcp).map_err(|e| e.to_string())?;
        ensure(sol.status == LcpStatus::Solved, || {
            format!("status {:?}", sol.status)
        })?;
        let zw: Rational = sol.z.iter().zip(&sol.w).map(|(a, b)| a * b).sum();
        ensure(zw.is_zero(), || format!("z.w = {zw}"))?;
        ensure(sol.z.iter().chain(&sol.w).all(|v| !v.is_negative()), || {
            "negative entry".into()
        })?;
        let x = qp.recover_primal(&sol);
        ensure(qp.is_feasible(&x), || "infeasible optimum".into())?;
        let best = qp.objective(&x);
        let mut samples = 0;
        while samples < 1000 {
            let y: Vec<Rational> = if samples % 2 == 0 {
                x0.iter()
                    .map(|v| v + &Rational::new(rng.gen_range(0..=40i64), 8).unwrap())
                    .collect()
            } else {
                (0..n)
                    .map(|_| Rational::new(rng.gen_range(0..=80i64), 8).unwrap())
                    .collect()
            };
            if qp.is_feasible(&y) {
                ensure(best <= qp.objective(&y), || "sample beats optimum".into())?;
                samples += 1;
            }
        }
    }
    Ok("100 instances, z.w = 0 exactly, optimum below 1000 feasible samples each".into())
}

fn lipschitz(rng: &mut ChaCha8Rng) -> Check {
    let mut checked = 0;
    let mut tries = 0;
    while checked < 50 {
        tries += 1;
        ensure(tries < 10_000, || {
            "could not draw enough constrained samples".into()
        })?;
        let r = random_realization(rng);
        let v = rng.gen_range(0..r.complex().num_vertices());
        let to: Vec<Rational> = (0..r.dim()).map(|_| rand_rational(rng, 40, 4)).collect();
        let moved = r.with_vertex_moved(v, to.clone()).unwrap();
        let (before, after) = (
            collision_distance_squared(&r).unwrap(),
            collision_distance_squared(&moved).unwrap(),
        );
        let (Some(b), Some(a)) = (before.squared(), after.squared()) else {
            continue;
        };
        let shift: Rational = r
            .coord(v)
            .iter()
            .zip(&to)
            .map(|(x, y)| (x - y).square())
            .sum();
        let (b, a, s) = (
            sqrt_bounds(b, 8).unwrap(),
            sqrt_bounds(a, 8).unwrap(),
            sqrt_bounds(&shift, 8).unwrap(),
        );
        ensure(a.hi() >= &(b.lo() - s.hi()), || {
            format!("CD {b} -> {a} after move {s}")
        })?;
        checked += 1;
    }
    Ok("50 single-vertex moves".into())
}

fn pd(m: &RatMatrix) -> bool {
    leading_principal_minors(m)
        .unwrap()
        .iter()
        .all(Rational::is_positive)
}

fn sigma_recheck() -> Check {
    for name in FIXTURES {
        let d = load(name);
        let j = length_jacobian(realization(&d));
        let s = sigma_min_bounds(&j, DEFAULT_SIGMA_DIGITS).map_err(|e| e.to_string())?;
        let b = gram(&j);
        ensure(
            s.lo().is_zero() || pd(&b.shift_diagonal(&s.lo().square()).unwrap()),
            || format!("{name}: lower bound {s}"),
        )?;
        ensure(!pd(&b.shift_diagonal(&s.hi().square()).unwrap()), || {
            format!("{name}: upper bound {s}")
        })?;
    }
    Ok("all fixtures, by exact leading minors".into())
}

fn right_triangle_smoke() -> Check {
    let c = AbstractSimplicialComplex::from_maximal_simplices(&[
        vec!["a", "b"],
        vec!["b", "c"],
        vec!["c", "a"],
    ])
    .unwrap();
    let coords = [[0, 0], [3, 0], [0, 4]]
        .iter()
        .map(|p| p.iter().map(|&x| Rational::from(x)).collect())
        .collect();
    let r = Realization::from_ordered(c.clone(), 2, coords).unwrap();
    let mut spec = SquaredLengthSpec::new();
    for (&(i, j), l) in c.edges().iter().zip(squared_lengths(&r)) {
        spec.set(&c.vertices()[i], &c.vertices()[j], l);
    }
    let report = prove_existence(&r, &spec, ProverConfig::default());
    ensure(report.is_proven(), || {
        format!("verdict {:?}", report.verdict)
    })?;
    Ok("exact 3-4-5 triangle proven".into())
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for name in ["triangle", "icosahedron"] {
        let (a, b) = (dir.path().join("a.toml"), dir.path().join("b.toml"));
        for out in [&a, &b] {
            let o = shapecert(&[
                "embed",
                fixture_path(name).to_str().unwrap(),
                "--seed",
                "7",
                "--out",
                out.to_str().unwrap(),
            ]);
            ensure(o.status.success(), || {
                format!("embed {name} exit {:?}", o.status.code())
            })?;
        }
        ensure(fs::read(&a).unwrap() == fs::read(&b).unwrap(), || {
            format!("{name}: embed outputs differ")
        })?;
    }
    for name in FIXTURES {
        let path = fixture_path(name);
        let runs: Vec<_> = (0..2)
            .map(|_| shapecert(&["prove", "--verbose", path.to_str().unwrap()]))
            .collect();
        ensure(runs[0].status.code() == runs[1].status.code(), || {
            format!("{name}: verdicts differ")
        })?;
        ensure(runs[0].stdout == runs[1].stdout, || {
            format!("{name}: proof logs differ")
        })?;
    }
    Ok("embed byte-identical; prove logs identical on all fixtures".into())
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(20231016);
    type Criterion<'a> = (
        &'a str,
        &'a str,
        Option<u64>,
        Box<dyn FnOnce(&mut ChaCha8Rng) -> Check>,
    );
    let criteria: Vec<Criterion> = vec![
        (
            "1",
            "exact simplex distance",
            Some(1),
            Box::new(|_| appendix_distance()),
        ),
        (
            "2",
            "30-60-90 triangle proof",
            Some(10),
            Box::new(|_| triangle()),
        ),
        (
            "3",
            "icosahedron proof",
            Some(60),
            Box::new(|_| icosahedron()),
        ),
        (
            "4",
            "4-simplex proof",
            Some(30),
            Box::new(|_| four_simplex()),
        ),
        (
            "5",
            "hexagonal antiprism failure",
            Some(120),
            Box::new(|_| antiprism()),
        ),
        ("6a", "sqrt bound soundness", None, Box::new(sqrt_soundness)),
        (
            "6b",
            "Jacobian vs finite differences",
            None,
            Box::new(jacobian_fd),
        ),
        (
            "6c",
            "exact Taylor remainder",
            None,
            Box::new(taylor_identity),
        ),
        (
            "6d",
            "LCP complementarity and optimality",
            None,
            Box::new(lcp_instances),
        ),
        (
            "6e",
            "collision distance Lipschitz",
            None,
            Box::new(lipschitz),
        ),
        (
            "6f",
            "sigma bound re-verification",
            None,
            Box::new(|_| sigma_recheck()),
        ),
        (
            "6g",
            "exact right triangle smoke test",
            None,
            Box::new(|_| right_triangle_smoke()),
        ),
        ("7", "determinism", None, Box::new(|_| determinism())),
    ];
    let mut failures = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let mut result = check(&mut rng);
        let elapsed = start.elapsed();
        if let (Ok(_), Some(secs)) = (&result, limit) {
            if elapsed > Duration::from_secs(secs) {
                result = Err(format!("took {elapsed:.2?}, limit {secs} s"));
            }
        }
        match result {
            Ok(detail) => println!("PASS  criterion {id:<3} {name} ({elapsed:.2?}): {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL  criterion {id:<3} {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
