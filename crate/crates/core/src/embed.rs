//! Physics-style heuristic embedding.
//!
//! Vertices start uniformly in the unit cube, relax under pairwise repulsion
//! plus edge springs, then under springs alone, and are finally rounded to
//! decimal fractions. Nothing here is certified; the output only seeds the
//! prover.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{AbstractSimplicialComplex, Realization, SquaredLengthSpec};
use crate::error::{ArithError, EmbedError};
use crate::lcp::simplex_square_distance_f64;
use crate::rational::Rational;

/// Distances below this count as a collision in the float check.
pub const HEURISTIC_COLLISION_THRESHOLD: f64 = 1e-6;

const REPULSION_SOFTENING: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbedConfig {
    pub repulsion_strength: f64,
    pub spring_strength: f64,
    pub time_step: f64,
    /// Iterations with repulsion and springs.
    pub phase1_iterations: usize,
    /// Iterations with springs only.
    pub phase2_iterations: usize,
    pub rng_seed: u64,
    pub final_round_digits: u32,
    pub max_restarts: usize,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        EmbedConfig {
            repulsion_strength: 0.2,
            spring_strength: 1.0,
            time_step: 0.05,
            phase1_iterations: 2000,
            phase2_iterations: 2000,
            rng_seed: 0,
            final_round_digits: 8,
            max_restarts: 10,
        }
    }
}

impl EmbedConfig {
    pub fn validate(&self) -> Result<(), EmbedError> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.repulsion_strength)
            || !positive(self.spring_strength)
            || !positive(self.time_step)
        {
            return Err(EmbedError::Config(
                "strengths and time step must be positive".into(),
            ));
        }
        if self.phase1_iterations == 0 || self.phase2_iterations == 0 {
            return Err(EmbedError::Config(
                "iteration counts must be positive".into(),
            ));
        }
        if self.final_round_digits == 0 {
            return Err(EmbedError::Config(
                "final_round_digits must be at least 1".into(),
            ));
        }
        if self.max_restarts == 0 {
            return Err(EmbedError::Config("max_restarts must be positive".into()));
        }
        Ok(())
    }
}

/// Simulates, checks for float-level collisions, restarts on a fresh
/// random stream if needed, and rounds the first clean attempt.
pub fn heuristic_embed(
    c: &AbstractSimplicialComplex,
    dim: usize,
    spec: &SquaredLengthSpec,
    cfg: &EmbedConfig,
) -> Result<Realization, EmbedError> {
    cfg.validate()?;
    if dim == 0 {
        return Err(EmbedError::Config("dimension must be positive".into()));
    }
    let targets: Vec<f64> = spec.resolve(c)?.iter().map(|x| x.to_f64().sqrt()).collect();
    let mut last = None;
    for attempt in 0..cfg.max_restarts {
        let coords = simulate(c, dim, &targets, cfg, attempt as u64);
        let realization = Realization::from_ordered(
            c.clone(),
            dim,
            round_to_rational(&coords, cfg.final_round_digits)?,
        )?;
        if !float_self_intersection_heuristic(c, &coords) {
            return Ok(realization);
        }
        last = Some(realization);
    }
    Err(EmbedError::RestartsExhausted {
        attempts: cfg.max_restarts,
        last: Box::new(last.expect("at least one attempt")),
    })
}

/// Float coordinates after both simulation phases. `attempt` selects an
/// independent ChaCha stream under the same seed.
pub fn simulate(
    c: &AbstractSimplicialComplex,
    dim: usize,
    target_lengths: &[f64],
    cfg: &EmbedConfig,
    attempt: u64,
) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    rng.set_stream(attempt);
    let n = c.num_vertices();
    let mut pos: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let mut force = vec![vec![0.0; dim]; n];

    for step in 0..cfg.phase1_iterations + cfg.phase2_iterations {
        for f in force.iter_mut() {
            f.iter_mut().for_each(|x| *x = 0.0);
        }
        if step < cfg.phase1_iterations {
            for i in 0..n {
                for j in i + 1..n {
                    let (dir, r) = direction(&pos[i], &pos[j]);
                    let mag = cfg.repulsion_strength / (r * r + REPULSION_SOFTENING);
                    for k in 0..dim {
                        force[i][k] -= mag * dir[k];
                        force[j][k] += mag * dir[k];
                    }
                }
            }
        }
        for (&(i, j), &target) in c.edges().iter().zip(target_lengths) {
            let (dir, r) = direction(&pos[i], &pos[j]);
            let mag = cfg.spring_strength * (r - target);
            for k in 0..dim {
                force[i][k] += mag * dir[k];
                force[j][k] -= mag * dir[k];
            }
        }
        for (p, f) in pos.iter_mut().zip(&force) {
            for (x, fx) in p.iter_mut().zip(f) {
                *x += cfg.time_step * fx;
            }
        }
    }
    pos
}

/// Unit vector from `a` toward `b` and the distance between them. Coincident
/// points get an arbitrary fixed axis so forces stay finite.
fn direction(a: &[f64], b: &[f64]) -> (Vec<f64>, f64) {
    let diff: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let r = diff.iter().map(|x| x * x).sum::<f64>().sqrt();
    if r > 0.0 {
        (diff.iter().map(|x| x / r).collect(), r)
    } else {
        let mut axis = vec![0.0; a.len()];
        axis[0] = 1.0;
        (axis, 0.0)
    }
}

/// True when some maximal non-adjacent pair comes closer than
/// [`HEURISTIC_COLLISION_THRESHOLD`] in floating point.
pub fn float_self_intersection_heuristic(
    c: &AbstractSimplicialComplex,
    coords: &[Vec<f64>],
) -> bool {
    let limit = HEURISTIC_COLLISION_THRESHOLD * HEURISTIC_COLLISION_THRESHOLD;
    let points = |s: &[usize]| -> Vec<Vec<f64>> { s.iter().map(|&v| coords[v].clone()).collect() };
    c.non_adjacent_pairs(true).iter().any(|(a, b)| {
        match simplex_square_distance_f64(&points(a), &points(b)) {
            Ok(d) => !d.is_finite() || d < limit,
            // a numerically stuck solve is treated as suspicious
            Err(_) => true,
        }
    })
}

/// `round(x · 10^digits) / 10^digits` for every coordinate.
pub fn round_to_rational(
    coords: &[Vec<f64>],
    digits: u32,
) -> Result<Vec<Vec<Rational>>, ArithError> {
    coords
        .iter()
        .map(|p| {
            p.iter()
                .map(|&x| Rational::from_f64_rounded(x, digits))
                .collect()
        })
        .collect()
}
