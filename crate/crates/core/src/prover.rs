//! Certified check of the four sufficient conditions for a nearby exact,
//! non-self-intersecting realization.
//!
//! With `σ` the smallest singular value of the length Jacobian at `α`,
//! `ρ = ‖l²* − l²(α)‖` and `CD` the collision distance of `α`:
//!
//! 1. `d|V| >= |E|`
//! 2. `σ > 0`
//! 3. `ρ < σ² / (16 √|E|)`
//! 4. `(σ − √(σ² − 16 ρ √|E|)) / (8 √|E|) < CD / √|V|`
//!
//! Each decision is an exact integer comparison or a [`certified_less`] that
//! returned [`Certainty::True`]; anything less is reported as "unable to
//! verify", never as a disproof.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::complex::{
    collision_distance_squared, length_jacobian, squared_lengths, CollisionDistance, Realization,
    SquaredLengthSpec,
};
use crate::error::{ArithError, ComplexError, LinalgError};
use crate::linalg::{sigma_min_bounds, DEFAULT_SIGMA_DIGITS};
use crate::rational::{
    certified_less, interval_sqrt, sqrt_bounds, Certainty, RatInterval, Rational, DEFAULT_DIGITS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProverConfig {
    /// Decimal places for square-root enclosures.
    pub digits: u32,
    /// Decimal places for the singular-value enclosure.
    pub sigma_digits: u32,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            digits: DEFAULT_DIGITS,
            sigma_digits: DEFAULT_SIGMA_DIGITS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Dimension,
    SelfIntersection,
    Sigma,
    Rho,
    Displacement,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Dimension => "inequality 1",
            Stage::SelfIntersection => "self-intersection",
            Stage::Sigma => "inequality 2",
            Stage::Rho => "inequality 3",
            Stage::Displacement => "inequality 4",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Proven,
    FailedAt { stage: Stage, reason: String },
}

impl Verdict {
    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven)
    }

    pub fn failed_stage(&self) -> Option<Stage> {
        match self {
            Verdict::Proven => None,
            Verdict::FailedAt { stage, .. } => Some(*stage),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionCheck {
    pub dim: usize,
    pub vertices: usize,
    pub edges: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfIntersectionCheck {
    pub collision: CollisionDistance,
    /// `None` when there is no non-adjacent pair.
    pub cd_interval: Option<RatInterval>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaCheck {
    pub sigma_interval: RatInterval,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoCheck {
    pub rho_squared: Rational,
    pub rho_interval: RatInterval,
    pub sqrt_edges: RatInterval,
    pub bound_interval: RatInterval,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplacementCheck {
    pub lhs_num_interval: RatInterval,
    pub lhs_den_interval: RatInterval,
    pub lhs_interval: RatInterval,
    /// `CD / √|V|`; `None` when the collision distance is unconstrained.
    pub rhs_interval: Option<RatInterval>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofReport {
    pub realization: Realization,
    pub spec: SquaredLengthSpec,
    pub config: ProverConfig,
    pub dimension: DimensionCheck,
    pub self_intersection: Option<SelfIntersectionCheck>,
    pub sigma: Option<SigmaCheck>,
    pub rho: Option<RhoCheck>,
    pub displacement: Option<DisplacementCheck>,
    /// Upper bound on how far the exact realization lies from the start.
    pub displacement_bound: Option<RatInterval>,
    pub verdict: Verdict,
    /// Error text when a stage could not be evaluated at all.
    pub stage_error: Option<String>,
}

pub fn check_dimension_inequality(r: &Realization) -> DimensionCheck {
    let c = r.complex();
    let (dim, vertices, edges) = (r.dim(), c.num_vertices(), c.num_edges());
    DimensionCheck {
        dim,
        vertices,
        edges,
        pass: dim * vertices >= edges,
    }
}

pub fn check_non_self_intersection(
    r: &Realization,
    digits: u32,
) -> Result<SelfIntersectionCheck, ProverError> {
    let collision = collision_distance_squared(r)?;
    let (cd_interval, pass) = match collision.squared() {
        None => (None, true),
        Some(sq) => (Some(sqrt_bounds(sq, digits)?), sq.is_positive()),
    };
    Ok(SelfIntersectionCheck {
        collision,
        cd_interval,
        pass,
    })
}

pub fn check_sigma_inequality(
    r: &Realization,
    sigma_digits: u32,
) -> Result<SigmaCheck, ProverError> {
    let sigma_interval = sigma_min_bounds(&length_jacobian(r), sigma_digits)?;
    let pass = sigma_interval.lo().is_positive();
    Ok(SigmaCheck {
        sigma_interval,
        pass,
    })
}

/// `ρ² = Σₑ (l²*ₑ − l²(α)ₑ)²`, exactly.
pub fn rho_squared(r: &Realization, spec: &SquaredLengthSpec) -> Result<Rational, ProverError> {
    let desired = spec.resolve(r.complex())?;
    Ok(desired
        .iter()
        .zip(squared_lengths(r))
        .map(|(want, got)| (want - got).square())
        .sum())
}

pub fn check_rho_inequality(
    r: &Realization,
    spec: &SquaredLengthSpec,
    sigma: &RatInterval,
    digits: u32,
) -> Result<RhoCheck, ProverError> {
    let rho_squared = rho_squared(r, spec)?;
    let rho_interval = sqrt_bounds(&rho_squared, digits)?;
    let sqrt_edges = sqrt_bounds(&Rational::from(r.complex().num_edges() as i64), digits)?;
    let bound_interval = sigma.square().div(&sqrt_edges.scale(&Rational::from(16)))?;
    let pass = certified_less(&rho_interval, &bound_interval) == Certainty::True;
    Ok(RhoCheck {
        rho_squared,
        rho_interval,
        sqrt_edges,
        bound_interval,
        pass,
    })
}

pub fn check_displacement_inequality(
    r: &Realization,
    sigma: &RatInterval,
    rho: &RhoCheck,
    cd_interval: Option<&RatInterval>,
    digits: u32,
) -> Result<DisplacementCheck, ProverError> {
    let sqrt_e = &rho.sqrt_edges;
    // the true discriminant is non-negative whenever inequality 3 holds
    let discriminant = sigma
        .square()
        .sub(&rho.rho_interval.mul(sqrt_e).scale(&Rational::from(16)))
        .clamp_nonnegative();
    let lhs_num_interval = sigma.sub(&interval_sqrt(&discriminant, digits)?);
    let lhs_den_interval = sqrt_e.scale(&Rational::from(8));
    let lhs_interval = lhs_num_interval.div(&lhs_den_interval)?;
    let rhs_interval = match cd_interval {
        None => None,
        Some(cd) => {
            let sqrt_v = sqrt_bounds(&Rational::from(r.complex().num_vertices() as i64), digits)?;
            Some(cd.div(&sqrt_v)?)
        }
    };
    let pass = match &rhs_interval {
        None => true,
        Some(rhs) => certified_less(&lhs_interval, rhs) == Certainty::True,
    };
    Ok(DisplacementCheck {
        lhs_num_interval,
        lhs_den_interval,
        lhs_interval,
        rhs_interval,
        pass,
    })
}

/// Runs every stage in order and stops at the first one that fails.
pub fn prove_existence(
    r: &Realization,
    spec: &SquaredLengthSpec,
    config: ProverConfig,
) -> ProofReport {
    let mut report = ProofReport {
        realization: r.clone(),
        spec: spec.clone(),
        config,
        dimension: check_dimension_inequality(r),
        self_intersection: None,
        sigma: None,
        rho: None,
        displacement: None,
        displacement_bound: None,
        verdict: Verdict::Proven,
        stage_error: None,
    };
    if let Err((stage, reason, error)) = run_stages(&mut report, r, spec, config) {
        report.stage_error = error;
        report.verdict = Verdict::FailedAt { stage, reason };
    }
    report
}

type StageFailure = (Stage, String, Option<String>);

fn unverified(stage: Stage) -> StageFailure {
    (stage, format!("unable to verify {}", claim(stage)), None)
}

fn errored(stage: Stage, e: ProverError) -> StageFailure {
    (
        stage,
        format!("unable to verify {}", claim(stage)),
        Some(e.to_string()),
    )
}

fn run_stages(
    report: &mut ProofReport,
    r: &Realization,
    spec: &SquaredLengthSpec,
    config: ProverConfig,
) -> Result<(), StageFailure> {
    if !report.dimension.pass {
        return Err(unverified(Stage::Dimension));
    }
    // resolve early so a bad length spec is reported before any heavy work
    spec.resolve(r.complex())
        .map_err(|e| errored(Stage::Rho, e.into()))?;

    let si = check_non_self_intersection(r, config.digits)
        .map_err(|e| errored(Stage::SelfIntersection, e))?;
    let si_pass = si.pass;
    let cd_interval = si.cd_interval.clone();
    report.self_intersection = Some(si);
    if !si_pass {
        return Err(unverified(Stage::SelfIntersection));
    }

    let sigma =
        check_sigma_inequality(r, config.sigma_digits).map_err(|e| errored(Stage::Sigma, e))?;
    let sigma_interval = sigma.sigma_interval.clone();
    let sigma_pass = sigma.pass;
    report.sigma = Some(sigma);
    if !sigma_pass {
        return Err(unverified(Stage::Sigma));
    }

    let rho = check_rho_inequality(r, spec, &sigma_interval, config.digits)
        .map_err(|e| errored(Stage::Rho, e))?;
    let rho_pass = rho.pass;
    report.rho = Some(rho);
    if !rho_pass {
        return Err(unverified(Stage::Rho));
    }

    let disp = check_displacement_inequality(
        r,
        &sigma_interval,
        report.rho.as_ref().expect("set above"),
        cd_interval.as_ref(),
        config.digits,
    )
    .map_err(|e| errored(Stage::Displacement, e))?;
    report.displacement_bound = Some(disp.lhs_interval.clone());
    let disp_pass = disp.pass;
    report.displacement = Some(disp);
    if !disp_pass {
        return Err(unverified(Stage::Displacement));
    }
    Ok(())
}

fn claim(stage: Stage) -> &'static str {
    match stage {
        Stage::Dimension => "d|V| >= |E|",
        Stage::SelfIntersection => "starting realization non-self-intersecting",
        Stage::Sigma => "sigma_min > 0",
        Stage::Rho => "rho < sigma_min ^ 2 / (16 * E ^ .5)",
        Stage::Displacement => "LHS < CD / |V| ^ .5",
    }
}

const APPROX_PLACES: u32 = 5;

fn approx(iv: &RatInterval) -> String {
    format!(
        "{} ~ [{}, {}]",
        iv,
        iv.lo().to_decimal_string(APPROX_PLACES),
        iv.hi().to_decimal_string(APPROX_PLACES)
    )
}

fn py_list(items: &[String]) -> String {
    let quoted: Vec<String> = items.iter().map(|s| format!("'{s}'")).collect();
    format!("[{}]", quoted.join(", "))
}

fn rational_list(items: &[Rational]) -> String {
    let parts: Vec<String> = items.iter().map(Rational::to_string).collect();
    format!("[{}]", parts.join(", "))
}

impl ProofReport {
    pub fn is_proven(&self) -> bool {
        self.verdict.is_proven()
    }

    /// Human-readable proof log. The final line is either
    /// `Success: existence proven` or `Failed: unable to verify …`.
    pub fn render_log(&self) -> String {
        let mut out = String::new();
        self.write_log(&mut out)
            .expect("writing to a String cannot fail");
        out
    }

    fn write_log(&self, o: &mut String) -> fmt::Result {
        let c = self.realization.complex();
        writeln!(o, "Attempting to prove existence")?;
        writeln!(o)?;
        writeln!(o, "Starting realization:")?;
        writeln!(o, "\tAbstract data:")?;
        writeln!(o, "\t\tmode: maximal_simplices")?;
        let data: Vec<String> = c.maximal_input().iter().map(|s| py_list(s)).collect();
        writeln!(o, "\t\tdata: [{}]", data.join(", "))?;
        writeln!(o, "\tCoordinate Data:")?;
        for (label, coords) in c.vertices().iter().zip(self.realization.coords()) {
            writeln!(o, "\t\t{label} : {}", rational_list(coords))?;
        }
        writeln!(o)?;
        writeln!(o, "Desired square lengths:")?;
        for ((a, b), v) in self.spec.entries() {
            writeln!(o, "\t('{a}', '{b}') : {v}")?;
        }
        if let Some(v) = self.spec.default_value() {
            writeln!(o, "\tdefault : {v}")?;
        }
        writeln!(o)?;

        let d = &self.dimension;
        writeln!(o, "Checking inequality 1:")?;
        writeln!(o, "\t d  = {}", d.dim)?;
        writeln!(o, "\t|V| = {}", d.vertices)?;
        writeln!(o, "\t|E| = {}", d.edges)?;
        self.write_outcome(o, Stage::Dimension, d.pass)?;

        if self.self_intersection.is_some() || self.failed_at(Stage::SelfIntersection) {
            writeln!(o)?;
            writeln!(o, "Checking self-intersection:")?;
            if let Some(si) = &self.self_intersection {
                match (&si.collision, &si.cd_interval) {
                    (CollisionDistance::Finite { squared, .. }, Some(cd)) => {
                        writeln!(o, "\tSquare collision distance = {squared}")?;
                        writeln!(o, "\tCollision distance in {}", approx(cd))?;
                    }
                    _ => writeln!(
                        o,
                        "\tNo non-adjacent simplex pairs; collision distance unconstrained"
                    )?,
                }
                if si.pass {
                    writeln!(o, "\tSuccess: starting realization non-self-intersecting")?;
                }
            }
            if self.failed_at(Stage::SelfIntersection) {
                self.write_failure(o)?;
            }
        }

        if self.sigma.is_some() || self.failed_at(Stage::Sigma) {
            writeln!(o)?;
            writeln!(o, "Checking inequality 2:")?;
            if let Some(s) = &self.sigma {
                writeln!(o, "\tsigma_min in {}", approx(&s.sigma_interval))?;
            }
            self.write_outcome(o, Stage::Sigma, self.sigma.as_ref().is_some_and(|s| s.pass))?;
        }

        if self.rho.is_some() || self.failed_at(Stage::Rho) {
            writeln!(o)?;
            writeln!(o, "Checking inequality 3:")?;
            if let Some(r) = &self.rho {
                writeln!(o, "\trho_squared = {}", r.rho_squared)?;
                writeln!(o, "\trho in {}", approx(&r.rho_interval))?;
                writeln!(
                    o,
                    "\tsigma_min ^ 2 / (16 * E ^ .5) in {}",
                    approx(&r.bound_interval)
                )?;
            }
            self.write_outcome(o, Stage::Rho, self.rho.as_ref().is_some_and(|r| r.pass))?;
        }

        if self.displacement.is_some() || self.failed_at(Stage::Displacement) {
            writeln!(o)?;
            writeln!(o, "Checking inequality 4:")?;
            if let Some(dp) = &self.displacement {
                writeln!(
                    o,
                    "\tLHS NUM := sigma_min - [sigma_min ^ 2 - 16 * rho * |E| ^ .5 ] ^ .5 in {}",
                    approx(&dp.lhs_num_interval)
                )?;
                writeln!(
                    o,
                    "\tLHS DEN := 8 * |E| ^ .5 in {}",
                    approx(&dp.lhs_den_interval)
                )?;
                writeln!(
                    o,
                    "\tLHS     := (LHS NUM) / (LHS DEN) in {}",
                    approx(&dp.lhs_interval)
                )?;
                match &dp.rhs_interval {
                    Some(rhs) => writeln!(o, "\tCD / |V| ^ .5 in {}", approx(rhs))?,
                    None => writeln!(o, "\tCD / |V| ^ .5 unconstrained")?,
                }
            }
            self.write_outcome(
                o,
                Stage::Displacement,
                self.displacement.as_ref().is_some_and(|d| d.pass),
            )?;
        }

        if self.is_proven() {
            writeln!(o)?;
            writeln!(o, "Success: existence proven")?;
        }
        Ok(())
    }

    fn failed_at(&self, stage: Stage) -> bool {
        self.verdict.failed_stage() == Some(stage)
    }

    fn write_outcome(&self, o: &mut String, stage: Stage, pass: bool) -> fmt::Result {
        if pass && !self.failed_at(stage) {
            writeln!(o, "\tSuccess: {}", claim(stage))
        } else {
            self.write_failure(o)
        }
    }

    fn write_failure(&self, o: &mut String) -> fmt::Result {
        if let Some(e) = &self.stage_error {
            writeln!(o, "\tError: {e}")?;
        }
        if let Verdict::FailedAt { reason, .. } = &self.verdict {
            writeln!(o, "\tFailed: {reason}")?;
        }
        Ok(())
    }
}
