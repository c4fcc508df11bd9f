//! Seeded execution of the property suites over a scenario.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use kframe_core::duality::{
    canonical_characterization, canonical_dual, complement_parseval_check, construct_alternative_dual,
    dual_coefficient_family, is_dual_k_bessel, kdaggerk_frame_check, l2_independence_transfer,
    least_squares_dual, minimality_check_with_probes, phi_constraint_residual, pythagorean_decomposition,
    random_dual, residual_operator, uniqueness_test,
};
use kframe_core::frame::{analysis, k_lower_bound, synthesis, weighted_synthesis};
use kframe_core::linalg::{
    corange_projector, douglas_factor, kernels_coincide, loewner_bisect, pinv, range_inclusion, range_projector,
    DEFAULT_TOL,
};
use kframe_core::{rng, HVector, LinOperator};

use crate::error::{CliError, Result};
use crate::report::{PropertyRecord, SuiteReport, Witness};
use crate::scenario::{Instance, Scenario};

/// Loewner tolerance of the bisection oracle used by `l2` and `l3`.
pub const BISECTION_TOL: f64 = 1e-13;
pub const BISECTION_ITERATIONS: usize = 60;
/// Random duals drawn per trial by `canonical-char`.
pub const CHARACTERIZATION_DUALS: usize = 50;
/// Minimum analysis-operator gap for a dual to count as distinct from `F̃`.
pub const DISTINCT_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyId {
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    CanonicalChar,
    T1,
    T2,
    T4,
    ComplementParseval,
    KDaggerK,
}

impl PropertyId {
    pub const ALL: [PropertyId; 12] = [
        Self::L1,
        Self::L2,
        Self::L3,
        Self::L4,
        Self::L5,
        Self::L6,
        Self::CanonicalChar,
        Self::T1,
        Self::T2,
        Self::T4,
        Self::ComplementParseval,
        Self::KDaggerK,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::L1 => "l1",
            Self::L2 => "l2",
            Self::L3 => "l3",
            Self::L4 => "l4",
            Self::L5 => "l5",
            Self::L6 => "l6",
            Self::CanonicalChar => "canonical-char",
            Self::T1 => "t1",
            Self::T2 => "t2",
            Self::T4 => "t4",
            Self::ComplementParseval => "complement-parseval",
            Self::KDaggerK => "kdaggerk",
        }
    }

    pub fn all_ids() -> Vec<&'static str> {
        Self::ALL.iter().map(|p| p.id()).collect()
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Self::L1 => 1e-10,
            Self::L2 | Self::L3 => 1e-6,
            _ => 1e-9,
        }
    }

    fn index(self) -> u64 {
        Self::ALL.iter().position(|p| *p == self).unwrap() as u64
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for PropertyId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.id() == s.trim()).ok_or_else(|| {
            CliError::Usage(format!("unknown property id `{s}`; valid ids: {}", Self::all_ids().join(", ")))
        })
    }
}

/// Parses a comma-separated id list; duplicates are dropped, order is kept.
pub fn parse_properties(list: &str) -> Result<Vec<PropertyId>> {
    let mut out = Vec::new();
    for part in list.split(',').filter(|p| !p.trim().is_empty()) {
        let id = part.parse()?;
        if !out.contains(&id) {
            out.push(id);
        }
    }
    Ok(out)
}

/// Outcome of one property on one trial: a normalized residual and an
/// optional human-readable note.
type Eval = std::result::Result<(f64, Option<String>), String>;

/// Runs `properties` (all of them when empty) over the scenario's trials.
///
/// Trial `t` uses the stream `derive_seed(seed, t)`; each property then gets
/// its own sub-seed, so selecting a subset of properties does not change any
/// residual.
pub fn run_suite<S: AsRef<str>>(scenario: &Scenario, properties: &[S]) -> Result<SuiteReport> {
    let ids = if properties.is_empty() {
        PropertyId::ALL.to_vec()
    } else {
        let mut ids = Vec::new();
        for p in properties {
            for id in parse_properties(p.as_ref())? {
                if !ids.contains(&id) {
                    ids.push(id);
                }
            }
        }
        ids
    };
    scenario.validate()?;
    let start = Instant::now();

    let mut records: Vec<PropertyRecord> = ids
        .iter()
        .map(|id| PropertyRecord::new(id.id(), tolerance_for(scenario, *id)))
        .collect();

    for trial in scenario.trial_offset..scenario.trial_offset + scenario.trials as u64 {
        let trial_seed = rng::derive_seed(scenario.seed, trial);
        let instance = scenario.instance(trial);
        for (id, record) in ids.iter().zip(records.iter_mut()) {
            let outcome = match &instance {
                Ok(inst) => evaluate(*id, inst, rng::derive_seed(trial_seed, id.index()), record.tolerance),
                Err(e) => Err(format!("instance construction failed: {e}")),
            };
            let (residual, reason, detail) = match outcome {
                Ok((r, detail)) => (r, None, detail),
                Err(reason) => (f64::INFINITY, Some(reason), None),
            };
            record.observe(residual, detail);
            if record.witness.is_none() && (residual.is_nan() || residual > record.tolerance) {
                let reason = reason
                    .unwrap_or_else(|| format!("residual {residual:e} exceeds tolerance {:e}", record.tolerance));
                let mut replay = scenario.clone();
                replay.trials = 1;
                replay.trial_offset = trial;
                record.witness = Some(Witness {
                    trial_index: trial,
                    seed: trial_seed,
                    reason,
                    scenario: replay,
                });
            }
        }
    }

    let mut report = SuiteReport::new(scenario.clone());
    report.properties = records;
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn tolerance_for(scenario: &Scenario, id: PropertyId) -> f64 {
    scenario.tolerances.get(id.id()).copied().unwrap_or_else(|| id.default_tolerance())
}

fn evaluate(id: PropertyId, inst: &Instance, seed: u64, tol: f64) -> Eval {
    let (f, k) = (&inst.frame, &inst.k);
    let err = |e: kframe_core::Error| e.to_string();
    match id {
        PropertyId::L1 => {
            let mut stream = rng::stream(seed);
            let cap = f.dim().max(f.atom_count()).min(16);
            let rows = 1 + (rng::derive_seed(seed, 1) % cap as u64) as usize;
            let cols = 1 + (rng::derive_seed(seed, 2) % cap as u64) as usize;
            let rank = rows.min(cols).saturating_sub(1).max(1);
            let random = LinOperator::from_matrix(rng::rank_deficient_matrix(&mut stream, rows, cols, rank))
                .map_err(err)?;
            let worst = [k.op().clone(), analysis(f), synthesis(f), random]
                .iter()
                .map(moore_penrose_residual)
                .fold(0.0, f64::max);
            Ok((worst, None))
        }
        PropertyId::L2 => {
            let t = weighted_synthesis(f);
            let mut stream = rng::stream(seed);
            let rank = 1 + (rng::derive_seed(seed, 1) % f.dim() as u64) as usize;
            let theta0 = rng::rank_deficient_matrix(&mut stream, f.atom_count(), f.dim(), rank.min(f.atom_count()));
            let s = &t * &LinOperator::from_matrix(theta0).map_err(err)?;
            let mut worst = douglas_residual(&s, &t)?;
            if range_inclusion(k.op(), &t).map_err(err)?.included {
                worst = worst.max(douglas_residual(k.op(), &t)?);
            }
            Ok((worst, None))
        }
        PropertyId::L3 => {
            let t = weighted_synthesis(f);
            let included = range_inclusion(k.op(), &t).map_err(err)?.included;
            let bound = k_lower_bound(f, k).map_err(err)?;
            let bisect = loewner_bisect(k.op(), &t, BISECTION_ITERATIONS, BISECTION_TOL).map_err(err)?;
            if included != bound.is_some() || included != bisect.is_some() {
                return Err(format!(
                    "verdicts disagree: inclusion {included}, lower bound {bound:?}, bisection {bisect:?}"
                ));
            }
            let residual = match (bound, bisect) {
                (Some(a), Some(lam)) => (1.0 / a - lam).abs() / (1.0 + lam),
                _ => 0.0,
            };
            Ok((residual, None))
        }
        PropertyId::L4 => {
            let canonical = canonical_dual(f, k, DEFAULT_TOL).map_err(err)?;
            let dual = is_dual_k_bessel(&canonical, f, k, DEFAULT_TOL).map_err(err)?;
            let parseval = complement_parseval_check(f, k, 5, seed, tol).map_err(err)?;
            Ok((
                (dual.duality_residual / (1.0 + k.norm())).max(parseval.max_residual),
                None,
            ))
        }
        PropertyId::L5 => {
            let mut stream = rng::stream(seed);
            let (g, phi) = random_dual(f, k, &mut stream, DEFAULT_TOL).map_err(err)?;
            let back = residual_operator(&g, f, k, DEFAULT_TOL).map_err(err)?;
            let space = f.space();
            let scale = 1.0 + space.codomain_norm(&phi).map_err(err)?;
            let recovery = space.codomain_norm(&(back.phi() - &phi)).map_err(err)? / scale;
            let constraint = phi_constraint_residual(f, back.phi()).map_err(err)? / scale;
            Ok((recovery.max(constraint), None))
        }
        PropertyId::L6 => {
            let outcome = minimality_check_with_probes(f, k, 1, 20, seed, tol).map_err(err)?;
            Ok((outcome.max_residual, None))
        }
        PropertyId::CanonicalChar => {
            let canonical = canonical_dual(f, k, DEFAULT_TOL).map_err(err)?;
            let outcome =
                canonical_characterization(&canonical, f, k, CHARACTERIZATION_DUALS, seed, tol).map_err(err)?;
            let mut stream = rng::stream(rng::derive_seed(seed, 1));
            let (g, _) = random_dual(f, k, &mut stream, DEFAULT_TOL).map_err(err)?;
            let gap = f
                .space()
                .codomain_norm(&(&analysis(&g) - &analysis(&canonical)))
                .map_err(err)?;
            if gap > DISTINCT_GAP {
                let perturbed = canonical_characterization(&g, f, k, 1, seed, tol).map_err(err)?;
                if perturbed.witness != Some(0) {
                    return Err(format!("perturbed dual (gap {gap:e}) was not refuted by F̃"));
                }
            }
            Ok((outcome.max_residual, None))
        }
        PropertyId::T1 => {
            let canonical = canonical_dual(f, k, DEFAULT_TOL).map_err(err)?;
            if uniqueness_test(f, k, DEFAULT_TOL).map_err(err)? {
                let other = least_squares_dual(f, k).map_err(err)?;
                let scale = 1.0 + canonical.max_sample_norm().max(other.max_sample_norm());
                let distance = canonical.max_sample_distance(&other).map_err(err)?;
                Ok((distance / scale, Some("uniqueness_test = true; independent duals coincide".into())))
            } else {
                let q = construct_alternative_dual(f, k, seed, DEFAULT_TOL).map_err(err)?;
                let distance = q.max_sample_distance(&canonical).map_err(err)?;
                if distance <= DISTINCT_GAP {
                    return Err(format!("alternative dual is only {distance:e} away from F̃"));
                }
                let dual = is_dual_k_bessel(&q, f, k, DEFAULT_TOL).map_err(err)?;
                Ok((
                    dual.duality_residual / (1.0 + k.norm()),
                    Some(format!(
                        "uniqueness_test = false; verified alternative dual at sample distance {distance:.3e}"
                    )),
                ))
            }
        }
        PropertyId::T2 => {
            let transfer = l2_independence_transfer(f, k, DEFAULT_TOL).map_err(err)?;
            if !transfer.agree() {
                return Err(format!(
                    "independence verdicts differ: F {}, F̃ {}",
                    transfer.f_indep, transfer.dual_indep
                ));
            }
            Ok((
                transfer.reconstruction_residual.unwrap_or(0.0),
                Some(format!("is_l2_independent = {}", transfer.f_indep)),
            ))
        }
        PropertyId::T4 => {
            let mut stream = rng::stream(seed);
            let x = HVector::from_vector(rng::unit_vector(&mut stream, f.dim())).map_err(err)?;
            let family = dual_coefficient_family(f, k, &x, 10, seed, DEFAULT_TOL).map_err(err)?;
            let mut worst: f64 = 0.0;
            for c in &family {
                let p = pythagorean_decomposition(f, k, &x, c, DEFAULT_TOL).map_err(err)?;
                worst = worst.max(p.identity_gap()).max(p.cross_term);
            }
            Ok((worst, None))
        }
        PropertyId::ComplementParseval => {
            let outcome = complement_parseval_check(f, k, 5, seed, tol).map_err(err)?;
            Ok((outcome.max_residual, None))
        }
        PropertyId::KDaggerK => {
            let outcome = kdaggerk_frame_check(f, k, tol).map_err(err)?;
            Ok((outcome.max_residual, None))
        }
    }
}

/// Worst of the four Penrose conditions, `(A*)† = (A†)*`, `P_{R(A)} A = A`
/// and `A (I − P_{N(A)⊥}) = 0`, divided by `1 + ‖A‖`.
pub fn moore_penrose_residual(a: &LinOperator) -> f64 {
    let ap = pinv(a);
    let aap = a * &ap;
    let apa = &ap * a;
    let identity = LinOperator::identity(a.cols()).expect("nonempty operator");
    let residuals = [
        (&aap * a).distance(a),
        (&apa * &ap).distance(&ap),
        aap.adjoint().distance(&aap),
        apa.adjoint().distance(&apa),
        pinv(&a.adjoint()).distance(&ap.adjoint()),
        (&range_projector(a) * a).distance(a),
        Ok((a * &(&identity - &corange_projector(a))).op_norm()),
    ];
    let worst = residuals.into_iter().map(|r| r.expect("shapes agree")).fold(0.0, f64::max);
    worst / (1.0 + a.op_norm())
}

/// Checks the Douglas factor of an included pair against the bisection
/// oracle: `|‖θ‖² − λ_bisect| / (1 + λ_bisect)`, plus the factorization,
/// kernel and range conditions (any failure is an error).
fn douglas_residual(s: &LinOperator, t: &LinOperator) -> std::result::Result<f64, String> {
    let err = |e: kframe_core::Error| e.to_string();
    let theta = douglas_factor(s, t).map_err(err)?;
    let lambda = loewner_bisect(s, t, BISECTION_ITERATIONS, BISECTION_TOL)
        .map_err(err)?
        .ok_or("bisection found no Loewner bound for an included pair")?;
    if !kernels_coincide(s, &theta).map_err(err)? {
        return Err("N(S) ≠ N(θ)".into());
    }
    if !range_inclusion(&theta, &t.adjoint()).map_err(err)?.included {
        return Err("R(θ) ⊄ R(T*)".into());
    }
    let factor = (t * &theta).distance(s).map_err(err)? / (1.0 + s.op_norm());
    let lambda_gap = (theta.op_norm().powi(2) - lambda).abs() / (1.0 + lambda);
    Ok(factor.max(lambda_gap))
}
