//! Report assembly for each subcommand. Everything outside the `run` object
//! depends only on the configuration.

use std::collections::BTreeMap;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use ballgroup::ball_numeric::{compute_r0, volume_fs, R0Report, VolumeEstimate};
use ballgroup::cyclotomic::QuadInt;
use ballgroup::orbit_search::{
    bkb_profile, verify_min_displacement, verify_theorem21, BkbReport, DoubleCoset, GroupBall,
    KGroup, MinDisplacementReport, Theorem21Report,
};
use ballgroup::presentation::{
    extract_triple_relations, verify_deligne_mostow, verify_k_presentation,
    verify_presentation_eq35, DeligneMostowReport, KPresentationReport, RelatorReport,
    TripleReport,
};
use ballgroup::subgroup_pi::{
    transversal_labels, verify_abelianization_identities, verify_fixed_point_identities,
    verify_index_and_transversal, verify_quotient, verify_torsion_free, AbelianizationReport,
    FixedPointReport, IndexReport, QuotientReport, TorsionReport,
};
use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub seed: u64,
    pub samples: u64,
    pub tolerance: f64,
    pub r0_resolution: usize,
}

#[derive(Debug, Default, Serialize)]
pub struct Run {
    pub timestamp_unix: u64,
    pub workers: usize,
    pub timings_s: BTreeMap<String, f64>,
}

impl Run {
    pub fn new() -> Run {
        Run {
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            workers: rayon::current_num_threads(),
            timings_s: BTreeMap::new(),
        }
    }

    pub fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings_s
            .insert(name.to_string(), t.elapsed().as_secs_f64());
        out
    }
}

#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema: u32,
    pub command: &'static str,
    pub config: ConfigEcho,
    pub passed: bool,
    #[serde(flatten)]
    pub body: T,
    pub run: Run,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct StratumRow {
    pub norm: QuadInt,
    pub count: usize,
}

#[derive(Debug, Serialize)]
pub struct BallReport {
    #[serde(rename = "|K|")]
    pub k_order: usize,
    #[serde(rename = "|S|")]
    pub s_order: usize,
    pub strata: Vec<StratumRow>,
    pub double_cosets: Vec<DoubleCoset>,
    pub symmetric: bool,
    pub bkb: BkbReport,
}

pub fn ball_report(k: &KGroup, s: &GroupBall) -> BallReport {
    BallReport {
        k_order: k.len(),
        s_order: s.len(),
        strata: s
            .strata_sizes()
            .into_iter()
            .map(|(norm, count)| StratumRow { norm, count })
            .collect(),
        double_cosets: s.cosets.clone(),
        symmetric: s.is_symmetric(),
        bkb: bkb_profile(k, s),
    }
}

impl BallReport {
    pub fn passed(&self) -> bool {
        let counts: Vec<usize> = self.strata.iter().map(|r| r.count).collect();
        self.k_order == 288
            && self.s_order == 48_672
            && counts == [288, 20_736, 27_648]
            && self.symmetric
    }
}

#[derive(Debug, Serialize)]
pub struct ClosureReport {
    pub theorem21: Theorem21Report,
    pub min_displacement: MinDisplacementReport,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.theorem21.condition_a
            && self.theorem21.condition_b
            && self.theorem21.min_excluded_norm == QuadInt::new(6, 3)
            && self.min_displacement.min_outside_k == QuadInt::new(2, 1)
            && self.min_displacement.column_identity_holds
    }
}

pub fn closure_report(k: &KGroup, s: &GroupBall, seed: u64) -> Result<ClosureReport, CliError> {
    Ok(ClosureReport {
        theorem21: verify_theorem21(s, k, 100_000, seed)?,
        min_displacement: verify_min_displacement(s),
    })
}

#[derive(Debug, Serialize)]
pub struct PresentationReport {
    pub relators: RelatorReport,
    pub k_presentation: KPresentationReport,
    pub deligne_mostow: DeligneMostowReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triples: Option<TripleReport>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.relators.all_hold()
            && self.k_presentation.relators_hold
            && self.k_presentation.order == 288
            && self.deligne_mostow.relations.iter().all(|r| r.holds)
            && self
                .triples
                .as_ref()
                .is_none_or(|t| t.certifications.iter().all(|c| c.certified))
    }
}

pub fn presentation_report(
    k: &KGroup,
    s: Option<&GroupBall>,
    seed: u64,
    export: Option<&std::path::Path>,
) -> Result<PresentationReport, CliError> {
    let triples = match s {
        Some(s) => {
            let tp = extract_triple_relations(s, 0.01, seed)?;
            if let Some(path) = export {
                std::fs::write(path, tp.to_presentation(s).to_text())?;
            }
            Some(tp.report)
        }
        None => None,
    };
    Ok(PresentationReport {
        relators: verify_presentation_eq35()?,
        k_presentation: verify_k_presentation(k)?,
        deligne_mostow: verify_deligne_mostow()?,
        triples,
    })
}

#[derive(Debug, Serialize)]
pub struct PiReport {
    pub index_of_pi: usize,
    pub index: IndexReport,
    pub torsion: TorsionReport,
    pub fixed_points: FixedPointReport,
    pub abelianization: AbelianizationReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub transversal: Vec<String>,
}

impl PiReport {
    pub fn passed(&self) -> bool {
        self.index_of_pi == 864
            && self.index.pairwise_inequivalent
            && self.index.generators_in_pi == [true; 3]
            && self.torsion.passed()
            && self.fixed_points.passed()
            && self.abelianization.passed()
    }
}

pub fn pi_report(
    k: &KGroup,
    s: Option<&GroupBall>,
    quotient: &QuotientReport,
    with_transversal: bool,
) -> Result<PiReport, CliError> {
    let index = verify_index_and_transversal(k, quotient)?;
    Ok(PiReport {
        index_of_pi: index.index,
        index,
        torsion: verify_torsion_free(k)?,
        fixed_points: verify_fixed_point_identities(k, s)?,
        abelianization: verify_abelianization_identities()?,
        transversal: if with_transversal {
            transversal_labels(k)
        } else {
            Vec::new()
        },
    })
}

pub fn volume_passed(v: &VolumeEstimate) -> bool {
    v.relative_error < 0.05 && v.certifies_upper_bound
}

pub fn r0_passed(r: &R0Report, tolerance: f64) -> bool {
    (r.r0 - r.r0_closed_form).abs() < 1e-4
        && (r.rho0_sq - r.rho0_sq_closed_form).abs() < tolerance
        && r.b_fixes_midpoint_residual < 1e-8
}

/// The full pipeline, in the order of its dependencies.
#[derive(Debug, Default, Serialize)]
pub struct FullReport {
    #[serde(rename = "|K|")]
    pub k_order: Option<usize>,
    #[serde(rename = "|S|")]
    pub s_order: Option<usize>,
    pub index_of_pi: Option<usize>,
    pub first_failure: Option<String>,
    pub checks: Vec<Check>,
    pub ball: Option<BallReport>,
    pub closure: Option<ClosureReport>,
    pub presentation: Option<PresentationReport>,
    pub quotient: Option<QuotientReport>,
    pub pi: Option<PiReport>,
    pub volume: Option<VolumeEstimate>,
    pub r0: Option<R0Report>,
}

impl FullReport {
    fn record(&mut self, name: &str, outcome: Result<bool, CliError>) -> bool {
        let (passed, error) = match outcome {
            Ok(p) => (p, None),
            Err(e) => (false, Some(e.to_string())),
        };
        if !passed && self.first_failure.is_none() {
            self.first_failure = Some(name.to_string());
        }
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            error,
        });
        passed
    }

    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn verify_all(cfg: &ConfigEcho, run: &mut Run) -> FullReport {
    let mut rep = FullReport::default();
    let k = match run.time("enumerate_k", KGroup::enumerate) {
        Ok(k) => k,
        Err(e) => {
            rep.record("enumerate_k", Err(e.into()));
            return rep;
        }
    };
    rep.k_order = Some(k.len());
    rep.record("enumerate_k", Ok(k.len() == 288));

    let s = run.time("build_s", || GroupBall::build(&k));
    rep.s_order = Some(s.len());
    let ball = ball_report(&k, &s);
    rep.record("build_s", Ok(ball.passed()));
    rep.ball = Some(ball);

    match run.time("theorem21", || closure_report(&k, &s, cfg.seed)) {
        Ok(r) => {
            rep.record("theorem21", Ok(r.passed()));
            rep.closure = Some(r);
        }
        Err(e) => {
            rep.record("theorem21", Err(e));
        }
    }

    match run.time("presentation", || {
        presentation_report(&k, None, cfg.seed, None)
    }) {
        Ok(r) => {
            rep.record("presentation", Ok(r.passed()));
            rep.presentation = Some(r);
        }
        Err(e) => {
            rep.record("presentation", Err(e));
        }
    }

    let quotient = run.time("quotient", verify_quotient);
    match quotient {
        Ok(q) => {
            rep.record("quotient", Ok(q.passed()));
            match run.time("pi", || pi_report(&k, Some(&s), &q, false)) {
                Ok(p) => {
                    rep.index_of_pi = Some(p.index_of_pi);
                    rep.record("pi", Ok(p.passed()));
                    rep.pi = Some(p);
                }
                Err(e) => {
                    rep.record("pi", Err(e));
                }
            }
            rep.quotient = Some(q);
        }
        Err(e) => {
            rep.record("quotient", Err(e.into()));
        }
    }

    match run.time("volume", || volume_fs(cfg.samples, cfg.seed)) {
        Ok(v) => {
            rep.record("volume", Ok(volume_passed(&v)));
            rep.volume = Some(v);
        }
        Err(e) => {
            rep.record("volume", Err(e.into()));
        }
    }

    match run.time("r0", || compute_r0(cfg.r0_resolution, cfg.seed)) {
        Ok(r) => {
            rep.record("r0", Ok(r0_passed(&r, cfg.tolerance)));
            rep.r0 = Some(r);
        }
        Err(e) => {
            rep.record("r0", Err(e.into()));
        }
    }
    rep
}
