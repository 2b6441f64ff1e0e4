//! Certification suite: every check as an independent job, run on a rayon
//! pool and reported in key order.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::time::Instant;

use crate::affine::{format_mode, format_state, format_word, is_singular, vectors, Mode, ModeCalculus};
use crate::error::{Error, Result};
use crate::freefield::{self, current_from_weights, fock, ope_level};
use crate::geometry;
use crate::lattice;
use crate::liesuper::{check_structure, matrix_oracle_mismatches, LieSuperalgebra};
use crate::rational::{fmt_q, q};
use crate::zhu;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(default)]
pub struct ResourceLimits {
    /// Largest rank any job may use.
    pub max_n: usize,
    /// Largest rank for the u-vector sweep.
    pub minor_cover_max_n: usize,
    /// Inclusive rank range for sheet checks.
    pub sheet_n_range: [usize; 2],
    /// Largest rank for the `sl(n)` structure check.
    pub sl_max_n: usize,
}

impl Default for ResourceLimits {
    fn default() -> Self {
        ResourceLimits {
            max_n: 6,
            minor_cover_max_n: 5,
            sheet_n_range: [4, 5],
            sl_max_n: 6,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(default)]
pub struct SuiteConfig {
    pub default_n_range: [usize; 2],
    pub seed: u64,
    pub sample_count: usize,
    pub resource_limits: ResourceLimits,
    /// Flip the sign of one bracket of every `psl(n|n)` table.
    pub inject_fault: bool,
    /// Include wall-clock timings (makes reports non-reproducible).
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            default_n_range: [2, 5],
            seed: 0,
            sample_count: 100,
            resource_limits: ResourceLimits::default(),
            inject_fault: false,
            timing: false,
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub key: String,
    pub criterion: u8,
    pub status: Status,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproduce: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: SuiteConfig,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug)]
enum Job {
    StructureSl(usize),
    StructurePsl(usize),
    Annihilators(usize),
    SingularChi(usize),
    SingularChiPlus(usize),
    SingularChiMinus(usize),
    MembershipPlus(usize),
    MembershipMinus(usize),
    MinorCover(usize),
    Sheet(usize),
    Containment(usize),
    Anomaly(usize),
    Lattice(usize),
}

impl Job {
    fn key(&self) -> String {
        match self {
            Job::StructureSl(n) => format!("01-structure/sl({n})"),
            Job::StructurePsl(n) => format!("01-structure/psl({n}|{n})"),
            Job::Annihilators(n) => format!("02-annihilators/n={n}"),
            Job::SingularChi(n) => format!("03-singular/chi/n={n}"),
            Job::SingularChiPlus(n) => format!("03-singular/chi-plus/n={n}"),
            Job::SingularChiMinus(n) => format!("03-singular/chi-minus/n={n}"),
            Job::MembershipPlus(n) => format!("04-membership/chi-plus/n={n}"),
            Job::MembershipMinus(n) => format!("04-membership/chi-minus/n={n}"),
            Job::MinorCover(n) => format!("05-minor-cover/n={n}"),
            Job::Sheet(n) => format!("06-sheet/n={n}"),
            Job::Anomaly(n) => format!("07-anomaly/n={n}"),
            Job::Lattice(n) => format!("08-lattice/n={n}"),
            Job::Containment(n) => format!("10-containment/n={n}"),
        }
    }

    fn criterion(&self) -> u8 {
        match self {
            Job::StructureSl(_) | Job::StructurePsl(_) => 1,
            Job::Annihilators(_) => 2,
            Job::SingularChi(_) | Job::SingularChiPlus(_) | Job::SingularChiMinus(_) => 3,
            Job::MembershipPlus(_) | Job::MembershipMinus(_) => 4,
            Job::MinorCover(_) => 5,
            Job::Sheet(_) => 6,
            Job::Anomaly(_) => 7,
            Job::Lattice(_) => 8,
            Job::Containment(_) => 10,
        }
    }
}

fn jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let [lo, hi] = cfg.default_n_range;
    let mut v = Vec::new();
    for n in lo.max(2)..=hi {
        v.push(Job::StructureSl(n));
        v.push(Job::StructurePsl(n));
        v.push(Job::Annihilators(n));
        v.push(Job::SingularChi(n));
        v.push(Job::SingularChiPlus(n));
        v.push(Job::SingularChiMinus(n));
        v.push(Job::MembershipPlus(n));
        v.push(Job::MembershipMinus(n));
        v.push(Job::MinorCover(n));
        v.push(Job::Sheet(n));
        v.push(Job::Containment(n));
        v.push(Job::Lattice(n));
    }
    for n in lo.max(1)..=hi {
        v.push(Job::Anomaly(n));
    }
    v
}

struct Outcome {
    status: Status,
    detail: Value,
    reproduce: Option<String>,
}

fn skip(reason: &str) -> Outcome {
    Outcome {
        status: Status::Skip,
        detail: json!({ "reason": reason }),
        reproduce: None,
    }
}

fn verdict(ok: bool, detail: Value, repro: String) -> Outcome {
    Outcome {
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
        reproduce: (!ok).then_some(repro),
    }
}

fn psl_table(n: usize, cfg: &SuiteConfig) -> Result<LieSuperalgebra> {
    let g = LieSuperalgebra::psl(n)?;
    if cfg.inject_fault {
        let (a, b) = fault_site(&g);
        return Ok(g.with_corrupted_bracket(a, b));
    }
    Ok(g)
}

/// First ordered pair with a nonzero bracket.
pub fn fault_site(g: &LieSuperalgebra) -> (usize, usize) {
    for a in 0..g.dim() {
        for b in a + 1..g.dim() {
            if !g.bracket(a, b).is_empty() {
                return (a, b);
            }
        }
    }
    (0, 1)
}

fn run_job(job: &Job, cfg: &SuiteConfig) -> Result<Outcome> {
    let lim = &cfg.resource_limits;
    let seed = cfg.seed;
    let n_of = |j: &Job| match j {
        Job::StructureSl(n)
        | Job::StructurePsl(n)
        | Job::Annihilators(n)
        | Job::SingularChi(n)
        | Job::SingularChiPlus(n)
        | Job::SingularChiMinus(n)
        | Job::MembershipPlus(n)
        | Job::MembershipMinus(n)
        | Job::MinorCover(n)
        | Job::Sheet(n)
        | Job::Containment(n)
        | Job::Anomaly(n)
        | Job::Lattice(n) => *n,
    };
    let n = n_of(job);
    if n > lim.max_n {
        return Ok(skip("rank exceeds resource_limits.max_n"));
    }
    let fault = if cfg.inject_fault { " --inject-fault" } else { "" };
    Ok(match job {
        Job::StructureSl(n) => {
            if *n > lim.sl_max_n {
                return Ok(skip("rank exceeds resource_limits.sl_max_n"));
            }
            let g = LieSuperalgebra::sl(*n)?;
            let r = check_structure(&g);
            let oracle = matrix_oracle_mismatches(&g);
            verdict(
                r.passed && oracle.is_empty(),
                json!({ "dim": r.dim, "violations": r.violations, "oracle_mismatches": oracle }),
                format!("voalab --n {n} structure-check --algebra sl"),
            )
        }
        Job::StructurePsl(n) => {
            let g = psl_table(*n, cfg)?;
            let r = check_structure(&g);
            let oracle = matrix_oracle_mismatches(&g);
            verdict(
                r.passed && oracle.is_empty(),
                json!({ "dim": r.dim, "violations": r.violations, "oracle_mismatches": oracle }),
                format!("voalab --n {n} structure-check --algebra psl{fault}"),
            )
        }
        Job::Annihilators(n) => {
            let g = psl_table(*n, cfg)?;
            let ops = vectors::chi_annihilators(&g, 2)?;
            let calc = ModeCalculus::new(&g, q(1));
            let chi = vectors::chi(&calc)?;
            let mut failures = Vec::new();
            for (label, x, m) in &ops {
                let img = calc.apply_element(x, *m, &chi);
                if !img.is_zero() {
                    failures.push(json!({ "operator": format!("{label}({m})"), "image": format_state(&g, &img) }));
                }
            }
            let first = failures.first().and_then(|f| f["operator"].as_str().map(String::from));
            verdict(
                failures.is_empty(),
                json!({ "identities": ops.len(), "failures": failures }),
                format!(
                    "voalab --n {n} apply-word --vector chi --word \"{}\"{fault}",
                    first.unwrap_or_default()
                ),
            )
        }
        Job::SingularChi(n) => {
            let g = psl_table(*n, cfg)?;
            let calc = ModeCalculus::new(&g, q(1));
            let r = is_singular(&g, &vectors::chi(&calc)?)?;
            verdict(
                r.singular,
                singular_detail(&g, &r),
                format!("voalab --n {n} singular-check --vector chi{fault}"),
            )
        }
        Job::SingularChiPlus(n) => {
            let g = psl_table(*n, cfg)?;
            let calc = ModeCalculus::new(&g, q(1));
            let r = is_singular(&g, &vectors::chi_plus(&calc)?)?;
            let want = Mode::new(g.e(*n, n + 1)?, 0);
            let ok = !r.singular && r.witness.as_ref().map(|w| w.0) == Some(want);
            verdict(
                ok,
                singular_detail(&g, &r),
                format!("voalab --n {n} singular-check --vector chi-plus{fault}"),
            )
        }
        Job::SingularChiMinus(n) => {
            if *n < 4 {
                return Ok(skip("chi-minus requires n >= 4"));
            }
            let g = psl_table(*n, cfg)?;
            let calc = ModeCalculus::new(&g, q(1));
            let r = is_singular(&g, &vectors::chi_minus(&calc)?)?;
            let want = Mode::new(g.e(1, n + 1)?, 0);
            let ok = !r.singular && r.witness.as_ref().map(|w| w.0) == Some(want);
            verdict(
                ok,
                singular_detail(&g, &r),
                format!("voalab --n {n} singular-check --vector chi-minus{fault}"),
            )
        }
        Job::MembershipPlus(n) | Job::MembershipMinus(n) => {
            let plus = matches!(job, Job::MembershipPlus(_));
            if !plus && *n < 4 {
                return Ok(skip("chi-minus requires n >= 4"));
            }
            let g = psl_table(*n, cfg)?;
            let calc = ModeCalculus::new(&g, q(1));
            let (w, target, name) = if plus {
                (vectors::chi_plus_word(&g)?, vectors::chi_plus(&calc)?, "chi-plus")
            } else {
                (vectors::chi_minus_word(&g)?, vectors::chi_minus(&calc)?, "chi-minus")
            };
            let img = calc.apply_word(&w, &vectors::chi(&calc)?);
            let scalar = img.proportionality(&target);
            let ok = scalar.as_ref().is_some_and(|c| c.abs() == q(1));
            verdict(
                ok,
                json!({
                    "word": format_word(&g, &w),
                    "scalar": scalar.as_ref().map(fmt_q),
                    "image": format_state(&g, &img),
                }),
                format!(
                    "voalab --n {n} apply-word --vector chi --word \"{}\" --expect {name}{fault}",
                    format_word(&g, &w)
                ),
            )
        }
        Job::MinorCover(n) => {
            if *n > lim.minor_cover_max_n {
                return Ok(skip("rank exceeds resource_limits.minor_cover_max_n"));
            }
            let r = zhu::minor_cover_check(*n)?;
            verdict(
                r.covered,
                json!({ "vectors": r.vectors, "minors": r.minors, "missing": r.missing, "mismatched": r.mismatched }),
                format!("voalab --n {n} minor-cover"),
            )
        }
        Job::Sheet(n) => {
            let [slo, shi] = lim.sheet_n_range;
            if *n < 4 {
                return Ok(skip("sheet decomposition requires n >= 4"));
            }
            if *n < slo || *n > shi {
                return Ok(skip("rank outside resource_limits.sheet_n_range"));
            }
            let (ok, detail) = sheet_check(*n, cfg.sample_count, seed)?;
            verdict(
                ok,
                detail,
                format!(
                    "voalab --n {n} --seed {seed} sheet-vanish --samples {}",
                    cfg.sample_count
                ),
            )
        }
        Job::Containment(n) => {
            let mut bad = Vec::new();
            for k in 0..cfg.sample_count as u64 {
                let z = geometry::sample_min_orbit_element(*n, seed, k);
                if !geometry::in_sheet_closure(&z)? {
                    bad.push(crate::parse::format_matrix(&z));
                }
            }
            let ss = geometry::semisimple_point(*n);
            let separated = !geometry::in_min_orbit_closure(&ss)? && geometry::in_sheet_closure(&ss)?;
            verdict(
                bad.is_empty() && separated,
                json!({ "samples": cfg.sample_count, "outside_sheet": bad, "semisimple_separates": separated }),
                format!(
                    "voalab --n {n} orbit-member --matrix '{}'",
                    crate::parse::format_matrix(&ss)
                ),
            )
        }
        Job::Anomaly(n) => {
            let rho: Vec<Vec<i64>> = vec![vec![1]; *n];
            let j = &current_from_weights(&rho)?[0];
            let total = ope_level(j, j);
            let boson = ope_level(&j.boson_part(), &j.boson_part());
            let fermion = ope_level(&j.fermion_part(), &j.fermion_part());
            let boson_oracle = fock::level(&j.boson_part(), &j.boson_part());
            let fermion_oracle = fock::level(&j.fermion_part(), &j.fermion_part());
            let ni = q(*n as i64);
            let ok = total.is_zero()
                && boson == -ni.clone()
                && fermion == ni
                && boson == boson_oracle
                && fermion == fermion_oracle;
            verdict(
                ok,
                json!({
                    "level": fmt_q(&total),
                    "boson": fmt_q(&boson),
                    "fermion": fmt_q(&fermion),
                    "boson_oracle": fmt_q(&boson_oracle),
                    "fermion_oracle": fmt_q(&fermion_oracle),
                }),
                format!(
                    "voalab anomaly-check --rho '{}'",
                    serde_json::to_string(&rho).expect("ints")
                ),
            )
        }
        Job::Lattice(n) => {
            let mut failures = Vec::new();
            let mut count = 0usize;
            for m in -2 * (*n as i64)..=2 * (*n as i64) {
                for lam in lattice::enumerate_p(m, *n, 2) {
                    count += 1;
                    let ok = lattice::decompose_weight(&lam).and_then(|d| {
                        Ok(lattice::class_of_lambda0(&d.lambda0, *n)?
                            == lattice::class_of_lambda_vee(&d.lambda_vee, *n)?)
                    });
                    if !matches!(ok, Ok(true)) {
                        failures.push(lam);
                    }
                }
            }
            let disc = lattice::discriminant_group(&lattice::cartan_lattice(*n, true)?)?;
            let disc_ok = disc == vec![num_bigint::BigInt::from(*n)];
            verdict(
                failures.is_empty() && disc_ok,
                json!({
                    "weights": count,
                    "failures": failures,
                    "discriminant": disc.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                }),
                format!("voalab --n {n} discriminant"),
            )
        }
    })
}

fn singular_detail(g: &LieSuperalgebra, r: &crate::affine::SingularCheck) -> Value {
    json!({
        "singular": r.singular,
        "degree": r.degree,
        "modes_checked": r.modes_checked,
        "witness": r.witness.as_ref().map(|(m, s)| json!({
            "mode": format_mode(g, m),
            "image": format_state(g, s),
        })),
    })
}

/// Dimensions, U22 vanishing on samples, V12 non-vanishing at the
/// semisimple point.
pub fn sheet_check(n: usize, samples: usize, seed: u64) -> Result<(bool, Value)> {
    let d = geometry::minor_decomposition(n)?;
    let zs: Vec<geometry::SheetSample> = (0..samples as u64)
        .into_par_iter()
        .map(|k| geometry::sample_sheet_element(n, seed, k))
        .collect::<Result<_>>()?;
    let decompositions_ok = zs.iter().all(|s| s.decomposition_holds());
    let nonvanishing: Vec<usize> = d
        .u22
        .par_iter()
        .enumerate()
        .filter(|(_, f)| zs.iter().any(|s| !geometry::eval_form(f, &s.z).is_zero()))
        .map(|(i, _)| i)
        .collect();
    let ss = geometry::semisimple_point(n);
    let v12_values: Vec<String> = d.v12.iter().map(|f| fmt_q(&geometry::eval_form(f, &ss))).collect();
    let v12_nonzero = v12_values.iter().any(|v| v != "0");
    let c = n * (n - 1) / 2;
    let dims_ok = d.dim_u22 == c * c - n * n && d.dim_v12 == n * n && d.direct;
    let ok = dims_ok && nonvanishing.is_empty() && v12_nonzero && d.g_in_u22 && decompositions_ok;
    Ok((
        ok,
        json!({
            "dim_u22": d.dim_u22,
            "dim_v12": d.dim_v12,
            "direct": d.direct,
            "g_in_u22": d.g_in_u22,
            "samples": samples,
            "u22_nonvanishing": nonvanishing,
            "v12_at_semisimple_e11": v12_values.first(),
            "v12_nonzero_at_semisimple": v12_nonzero,
            "sample_decompositions_hold": decompositions_ok,
        }),
    ))
}

pub fn run_suite(cfg: &SuiteConfig) -> Report {
    let jobs = jobs(cfg);
    let mut checks: Vec<CheckResult> = jobs
        .par_iter()
        .map(|job| {
            let t0 = Instant::now();
            let out = run_job(job, cfg).unwrap_or_else(|e| Outcome {
                status: Status::Fail,
                detail: json!({ "error": e.to_string() }),
                reproduce: Some(format!("voalab suite --n-min {0} --n-max {0}", cfg.default_n_range[0])),
            });
            CheckResult {
                key: job.key(),
                criterion: job.criterion(),
                status: out.status,
                detail: out.detail,
                reproduce: out.reproduce,
                millis: cfg.timing.then(|| t0.elapsed().as_millis()),
            }
        })
        .collect();
    checks.sort_by(|a, b| a.key.cmp(&b.key));
    let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
    Report {
        command: "suite".into(),
        config: cfg.clone(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        skipped: count(Status::Skip),
        checks,
    }
}

/// Levels of the boson and fermion halves of `J^rho` with itself.
pub fn sublevels(rho: &[Vec<i64>]) -> Result<Vec<(String, String)>> {
    Ok(current_from_weights(rho)?
        .iter()
        .map(|j| {
            (
                fmt_q(&freefield::ope_level(&j.boson_part(), &j.boson_part())),
                fmt_q(&freefield::ope_level(&j.fermion_part(), &j.fermion_part())),
            )
        })
        .collect())
}
