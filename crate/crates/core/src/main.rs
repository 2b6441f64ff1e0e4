use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::process::ExitCode;

use voalab::affine::{format_mode, format_state, format_word, is_singular, vectors, ModeCalculus, State};
use voalab::error::{Error, Result};
use voalab::liesuper::{check_structure, matrix_oracle_mismatches, LieSuperalgebra};
use voalab::rational::{fmt_q, parse_q, Q};
use voalab::suite::{fault_site, run_suite, sheet_check, SuiteConfig};
use voalab::{freefield, geometry, lattice, parse, zhu};

#[derive(Parser, Debug)]
#[command(
    name = "voalab",
    version,
    about = "Exact checks for the level-one psl(n|n) vertex algebra"
)]
struct Cli {
    /// Rank parameter.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// JSON config {default_n_range, seed, sample_count, resource_limits}.
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgebraKind {
    Sl,
    Psl,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum NamedVector {
    Chi,
    ChiPlus,
    ChiMinus,
    Vacuum,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify antisymmetry, Jacobi and form invariance of a structure table.
    StructureCheck {
        #[arg(long, value_enum, default_value_t = AlgebraKind::Psl)]
        algebra: AlgebraKind,
        /// Flip the sign of one bracket before checking.
        #[arg(long)]
        inject_fault: bool,
        /// Also print the full table.
        #[arg(long)]
        dump: bool,
    },
    /// Test whether a state is killed by the positive affine part.
    SingularCheck {
        #[arg(long)]
        state: Option<String>,
        #[arg(long, value_enum)]
        vector: Option<NamedVector>,
        /// u-vector indices "i,k,j,l".
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        level: Option<String>,
        #[arg(long)]
        inject_fault: bool,
    },
    /// Apply an operator word (right to left) to a state.
    ApplyWord {
        #[arg(long)]
        word: String,
        #[arg(long)]
        state: Option<String>,
        #[arg(long, value_enum)]
        vector: Option<NamedVector>,
        /// u-vector indices "i,k,j,l".
        #[arg(long)]
        u: Option<String>,
        /// Compare the result with a named vector up to a scalar.
        #[arg(long, value_enum)]
        expect: Option<NamedVector>,
        #[arg(long)]
        level: Option<String>,
        #[arg(long)]
        inject_fault: bool,
    },
    /// Image of a state in the C2 algebra and its reduction.
    C2Reduce {
        #[arg(long)]
        state: Option<String>,
        #[arg(long, value_enum)]
        vector: Option<NamedVector>,
        /// u-vector indices "i,k,j,l".
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        level: Option<String>,
    },
    /// Reduce every u-vector and compare with the 2x2 minors.
    MinorCover,
    /// Rank, minimal-orbit and sheet membership of a traceless matrix.
    OrbitMember {
        #[arg(long)]
        matrix: String,
    },
    /// Seeded sheet elements.
    SheetSample {
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Minor decomposition and vanishing of U22 on sheet samples.
    SheetVanish {
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Level matrix of the currents of an integer weight matrix.
    AnomalyCheck {
        #[arg(long)]
        rho: String,
    },
    /// Split a weight into lambda0, lambda_vee and its class.
    LatticeDecompose {
        #[arg(long)]
        lambda: String,
    },
    /// Invariant factors of the discriminant group of the root lattice.
    Discriminant {
        /// Use the negated Cartan matrix.
        #[arg(long)]
        negative: bool,
    },
    /// Run every check over a rank range.
    Suite {
        #[arg(long)]
        n_min: Option<usize>,
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        inject_fault: bool,
        /// Record per-check wall-clock time (breaks byte-identical output).
        #[arg(long)]
        timing: bool,
    },
}

fn algebra(n: usize, fault: bool) -> Result<LieSuperalgebra> {
    let g = LieSuperalgebra::psl(n)?;
    Ok(if fault {
        let (a, b) = fault_site(&g);
        g.with_corrupted_bracket(a, b)
    } else {
        g
    })
}

fn level_of(text: &Option<String>) -> Result<Q> {
    text.as_deref()
        .map(parse_q)
        .unwrap_or_else(|| Ok(Q::from_integer(1.into())))
}

fn named(calc: &ModeCalculus, v: NamedVector) -> Result<State> {
    match v {
        NamedVector::Chi => vectors::chi(calc),
        NamedVector::ChiPlus => vectors::chi_plus(calc),
        NamedVector::ChiMinus => vectors::chi_minus(calc),
        NamedVector::Vacuum => Ok(calc.vacuum()),
    }
}

fn input_state(
    calc: &ModeCalculus,
    state: &Option<String>,
    vector: Option<NamedVector>,
    u: &Option<String>,
) -> Result<State> {
    match (state, vector, u) {
        (Some(s), None, None) => parse::parse_state(calc.algebra(), calc.level(), s),
        (None, Some(v), None) => named(calc, v),
        (None, None, Some(idx)) => {
            let v: Vec<usize> = idx
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("expected i,k,j,l, got {idx:?}"),
                })?;
            match v.as_slice() {
                [i, k, j, l] => vectors::u_vector(calc, *i, *k, *j, *l),
                _ => Err(Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("expected four indices, got {idx:?}"),
                }),
            }
        }
        _ => Err(Error::Precondition("give exactly one of --state, --vector, --u".into())),
    }
}

fn load_config(cli: &Cli) -> Result<SuiteConfig> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            SuiteConfig::from_json(&text)?
        }
        None => SuiteConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

/// `(report, success)`.
fn run(cli: &Cli) -> Result<(Value, bool)> {
    let n = cli.n;
    let cfg = load_config(cli)?;
    let seed = cfg.seed;
    Ok(match &cli.cmd {
        Command::StructureCheck {
            algebra: kind,
            inject_fault,
            dump,
        } => {
            let g = match kind {
                AlgebraKind::Sl => {
                    let g = LieSuperalgebra::sl(n)?;
                    if *inject_fault {
                        let (a, b) = fault_site(&g);
                        g.with_corrupted_bracket(a, b)
                    } else {
                        g
                    }
                }
                AlgebraKind::Psl => algebra(n, *inject_fault)?,
            };
            let r = check_structure(&g);
            let oracle = matrix_oracle_mismatches(&g);
            let ok = r.passed && oracle.is_empty();
            let mut v = json!({
                "command": "structure-check",
                "algebra": g.name(),
                "dim": r.dim,
                "passed": ok,
                "violations": r.violations,
                "oracle_mismatches": oracle,
            });
            if *dump {
                v["table"] = g.to_json();
            }
            (v, ok)
        }
        Command::SingularCheck {
            state,
            vector,
            u,
            level,
            inject_fault,
        } => {
            let g = algebra(n, *inject_fault)?;
            let calc = ModeCalculus::new(&g, level_of(level)?);
            let s = input_state(&calc, state, *vector, u)?;
            let r = is_singular(&g, &s)?;
            let v = json!({
                "command": "singular-check",
                "input": format_state(&g, &s),
                "singular": r.singular,
                "degree": r.degree,
                "modes_checked": r.modes_checked,
                "failing_modes": r.failing_modes.iter().map(|m| format_mode(&g, m)).collect::<Vec<_>>(),
                "witness": r.witness.as_ref().map(|(m, img)| json!({
                    "mode": format_mode(&g, m),
                    "image": format_state(&g, img),
                })),
            });
            (v, true)
        }
        Command::ApplyWord {
            word,
            state,
            vector,
            u,
            expect,
            level,
            inject_fault,
        } => {
            let g = algebra(n, *inject_fault)?;
            let calc = ModeCalculus::new(&g, level_of(level)?);
            let s = input_state(&calc, state, *vector, u)?;
            let w = parse::parse_word(&g, word)?;
            let img = calc.apply_word(&w, &s);
            let mut v = json!({
                "command": "apply-word",
                "input": format_state(&g, &s),
                "word": format_word(&g, &w),
                "result_state": format_state(&g, &img),
                "is_zero": img.is_zero(),
            });
            let mut ok = true;
            if let Some(e) = expect {
                let target = named(&calc, *e)?;
                let scalar = img.proportionality(&target);
                ok = scalar.is_some();
                v["expected"] = json!(format_state(&g, &target));
                v["scalar"] = json!(scalar.as_ref().map(fmt_q));
            }
            (v, ok)
        }
        Command::C2Reduce {
            state,
            vector,
            u,
            level,
        } => {
            let g = algebra(n, false)?;
            let calc = ModeCalculus::new(&g, level_of(level)?);
            let s = input_state(&calc, state, *vector, u)?;
            let p = zhu::psi(&g, &s);
            let r = zhu::psi_reduced(&g, &s);
            (
                json!({
                    "command": "c2-reduce",
                    "input": format_state(&g, &s),
                    "psi": p.format(&g),
                    "psi_reduced": zhu::format_even(&r),
                    "psi_reduced_bottom_block": zhu::format_even(&zhu::restrict_to_bottom(&g, &r)),
                }),
                true,
            )
        }
        Command::MinorCover => {
            let r = zhu::minor_cover_check(n)?;
            let ok = r.covered;
            let mut v = serde_json::to_value(&r).expect("report serializes");
            v["command"] = json!("minor-cover");
            (v, ok)
        }
        Command::OrbitMember { matrix } => {
            let z = parse::parse_matrix(matrix)?;
            let in_orbit = geometry::in_min_orbit_closure(&z)?;
            let by_minors = geometry::in_min_orbit_closure_by_minors(&z)?;
            let in_sheet = geometry::in_sheet_closure(&z)?;
            (
                json!({
                    "command": "orbit-member",
                    "matrix": z,
                    "rank": z.rank(),
                    "in_min_orbit_closure": in_orbit,
                    "minors_vanish": by_minors,
                    "in_sheet_closure": in_sheet,
                    "sheet_shift": geometry::sheet_shift(&z).as_ref().map(fmt_q),
                }),
                in_orbit == by_minors,
            )
        }
        Command::SheetSample { count } => {
            let samples: Vec<Value> = (0..*count as u64)
                .map(|k| {
                    geometry::sample_sheet_element(n, seed, k).map(|s| {
                        json!({
                            "index": k,
                            "y": s.y,
                            "z": s.z.to_strings(),
                            "shift": fmt_q(&s.shift),
                            "decomposition_holds": s.decomposition_holds(),
                        })
                    })
                })
                .collect::<Result<_>>()?;
            (
                json!({ "command": "sheet-sample", "n": n, "seed": seed, "samples": samples }),
                true,
            )
        }
        Command::SheetVanish { samples } => {
            let count = samples.unwrap_or(cfg.sample_count);
            let (ok, mut detail) = sheet_check(n, count, seed)?;
            detail["command"] = json!("sheet-vanish");
            detail["n"] = json!(n);
            detail["seed"] = json!(seed);
            detail["passed"] = json!(ok);
            (detail, ok)
        }
        Command::AnomalyCheck { rho } => {
            let m = parse::parse_int_matrix(rho)?;
            let levels = freefield::level_matrix(&m)?;
            let currents = freefield::current_from_weights(&m)?;
            let oracle: Vec<Vec<String>> = currents
                .iter()
                .map(|a| currents.iter().map(|b| fmt_q(&freefield::fock::level(a, b))).collect())
                .collect();
            let ok = levels.is_zero();
            (
                json!({
                    "command": "anomaly-check",
                    "rho": m,
                    "level_matrix": levels.to_strings(),
                    "mode_oracle": oracle,
                    "is_zero": ok,
                }),
                true,
            )
        }
        Command::LatticeDecompose { lambda } => {
            let lam = parse::parse_weight(lambda)?;
            let k = lam.len();
            let d = lattice::decompose_weight(&lam)?;
            let c0 = lattice::class_of_lambda0(&d.lambda0, k)?;
            let cv = lattice::class_of_lambda_vee(&d.lambda_vee, k)?;
            let mut v = d.to_json();
            v["command"] = json!("lattice-decompose");
            v["lambda"] = json!(lam);
            v["class_lambda0"] = json!(c0);
            v["class_lambda_vee"] = json!(cv);
            (v, c0 == cv)
        }
        Command::Discriminant { negative } => {
            let l = lattice::cartan_lattice(n, !negative)?;
            let f = lattice::discriminant_group(&l)?;
            (
                json!({
                    "command": "discriminant",
                    "n": n,
                    "gram": l.gram.to_strings(),
                    "invariant_factors": f.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                }),
                true,
            )
        }
        Command::Suite {
            n_min,
            n_max,
            samples,
            inject_fault,
            timing,
        } => {
            let mut cfg = cfg;
            if let Some(lo) = n_min {
                cfg.default_n_range[0] = *lo;
            }
            if let Some(hi) = n_max {
                cfg.default_n_range[1] = *hi;
            }
            if let Some(s) = samples {
                cfg.sample_count = *s;
            }
            cfg.inject_fault |= inject_fault;
            cfg.timing |= timing;
            let r = run_suite(&cfg);
            let ok = r.all_passed();
            (serde_json::to_value(&r).expect("report serializes"), ok)
        }
    })
}

fn render_text(v: &Value, prefix: &str, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_text(x, &p, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                render_text(x, &format!("{prefix}[{i}]"), out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (body, code) = match run(&cli) {
        Ok((v, ok)) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&v).expect("json") + "\n",
                Format::Text => {
                    let mut s = String::new();
                    render_text(&v, "", &mut s);
                    s
                }
            };
            (text, if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    code
}
