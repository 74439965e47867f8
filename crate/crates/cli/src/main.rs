use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use toric_mmp::json::{
    extraction_to_json, fan_to_json, flop_step_to_json, group_from_json, list_to_json,
    mmp_step_to_json, pair_from_json, pair_to_json, report_to_json, vec_to_json,
};
use toric_mmp::mckay::{
    case_a_components, hj_resolution, mckay_batch, mckay_pipeline, McKayReport,
};
use toric_mmp::mmp::{flop_decompose, relative_mmp, terminalize};
use toric_mmp::num::{fmt_vec, LatticeVector, Rat};
use toric_mmp::pair::{is_canonical, is_terminal, k_compare, psi_heights, stack_rank, ToricPair};
use toric_mmp::wall::is_nef;
use toric_mmp::Error;

#[derive(Parser)]
#[command(
    name = "toric-mmp",
    version,
    about = "Exact toric MMP: flops, terminalization, MMP and McKay ledgers"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Step budget for the iterative algorithms.
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    /// The support of the input fan.
    Support,
    /// The cone over the coordinate axes of the ambient space.
    Orthant,
}

#[derive(Subcommand)]
enum Command {
    /// Validity, completeness, singularity class and nefness of K + B.
    Check { pair: PathBuf },
    /// Extract divisors until the pair is terminal.
    Terminalize { pair: PathBuf },
    /// Run the K + B MMP over a base.
    Mmp {
        pair: PathBuf,
        #[arg(long, value_enum, default_value = "support")]
        base: Base,
    },
    /// McKay pipeline for an abelian group, or for every group file in a directory.
    Mckay {
        group: Option<PathBuf>,
        #[arg(long, conflicts_with = "group")]
        batch: Option<PathBuf>,
    },
    /// Decompose X ⇢ Y into flops.
    FlopDecompose { x: PathBuf, y: PathBuf },
    /// Hirzebruch-Jung chain of (1/r)(1, a).
    Hj { r: u64, a: u64 },
    /// Stack rank of a pair.
    Rank { pair: PathBuf },
    /// Admissible components for the coefficient change 1 - 1/r to 1 - s/r.
    CaseA { r: u64, s: u64 },
    /// Seeded K-equivalent pair related by random flips.
    GenFlopPair {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    /// Unreadable or malformed input: exit 2.
    Input(String),
    /// A well-formed question with a negative or failed answer: exit 1.
    Analysis(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_)
            | Error::InvalidFan(_)
            | Error::RankDeficient
            | Error::DependentRays
            | Error::ZeroVector
            | Error::DuplicateRay(_) => Failure::Input(e.to_string()),
            other => Failure::Analysis(other.to_string()),
        }
    }
}

struct Output {
    json: Value,
    text: String,
    /// Exit 1 even though the output is complete.
    negative: bool,
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_pair(path: &Path) -> Result<ToricPair, Failure> {
    pair_from_json(&read_json(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn orthant(pair: &ToricPair) -> Result<Vec<LatticeVector>, Failure> {
    let n = pair.dim();
    (0..n)
        .map(|i| {
            let e: Vec<Rat> = (0..n)
                .map(|j| Rat::from_integer(((i == j) as i64).into()))
                .collect();
            pair.lattice
                .rational_coords_of(&e)
                .and_then(|c| toric_mmp::num::primitive_of_rational(&c))
                .ok_or_else(|| Failure::Input("lattice has no coordinate axes".into()))
        })
        .collect()
}

fn text_pair(p: &ToricPair) -> String {
    let mut s = format!(
        "{} rays, {} cones\n",
        p.fan.rays().len(),
        p.fan.cones().len()
    );
    for (v, d) in p.fan.rays().iter().zip(&p.coeffs) {
        s += &format!("  ray {} coeff {d}\n", fmt_vec(v));
    }
    for c in p.fan.cones() {
        s += &format!("  cone {c:?}\n");
    }
    s
}

fn check(pair: &ToricPair) -> Result<Output, Failure> {
    let psi: Vec<Rat> = psi_heights(pair).into_iter().map(|x| -x).collect();
    let terminal = is_terminal(pair)?;
    let canonical = is_canonical(pair)?;
    let nef = is_nef(&pair.fan, &psi)?;
    let complete = pair.fan.is_complete();
    let j = json!({"valid": true, "complete": complete, "terminal": terminal, "canonical": canonical, "nef": nef});
    let text = format!(
        "valid: true\ncomplete: {complete}\nterminal: {terminal}\ncanonical: {canonical}\nnef(K+B) over support: {nef}\n"
    );
    Ok(Output {
        json: j,
        text,
        negative: false,
    })
}

fn report_text(r: &McKayReport) -> String {
    let c = &r.checks;
    let mut s = format!(
        "|G| = {}, rank X = {}, rank Y = {}, ledger total = {}\n",
        c.order, c.rank_x, c.rank_y, c.ledger_total
    );
    for e in &r.ledger {
        let centre: Vec<String> = e.center.iter().map(|v| fmt_vec(v)).collect();
        s += &format!(
            "  {:?} at <{}>: rank {}\n",
            e.kind,
            centre.join(" "),
            e.rank_delta
        );
    }
    s += &format!(
        "checks: rank(X) = |G| {}, telescopes {}, nonnegative {}, case (a) {}, sl {}, all pass {}\n",
        c.rank_x_is_order,
        c.telescopes,
        c.deltas_nonnegative,
        c.case_a_matches,
        c.sl,
        c.all_pass()
    );
    s
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let max = cli.max_steps;
    match &cli.command {
        Command::Check { pair } => match pair_from_json(&read_json(pair)?) {
            Ok(p) => check(&p),
            Err(e) => Ok(Output {
                json: json!({"valid": false, "reason": e.to_string()}),
                text: format!("valid: false ({e})\n"),
                negative: true,
            }),
        },
        Command::Terminalize { pair } => {
            let p = read_pair(pair)?;
            let (t, steps) = terminalize(&p, max)?;
            let mut text = format!("{} extractions\n", steps.len());
            for s in &steps {
                text += &format!("  extract {} (psi {})\n", fmt_vec(&s.ray), s.psi_before);
            }
            text += &text_pair(&t);
            Ok(Output {
                json: json!({"steps": list_to_json(&steps, extraction_to_json), "pair": pair_to_json(&t)}),
                text,
                negative: false,
            })
        }
        Command::Mmp { pair, base } => {
            let p = read_pair(pair)?;
            let b = match base {
                Base::Support => None,
                Base::Orthant => Some(orthant(&p)?),
            };
            let (y, steps) = relative_mmp(&p, b.as_deref(), max)?;
            let mut text = format!("{} steps\n", steps.len());
            for s in &steps {
                text += &format!("  {:?} defect {}\n", s.kind, s.defect);
            }
            text += &text_pair(&y);
            Ok(Output {
                json: json!({"steps": list_to_json(&steps, mmp_step_to_json), "pair": pair_to_json(&y)}),
                text,
                negative: false,
            })
        }
        Command::Mckay { group, batch } => match (group, batch) {
            (Some(g), None) => {
                let g =
                    group_from_json(&read_json(g)?).map_err(|e| Failure::Input(e.to_string()))?;
                let r = mckay_pipeline(&g, max)?;
                Ok(Output {
                    json: report_to_json(&r),
                    text: report_text(&r),
                    negative: !r.checks.all_pass(),
                })
            }
            (None, Some(dir)) => {
                let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
                    .map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().is_some_and(|x| x == "json"))
                    .collect();
                files.sort();
                let groups = files
                    .iter()
                    .map(|f| {
                        group_from_json(&read_json(f)?)
                            .map_err(|e| Failure::Input(format!("{}: {e}", f.display())))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let mut rows = Vec::new();
                let mut text = String::new();
                let mut negative = false;
                for (f, r) in files.iter().zip(mckay_batch(&groups, max)) {
                    let name = f
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    match r {
                        Ok(r) => {
                            negative |= !r.checks.all_pass();
                            text += &format!(
                                "{name}: |G| = {}, all pass {}\n",
                                r.checks.order,
                                r.checks.all_pass()
                            );
                            rows.push(json!({"file": name, "report": report_to_json(&r)}));
                        }
                        Err(e) => {
                            negative = true;
                            text += &format!("{name}: error: {e}\n");
                            rows.push(json!({"file": name, "error": e.to_string()}));
                        }
                    }
                }
                Ok(Output {
                    json: Value::Array(rows),
                    text,
                    negative,
                })
            }
            _ => Err(Failure::Input("give a group file or --batch DIR".into())),
        },
        Command::FlopDecompose { x, y } => {
            let (x, y) = (read_pair(x)?, read_pair(y)?);
            match flop_decompose(&x, &y, None, None, max) {
                Ok(steps) => {
                    let mut text = format!("{} flops\n", steps.len());
                    for s in &steps {
                        let rays: Vec<String> = s
                            .wall
                            .circuit
                            .iter()
                            .map(|(v, a)| format!("{a}·{}", fmt_vec(v)))
                            .collect();
                        text += &format!("  t = {}: {}\n", s.event_time, rays.join(" + "));
                    }
                    Ok(Output {
                        json: json!({"k_equivalent": true, "steps": list_to_json(&steps, flop_step_to_json)}),
                        text,
                        negative: false,
                    })
                }
                Err(Error::NotKEquivalent(msg)) => {
                    let cmp = k_compare(&x, &y).ok();
                    let text = format!("not K-equivalent: {msg}\ncomparison: {cmp:?}\n");
                    Ok(Output {
                        json: json!({"k_equivalent": false, "reason": msg, "comparison": cmp}),
                        text,
                        negative: true,
                    })
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Hj { r, a } => {
            let (p, chain) = hj_resolution(*r, *a)?;
            let rays: Vec<Value> = p.fan.rays().iter().map(|v| vec_to_json(v)).collect();
            let text = format!(
                "chain: {}\n",
                chain
                    .iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            Ok(Output {
                json: json!({"chain": chain, "rays": rays, "fan": fan_to_json(&p.fan)}),
                text,
                negative: false,
            })
        }
        Command::Rank { pair } => {
            let rank = stack_rank(&read_pair(pair)?)?;
            Ok(Output {
                json: json!({"stack_rank": toric_mmp::json::int_to_json(&rank)}),
                text: format!("{rank}\n"),
                negative: false,
            })
        }
        Command::CaseA { r, s } => {
            let c = case_a_components(*r, *s)?;
            let text = format!(
                "{}\n",
                c.iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            Ok(Output {
                json: json!({"components": c}),
                text,
                negative: false,
            })
        }
        Command::GenFlopPair { seed } => {
            let c = toric_mmp::gen::flop_case(*seed)?;
            let text = format!(
                "seed {seed}: {} random flips\nX: {}Y: {}",
                c.flips,
                text_pair(&c.x),
                text_pair(&c.y)
            );
            Ok(Output {
                json: json!({"seed": seed, "flips": c.flips, "x": pair_to_json(&c.x), "y": pair_to_json(&c.y)}),
                text,
                negative: false,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(u8::from(out.negative))
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Analysis(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
