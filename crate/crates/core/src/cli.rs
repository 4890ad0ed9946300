//! Command-line front end. Exit codes: 0 success, 1 input error, 2 invariant
//! or falsification abort.

use std::fs;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::report::{self, EisRequest};
use crate::selftest;
use crate::series::{CurveDatum, LocalFactor, LocalSystemSpec};

#[derive(Parser, Debug)]
#[command(name = "metaeis", version, about = "Metaplectic dual groups and decategorified Eisenstein series")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct GroupArgs {
    /// Cartan label such as A1, B3, G2.
    #[arg(long = "type")]
    pub label: String,
    #[arg(long, default_value_t = 1)]
    pub n: i64,
}

#[derive(Args, Debug, Clone)]
pub struct LeviArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// 1-based Levi nodes, comma separated; empty for the torus.
    #[arg(long, default_value = "")]
    pub levi: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lambda_sharp, dual root datum, cocenter and the xi map.
    DualGroup {
        #[command(flatten)]
        group: GroupArgs,
        /// Evaluate xi on this Lambda_sharp vector.
        #[arg(long)]
        nu: Option<String>,
        /// 1-based reflection word for the twisted Weyl shift.
        #[arg(long)]
        weyl: Option<String>,
    },
    /// Levi quotient data, kappa_M and component vanishing.
    Levi {
        #[command(flatten)]
        levi: LeviArgs,
        #[arg(long)]
        theta: Option<String>,
    },
    /// Character of V^lambda and its branching to the Levi.
    Branch {
        #[command(flatten)]
        levi: LeviArgs,
        #[arg(long)]
        lambda: String,
    },
    /// The nilradical, its cocenter classes and J.
    Nilradical {
        #[command(flatten)]
        levi: LeviArgs,
    },
    /// Graded pieces of Sym of the nilradical at theta.
    Sym {
        #[command(flatten)]
        levi: LeviArgs,
        #[arg(long)]
        theta: String,
        #[arg(long, default_value_t = 0)]
        m: u32,
    },
    /// IC stalk polynomial on a decomposition "theta:mult;theta:mult".
    Stalk {
        #[command(flatten)]
        levi: LeviArgs,
        #[arg(long, default_value = "")]
        parts: String,
    },
    /// Degree bound and top module on the Zastava space.
    Zastava {
        #[command(flatten)]
        levi: LeviArgs,
        #[arg(long)]
        theta: String,
    },
    /// Compare the product and sum forms of Eis_mod on a window.
    EisSeries {
        #[arg(long = "type", default_value = "A1")]
        label: String,
        #[arg(long)]
        n: i64,
        /// Curve JSON file; defaults to the projective line over F_q.
        #[arg(long)]
        curve: Option<String>,
        #[arg(long, default_value_t = 2)]
        q: i64,
        /// Local-system JSON file; defaults to trivial everywhere.
        #[arg(long)]
        local_systems: Option<String>,
        /// Numeric Eis' table {"[k]": "a/b"}; placeholders otherwise.
        #[arg(long)]
        eis_table: Option<String>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, env = "METAEIS_TRUNCATION", default_value_t = 8)]
        height: i64,
    },
    /// Constant term K_{d,d1} for SL_2.
    ConstantTerm {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        d1: i64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 0)]
        g: u32,
        /// "trivial", "nontrivial", or a local-system JSON file.
        #[arg(long)]
        local_system: Option<String>,
    },
    /// The SL_2 theta-sheaf module.
    Sl2 {
        #[command(subcommand)]
        op: Sl2Command,
    },
    /// Run every invariant suite.
    Selftest,
}

#[derive(Subcommand, Debug)]
pub enum Sl2Command {
    /// Apply H^m to cells "k:shift,k:shift".
    Hecke {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        cells: String,
    },
    /// The eigen-property of Aut.
    Eigen {
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Cell expansion of Eis^d.
    Eis {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        d: i64,
        #[arg(long)]
        nontrivial: bool,
        #[arg(long, env = "METAEIS_TRUNCATION", default_value_t = 8)]
        k_max: u32,
    },
    /// Stalks of IC_d on deeper strata.
    Stalks {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        d: Option<i64>,
        #[arg(long)]
        r: Option<i64>,
        #[arg(long, default_value_t = 12)]
        r_max: i64,
    },
    /// The equivalence between modules for n and m of equal parity.
    Transport {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        cells: String,
    },
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {path}: {e}")))
}

fn opt_vec(s: &Option<String>) -> Result<Option<Vec<i64>>> {
    s.as_deref().map(report::parse_vec).transpose()
}

/// Runs a parsed command and returns the enveloped report.
pub fn run(command: &Command) -> Result<Value> {
    let wrap = |name: &str, g: &GroupArgs, v: Value| {
        report::envelope(name, Some(&g.label), Some(g.n), v)
    };
    Ok(match command {
        Command::DualGroup { group, nu, weyl } => {
            let word: Option<Vec<usize>> = match weyl {
                None => None,
                Some(w) => Some(
                    report::parse_nodes(w)?,
                ),
            };
            let v = report::dual_group(&group.label, group.n, opt_vec(nu)?.as_deref(), word.as_deref())?;
            wrap("dual-group", group, v)
        }
        Command::Levi { levi, theta } => {
            let v = report::levi(&levi.group.label, levi.group.n, &levi.levi, opt_vec(theta)?.as_deref())?;
            wrap("levi", &levi.group, v)
        }
        Command::Branch { levi, lambda } => {
            let v = report::branch(&levi.group.label, levi.group.n, &levi.levi, &report::parse_vec(lambda)?)?;
            wrap("branch", &levi.group, v)
        }
        Command::Nilradical { levi } => {
            let v = report::nilradical(&levi.group.label, levi.group.n, &levi.levi)?;
            wrap("nilradical", &levi.group, v)
        }
        Command::Sym { levi, theta, m } => {
            let v = report::sym(&levi.group.label, levi.group.n, &levi.levi, &report::parse_vec(theta)?, *m)?;
            wrap("sym", &levi.group, v)
        }
        Command::Stalk { levi, parts } => {
            let v = report::stalk(&levi.group.label, levi.group.n, &levi.levi, parts)?;
            wrap("stalk", &levi.group, v)
        }
        Command::Zastava { levi, theta } => {
            let v = report::zastava(&levi.group.label, levi.group.n, &levi.levi, &report::parse_vec(theta)?)?;
            wrap("zastava", &levi.group, v)
        }
        Command::EisSeries { label, n, curve, q, local_systems, eis_table, base, height } => {
            let curve = match curve {
                Some(p) => CurveDatum::from_json(&read(p)?)?,
                None => CurveDatum::projective_line(*q)?,
            };
            let spec = match local_systems {
                Some(p) => LocalSystemSpec::from_json(&read(p)?)?,
                None => LocalSystemSpec::all_trivial(),
            };
            let table = eis_table.as_deref().map(|p| read(p).and_then(|t| report::parse_eis_table(&t))).transpose()?;
            let rank = report::datum(label, *n)?.rank();
            let req = EisRequest {
                label,
                n: *n,
                curve,
                spec,
                base: opt_vec(base)?.unwrap_or_else(|| vec![0; rank]),
                height: *height,
                table,
            };
            report::envelope("eis-series", Some(label), Some(*n), report::eis_series(&req)?)
        }
        Command::ConstantTerm { d, d1, n, g, local_system } => {
            let factor = match local_system.as_deref() {
                None => None,
                Some("trivial") => Some(LocalFactor::trivial()),
                Some("nontrivial") => {
                    if *g == 0 {
                        return Err(Error::input("genus 0 admits only the trivial local system"));
                    }
                    let mut numerator = vec![0; 2 * *g as usize - 1];
                    numerator[0] = 1;
                    Some(LocalFactor::Nontrivial { numerator })
                }
                Some(path) => {
                    let spec = LocalSystemSpec::from_json(&read(path)?)?;
                    Some(spec.factor(&[*n], Some(&[*n]))?.clone())
                }
            };
            let v = report::constant_term_report(*d, *d1, *n, *g, factor.as_ref())?;
            report::envelope("constant-term", Some("A1"), Some(*n), v)
        }
        Command::Sl2 { op } => {
            let (name, n, v) = match op {
                Sl2Command::Hecke { n, m, cells } => ("sl2 hecke", *n, report::sl2_hecke(*n, *m, cells)?),
                Sl2Command::Eigen { n, m } => ("sl2 eigen", *n, report::sl2_eigen(*n, *m)?),
                Sl2Command::Eis { n, d, nontrivial, k_max } => {
                    ("sl2 eis", *n, report::sl2_eis(*n, *d, *nontrivial, *k_max)?)
                }
                Sl2Command::Stalks { n, d, r, r_max } => ("sl2 stalks", *n, report::sl2_stalks(*n, *d, *r, *r_max)?),
                Sl2Command::Transport { n, m, cells } => {
                    ("sl2 transport", *n, report::sl2_transport(*n, *m, cells)?)
                }
            };
            report::envelope(name, Some("A1"), Some(n), v)
        }
        Command::Selftest => {
            let summary = selftest::run_all();
            let v = serde_json::to_value(&summary).expect("summary serializes");
            if !summary.passed() {
                return Err(Error::invariant(format!(
                    "selftest failed: {}",
                    serde_json::to_string(&v).expect("json")
                )));
            }
            report::envelope("selftest", None, None, v)
        }
    })
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_invariant() {
        2
    } else {
        1
    }
}

/// Parses `args`, runs, and returns `(exit code, stdout, stderr)`.
pub fn main_with_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (1, String::new(), text) };
        }
    };
    let outcome = std::panic::catch_unwind(|| run(&cli.command)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "unknown panic".into());
        Err(Error::invariant(format!("internal abort: {msg}")))
    });
    match outcome {
        Ok(v) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&v).expect("json"),
                Format::Table => report::render_table(&v),
            };
            (0, text + "\n", String::new())
        }
        Err(e) => (exit_code(&e), String::new(), format!("error: {e}\n")),
    }
}
