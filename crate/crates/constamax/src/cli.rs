//! Command-line front end: construct families, certify parameters,
//! regenerate the published tables, and emit machine-readable reports.
//!
//! Exit codes: 0 success (possibly with undecided certificates), 2 usage or
//! precondition error, 3 regeneration mismatch against a listed table.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::aqecc::{aqsb_check, css_pair, derive_params, AqeccFamily, AqeccSerial};
use crate::blockcodes::{build_family, BlockFamily, CodeRecord};
use crate::convolutional::{build_conv_family, ConvFamilySpec, ConvRecord};
use crate::cosets::{longest_run, partition_orn, predict_partition, CongruenceClass, CosetProfile};
use crate::distance::{certify_code_mds, min_distance_exact};
use crate::field::ExtensionTower;
use crate::tables;
use crate::DEFAULT_BUDGET;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser)]
#[command(name = "constamax", version, about = "Exact constacyclic code workbench")]
pub struct Cli {
    /// Work budget in elementary field operations (overrides CONSTAMAX_BUDGET).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Alternative modulus table file (lines: p e c0 c1 ... ce).
    #[arg(long, global = true)]
    pub modulus_table: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
pub enum Command {
    /// Partition O_rn into q-ary cyclotomic cosets and check the class
    /// prediction against brute force.
    Cosets(CosetsArgs),
    /// Construct and certify one family instance.
    Build(BuildArgs),
    /// Regenerate a published table with per-row certification.
    Table(TableArgs),
}

#[derive(Args)]
pub struct CosetsArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub n: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args)]
pub struct BuildArgs {
    /// Family tag: mainclasI..mainclasV, mainclasIVAa/b, mainI..mainVIb,
    /// mainasyI..mainasyIV.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub i: Option<u64>,
    #[arg(long)]
    pub j: Option<u64>,
    #[arg(long)]
    pub c1: Option<u64>,
    #[arg(long)]
    pub c2: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Args)]
pub struct TableArgs {
    /// Which table: 1 (convolutional), 2 or 3 (asymmetric quantum).
    #[arg(long)]
    pub which: u32,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

pub fn run<W: Write>(cli: Cli, out: &mut W) -> i32 {
    if let Some(path) = &cli.modulus_table {
        match crate::field::ModulusTable::from_path(path) {
            Ok(table) => crate::field::set_table_override(table),
            Err(e) => {
                eprintln!("error: cannot load modulus table {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
    }
    let budget = cli
        .budget
        .or_else(|| std::env::var("CONSTAMAX_BUDGET").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_BUDGET);
    match cli.command {
        Command::Cosets(args) => cmd_cosets(args, out),
        Command::Build(args) => cmd_build(args, budget, out),
        Command::Table(args) => cmd_table(args, budget, out),
    }
}

// ---------------------------------------------------------------------------
// cosets
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CosetsReport {
    command: String,
    profile: CosetProfile,
    cosets: Vec<Vec<u64>>,
    lemma_supported: bool,
    predicted_matches: Option<bool>,
}

fn cmd_cosets<W: Write>(args: CosetsArgs, out: &mut W) -> i32 {
    let profile = match CosetProfile::new(args.q, args.r, args.n) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let partition = partition_orn(&profile);
    let supported = profile.class != CongruenceClass::Other;
    let predicted_matches = if supported {
        match predict_partition(&profile) {
            Ok(predicted) => Some(predicted == partition),
            Err(_) => Some(false),
        }
    } else {
        None
    };
    let report = CosetsReport {
        command: format!("cosets --q {} --r {} --n {}", args.q, args.r, args.n),
        profile,
        cosets: partition.cosets.iter().map(|c| c.elements.clone()).collect(),
        lemma_supported: supported,
        predicted_matches,
    };
    match args.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap()).unwrap(),
        Format::Csv | Format::Text => {
            writeln!(
                out,
                "profile q={} r={} n={} rn={} cofactor={} class={:?}",
                profile.q, profile.r, profile.n, profile.rn, profile.cofactor, profile.class
            )
            .unwrap();
            writeln!(out, "{} cosets:", report.cosets.len()).unwrap();
            for c in &report.cosets {
                writeln!(out, "  {c:?}").unwrap();
            }
            match report.predicted_matches {
                Some(true) => writeln!(out, "closed-form prediction matches brute force").unwrap(),
                Some(false) => writeln!(out, "PREDICTION MISMATCH").unwrap(),
                None => writeln!(out, "no closed-form prediction for this class").unwrap(),
            }
        }
    }
    if report.predicted_matches == Some(false) {
        return EXIT_MISMATCH;
    }
    EXIT_OK
}

// ---------------------------------------------------------------------------
// build
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CertSummary {
    name: String,
    method: String,
    value: String,
    work: u64,
    decided: bool,
}

fn cert_summary(name: &str, c: &crate::distance::DistanceCertificate) -> CertSummary {
    CertSummary {
        name: name.to_string(),
        method: format!("{:?}", c.method),
        value: match c.value {
            crate::distance::CertValue::Exact(d) => format!("= {d}"),
            crate::distance::CertValue::Interval { lower, upper } => format!("in [{lower}, {upper}]"),
        },
        work: c.work,
        decided: c.decided,
    }
}

fn need(opt: Option<u64>, what: &str) -> Result<u64, String> {
    opt.ok_or_else(|| format!("--{what} is required for this family"))
}

fn cmd_build<W: Write>(args: BuildArgs, budget: u64, out: &mut W) -> i32 {
    match build_dispatch(&args, budget) {
        Ok(report) => {
            emit_build_report(&report, args.format, out);
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind")]
enum BuildReport {
    Block {
        command: String,
        family: String,
        code: CodeRecord,
        parameters: String,
        certificates: Vec<CertSummary>,
        verdict: String,
    },
    Conv {
        command: String,
        family: String,
        conv: ConvRecord,
        parameters: String,
        certificates: Vec<CertSummary>,
        verdict: String,
    },
    Aqecc {
        command: String,
        family: String,
        record: AqeccSerial,
        parameters: String,
        verdict: String,
    },
}

fn build_dispatch(args: &BuildArgs, budget: u64) -> Result<BuildReport, String> {
    let fam = args.family.as_str();
    let q = args.q;
    let command = format!("build --family {fam} --q {q}");
    let block = |bf: BlockFamily, r: u64| -> Result<BuildReport, String> {
        let profile = bf.profile_for(q, r).map_err(|e| e.to_string())?;
        let tower = ExtensionTower::build_for(q, profile.r, profile.n).map_err(|e| e.to_string())?;
        let code = build_family(bf, &tower).map_err(|e| e.to_string())?;
        let claim = bf.claim(&profile).map_err(|e| e.to_string())?;
        let mut certs = Vec::new();
        let verdict;
        if claim.d_exact {
            let cert = certify_code_mds(&code, &tower, budget).map_err(|e| e.to_string())?;
            let ok = cert.value.exact() == Some(claim.d_lower);
            verdict = if ok {
                format!("MDS certified: [{}, {}, {}]_{}", claim.n, claim.k, claim.d_lower, q)
            } else if !cert.decided {
                "undecided at this budget".to_string()
            } else {
                "MDS claim FAILED".to_string()
            };
            certs.push(cert_summary("mds", &cert));
        } else {
            let cert = min_distance_exact(&code, &tower, budget).map_err(|e| e.to_string())?;
            let d = cert.value.exact();
            verdict = match d {
                Some(d) if d >= claim.d_lower => {
                    let defect = (claim.n - claim.k + 1) - d;
                    format!(
                        "exact d = {d} (claimed >= {}), Singleton defect {defect}",
                        claim.d_lower
                    )
                }
                Some(d) => format!("exact d = {d} BELOW the claimed {}", claim.d_lower),
                None => format!("d in [{}, {}] at this budget", cert.value.lower(), cert.value.upper()),
            };
            certs.push(cert_summary("min_distance", &cert));
        }
        Ok(BuildReport::Block {
            command: command.clone(),
            family: fam.to_string(),
            code: CodeRecord::of(&code),
            parameters: format!("[{}, {}, d >= {}]_{}", code.n(), code.dim(), code.designed_distance(), q),
            certificates: certs,
            verdict,
        })
    };
    let conv = |spec: ConvFamilySpec, r: u64, n: u64| -> Result<BuildReport, String> {
        let tower = ExtensionTower::build_for(q, r, n).map_err(|e| e.to_string())?;
        let code = build_conv_family(spec, &tower, budget).map_err(|e| e.to_string())?;
        let certs = vec![
            cert_summary("d(full)", &code.cert_full),
            cert_summary("d(head)", &code.cert_head),
            cert_summary("d(tail)", &code.cert_tail),
        ];
        let verdict = match (code.df_exact(), code.mds) {
            (Some(df), true) => format!("MDS certified, d_f = {df} = generalized Singleton {}", code.gsb),
            (Some(df), false) => format!("d_f = {df}, defect {} below bound {}", code.gsb - df, code.gsb),
            (None, _) => format!("d_f in [{}, {}]", code.df_lower, code.df_upper),
        };
        Ok(BuildReport::Conv {
            command: command.clone(),
            family: fam.to_string(),
            parameters: format!("({}, {}, {}; {}, {}..{})_{}", code.n, code.k, code.gamma, code.memory, code.df_lower, code.df_upper, q),
            conv: ConvRecord::of(&code),
            certificates: certs,
            verdict,
        })
    };
    let aq = |family: AqeccFamily, r: u64, n: u64| -> Result<BuildReport, String> {
        let i = need(args.i, "i")?;
        let j = need(args.j, "j")?;
        let tower = ExtensionTower::build_for(q, r, n).map_err(|e| e.to_string())?;
        let rec = css_pair(family, &tower, i, j).map_err(|e| e.to_string())?;
        let rec = derive_params(rec, &tower, budget).map_err(|e| e.to_string())?;
        let verdict = match (rec.dz, rec.dx) {
            (Some(dz), Some(dx)) => {
                let (mds, defect) = aqsb_check(rec.n, rec.k, dx, dz).map_err(|e| e.to_string())?;
                if mds {
                    format!("mds=true ({}, purity {:?})", rec.display(), rec.purity)
                } else {
                    format!("defect {defect} (purity {:?})", rec.purity)
                }
            }
            _ => "distances not pinned at this budget".to_string(),
        };
        Ok(BuildReport::Aqecc {
            command: command.clone(),
            family: fam.to_string(),
            parameters: rec.display(),
            record: AqeccSerial::of(&rec),
            verdict,
        })
    };

    let r_req = || need(args.r, "r");
    let i_req = || need(args.i, "i");
    match fam {
        "mainclasI" => block(BlockFamily::MainclasI { i: i_req()? }, r_req()?),
        "mainclasII" => block(BlockFamily::MainclasII { i: i_req()? }, r_req()?),
        "mainclasIII" => block(BlockFamily::MainclasIII { i: i_req()? }, r_req()?),
        "mainclasIIIA" => block(BlockFamily::MainclasIIIA { i: i_req()? }, r_req()?),
        "mainclasIIIB" => block(BlockFamily::MainclasIIIB { i: i_req()? }, r_req()?),
        "mainclasIV" => block(BlockFamily::MainclasIV, 1),
        "mainclasIVAa" => block(BlockFamily::MainclasIVAa, 1),
        "mainclasIVAb" => block(BlockFamily::MainclasIVAb, 1),
        "mainclasV" => block(BlockFamily::MainclasV, 1),
        "mainI" => conv(ConvFamilySpec::MainI { i: i_req()? }, r_req()?, q + 1),
        "mainII" => conv(ConvFamilySpec::MainII { i: i_req()? }, r_req()?, q + 1),
        "mainIII" => conv(ConvFamilySpec::MainIII { i: i_req()? }, r_req()?, (q + 1) / 2),
        "mainIIIA" => conv(ConvFamilySpec::MainIIIA { i: i_req()? }, r_req()?, q + 1),
        "mainIIIB" => conv(ConvFamilySpec::MainIIIB { i: i_req()? }, r_req()?, q + 1),
        "mainIV" => {
            let r = r_req()?;
            let n = args.n.unwrap_or_else(|| (q - 1) / r);
            let i = i_req()?;
            let c1 = need(args.c1, "c1")?;
            let c2 = need(args.c2, "c2")?;
            conv(ConvFamilySpec::MainIV { i, c1, c2 }, r, n)
        }
        "mainV" => conv(ConvFamilySpec::MainV, 1, 2 * q + 2),
        "mainVIa" => conv(ConvFamilySpec::MainVIa, 1, 2 * q - 2),
        "mainVIb" => conv(ConvFamilySpec::MainVIb, 1, 2 * q - 2),
        "mainasyI" => aq(AqeccFamily::MainasyI, r_req()?, q + 1),
        "mainasyII" => aq(AqeccFamily::MainasyII, r_req()?, q + 1),
        "mainasyIII" => aq(AqeccFamily::MainasyIII, r_req()?, (q + 1) / 2),
        "mainasyIV" => aq(AqeccFamily::MainasyIV, r_req()?, q + 1),
        other => Err(format!("unknown family '{other}'")),
    }
}

fn emit_build_report<W: Write>(report: &BuildReport, format: Format, out: &mut W) {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(report).unwrap()).unwrap(),
        Format::Csv | Format::Text => match report {
            BuildReport::Block { family, parameters, certificates, verdict, .. } => {
                writeln!(out, "{family}: {parameters}").unwrap();
                for c in certificates {
                    writeln!(out, "  {} {} work={} {}", c.name, c.value, c.work, if c.decided { "" } else { "(undecided)" }).unwrap();
                }
                writeln!(out, "verdict: {verdict}").unwrap();
            }
            BuildReport::Conv { family, parameters, certificates, verdict, .. } => {
                writeln!(out, "{family}: {parameters}").unwrap();
                for c in certificates {
                    writeln!(out, "  {} {} work={}", c.name, c.value, c.work).unwrap();
                }
                writeln!(out, "verdict: {verdict}").unwrap();
            }
            BuildReport::Aqecc { family, parameters, verdict, .. } => {
                writeln!(out, "{family}: {parameters}").unwrap();
                writeln!(out, "verdict: {verdict}").unwrap();
            }
        },
    }
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

fn cmd_table<W: Write>(args: TableArgs, budget: u64, out: &mut W) -> i32 {
    match args.which {
        1 => {
            let results = tables::regenerate_table1(budget);
            let all_pass = results.iter().all(|r| r.pass);
            match args.format {
                Format::Json => {
                    let payload = json!({
                        "command": "table --which 1",
                        "rows": results,
                        "all_pass": all_pass,
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&payload).unwrap()).unwrap();
                }
                Format::Csv => {
                    writeln!(out, "q,r,family,i,n,k,gamma,memory,df,mds,pass,note").unwrap();
                    for r in &results {
                        let (n, k, g, m, df, mds) = r
                            .record
                            .as_ref()
                            .map(|c| (c.n, c.k, c.gamma, c.memory, c.df_lower, c.mds_flag))
                            .unwrap_or((0, 0, 0, 0, 0, false));
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{},{},{},{},{},{}",
                            r.q,
                            r.r,
                            r.family,
                            r.i,
                            n,
                            k,
                            g,
                            m,
                            df,
                            mds,
                            r.pass,
                            r.note.as_deref().unwrap_or("")
                        )
                        .unwrap();
                    }
                }
                Format::Text => {
                    for r in &results {
                        writeln!(
                            out,
                            "{} {} {}{}",
                            if r.pass { "PASS" } else { "FAIL" },
                            r.expected,
                            r.status,
                            r.note.as_ref().map(|n| format!("  [{n}]")).unwrap_or_default()
                        )
                        .unwrap();
                    }
                    writeln!(out, "{}/{} rows regenerated", results.iter().filter(|r| r.pass).count(), results.len()).unwrap();
                }
            }
            if all_pass {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            }
        }
        2 | 3 => {
            let rows = if args.which == 2 { tables::TABLE2 } else { tables::TABLE3 };
            let results = tables::regenerate_aqecc_table(rows, budget);
            let all_pass = results.iter().all(|r| r.pass);
            match args.format {
                Format::Json => {
                    let payload = json!({
                        "command": format!("table --which {}", args.which),
                        "rows": results,
                        "all_pass": all_pass,
                    });
                    writeln!(out, "{}", serde_json::to_string_pretty(&payload).unwrap()).unwrap();
                }
                Format::Csv => {
                    writeln!(out, "q,r,family,i,j,n,k,dz,dx,mds,purity,pass").unwrap();
                    for r in &results {
                        let (n, k, dz, dx, mds, purity) = r
                            .record
                            .as_ref()
                            .map(|a| {
                                (
                                    a.n,
                                    a.k,
                                    a.dz.map(|d| d.to_string()).unwrap_or_default(),
                                    a.dx.map(|d| d.to_string()).unwrap_or_default(),
                                    a.mds,
                                    format!("{:?}", a.purity),
                                )
                            })
                            .unwrap_or((0, 0, String::new(), String::new(), false, String::new()));
                        writeln!(
                            out,
                            "{},{},{},{},{},{},{},{},{},{},{},{}",
                            r.q, r.r, r.family, r.i, r.j, n, k, dz, dx, mds, purity, r.pass
                        )
                        .unwrap();
                    }
                }
                Format::Text => {
                    for r in &results {
                        writeln!(out, "{} {} {}", if r.pass { "PASS" } else { "FAIL" }, r.expected, r.status).unwrap();
                    }
                    writeln!(out, "{}/{} rows regenerated", results.iter().filter(|r| r.pass).count(), results.len()).unwrap();
                }
            }
            if all_pass {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            }
        }
        other => {
            eprintln!("error: no table {other}; choose 1, 2 or 3");
            EXIT_USAGE
        }
    }
}
