//! Command-line front end.
//!
//! Exit codes: `0` success, `1` I/O or parse failure, `2` the input is well
//! formed but rejected (invalid parameter, out-of-range request, failed
//! check).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::building::{reduction_type, AppendixTable, ReductionType};
use crate::hermitian::all_embedding_choices;
use crate::lparam::{is_frobenius_compatible, validate, Rational, TameParameter};
use crate::packets::{enumerate_members, InnerForm, PacketDescriptor, PacketMember};
use crate::tori::ElementalDecomposition;
use crate::weyl_signed::{conjugacy_classes, representative, SignedPermutation};
use crate::Error;

pub const SCHEMA_VERSION: u32 = 1;

/// Largest rank accepted by `weyl` unless overridden.
pub const DEFAULT_MAX_RANK: usize = 12;

/// Failure of a CLI command, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Rejected(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Rejected(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Rejected(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// The parameter file, TOML:
///
/// ```toml
/// n = 4
/// q = 3
/// omega = "(1 2 -1 -2)"
/// y = ["3/20", "1/20"]
/// central_bit = 0   # optional, odd n only
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParameterFile {
    pub n: usize,
    pub q: u64,
    pub omega: String,
    pub y: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub central_bit: Option<u8>,
}

impl ParameterFile {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Parse(format!("parameter file: {e}")))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("parameter files always serialize")
    }

    pub fn from_parameter(p: &TameParameter, q: u64) -> Self {
        ParameterFile {
            n: p.n(),
            q,
            omega: p.omega().to_string(),
            y: p.y().iter().map(ToString::to_string).collect(),
            central_bit: (p.n() % 2 == 1 && p.central_bit()).then_some(1),
        }
    }

    /// Parses `omega` and `y`; syntax errors name the field.
    pub fn parse_fields(&self) -> CliResult<(SignedPermutation, Vec<Rational>)> {
        let omega = SignedPermutation::parse(&self.omega, self.n / 2)
            .map_err(|e| CliError::Parse(format!("field omega: {e}")))?;
        let y = self
            .y
            .iter()
            .enumerate()
            .map(|(k, s)| {
                Rational::from_str(s.trim())
                    .map_err(|_| CliError::Parse(format!("field y[{k}]: malformed rational {s:?}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok((omega, y))
    }

    pub fn to_parameter(&self) -> CliResult<TameParameter> {
        let (omega, y) = self.parse_fields()?;
        let bit = match self.central_bit {
            None | Some(0) => false,
            Some(1) => true,
            Some(b) => return Err(CliError::Parse(format!("field central_bit: expected 0 or 1, got {b}"))),
        };
        Ok(TameParameter::new(self.n, omega, y)?.with_central_bit(bit))
    }
}

#[derive(Debug, Parser)]
#[command(name = "lpacket", version, about = "L-packets of tame regular parameters for ramified unitary groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a parameter file describes a tame, discrete, regular parameter.
    Validate { file: PathBuf },
    /// Compute the packet of a parameter.
    Packet {
        file: PathBuf,
        #[command(flatten)]
        format: PacketFormat,
    },
    /// List conjugacy classes of the hyperoctahedral group of rank m.
    Weyl {
        m: usize,
        /// All classes (the default).
        #[arg(long, conflicts_with = "elliptic")]
        classes: bool,
        /// Elliptic classes only.
        #[arg(long)]
        elliptic: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_RANK)]
        max_rank: usize,
    },
    /// Compare computed vertex reductions with the bundled reduction tables.
    Check {
        /// Directory containing appendix_ramified.txt.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        min_n: usize,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct PacketFormat {
    /// JSON output (the default).
    #[arg(long)]
    pub json: bool,
    /// Human-readable report.
    #[arg(long)]
    pub report: bool,
}

#[derive(Debug, Serialize)]
pub struct ValidateOutput {
    pub schema_version: u32,
    pub input: ParameterFile,
    pub tame: bool,
    pub discrete: bool,
    pub regular: bool,
    pub frobenius_compatible: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct FactorOutput {
    pub s: usize,
    pub r: usize,
    pub cycle: Vec<i32>,
}

#[derive(Debug, Serialize)]
pub struct CharacterOutput {
    pub exponents: Vec<String>,
    pub moduli: Vec<String>,
    pub u1_bit: Option<u8>,
}

#[derive(Debug, Serialize)]
pub struct ReductionOutput {
    pub label: String,
    pub l: usize,
    pub m_red: usize,
    pub orth_split: bool,
    pub stab_component_order: u32,
}

impl From<&ReductionType> for ReductionOutput {
    fn from(r: &ReductionType) -> Self {
        ReductionOutput {
            label: r.to_string(),
            l: r.l,
            m_red: r.m_red,
            orth_split: r.orth_split,
            stab_component_order: r.stab_component_order,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ConstituentOutput {
    pub sign_on_z: i8,
    pub selected: bool,
}

#[derive(Debug, Serialize)]
pub struct MemberOutput {
    pub index: usize,
    pub parity: Vec<u8>,
    pub u1_class: Option<u8>,
    pub inner_form: &'static str,
    pub inner_form_bit: u8,
    pub space: String,
    pub vertex: Vec<i64>,
    pub reduction: ReductionOutput,
    pub tbar: Vec<String>,
    pub dl_degree: String,
    pub central_bit: Option<u8>,
    pub constituents: Vec<ConstituentOutput>,
    pub label: Option<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct PacketOutput {
    pub schema_version: u32,
    pub input: ParameterFile,
    pub n: usize,
    pub q: u64,
    pub j: usize,
    pub size: usize,
    pub decomposition: Vec<FactorOutput>,
    pub neron_components: u32,
    pub character: CharacterOutput,
    pub general_position: bool,
    pub a_phi: Vec<String>,
    pub a_phi_order: String,
    pub label_warning: Option<String>,
    pub members: Vec<MemberOutput>,
}

fn strings(xs: &[BigInt]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn bit(b: bool) -> u8 {
    b as u8
}

fn member_output(index: usize, m: &PacketMember) -> MemberOutput {
    let (inner_form, inner_form_bit) = match m.inner_form {
        InnerForm::QuasiSplit => ("quasi_split", 0),
        InnerForm::NonQuasiSplit => ("non_quasi_split", 1),
        InnerForm::Pure(b) => ("pure_inner_form", bit(b)),
    };
    MemberOutput {
        index,
        parity: m.choice.parity.iter().map(|&b| bit(b)).collect(),
        u1_class: m.choice.u1_class.map(bit),
        inner_form,
        inner_form_bit,
        space: m.space.to_string(),
        vertex: m.vertex.b.clone(),
        reduction: (&m.reduction).into(),
        tbar: strings(&m.tbar),
        dl_degree: m.dl_degree.to_string(),
        central_bit: m.central_bit.map(bit),
        constituents: m
            .constituents
            .iter()
            .map(|c| ConstituentOutput { sign_on_z: c.sign_on_z, selected: c.selected })
            .collect(),
        label: m.label.as_deref().map(strings),
    }
}

pub fn packet_output(input: ParameterFile, d: &PacketDescriptor) -> PacketOutput {
    PacketOutput {
        schema_version: SCHEMA_VERSION,
        input,
        n: d.parameter.n(),
        q: d.q,
        j: d.j,
        size: d.size(),
        decomposition: d
            .decomposition
            .factors
            .iter()
            .map(|f| FactorOutput { s: f.s, r: f.r, cycle: f.cycle.clone() })
            .collect(),
        neron_components: d.neron_components,
        character: CharacterOutput {
            exponents: strings(&d.character.exponents),
            moduli: strings(&d.character.moduli),
            u1_bit: d.character.u1_bit.map(bit),
        },
        general_position: d.general_position,
        a_phi: strings(&d.a_phi),
        a_phi_order: d.a_phi_order().to_string(),
        label_warning: d.label_warning.clone(),
        members: d.members.iter().enumerate().map(|(k, m)| member_output(k, m)).collect(),
    }
}

/// Plain-text rendering of a packet.
pub fn packet_report(d: &PacketDescriptor) -> String {
    let p = &d.parameter;
    let mut s = String::new();
    let y: Vec<String> = p.y().iter().map(ToString::to_string).collect();
    s += &format!("parameter: n = {}, q = {}, omega = {}, y = ({})\n", p.n(), d.q, p.omega(), y.join(", "));
    let shape: Vec<String> = d
        .decomposition
        .factors
        .iter()
        .map(|f| if f.is_u1() { "U1".to_string() } else { format!("T{}", f.s) })
        .collect();
    s += &format!("torus: {} (j = {}, Neron components: {})\n", shape.join(" x "), d.j, d.neron_components);
    s += &format!(
        "character: exponents ({}) modulo ({}){}; general position: {}\n",
        strings(&d.character.exponents).join(", "),
        strings(&d.character.moduli).join(", "),
        d.character.u1_bit.map(|b| format!(", central bit {}", bit(b))).unwrap_or_default(),
        if d.general_position { "yes" } else { "no" },
    );
    s += &format!("A_phi: {} (order {})\n", strings(&d.a_phi).join(" x "), d.a_phi_order());
    if let Some(w) = &d.label_warning {
        s += &format!("warning: {w}\n");
    }
    s += &format!("packet size: {}\n", d.size());
    for (k, m) in d.members.iter().enumerate() {
        let bits: String = m.choice.bits().iter().map(|&b| if b { '1' } else { '0' }).collect();
        let form = match m.inner_form {
            InnerForm::QuasiSplit => "quasi-split".to_string(),
            InnerForm::NonQuasiSplit => "non-quasi-split".to_string(),
            InnerForm::Pure(b) => format!("pure inner form {}", bit(b)),
        };
        let label = m.label.as_deref().map(|l| format!("({})", strings(l).join(","))).unwrap_or_else(|| "-".into());
        s += &format!(
            "  [{k}] bits {bits}  {form}  {}  vertex {:?}  reduction {}  DL degree {}  label {label}",
            m.space, m.vertex.b, m.reduction, m.dl_degree
        );
        if let Some(b) = m.central_bit {
            s += &format!("  central bit {}", bit(b));
        }
        s.push('\n');
    }
    s
}

pub fn cmd_validate(file: &Path) -> CliResult<(ValidateOutput, bool)> {
    validate_input(ParameterFile::read(file)?)
}

/// The validation verdict for an already parsed parameter file.
pub fn validate_input(input: ParameterFile) -> CliResult<(ValidateOutput, bool)> {
    let p = input.to_parameter()?;
    let report = validate(&p);
    let compatible = is_frobenius_compatible(p.omega(), p.y(), input.q);
    let mut diagnostics = report.diagnostics.clone();
    if !compatible {
        diagnostics.push(format!("omega.y is not congruent to q.y modulo (1/2)Z^m for q = {}", input.q));
    }
    if let Err(e) = crate::hermitian::FieldParams::new(input.q) {
        diagnostics.push(e.to_string());
    }
    let ok = report.all_ok() && compatible && diagnostics.len() == report.diagnostics.len();
    Ok((
        ValidateOutput {
            schema_version: SCHEMA_VERSION,
            input,
            tame: report.tame,
            discrete: report.discrete,
            regular: report.regular,
            frobenius_compatible: compatible,
            diagnostics,
        },
        ok,
    ))
}

pub fn cmd_packet(file: &Path) -> CliResult<(ParameterFile, PacketDescriptor)> {
    packet_input(ParameterFile::read(file)?)
}

pub fn packet_input(input: ParameterFile) -> CliResult<(ParameterFile, PacketDescriptor)> {
    let p = input.to_parameter()?;
    let desc = enumerate_members(&p, input.q)?;
    Ok((input, desc))
}

#[derive(Debug, Serialize)]
pub struct ClassOutput {
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
    pub size: String,
    pub elliptic: bool,
    pub representative: String,
}

#[derive(Debug, Serialize)]
pub struct WeylOutput {
    pub schema_version: u32,
    pub m: usize,
    pub group_order: String,
    pub elliptic_only: bool,
    pub count: usize,
    pub classes: Vec<ClassOutput>,
}

pub fn cmd_weyl(m: usize, elliptic_only: bool, max_rank: usize) -> CliResult<WeylOutput> {
    if m == 0 {
        return Err(CliError::Rejected("rank m must be at least 1".into()));
    }
    if m > max_rank {
        return Err(CliError::Rejected(format!("rank {m} exceeds the bound {max_rank}")));
    }
    let classes: Vec<ClassOutput> = conjugacy_classes(m)
        .into_iter()
        .filter(|c| !elliptic_only || c.elliptic)
        .map(|c| ClassOutput {
            mu: c.cycle_type.mu.parts().to_vec(),
            nu: c.cycle_type.nu.parts().to_vec(),
            size: c.size.to_string(),
            elliptic: c.elliptic,
            representative: representative(&c.cycle_type).to_string(),
        })
        .collect();
    Ok(WeylOutput {
        schema_version: SCHEMA_VERSION,
        m,
        group_order: crate::weyl_signed::centralizer_order_eta(m).to_string(),
        elliptic_only,
        count: classes.len(),
        classes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// `m_red = 2`: reported with its table membership, never counted as a
    /// pass or a failure.
    Flagged,
}

#[derive(Debug, Serialize)]
pub struct CheckCase {
    pub n: usize,
    pub nu: Vec<usize>,
    pub bits: String,
    pub quasi_split: bool,
    pub reduction: String,
    pub in_table: bool,
    pub status: CheckStatus,
}

#[derive(Debug, Serialize)]
pub struct CheckOutput {
    pub schema_version: u32,
    pub min_n: usize,
    pub max_n: usize,
    pub passed: usize,
    pub failed: usize,
    pub flagged: usize,
    pub cases: Vec<CheckCase>,
}

/// Every embedding pattern of every elliptic class for `n` in the range,
/// compared with the table.
pub fn cmd_check(table: &AppendixTable, min_n: usize, max_n: usize) -> CliResult<CheckOutput> {
    let mut cases = Vec::new();
    for n in min_n.max(2)..=max_n {
        for nu in crate::algebra::partitions(n / 2) {
            let dec = ElementalDecomposition::from_shape(nu.parts(), n % 2 == 1)?;
            for choice in all_embedding_choices(&dec) {
                let red = reduction_type(&dec, &choice, n)?;
                let qs = crate::hermitian::is_quasi_split_embedding(&choice, n);
                let in_table = table.get(n, qs).map_err(|e| CliError::Parse(e.to_string()))?.contains(&red);
                let status = match (red.m_red == 2, in_table) {
                    (true, _) => CheckStatus::Flagged,
                    (false, true) => CheckStatus::Pass,
                    (false, false) => CheckStatus::Fail,
                };
                cases.push(CheckCase {
                    n,
                    nu: nu.parts().to_vec(),
                    bits: choice.bits().iter().map(|&b| if b { '1' } else { '0' }).collect(),
                    quasi_split: qs,
                    reduction: red.to_string(),
                    in_table,
                    status,
                });
            }
        }
    }
    let count = |s: CheckStatus| cases.iter().filter(|c| c.status == s).count();
    Ok(CheckOutput {
        schema_version: SCHEMA_VERSION,
        min_n,
        max_n,
        passed: count(CheckStatus::Pass),
        failed: count(CheckStatus::Fail),
        flagged: count(CheckStatus::Flagged),
        cases,
    })
}

fn check_report(c: &CheckOutput) -> String {
    let mut s = String::new();
    for case in &c.cases {
        let status = match case.status {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Flagged => "flagged",
        };
        let nu: Vec<String> = case.nu.iter().map(ToString::to_string).collect();
        s += &format!(
            "{status:7} n={} nu=({}) bits={} {} {} (in table: {})\n",
            case.n,
            nu.join(","),
            case.bits,
            if case.quasi_split { "qs " } else { "nqs" },
            case.reduction,
            if case.in_table { "yes" } else { "no" },
        );
    }
    s += &format!("{} passed, {} failed, {} flagged\n", c.passed, c.failed, c.flagged);
    s
}

/// Pretty JSON with a trailing newline, as printed by the CLI.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types always serialize");
    s.push('\n');
    s
}

/// Runs one command, writing results to `out` and messages to `err`.
/// Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version are not errors
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 1;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> CliResult<i32> {
    let text;
    let code;
    match command {
        Command::Validate { file } => {
            let (report, ok) = cmd_validate(&file)?;
            text = to_json(&report);
            code = if ok { 0 } else { 2 };
        }
        Command::Packet { file, format } => {
            let (input, desc) = cmd_packet(&file)?;
            text = if format.report { packet_report(&desc) } else { to_json(&packet_output(input, &desc)) };
            code = 0;
        }
        Command::Weyl { m, elliptic, max_rank, .. } => {
            text = to_json(&cmd_weyl(m, elliptic, max_rank)?);
            code = 0;
        }
        Command::Check { fixtures, min_n, max_n, json } => {
            let table = match fixtures {
                Some(dir) => AppendixTable::load(&dir).map_err(|e| CliError::Parse(e.to_string()))?,
                None => AppendixTable::builtin(),
            };
            let summary = cmd_check(&table, min_n, max_n)?;
            text = if json { to_json(&summary) } else { check_report(&summary) };
            code = if summary.failed == 0 { 0 } else { 2 };
        }
    }
    out.write_all(text.as_bytes()).map_err(|e| CliError::Parse(format!("cannot write output: {e}")))?;
    Ok(code)
}
