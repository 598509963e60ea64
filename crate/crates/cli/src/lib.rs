//! Command-line front end: parses arguments, runs one command against a
//! forest file and renders a [`RunReport`].

use std::fmt::Write as _;
use std::path::PathBuf;

use blowdown::{
    check_tilt_relations, dual_tstructure, glue, heart_simples, tstructure_for_edge,
    tstructure_for_element, verify_duality, verify_linear_extension_independence, Basis,
    BigDivisorClass, BigExceptionalLattice, BlowupForest, Contraction, DanilovPlan, DistLattice,
    Error, FiltrationSpec, GradedObject, Orientation, Slot, Support, TStructureSpec, Variant,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "blowdown", version, about = "Decomposition lattices, divisor calculus and t-structure gluing for blow-up forests")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Human,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Strict,
    Total,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Basis {
        match b {
            BasisArg::Strict => Basis::Strict,
            BasisArg::Total => Basis::Total,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    #[value(name = "T", alias = "t")]
    T,
    #[value(name = "S", alias = "s")]
    S,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OrientationArg {
    Standard,
    LeftDual,
    RightDual,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Orientation {
        match o {
            OrientationArg::Standard => Orientation::Standard,
            OrientationArg::LeftDual => Orientation::LeftDual,
            OrientationArg::RightDual => Orientation::RightDual,
        }
    }
}

#[derive(Args, Debug)]
struct ForestArg {
    /// Forest JSON file.
    forest: PathBuf,
}

#[derive(Args, Debug)]
struct DivisorArgs {
    #[command(flatten)]
    forest: ForestArg,
    /// Divisor expression such as `-2*E[p1]-3*E[p2]`.
    #[arg(long, allow_hyphen_values = true)]
    divisor: String,
    #[arg(long, value_enum, default_value_t = BasisArg::Strict)]
    basis: BasisArg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a forest file.
    Validate(ForestArg),
    /// The order on exceptional components.
    Irr {
        #[command(flatten)]
        forest: ForestArg,
        #[arg(long)]
        dot: bool,
    },
    /// Join-prime contractions.
    Conn(ForestArg),
    /// The lattice of intermediate contractions.
    Dec {
        #[command(flatten)]
        forest: ForestArg,
        #[arg(long)]
        dot: bool,
    },
    /// Birkhoff round trips on the decomposition lattice.
    Lattice {
        #[command(flatten)]
        forest: ForestArg,
        #[arg(long)]
        dot: bool,
    },
    /// Proximity and intersection matrices.
    Intersection(ForestArg),
    /// Relative ampleness of a divisor for a contraction.
    Ample {
        #[command(flatten)]
        divisor: DivisorArgs,
        /// Contracted components, comma separated; defaults to all.
        #[arg(long)]
        g: Option<String>,
    },
    /// One ample descent across the blow-down of a leaf.
    Descend {
        #[command(flatten)]
        divisor: DivisorArgs,
        #[arg(long)]
        g: Option<String>,
        /// Component to contract; defaults to the first one in factorization order.
        #[arg(long)]
        leaf: Option<String>,
    },
    /// Full factorization into blow-downs.
    Danilov {
        #[command(flatten)]
        divisor: DivisorArgs,
    },
    /// Multiplicities at the blown-up points of an effective divisor.
    Multiplicity {
        #[command(flatten)]
        divisor: DivisorArgs,
    },
    /// Tilting generator summands.
    Generator {
        #[command(flatten)]
        forest: ForestArg,
        #[arg(long)]
        g: Option<String>,
        #[arg(long, value_enum, default_value_t = VariantArg::T)]
        variant: VariantArg,
        #[arg(long, value_enum, default_value_t = BasisArg::Strict)]
        basis: BasisArg,
    },
    /// Exact-sequence class identities.
    Identities(ForestArg),
    /// Aisle membership and truncation of a split object.
    Glue {
        #[command(flatten)]
        forest: ForestArg,
        /// Shifts such as `E[p1]=1,E[p2]=0,Y=0`.
        #[arg(long, allow_hyphen_values = true)]
        tstructure: String,
        /// Object such as `E[p1]={0,2};Y={0}`.
        #[arg(long, allow_hyphen_values = true)]
        object: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        level: i64,
    },
    /// T-structures attached to a contraction.
    Tstructures {
        #[command(flatten)]
        forest: ForestArg,
        #[arg(long)]
        g: Option<String>,
    },
    /// Nesting and naive-intersection relations over Dec.
    Tilts(ForestArg),
    /// Simple objects of the heart attached to a contraction.
    Simples {
        #[command(flatten)]
        forest: ForestArg,
        #[arg(long)]
        g: Option<String>,
        #[arg(long, value_enum, default_value_t = OrientationArg::Standard)]
        orientation: OrientationArg,
    },
    /// Every verification suite.
    CheckAll(ForestArg),
}

/// Outcome of one invocation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub failures: Vec<String>,
    pub exit_code: i32,
}

/// A report together with its rendering.
#[derive(Clone, Debug)]
pub struct Execution {
    pub report: RunReport,
    /// Text for standard output.
    pub stdout: String,
    /// Text for standard error.
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I) -> Execution
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let exit_code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let report = RunReport {
                command: String::new(),
                inputs: Value::Null,
                results: Value::Null,
                failures: if exit_code == EXIT_OK { Vec::new() } else { vec![text.trim_end().to_owned()] },
                exit_code,
            };
            let (stdout, stderr) = if exit_code == EXIT_OK { (text, String::new()) } else { (String::new(), text) };
            return Execution { report, stdout, stderr };
        }
    };
    let format = cli.format;
    let mut ctx = Ctx::default();
    let name = command_name(&cli.command);
    let outcome = dispatch(&cli.command, &mut ctx);
    let mut report = RunReport {
        command: name.to_owned(),
        inputs: Value::Object(ctx.inputs),
        results: Value::Null,
        failures: Vec::new(),
        exit_code: EXIT_OK,
    };
    match outcome {
        Ok(results) => {
            report.results = results;
            report.failures = ctx.failures;
        }
        Err(e) => report.failures.push(e.to_string()),
    }
    if !report.failures.is_empty() {
        report.exit_code = EXIT_FAILURE;
    }
    let stdout = match (format, ctx.dot) {
        (Format::Human, Some(dot)) if report.exit_code == EXIT_OK => dot,
        (Format::Human, _) => render_human(&report),
        (Format::Json, _) => {
            let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
            s.push('\n');
            s
        }
    };
    Execution {
        report,
        stdout,
        stderr: String::new(),
    }
}

#[derive(Default)]
struct Ctx {
    inputs: Map<String, Value>,
    failures: Vec<String>,
    dot: Option<String>,
}

impl Ctx {
    fn input(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.insert(key.to_owned(), v.into());
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate(_) => "validate",
        Command::Irr { .. } => "irr",
        Command::Conn(_) => "conn",
        Command::Dec { .. } => "dec",
        Command::Lattice { .. } => "lattice",
        Command::Intersection(_) => "intersection",
        Command::Ample { .. } => "ample",
        Command::Descend { .. } => "descend",
        Command::Danilov { .. } => "danilov",
        Command::Multiplicity { .. } => "multiplicity",
        Command::Generator { .. } => "generator",
        Command::Identities(_) => "identities",
        Command::Glue { .. } => "glue",
        Command::Tstructures { .. } => "tstructures",
        Command::Tilts(_) => "tilts",
        Command::Simples { .. } => "simples",
        Command::CheckAll(_) => "check-all",
    }
}

fn load(ctx: &mut Ctx, arg: &ForestArg) -> Result<BlowupForest, Error> {
    ctx.input("forest", arg.forest.display().to_string());
    let text = std::fs::read_to_string(&arg.forest)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", arg.forest.display())))?;
    BlowupForest::from_json(&text)
}

fn contraction<'f>(ctx: &mut Ctx, forest: &'f BlowupForest, g: &Option<String>) -> Result<Contraction<'f>, Error> {
    let g = match g {
        None => forest.full(),
        Some(text) => Contraction::parse(forest, text)?,
    };
    ctx.input("g", g.labels());
    Ok(g)
}

fn divisor(ctx: &mut Ctx, forest: &BlowupForest, args: &DivisorArgs) -> Result<BigDivisorClass, Error> {
    let basis: Basis = args.basis.into();
    let d = BigDivisorClass::parse(&args.divisor, forest, basis)?;
    ctx.input("divisor", d.display(forest).to_string());
    ctx.input("basis", basis_name(basis));
    Ok(d)
}

fn basis_name(b: Basis) -> &'static str {
    match b {
        Basis::Strict => "strict",
        Basis::Total => "total",
    }
}

/// Integers that fit in `i64` become JSON numbers; larger ones strings.
fn big(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn big_rows(rows: Vec<Vec<BigInt>>) -> Value {
    Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(big).collect())).collect())
}

fn class_text(l: &BigExceptionalLattice, d: &BigDivisorClass, basis: Basis) -> Result<String, Error> {
    let d = match basis {
        Basis::Strict => l.to_strict(d)?,
        Basis::Total => l.to_total(d)?,
    };
    Ok(d.display(l.forest()).to_string())
}

fn subset_labels(forest: &BlowupForest, s: blowdown::Subset) -> Vec<String> {
    s.iter().map(|i| forest.component_label(i)).collect()
}

fn lattice_dot(name: &str, labels: &[String], edges: &[(usize, usize)]) -> String {
    let mut s = format!("digraph {name} {{\n  rankdir=BT;\n");
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{l}\"];");
    }
    for (a, b) in edges {
        let _ = writeln!(s, "  n{a} -> n{b};");
    }
    s.push_str("}\n");
    s
}

fn dec_labels(forest: &BlowupForest, dec: &DistLattice) -> Vec<String> {
    dec.elements()
        .iter()
        .map(|&x| format!("{{{}}}", subset_labels(forest, x).join(",")))
        .collect()
}

fn dispatch(command: &Command, ctx: &mut Ctx) -> Result<Value, Error> {
    match command {
        Command::Validate(a) => {
            let f = load(ctx, a)?;
            let satellites: Vec<Value> = (0..f.len())
                .filter_map(|i| f.satellite(i).map(|s| json!({"node": f.id(i), "proximate_to": f.id(s)})))
                .collect();
            Ok(json!({
                "valid": true,
                "nodes": f.len(),
                "roots": f.danilov_center(),
                "satellites": satellites,
            }))
        }
        Command::Irr { forest, dot } => {
            let f = load(ctx, forest)?;
            let irr = f.irr_poset();
            let covers: Vec<Value> = irr
                .covers()
                .into_iter()
                .map(|(a, b)| json!([Slot::Prime(irr.label(a).to_owned()).to_string(), Slot::Prime(irr.label(b).to_owned()).to_string()]))
                .collect();
            let labels: Vec<String> = (0..f.len()).map(|i| f.component_label(i)).collect();
            if *dot {
                ctx.dot = Some(lattice_dot("irr", &labels, &irr.covers()));
            }
            Ok(json!({"components": labels, "covers": covers}))
        }
        Command::Conn(a) => {
            let f = load(ctx, a)?;
            let conn: Vec<Value> = f
                .conn()
                .iter()
                .enumerate()
                .map(|(i, g)| json!({"component": f.component_label(i), "contracted": g.labels()}))
                .collect();
            Ok(json!({"count": conn.len(), "conn": conn}))
        }
        Command::Dec { forest, dot } => {
            let f = load(ctx, forest)?;
            let dec = f.dec_lattice()?;
            let labels = dec_labels(&f, &dec);
            if *dot {
                ctx.dot = Some(lattice_dot("dec", &labels, &dec.hasse_edges()));
            }
            let elements: Vec<Vec<String>> = dec.elements().iter().map(|&x| subset_labels(&f, x)).collect();
            Ok(json!({"count": dec.len(), "elements": elements, "covers": dec.hasse_edges()}))
        }
        Command::Lattice { forest, dot } => {
            let f = load(ctx, forest)?;
            let dec = f.dec_lattice()?;
            let report = dec.verify_birkhoff();
            if !(report.poset_round_trip && report.lattice_round_trip) {
                ctx.failures.push("Birkhoff round trip failed".into());
            }
            let jp = dec.join_primes();
            let irr_match = jp.poset.same_order_by_labels(&f.irr_poset());
            if !irr_match {
                ctx.failures.push("join-primes differ from Irr".into());
            }
            if *dot {
                ctx.dot = Some(lattice_dot("dec", &dec_labels(&f, &dec), &dec.hasse_edges()));
            }
            Ok(json!({
                "birkhoff": report,
                "distributive": dec.is_distributive(),
                "join_primes_match_irr": irr_match,
                "join_primes": jp.poset.labels(),
            }))
        }
        Command::Intersection(a) => {
            let f = load(ctx, a)?;
            let l = BigExceptionalLattice::new(&f);
            let n = l.intersection_matrix();
            Ok(json!({
                "components": (0..f.len()).map(|i| f.component_label(i)).collect::<Vec<_>>(),
                "proximity": big_rows(l.proximity_matrix().to_rows()),
                "intersection": big_rows(n.to_rows()),
                "leading_minors": n.leading_minors().iter().map(big).collect::<Vec<_>>(),
                "symmetric": n.is_symmetric(),
                "negative_definite": n.is_negative_definite(),
            }))
        }
        Command::Ample { divisor: args, g } => {
            let f = load(ctx, &args.forest)?;
            let l = BigExceptionalLattice::new(&f);
            let d = divisor(ctx, &f, args)?;
            let g = contraction(ctx, &f, g)?;
            let pairings = l.component_pairings(&d)?;
            let per: Map<String, Value> = g
                .contracted()
                .iter()
                .map(|i| (f.component_label(i), big(&pairings[i])))
                .collect();
            Ok(json!({
                "ample": l.is_relatively_ample(&g, &d)?,
                "pairings": per,
                "strict": class_text(&l, &d, Basis::Strict)?,
                "total": class_text(&l, &d, Basis::Total)?,
            }))
        }
        Command::Descend { divisor: args, g, leaf } => {
            let f = load(ctx, &args.forest)?;
            let l = BigExceptionalLattice::new(&f);
            let d = divisor(ctx, &f, args)?;
            let g = contraction(ctx, &f, g)?;
            let leaf = match leaf {
                Some(x) => x.clone(),
                None => {
                    let (fg, _) = g.factor();
                    let first = DanilovPlan::<BigInt>::new(&fg).order().first().map(|s| s.to_string());
                    first.ok_or_else(|| Error::NotMinimal("nothing to contract".into()))?
                }
            };
            ctx.input("leaf", leaf.clone());
            let step = l.descend_ample(&g, &d, &leaf)?;
            let z = BigExceptionalLattice::new(&step.residual);
            let rest_ids: Vec<&str> = g
                .contracted()
                .iter()
                .map(|i| f.id(i))
                .filter(|&id| id != step.component)
                .collect();
            let rest = Contraction::new(z.forest(), z.forest().node_set(&rest_ids)?)?;
            let basis: Basis = args.basis.into();
            Ok(json!({
                "component": format!("E[{}]", step.component),
                "k": big(&step.k),
                "lifted": class_text(&l, &step.lifted, basis)?,
                "residual": step.residual.ids().collect::<Vec<_>>(),
                "pushforward": class_text(&z, &step.pushed, basis)?,
                "ample_after": z.is_relatively_ample(&rest, &step.pushed)?,
            }))
        }
        Command::Danilov { divisor: args } => {
            let f = load(ctx, &args.forest)?;
            let d = divisor(ctx, &f, args)?;
            let plan = DanilovPlan::<BigInt>::new(&f);
            let steps = plan.run(&d)?;
            let basis: Basis = args.basis.into();
            let mut out = Vec::with_capacity(steps.len());
            let mut current = f.clone();
            for s in &steps {
                current = current.induced(current.all().without(current.index_of(&s.component)?));
                let z = BigExceptionalLattice::new(&current);
                out.push(json!({
                    "component": format!("E[{}]", s.component),
                    "k": big(&s.k),
                    "pushforward": class_text(&z, &s.pushed, basis)?,
                    "ample_after": s.ample_after,
                }));
            }
            Ok(json!({"length": steps.len(), "steps": out}))
        }
        Command::Multiplicity { divisor: args } => {
            let f = load(ctx, &args.forest)?;
            let l = BigExceptionalLattice::new(&f);
            let d = l.to_strict(&divisor(ctx, &f, args)?)?;
            if !d.is_effective() {
                return Err(Error::NotAmple(format!(
                    "{} is not effective in the strict basis",
                    d.display(&f)
                )));
            }
            let mut nu = Map::new();
            for root in f.danilov_center() {
                nu.insert(format!("E[{root}]"), big(&l.multiplicity(root, &d.coeffs)?));
            }
            let minus = d.scale(&BigInt::from(-1));
            Ok(json!({
                "multiplicities": nu,
                "negative_is_ample": l.is_relatively_ample(&f.full(), &minus)?,
            }))
        }
        Command::Generator { forest, g, variant, basis } => {
            let f = load(ctx, forest)?;
            let l = BigExceptionalLattice::new(&f);
            let g = contraction(ctx, &f, g)?;
            let variant = match variant {
                VariantArg::T => Variant::T,
                VariantArg::S => Variant::S,
            };
            ctx.input("variant", format!("{variant:?}"));
            let basis: Basis = (*basis).into();
            ctx.input("basis", basis_name(basis));
            let gen = l.tilting_generator(&g, variant)?;
            let summands = gen
                .summands
                .iter()
                .map(|s| {
                    Ok(json!({
                        "generator": s.generator.as_ref().map(|p| format!("E[{p}]")),
                        "twist": class_text(&l, &s.twist, basis)?,
                        "support": match &s.support {
                            Support::Whole => "X".to_owned(),
                            Support::Divisor(d) => class_text(&l, d, basis)?,
                        },
                        "shift": s.shift,
                    }))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok(json!({"summands": summands}))
        }
        Command::Identities(a) => {
            let f = load(ctx, a)?;
            let report = BigExceptionalLattice::new(&f).verify_generator_identities()?;
            ctx.failures.extend(report.failures.iter().map(|x| format!("{}: g={:?} other={:?} {}", x.check, x.g, x.other, x.detail)));
            Ok(serde_json::to_value(&report).expect("serializable"))
        }
        Command::Glue { forest, tstructure, object, level } => {
            let f = load(ctx, forest)?;
            let t: TStructureSpec = tstructure.parse()?;
            let x: GradedObject = object.parse()?;
            ctx.input("tstructure", t.to_string());
            ctx.input("object", x.to_string());
            ctx.input("level", *level);
            let filtration = FiltrationSpec::dec_plus(&f)?;
            let glued = glue(&filtration, &t)?;
            let (low, high) = glued.truncate(&x, *level)?;
            Ok(json!({
                "peel_order": glued.peel_order().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "in_le": glued.contains_le(&x, *level),
                "in_ge": glued.contains_ge(&x, *level),
                "in_heart": glued.in_heart(&x),
                "truncation_low": low.to_string(),
                "truncation_high": high.to_string(),
                "dual_tstructure": dual_tstructure(&t).to_string(),
                "order_independent": verify_linear_extension_independence(&filtration, &t)?,
            }))
        }
        Command::Tstructures { forest, g } => {
            let f = load(ctx, forest)?;
            let g = contraction(ctx, &f, g)?;
            let dec = f.dec_lattice()?;
            let element = tstructure_for_element(&g);
            let mut edges = Vec::new();
            for &h in dec.elements() {
                let h = f.contraction(h)?;
                let (lo, hi) = if h.leq(&g) { (h, g) } else if g.leq(&h) { (g, h) } else { continue };
                edges.push(json!({
                    "g0": lo.labels(),
                    "g1": hi.labels(),
                    "tstructure": tstructure_for_edge(&lo, &hi)?.to_string(),
                }));
            }
            Ok(json!({
                "element": element.to_string(),
                "dual": dual_tstructure(&element).to_string(),
                "edges": edges,
            }))
        }
        Command::Tilts(a) => {
            let f = load(ctx, a)?;
            let report = check_tilt_relations(&f)?;
            ctx.failures.extend(report.failures.iter().map(|x| format!("{}: g0={:?} g1={:?} x={}", x.check, x.g0, x.g1, x.object)));
            Ok(serde_json::to_value(&report).expect("serializable"))
        }
        Command::Simples { forest, g, orientation } => {
            let f = load(ctx, forest)?;
            let g = contraction(ctx, &f, g)?;
            let o: Orientation = (*orientation).into();
            ctx.input("orientation", serde_json::to_value(o).expect("serializable"));
            let simples = heart_simples(&g, o)?;
            let quotients = simples.iter().filter(|s| s.simple_quotient_of_structure_sheaf).count();
            Ok(json!({
                "simples": simples.iter().map(|s| json!({
                    "label": s.label,
                    "slot": s.slot.to_string(),
                    "shadow": s.shadow.to_string(),
                    "embedding": s.embedding,
                    "simple_quotient_of_structure_sheaf": s.simple_quotient_of_structure_sheaf,
                    "in_heart": s.in_heart,
                })).collect::<Vec<_>>(),
                "simple_quotients": quotients,
            }))
        }
        Command::CheckAll(a) => {
            let f = load(ctx, a)?;
            check_all(ctx, &f)
        }
    }
}

fn check_all(ctx: &mut Ctx, f: &BlowupForest) -> Result<Value, Error> {
    let l = BigExceptionalLattice::new(f);
    let mut results = Map::new();
    let mut record = |ctx: &mut Ctx, name: &str, ok: bool| {
        results.insert(name.to_owned(), json!(ok));
        if !ok {
            ctx.failures.push(format!("{name} failed"));
        }
    };

    let dec = f.dec_lattice()?;
    let birkhoff = dec.verify_birkhoff();
    record(ctx, "birkhoff", birkhoff.poset_round_trip && birkhoff.lattice_round_trip);
    record(ctx, "join_primes_match_irr", dec.join_primes().poset.same_order_by_labels(&f.irr_poset()));
    record(ctx, "distributive", dec.is_distributive());
    let n = l.intersection_matrix();
    record(ctx, "negative_definite", n.is_symmetric() && n.is_negative_definite());
    let danilov = match l.find_ample_seed() {
        Some(seed) => l.danilov_factorize(&seed).map(|s| s.len() == f.len()).unwrap_or(false),
        None => false,
    };
    record(ctx, "danilov", danilov);
    record(ctx, "generator_identities", l.verify_generator_identities()?.is_ok());
    record(ctx, "tilts", check_tilt_relations(f)?.is_ok());
    let filtration = FiltrationSpec::dec_plus(f)?;
    let mut confluent = true;
    let mut dual = true;
    let mut simples = true;
    for &g in dec.elements() {
        let g = f.contraction(g)?;
        let t = tstructure_for_element(&g);
        confluent &= verify_linear_extension_independence(&filtration, &t)?;
        dual &= verify_duality(&filtration, &t)?;
        let s = heart_simples(&g, Orientation::Standard)?;
        simples &= s.iter().filter(|c| c.simple_quotient_of_structure_sheaf).count() == 1
            && s.len() == g.contracted().len() + 1
            && s.iter().all(|c| c.in_heart);
    }
    record(ctx, "confluence", confluent);
    record(ctx, "duality", dual);
    record(ctx, "simple_quotients", simples);
    Ok(Value::Object(results))
}

/// Plain `key: value` rendering of a report.
pub fn render_human(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "command: {}", report.command);
    if let Value::Object(inputs) = &report.inputs {
        for (k, v) in inputs {
            let _ = writeln!(out, "input {k}: {}", inline(v));
        }
    }
    if !report.results.is_null() {
        render_value(&mut out, &report.results, 0);
    }
    for f in &report.failures {
        let _ = writeln!(out, "FAILURE: {f}");
    }
    let _ = writeln!(out, "status: {}", if report.exit_code == EXIT_OK { "ok" } else { "failed" });
    out
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => format!(
            "{{{}}}",
            m.iter().map(|(k, v)| format!("{k}: {}", inline(v))).collect::<Vec<_>>().join(", ")
        ),
        other => other.to_string(),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && (!x.is_array() || is_flat(x))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_flat(x) {
                    let _ = writeln!(out, "{pad}{k}: {}", inline(x));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    render_value(out, x, depth + 1);
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_flat(x) {
                    let _ = writeln!(out, "{pad}- {}", inline(x));
                } else {
                    let _ = writeln!(out, "{pad}-");
                    render_value(out, x, depth + 1);
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", inline(other));
        }
    }
}
