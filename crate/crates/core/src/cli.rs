//! Command-line front end. Every command writes a [`Report`] to stdout; errors
//! go to stderr. Exit status: 0 ok, 1 hypothesis failure, 2 input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::brill_noether::{
    bgn_bounds, bn_number, certify_bn_component, conjecture_scan, curve_family, Certification, Family,
};
use crate::components::{
    binding_witness, catalog_invariance_check, enumerate_components, robustness_radius, small_slope_filter,
    star_conditions, ComponentTuple, Radius, StabilityReport,
};
use crate::curve::{ComponentId, NodalCurve};
use crate::ordering::{default_root, order_components, verify_decomposition};
use crate::polarization::{goodness_proxy, GoodnessReport, Polarization};
use crate::rational::{fmt_ints, frac, parse_int_list, parse_rational_list};
use crate::report::{Block, Report, Table};
use crate::sheaf::{global_ext_defect, parse_descriptors};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "nodal-bn", version, about = "Stability and Brill-Noether numerics on nodal curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Curve file checks
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Ordered decomposition `A_1 ⊂ … ⊂ A_{γ−1}` for a root
    Order {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        root: Option<ComponentId>,
    },
    #[command(subcommand)]
    Polarization(PolarizationCmd),
    #[command(subcommand)]
    Sheaf(SheafCmd),
    #[command(subcommand)]
    Components(ComponentsCmd),
    #[command(subcommand)]
    Bn(BnCmd),
}

#[derive(Debug, Subcommand)]
enum CurveCmd {
    Validate {
        #[arg(long)]
        curve: PathBuf,
        /// Print the canonical curve file instead of a report
        #[arg(long)]
        echo: bool,
    },
    Classify {
        #[arg(long)]
        curve: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum PolarizationCmd {
    Canonical {
        #[arg(long)]
        curve: PathBuf,
    },
    Check {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value = "canonical")]
        omega: String,
    },
}

#[derive(Debug, Subcommand)]
enum SheafCmd {
    Info {
        #[arg(long)]
        curve: PathBuf,
        /// Descriptor file; defaults to the `sheaf` blocks of the curve file
        #[arg(long)]
        sheaf: Option<PathBuf>,
        #[arg(long, default_value = "canonical")]
        omega: String,
    },
}

#[derive(Debug, Args)]
struct SystemArgs {
    #[arg(long)]
    curve: PathBuf,
    #[arg(long, default_value = "canonical")]
    omega: String,
    #[arg(long)]
    rank: u32,
    #[arg(long, allow_hyphen_values = true)]
    degree: i64,
    #[arg(long)]
    root: Option<ComponentId>,
}

#[derive(Debug, Args)]
struct TupleArgs {
    #[arg(long)]
    curve: PathBuf,
    #[arg(long, default_value = "canonical")]
    omega: String,
    #[arg(long)]
    rank: u32,
    #[arg(long, allow_hyphen_values = true)]
    tuple: String,
    #[arg(long)]
    root: Option<ComponentId>,
}

#[derive(Debug, Subcommand)]
enum ComponentsCmd {
    Enumerate {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long)]
        small_slope: bool,
    },
    Check {
        #[command(flatten)]
        t: TupleArgs,
    },
    Radius {
        #[command(flatten)]
        t: TupleArgs,
    },
    Invariance {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value = "canonical")]
        omega: String,
        #[arg(long)]
        rank: u32,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
    },
}

#[derive(Debug, Args)]
struct NumberArgs {
    #[arg(long)]
    pa: i64,
    #[arg(long)]
    r: i64,
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    #[arg(long)]
    k: i64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Chain,
    Comb,
}

#[derive(Debug, Subcommand)]
enum BnCmd {
    Number {
        #[command(flatten)]
        n: NumberArgs,
    },
    Bounds {
        #[command(flatten)]
        n: NumberArgs,
    },
    Certify {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value = "canonical")]
        omega: String,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        root: Option<ComponentId>,
    },
    Scan {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        gamma_max: usize,
        #[arg(long)]
        genus_max: u32,
        #[arg(long)]
        s_max: u32,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

type Outcome = (String, i32);

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Curve(CurveCmd::Validate { curve, echo }) => curve_validate(&curve, echo),
        Command::Curve(CurveCmd::Classify { curve }) => curve_classify(&curve),
        Command::Order { curve, root } => order(&curve, root),
        Command::Polarization(PolarizationCmd::Canonical { curve }) => polarization(&curve, None),
        Command::Polarization(PolarizationCmd::Check { curve, omega }) => polarization(&curve, Some(&omega)),
        Command::Sheaf(SheafCmd::Info { curve, sheaf, omega }) => sheaf_info(&curve, sheaf.as_deref(), &omega),
        Command::Components(c) => components(c),
        Command::Bn(c) => bn(c),
    }
}

struct Input {
    curve: NodalCurve,
    text: String,
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn load_curve(path: &Path, report: &mut Report) -> Result<Input> {
    let text = read_text(path)?;
    report.add_input("curve", text.as_bytes());
    let curve = text.parse::<NodalCurve>()?;
    Ok(Input { curve, text })
}

fn omega_for(curve: &NodalCurve, arg: &str) -> Result<Polarization> {
    if arg == "canonical" {
        Polarization::canonical(curve)
    } else {
        Polarization::for_curve(curve, parse_rational_list(arg)?)
    }
}

fn curve_block(curve: &NodalCurve) -> Block {
    let mut b = Block::new();
    b.push("gamma", curve.gamma())
        .push("delta", curve.delta())
        .push("genera", fmt_ints(curve.genera()))
        .push("p_a", curve.arithmetic_genus())
        .push("compact_type", curve.is_compact_type())
        .push("shape", curve.classify().as_str());
    b
}

fn curve_validate(path: &Path, echo: bool) -> Result<Outcome> {
    let mut report = Report::new("curve validate");
    let input = load_curve(path, &mut report)?;
    if echo {
        return Ok((input.curve.to_file_string(), 0));
    }
    let mut b = curve_block(&input.curve);
    b.push("valid", true);
    report.blocks.push(b);
    Ok((report.render(), 0))
}

fn curve_classify(path: &Path) -> Result<Outcome> {
    let mut report = Report::new("curve classify");
    let input = load_curve(path, &mut report)?;
    report.blocks.push(curve_block(&input.curve));
    Ok((report.render(), 0))
}

fn order(path: &Path, root: Option<ComponentId>) -> Result<Outcome> {
    let mut report = Report::new("order");
    let curve = load_curve(path, &mut report)?.curve;
    curve.require_compact_type()?;
    let root = root.unwrap_or_else(|| default_root(&curve));
    let dec = order_components(&curve, root)?;
    let violations = verify_decomposition(&curve, &dec);
    let mut b = Block::new();
    b.push("root", root)
        .push("order", fmt_ints(&dec.order))
        .push("verified", violations.is_empty());
    for v in &violations {
        b.push("violation", v);
    }
    report.blocks.push(b);
    let mut t = Table::new("decomposition", &["j", "A_j", "p_j"]);
    for (i, (a, p)) in dec.subcurves.iter().zip(&dec.separating_nodes).enumerate() {
        t.rows.push(vec![(i + 1).to_string(), fmt_ints(&a.to_vec()), p.to_string()]);
    }
    report.tables.push(t);
    Ok((report.render(), if violations.is_empty() { 0 } else { 1 }))
}

fn goodness_table(g: &GoodnessReport) -> Table {
    let mut t = Table::new("splits", &["node", "B", "delta", "ok"]);
    for s in &g.splits {
        t.rows.push(vec![
            s.node.to_string(),
            fmt_ints(&s.side.to_vec()),
            s.delta.to_string(),
            if s.ok { "pass" } else { "fail" }.into(),
        ]);
    }
    t
}

fn polarization(path: &Path, omega: Option<&str>) -> Result<Outcome> {
    let mut report = Report::new(if omega.is_some() {
        "polarization check"
    } else {
        "polarization canonical"
    });
    let curve = load_curve(path, &mut report)?.curve;
    let (key, w) = match omega {
        None => ("eta", Polarization::canonical(&curve)?),
        Some(arg) => ("omega", omega_for(&curve, arg)?),
    };
    let mut b = Block::new();
    b.push(key, &w);
    if !curve.is_compact_type() {
        b.push("goodness_proxy", "n/a (not compact type)");
        report.blocks.push(b);
        return Ok((report.render(), 0));
    }
    let g = goodness_proxy(&curve, &w)?;
    b.push("goodness_proxy", if g.pass() { "pass" } else { "fail" });
    let heavy = w.heavy_components();
    if !heavy.is_empty() {
        b.push("heavy_components", fmt_ints(&heavy));
    }
    report.blocks.push(b);
    report.tables.push(goodness_table(&g));
    Ok((report.render(), if g.pass() { 0 } else { 1 }))
}

fn sheaf_info(path: &Path, sheaf: Option<&Path>, omega: &str) -> Result<Outcome> {
    let mut report = Report::new("sheaf info");
    let input = load_curve(path, &mut report)?;
    let text = match sheaf {
        Some(p) => {
            let t = read_text(p)?;
            report.add_input("sheaf", t.as_bytes());
            t
        }
        None => input.text.clone(),
    };
    let curve = &input.curve;
    let w = omega_for(curve, omega)?;
    let descriptors = parse_descriptors(curve, &text)?;
    if descriptors.is_empty() {
        return Err(Error::InvalidSheaf("no `sheaf` block found".into()));
    }
    for (i, f) in descriptors.iter().enumerate() {
        let mut b = Block::new();
        b.push("sheaf", i + 1)
            .push("multirank", fmt_ints(f.multirank()))
            .push("chi", f.euler_characteristic())
            .push("locally_free", f.is_locally_free())
            .push("wrank", f.wrank(&w)?)
            .push("wdeg", f.wdeg(&w)?);
        match f.wslope(&w) {
            Ok(mu) => b.push("slope", mu),
            Err(_) => b.push("slope", "undefined"),
        };
        if f.degrees().is_some() {
            b.push("delta", f.delta(&w)?);
        }
        report.blocks.push(b);
    }
    let mut t = Table::new("ext_defect", &["E", "F", "defect"]);
    for (i, e) in descriptors.iter().enumerate() {
        for (j, f) in descriptors.iter().enumerate() {
            t.rows
                .push(vec![(i + 1).to_string(), (j + 1).to_string(), global_ext_defect(e, f)?.to_string()]);
        }
    }
    report.tables.push(t);
    Ok((report.render(), 0))
}

fn star_cells(rep: &StabilityReport) -> Vec<String> {
    rep.rows
        .iter()
        .map(|r| format!("{}<{}<{}", r.lower, r.partial_sum, r.upper))
        .collect()
}

fn star_header(gamma: usize) -> Vec<String> {
    let mut h = vec!["tuple".to_string()];
    h.extend((1..gamma).map(|j| format!("star_{j}")));
    h.push("verdict".into());
    h.push("radius".into());
    h
}

fn components(cmd: ComponentsCmd) -> Result<Outcome> {
    match cmd {
        ComponentsCmd::Enumerate { sys, small_slope } => {
            let mut report = Report::new("components enumerate");
            let curve = load_curve(&sys.curve, &mut report)?.curve;
            let w = omega_for(&curve, &sys.omega)?;
            let root = sys.root.unwrap_or_else(|| default_root(&curve));
            let dec = order_components(&curve, root)?;
            let mut catalog = enumerate_components(&curve, &w, &dec, sys.rank, sys.degree)?;
            if small_slope {
                catalog = small_slope_filter(&catalog, sys.rank);
            }
            let mut b = Block::new();
            b.push("omega", &w)
                .push("rank", sys.rank)
                .push("degree", sys.degree)
                .push("root", root)
                .push("order", fmt_ints(&dec.order))
                .push("small_slope_only", small_slope)
                .push("count", catalog.len());
            report.blocks.push(b);
            let mut t = Table {
                name: "components".into(),
                header: star_header(curve.gamma()),
                rows: Vec::new(),
            };
            for tuple in &catalog {
                let rep = star_conditions(&curve, &w, &dec, tuple)?;
                let radius = robustness_radius(&curve, &w, &dec, tuple)?;
                let mut row = vec![tuple.to_string()];
                row.extend(star_cells(&rep));
                row.push(if rep.pass() { "stable" } else { "unstable" }.into());
                row.push(radius.to_string());
                t.rows.push(row);
            }
            report.tables.push(t);
            Ok((report.render(), 0))
        }
        ComponentsCmd::Check { t } => {
            let mut report = Report::new("components check");
            let curve = load_curve(&t.curve, &mut report)?.curve;
            let w = omega_for(&curve, &t.omega)?;
            let root = t.root.unwrap_or_else(|| default_root(&curve));
            let dec = order_components(&curve, root)?;
            let tuple = ComponentTuple::new(t.rank, parse_int_list(&t.tuple)?)?;
            let rep = star_conditions(&curve, &w, &dec, &tuple)?;
            let mut b = Block::new();
            b.push("omega", &w)
                .push("tuple", &tuple)
                .push("root", root)
                .push("degree_matches", rep.degree_matches)
                .push("small_slope", tuple.is_small_slope())
                .push("verdict", if rep.pass() { "stable" } else { "unstable" });
            report.blocks.push(b);
            let mut tab = Table::new("conditions", &["j", "A_j", "lower", "sigma", "upper", "ok"]);
            for r in &rep.rows {
                tab.rows.push(vec![
                    r.j.to_string(),
                    fmt_ints(&r.subcurve.to_vec()),
                    r.lower.to_string(),
                    r.partial_sum.to_string(),
                    r.upper.to_string(),
                    if r.pass { "pass" } else { "fail" }.into(),
                ]);
            }
            report.tables.push(tab);
            Ok((report.render(), if rep.pass() { 0 } else { 1 }))
        }
        ComponentsCmd::Radius { t } => {
            let mut report = Report::new("components radius");
            let curve = load_curve(&t.curve, &mut report)?.curve;
            let w = omega_for(&curve, &t.omega)?;
            let root = t.root.unwrap_or_else(|| default_root(&curve));
            let dec = order_components(&curve, root)?;
            let tuple = ComponentTuple::new(t.rank, parse_int_list(&t.tuple)?)?;
            let radius = robustness_radius(&curve, &w, &dec, &tuple)?;
            let mut b = Block::new();
            b.push("omega", &w).push("tuple", &tuple).push("guaranteed_radius", &radius);
            if let Radius::Finite(_) = radius {
                if let Some((bc, eps)) = binding_witness(&curve, &w, &dec, &tuple, &frac(1, 10))? {
                    let broken = w
                        .perturb(&eps)
                        .and_then(|w2| star_conditions(&curve, &w2, &dec, &tuple))
                        .map(|r| !r.pass());
                    b.push("binding_j", bc.j)
                        .push("binding_side", format!("{:?}", bc.side).to_lowercase())
                        .push("binding_slack", &bc.slack)
                        .push("coefficient", &bc.coefficient)
                        .push("witness_eps", crate::rational::fmt_list(&eps));
                    match broken {
                        Ok(v) => b.push("witness_breaks", v),
                        Err(_) => b.push("witness_breaks", "witness leaves the simplex"),
                    };
                }
            }
            report.blocks.push(b);
            Ok((report.render(), 0))
        }
        ComponentsCmd::Invariance {
            curve,
            omega,
            rank,
            degree,
        } => {
            let mut report = Report::new("components invariance");
            let curve = load_curve(&curve, &mut report)?.curve;
            let w = omega_for(&curve, &omega)?;
            let inv = catalog_invariance_check(&curve, &w, rank, degree)?;
            let mut b = Block::new();
            b.push("reference_root", inv.reference_root)
                .push("roots_checked", curve.gamma())
                .push("catalog_size", inv.reference.len())
                .push("invariant", inv.pass());
            report.blocks.push(b);
            let mut t = Table::new("differences", &["root", "extra", "missing"]);
            for (root, extra, missing) in &inv.differences {
                let join = |v: &[ComponentTuple]| {
                    v.iter().map(|x| format!("({x})")).collect::<Vec<_>>().join(" ")
                };
                t.rows.push(vec![root.to_string(), join(extra), join(missing)]);
            }
            report.tables.push(t);
            Ok((report.render(), if inv.pass() { 0 } else { 1 }))
        }
    }
}

fn bn(cmd: BnCmd) -> Result<Outcome> {
    match cmd {
        BnCmd::Number { n } => {
            let mut report = Report::new("bn number");
            let mut b = Block::new();
            b.push("p_a", n.pa)
                .push("r", n.r)
                .push("d", n.d)
                .push("k", n.k)
                .push("beta", bn_number(n.pa, n.r, n.d, n.k)?);
            report.blocks.push(b);
            Ok((report.render(), 0))
        }
        BnCmd::Bounds { n } => {
            let mut report = Report::new("bn bounds");
            let v = bgn_bounds(n.pa, n.r, n.d, n.k)?;
            let mut b = Block::new();
            b.push("verdict", if v.pass() { "pass" } else { "fail" });
            report.blocks.push(b);
            let mut t = Table::new("clauses", &["clause", "ok", "detail"]);
            for c in &v.clauses {
                t.rows.push(vec![c.name.clone(), pass_str(c.pass), c.detail.clone()]);
            }
            report.tables.push(t);
            Ok((report.render(), if v.pass() { 0 } else { 1 }))
        }
        BnCmd::Certify {
            curve,
            omega,
            s,
            k,
            d,
            root,
        } => {
            let mut report = Report::new("bn certify");
            let curve = load_curve(&curve, &mut report)?.curve;
            let w = omega_for(&curve, &omega)?;
            let cert = certify_bn_component(&curve, &w, s, k, d, root)?;
            let mut b = Block::new();
            b.push("genera", fmt_ints(curve.genera()))
                .push("p_a", curve.arithmetic_genus())
                .push("omega", &w)
                .push("s", s)
                .push("k", k)
                .push("d", d);
            let code = match &cert {
                Certification::Certified(c) => {
                    b.push("status", "certified")
                        .push("r", c.r)
                        .push("root", c.root)
                        .push("tuple", &c.tuple)
                        .push("beta", c.beta)
                        .push("dim_X", c.dim_x)
                        .push("h1_dual", c.h1_dual)
                        .push("fiber_dim", c.fiber_dim)
                        .push("identity", pass_str(c.identity_holds()));
                    0
                }
                Certification::Failed(f) => {
                    b.push("status", "failed");
                    for c in f.failures() {
                        b.push("failure", format!("{}: {}", c.name, c.detail));
                    }
                    1
                }
            };
            report.blocks.push(b);
            let mut t = Table::new("checklist", &["clause", "ok", "detail"]);
            for c in cert.checklist() {
                t.rows.push(vec![c.name.clone(), pass_str(c.pass), c.detail.clone()]);
            }
            report.tables.push(t);
            if let Certification::Certified(c) = &cert {
                let mut t = Table::new("conditions", &["j", "A_j", "lower", "sigma", "upper", "ok"]);
                for r in &c.stability.rows {
                    t.rows.push(vec![
                        r.j.to_string(),
                        fmt_ints(&r.subcurve.to_vec()),
                        r.lower.to_string(),
                        r.partial_sum.to_string(),
                        r.upper.to_string(),
                        pass_str(r.pass),
                    ]);
                }
                report.tables.push(t);
            }
            Ok((report.render(), code))
        }
        BnCmd::Scan {
            family,
            gamma_max,
            genus_max,
            s_max,
        } => {
            let fam = match family {
                FamilyArg::Chain => Family::Chain,
                FamilyArg::Comb => Family::Comb,
            };
            let curves = curve_family(fam, gamma_max, genus_max)?;
            let rows = conjecture_scan(&curves, 1..=s_max, 1..=i64::from(s_max), 1..=i64::from(s_max))?;
            let open = rows.iter().filter(|r| r.status == crate::brill_noether::ScanStatus::Open).count();
            let mut report = Report::new("bn scan");
            let mut b = Block::new();
            b.push("family", format!("{family:?}").to_lowercase())
                .push("gamma_max", gamma_max)
                .push("genus_max", genus_max)
                .push("s_max", s_max)
                .push("rows", rows.len())
                .push("certified", rows.len() - open)
                .push("open", open);
            report.blocks.push(b);
            let mut t = Table::new("scan", &["gamma", "genera", "s", "d", "k", "status", "tuple", "beta"]);
            for r in &rows {
                t.rows.push(vec![
                    r.gamma.to_string(),
                    fmt_ints(&r.genera),
                    r.s.to_string(),
                    r.d.to_string(),
                    r.k.to_string(),
                    r.status.as_str().into(),
                    r.tuple.as_deref().map_or("-".into(), fmt_ints),
                    r.beta.map_or("-".into(), |b| b.to_string()),
                ]);
            }
            report.tables.push(t);
            Ok((report.render(), 0))
        }
    }
}

fn pass_str(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.into()
}
