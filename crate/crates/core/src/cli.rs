//! Command-line front end. The binary only parses arguments and calls [`run`].

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_integer::Integer;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::builtin::{
    artin_schreier, auto_fan, builtin_presentation, example_pi_chart, example_pi_unit_equations,
    example_pi_units, EXAMPLES,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{parse_rational, GroupContext, GroupElement, DEFAULT_PRECISION_CEILING};
use crate::semigroup::{
    branch_semigroup_from_char_exponents, branch_values_oracle, minimal_generators, Semigroup,
};
use crate::series::HahnSeries;
use crate::toric::{
    audit_fan, find_sigma_w, jacobi_perron_refine, regular_subdivision, Cone, Constraint, Fan,
    WeightVector, DEFAULT_STELLAR_BUDGET,
};
use crate::torific::{
    automorphism_intertwine_check, embed_in_chart, kaplansky_embed_fg, parse_field,
    verify_embedding, EmbeddingResult, PresentationFile, TorificPresentation,
};
use crate::tower::{
    approximation_tower, display_puiseux, semigroup_units, PuiseuxFile, PuiseuxTerm,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "torific",
    version,
    about = "Value semigroups, torific uniformizers and Hahn series embeddings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Bits of π precision before a comparison gives up.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION_CEILING)]
    pub precision_ceiling: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Semigroup generators, relation lattice and saturation.
    Semigroup(SemigroupArgs),
    /// Embed a presentation into Hahn series.
    Embed(EmbedArgs),
    /// Approximation tower of a Puiseux series.
    Tower(TowerArgs),
    /// Regular subdivisions, audits and Jacobi-Perron refinement.
    Fan(FanArgs),
    /// Embed and run every check, including intertwining for `--example pi`.
    Verify(EmbedArgs),
}

#[derive(Debug, Args)]
pub struct SemigroupArgs {
    /// Numerical semigroup generators, e.g. `4,6,13`.
    #[arg(long)]
    pub generators: Option<String>,
    /// Characteristic exponents of a branch, e.g. `4,6,7`.
    #[arg(long)]
    pub char_exponents: Option<String>,
    /// Branch `(t^n, Σ t^e)` as `n;e1,e2,...`, e.g. `4;6,7`.
    #[arg(long)]
    pub branch: Option<String>,
    #[arg(long)]
    pub example: Option<String>,
    /// Degree bound for the brute-force value oracle.
    #[arg(long, default_value_t = 8)]
    pub degree_bound: u32,
    /// Value bound for the brute-force oracle.
    #[arg(long)]
    pub cutoff: Option<String>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Presentation file (JSON).
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub example: Option<String>,
    /// Fan file (JSON); without it a fan is computed.
    #[arg(long)]
    pub fan: Option<PathBuf>,
    #[arg(long)]
    pub auto_subdivide: bool,
    #[arg(long, default_value_t = DEFAULT_STELLAR_BUDGET)]
    pub max_stellar_steps: usize,
    #[arg(long)]
    pub cutoff: Option<String>,
    /// Overrides the field of the presentation: `Q` or `F_p`.
    #[arg(long)]
    pub field: Option<String>,
    /// Characteristic for the Artin-Schreier example.
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    /// Seed for the random monomials of the graded check.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TowerArgs {
    /// Puiseux term list (JSON), e.g. `[["1","3/2"],["1","7/4"]]`.
    pub input: Option<PathBuf>,
    /// Inline terms, e.g. `3/2,7/4,2*15/8`.
    #[arg(long)]
    pub terms: Option<String>,
    #[arg(long)]
    pub example: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    /// Exponent of `x` below which series are computed.
    #[arg(long, default_value = "20")]
    pub cutoff: String,
    /// Level whose equation serves as test element.
    #[arg(long)]
    pub test_level: Option<usize>,
    /// Report the first level whose value exceeds this exponent of `x`.
    #[arg(long)]
    pub target: Option<String>,
}

#[derive(Debug, Args)]
pub struct FanArgs {
    /// Ambient dimension; defaults to the length of the constraints.
    #[arg(long)]
    pub b: Option<usize>,
    /// Ray to insert, e.g. `2,3`. Repeatable.
    #[arg(long)]
    pub ray: Vec<String>,
    /// Hyperplane normal, e.g. `-3,2,0`. Repeatable.
    #[arg(long)]
    pub hyperplane: Vec<String>,
    /// Use the constraints of a builtin presentation.
    #[arg(long)]
    pub example: Option<String>,
    #[arg(long, default_value_t = DEFAULT_STELLAR_BUDGET)]
    pub max_stellar_steps: usize,
    /// Audit a fan file instead of subdividing.
    #[arg(long)]
    pub audit: Option<PathBuf>,
    #[arg(long)]
    pub jacobi_perron: bool,
    /// Weight vector for Jacobi-Perron over `Z + Zπ`, e.g. `1,pi`.
    #[arg(long, default_value = "1,pi")]
    pub weights: String,
    #[arg(long, default_value_t = 3)]
    pub steps: usize,
}

/// A report and the exit code it calls for.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

impl Outcome {
    fn checked(report: Value, ok: bool) -> Self {
        Outcome {
            report,
            code: if ok { EXIT_OK } else { EXIT_VERIFICATION },
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceCap(_) | Error::PrecisionCeiling { .. } => EXIT_RESOURCE,
        Error::NotPseudoConvergent(_) => EXIT_VERIFICATION,
        _ => EXIT_INPUT,
    }
}

/// Runs a parsed command line; errors carry their exit code via [`exit_code`].
pub fn run(cli: &Cli) -> Result<Outcome> {
    let ceiling = cli.precision_ceiling;
    match &cli.command {
        Command::Semigroup(a) => cmd_semigroup(a),
        Command::Embed(a) => cmd_embed(a, ceiling, false),
        Command::Verify(a) => cmd_embed(a, ceiling, true),
        Command::Tower(a) => cmd_tower(a),
        Command::Fan(a) => cmd_fan(a),
    }
}

/// Pretty JSON with a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

fn parse_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("expected an integer, found {x:?}")))
        })
        .collect()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn from_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| {
        Error::Parse(format!(
            "{}: line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn semigroup_json(s: &Semigroup) -> Value {
    let lattice = s.relation_lattice();
    json!({
        "generators": s.to_string(),
        "relation_lattice": lattice.to_string(),
        "elementary_divisors": lattice.elementary_divisors,
        "saturated": lattice.is_saturated(),
        "frobenius_number": s.frobenius_number(),
    })
}

/// Characteristic exponents of `(t^n, y)`: `n`, then every exponent of `y`
/// that lowers the running gcd.
fn char_exponents(n: i64, y: &[i64]) -> Vec<i64> {
    let mut out = vec![n];
    let mut e = n;
    for &k in y {
        let g = e.gcd(&k);
        if g < e {
            out.push(k);
            e = g;
        }
    }
    out
}

fn cmd_semigroup(a: &SemigroupArgs) -> Result<Outcome> {
    let branch = match (a.example.as_deref(), &a.branch) {
        (Some("branch-4-6-13"), _) => Some("4;6,7".to_string()),
        (Some(other), _) => {
            return Err(Error::Parse(format!(
                "unknown semigroup example {other:?}; known: branch-4-6-13"
            )))
        }
        (None, b) => b.clone(),
    };
    if let Some(g) = &a.generators {
        let s = Semigroup::numerical(&parse_list(g)?)?;
        return Ok(Outcome::checked(
            json!({ "input": g, "semigroup": semigroup_json(&s) }),
            true,
        ));
    }
    if let Some(c) = &a.char_exponents {
        let s = branch_semigroup_from_char_exponents(&parse_list(c)?)?;
        return Ok(Outcome::checked(
            json!({ "char_exponents": c, "semigroup": semigroup_json(&s) }),
            true,
        ));
    }
    let Some(b) = branch else {
        return Err(Error::Parse(
            "semigroup needs --generators, --char-exponents, --branch or --example".into(),
        ));
    };
    let (n, ys) = b
        .split_once(';')
        .ok_or_else(|| Error::Parse(format!("branch {b:?} is not of the form n;e1,e2")))?;
    let n: i64 = n
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad x exponent in {b:?}")))?;
    let mut ys = parse_list(ys)?;
    ys.sort_unstable();
    let bound: i64 = a
        .cutoff
        .as_deref()
        .unwrap_or("30")
        .parse()
        .map_err(|_| Error::Parse("value bound must be an integer".into()))?;
    let ctx = GroupContext::integers();
    let f = Field::Rationals;
    let cut = GroupElement::new(ctx.clone(), vec![bound + 1]);
    let one = f.one();
    let x = HahnSeries::monomial(
        ctx.clone(),
        f,
        one.clone(),
        GroupElement::new(ctx.clone(), vec![n]),
        cut.clone(),
    )?;
    let y = HahnSeries::from_terms(
        ctx.clone(),
        f,
        ys.iter()
            .map(|&e| (GroupElement::new(ctx.clone(), vec![e]), one.clone())),
        cut,
    )?;
    let chars = char_exponents(n, &ys);
    let formula = branch_semigroup_from_char_exponents(&chars)?;
    let values = branch_values_oracle(
        &x,
        &y,
        a.degree_bound,
        &GroupElement::new(ctx.clone(), vec![bound]),
    )?;
    let oracle = minimal_generators(&values)?;
    let agree = formula.generators() == oracle.generators();
    Ok(Outcome::checked(
        json!({
            "branch": { "x": x.to_string(), "y": y.to_string() },
            "char_exponents": chars,
            "semigroup": semigroup_json(&formula),
            "oracle": { "degree_bound": a.degree_bound, "value_bound": bound, "generators": oracle.to_string() },
            "agree": agree,
        }),
        agree,
    ))
}

fn default_cutoff(example: Option<&str>) -> Option<&'static str> {
    match example {
        Some("pi") => Some("10+3pi"),
        Some("cusp") => Some("20"),
        Some("branch-4-6-13") => Some("30"),
        Some("artin-schreier") => Some("64"),
        _ => None,
    }
}

fn load_presentation(a: &EmbedArgs, ceiling: u32) -> Result<(TorificPresentation, Option<Fan>)> {
    let (file, fan) = match (&a.example, &a.input) {
        (Some(name), None) => {
            let (p, fan) = builtin_presentation(name)?;
            (p.to_file(), fan)
        }
        (None, Some(path)) => (from_json::<PresentationFile>(path)?, None),
        (Some(_), Some(_)) => {
            return Err(Error::Parse(
                "give either --example or a presentation file, not both".into(),
            ))
        }
        (None, None) => {
            return Err(Error::Parse(format!(
                "need a presentation file or --example ({})",
                EXAMPLES.join(", ")
            )))
        }
    };
    let mut file = file;
    if let Some(f) = &a.field {
        parse_field(f)?;
        file.field = f.clone();
    }
    let p = file.build(ceiling)?;
    let fan = match (&a.fan, a.auto_subdivide) {
        (Some(path), _) => Some(load_fan(path, &p.fan_constraints())?),
        (None, true) => None,
        (None, false) => fan,
    };
    Ok((p, fan))
}

/// Reads and validates a fan file; audit defects become the error message.
fn load_fan(path: &Path, constraints: &[Constraint]) -> Result<Fan> {
    let raw: Fan = from_json(path)?;
    let fan = Fan::from_cones(raw.cones.clone())
        .map_err(|e| Error::FanDefect(format!("{}: {e}", path.display())))?;
    if fan.b != raw.b {
        return Err(Error::FanDefect(format!(
            "{}: declared b = {} but cones live in dimension {}",
            path.display(),
            raw.b,
            fan.b
        )));
    }
    let audit = audit_fan(&fan, constraints)?;
    if !audit.passed() {
        return Err(Error::FanDefect(format!(
            "{}: audit failed: {}",
            path.display(),
            audit.defects.join("; ")
        )));
    }
    Ok(fan)
}

fn embedding_json(e: &EmbeddingResult) -> Value {
    json!({
        "sigma_w": e.sigma_w.to_string(),
        "chart": e.chart.to_string(),
        "monomial_map": e.map.display_lines(),
        "y_values": e.map.y_values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "strict_transforms": e.transforms.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "center": e.center.iter().map(|(j, c)| json!({ "y": j + 1, "value": c.to_string() })).collect::<Vec<_>>(),
        "rho": e.rho.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "newton_steps": e.newton_steps,
        "xi": e.xi.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "residuals": e.residuals.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    })
}

fn cmd_embed(a: &EmbedArgs, ceiling: u32, full: bool) -> Result<Outcome> {
    if a.example.as_deref() == Some("artin-schreier") {
        return cmd_artin_schreier(a);
    }
    let (p, fan) = load_presentation(a, ceiling)?;
    let cutoff_text = match (&a.cutoff, default_cutoff(a.example.as_deref())) {
        (Some(c), _) => c.clone(),
        (None, Some(c)) => c.to_string(),
        (None, None) => {
            return Err(Error::Parse(
                "--cutoff is required for presentation files".into(),
            ))
        }
    };
    let cutoff = p.ctx().parse_element(&cutoff_text)?;
    if !cutoff.is_positive()? {
        return Err(Error::Parse(format!("cutoff {cutoff} must be positive")));
    }
    let (fan, fan_source) = match fan {
        Some(f) => (f, "given"),
        None => (auto_fan(&p, a.max_stellar_steps)?.0, "auto-subdivided"),
    };
    let e = kaplansky_embed_fg(&p, &fan, &cutoff)?;
    let v = verify_embedding(&p, &e, a.seed)?;
    let mut ok = v.passed();
    let mut report = json!({
        "presentation": {
            "group": p.ctx().descriptor(),
            "field": p.field().to_string(),
            "gamma": p.gamma().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "relations": p.relations().iter().map(|r| r.polynomial().to_string()).collect::<Vec<_>>(),
        },
        "cutoff": cutoff.to_string(),
        "fan": { "source": fan_source, "cones": fan.cones.len() },
        "embedding": embedding_json(&e),
        "verification": v,
    });
    if full && a.example.as_deref() == Some("pi") {
        let sigma = find_sigma_w(&fan, &p.weight_vector()?, p.rational_rank())?;
        let e2 = embed_in_chart(&p, &example_pi_chart(3, 5)?, sigma, &cutoff)?;
        let v2 = verify_embedding(&p, &e2, a.seed)?;
        let units = example_pi_units(1, &cutoff)?;
        let inter = automorphism_intertwine_check(&e, &e2, &units)?;
        let eqs = example_pi_unit_equations(&units, (1, 2), (3, 5), &cutoff)?;
        ok &= v2.passed() && inter.passed() && eqs.iter().all(|&b| b);
        report["second_chart"] = json!({ "embedding": embedding_json(&e2), "verification": v2 });
        report["automorphism"] = json!({ "u(1)": units[0].to_string(), "u(pi)": units[1].to_string(), "intertwines": inter, "unit_equations": eqs });
    }
    report["passed"] = json!(ok);
    Ok(Outcome::checked(report, ok))
}

fn cmd_artin_schreier(a: &EmbedArgs) -> Result<Outcome> {
    let cutoff: i64 = a
        .cutoff
        .as_deref()
        .unwrap_or("64")
        .parse()
        .map_err(|_| Error::Parse("the Artin-Schreier cutoff is an integer exponent".into()))?;
    if cutoff <= 0 {
        return Err(Error::Parse("cutoff must be positive".into()));
    }
    let r = artin_schreier(a.p, cutoff)?;
    let ok = r.passed();
    let report = json!({
        "p": r.p,
        "cutoff": cutoff,
        "x": r.x.to_string(),
        "y": r.y.to_string(),
        "residual": r.residual.to_string(),
        "zeta_gauges": r.zeta.gauges().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "breadth": { "differ_by_x": r.breadth_one, "differ_by_first_gauge": r.breadth_half },
        "passed": ok,
    });
    Ok(Outcome::checked(report, ok))
}

fn parse_terms(s: &str) -> Result<Vec<PuiseuxTerm>> {
    s.split(',')
        .map(|t| {
            let (c, e) = t.split_once('*').unwrap_or(("1", t));
            Ok(PuiseuxTerm::new(parse_rational(c)?, parse_rational(e)?))
        })
        .collect()
}

fn cmd_tower(a: &TowerArgs) -> Result<Outcome> {
    let terms = match (&a.example, &a.terms, &a.input) {
        (Some(name), None, None) if name == "tower" => parse_terms("3/2,7/4,15/8")?,
        (Some(name), None, None) => {
            return Err(Error::Parse(format!(
                "unknown tower example {name:?}; known: tower"
            )))
        }
        (None, Some(t), None) => parse_terms(t)?,
        (None, None, Some(path)) => from_json::<PuiseuxFile>(path)?.build()?,
        _ => {
            return Err(Error::Parse(
                "give exactly one of --example, --terms or a term file".into(),
            ))
        }
    };
    let cutoff = parse_rational(&a.cutoff)?;
    let r = approximation_tower(&terms, a.levels, &cutoff, a.test_level)?;
    let names = vec!["x".to_string(), "y".to_string()];
    let increasing = r.gammas_increasing()?;
    let inclusions = r.inclusions.iter().all(|&b| b);
    let mut report = json!({
        "series": display_puiseux(&terms),
        "unit": format!("1/{}", r.n),
        "levels": r.levels.iter().enumerate().map(|(i, l)| json!({
            "level": i + 1,
            "denominator": l.denominator,
            "truncation": display_puiseux(&l.truncation),
            "equation": l.equation.display_with(&names),
            "gamma": l.gamma.to_string(),
            "semigroup_in_units": semigroup_units(&l.semigroup),
            "test_image": l.image.to_string(),
        })).collect::<Vec<_>>(),
        "test_level": r.test_level,
        "gammas_increasing": increasing,
        "inclusions": r.inclusions,
        "pseudo_convergent_gauges": r.pseudo.as_ref().map(|p| p.gauges().iter().map(|g| g.to_string()).collect::<Vec<_>>()),
    });
    if r.stabilized {
        report["note"] = json!("finitely generated: tower stabilizes");
    }
    if let Some(t) = &a.target {
        let target = parse_rational(t)? * BigRational::from_integer(r.n.into());
        if !target.is_integer() {
            return Err(Error::Parse(format!(
                "target {t} is not a multiple of 1/{}",
                r.n
            )));
        }
        let g = GroupElement::new(
            r.ctx.clone(),
            vec![target
                .to_integer()
                .try_into()
                .map_err(|_| Error::Parse("target too large".into()))?],
        );
        report["first_level_beyond_target"] = json!(r.first_level_beyond(&g)?);
    }
    Ok(Outcome::checked(report, increasing && inclusions))
}

fn vec_str(v: &[i64]) -> String {
    format!(
        "({})",
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

fn constraint_str(c: &Constraint) -> String {
    match c {
        Constraint::Hyperplane(n) => format!("hyperplane {}", vec_str(n)),
        Constraint::Cone(rays) => format!(
            "cone <{}>",
            rays.iter()
                .map(|r| vec_str(r))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

fn cmd_fan(a: &FanArgs) -> Result<Outcome> {
    if a.jacobi_perron {
        let ctx = GroupContext::integers_plus_pi();
        let w = a
            .weights
            .split(',')
            .map(|s| ctx.parse_element(s.trim()))
            .collect::<Result<Vec<_>>>()?;
        let b = w.len();
        let start = Cone::new(
            (0..b)
                .map(|i| (0..b).map(|j| i64::from(i == j)).collect())
                .collect(),
        )?;
        let cones = jacobi_perron_refine(&start, &WeightVector::new(w)?, a.steps)?;
        let nested = cones
            .windows(2)
            .all(|p| p[1].rays().iter().all(|r| p[0].contains(r)));
        let regular = cones.iter().all(|c| c.is_regular());
        return Ok(Outcome::checked(
            json!({
                "weights": a.weights,
                "cones": cones.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "nested": nested,
                "regular": regular,
            }),
            nested && regular,
        ));
    }
    let mut constraints: Vec<Constraint> = Vec::new();
    if let Some(name) = &a.example {
        let (p, _) = builtin_presentation(name)?;
        constraints.extend(p.fan_constraints());
        if name == "branch-4-6-13" {
            constraints.push(Constraint::Cone(vec![vec![4, 6, 13]]));
        }
    }
    for h in &a.hyperplane {
        constraints.push(Constraint::Hyperplane(parse_list(h)?));
    }
    for r in &a.ray {
        constraints.push(Constraint::Cone(vec![parse_list(r)?]));
    }
    if let Some(path) = &a.audit {
        let fan: Fan = from_json(path)?;
        let audit = audit_fan(&fan, &constraints)?;
        let ok = audit.passed();
        return Ok(Outcome::checked(json!({ "audit": audit }), ok));
    }
    let dims: Vec<usize> = constraints
        .iter()
        .map(|c| match c {
            Constraint::Hyperplane(n) => n.len(),
            Constraint::Cone(rays) => rays.first().map_or(0, |r| r.len()),
        })
        .collect();
    let b = match a.b {
        Some(b) => b,
        None => *dims
            .first()
            .ok_or_else(|| Error::Parse("fan needs --b, a constraint or --example".into()))?,
    };
    if let Some(d) = dims.iter().find(|&&d| d != b) {
        return Err(Error::Parse(format!(
            "constraint of length {d} for b = {b}"
        )));
    }
    let fan = regular_subdivision(b, &constraints, a.max_stellar_steps)?;
    let audit = audit_fan(&fan, &constraints)?;
    let ok = audit.passed();
    Ok(Outcome::checked(
        json!({
            "b": b,
            "constraints": constraints.iter().map(constraint_str).collect::<Vec<_>>(),
            "rays": fan.rays().iter().map(|r| vec_str(r)).collect::<Vec<_>>(),
            "cones": fan.cones.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "trace": fan.trace,
            "audit": audit,
        }),
        ok,
    ))
}
