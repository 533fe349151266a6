use std::fmt;
use std::path::Path;

use hkdiff::harness::{self, HarnessConfig};
use hkdiff::serial::{polynomial_to_terms, MapRecord};
use hkdiff::symbolic::{generic_series_map, generic_taylor_polynomial};
use hkdiff::{
    alpha_with_mode, embed_endo, embed_ga, higher_differential, invert_block_triangular, parse_polynomial,
    parse_series_map, reduce_at_origin, render_latex, render_plain, AlphaMode, Automorphism, DifferentialContext,
    Endo, Error, JetStyle, Polynomial, Scalar, SeriesMap, VarNames,
};
use serde_json::{json, Value};

use crate::{Cli, Command, Format, Style};

pub struct Output {
    pub text: String,
    pub warnings: Vec<String>,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, warnings: Vec::new(), code: 0 }
    }
}

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Usage(String),
    Io(String),
}

impl CliError {
    /// 2 for a failed consistency check, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::Inconsistent(_)) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(s) => f.write_str(s),
            CliError::Io(s) => write!(f, "i/o: {s}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Diff { f, generic } => diff(cli, f.as_deref(), *generic),
        Command::Alpha { components, verify } => alpha(cli, components, *verify),
        Command::Compose { phi, psi, psi_input, poly } => compose(cli, phi, psi, psi_input.as_deref(), *poly),
        Command::Invert { components, poly, block } => invert(cli, components, *poly, *block),
        Command::Classify { components, block } => classify(cli, components, *block),
        Command::Embed { components, unchecked } => embed(cli, components, *unchecked),
        Command::Verify { corrupt_alpha } => verify(cli, *corrupt_alpha),
        Command::Examples => examples(cli),
    }
}

fn jet_style(cli: &Cli, default: JetStyle) -> JetStyle {
    match cli.style {
        Some(Style::Y) => JetStyle::Y,
        Some(Style::D) => JetStyle::D,
        None => default,
    }
}

fn render<C: Scalar>(p: &Polynomial<C>, names: &VarNames, format: Format) -> String {
    match format {
        Format::Latex => render_latex(p, names),
        _ => render_plain(p, names),
    }
}

fn assignments<C: Scalar>(components: &[Polynomial<C>], names: &VarNames, format: Format) -> String {
    let lines: Vec<String> = components
        .iter()
        .enumerate()
        .map(|(k, p)| match format {
            Format::Latex => format!("{} \\mapsto {}", names.latex_name(k), render_latex(p, names)),
            _ => format!("{} -> {}", names.name(k), render_plain(p, names)),
        })
        .collect();
    lines.join("\n")
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn read_record(path: &Path) -> CliResult<MapRecord> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(MapRecord::from_json(&text)?)
}

fn check_m(cli: &Cli, m: usize) -> CliResult<()> {
    match cli.m {
        Some(given) if given != m => Err(CliError::Usage(format!(
            "--m {given} does not match the {m} components given"
        ))),
        _ => Ok(()),
    }
}

/// A series map from `--input` or inline components; `--N` is required for
/// inline input.
fn load_series(
    cli: &Cli,
    inline: &[String],
    input: Option<&Path>,
    require_automorphism: bool,
) -> CliResult<(SeriesMap, Vec<String>)> {
    if let Some(path) = input {
        if !inline.is_empty() {
            return Err(CliError::Usage("give either --input or inline components, not both".into()));
        }
        let map = read_record(path)?.to_series()?;
        check_m(cli, map.m())?;
        if cli.order.is_some_and(|n| n != map.order()) {
            return Err(CliError::Usage(format!("--N does not match N = {} in the input", map.order())));
        }
        if require_automorphism && !map.is_automorphism() {
            return Err(Error::NotAutomorphism(format!("linear part {} is singular", map.linear_part_string())).into());
        }
        return Ok((map, Vec::new()));
    }
    if inline.is_empty() {
        return Err(CliError::Usage("no map given: pass component expressions or --input".into()));
    }
    let order = cli.order.ok_or_else(|| CliError::Usage("--N is required".into()))?;
    check_m(cli, inline.len())?;
    let parsed = parse_series_map(inline, inline.len(), order, require_automorphism)?;
    Ok((parsed.map, parsed.warnings))
}

fn load_endo(cli: &Cli, inline: &[String], input: Option<&Path>) -> CliResult<Automorphism> {
    if let Some(path) = input {
        if !inline.is_empty() {
            return Err(CliError::Usage("give either --input or inline components, not both".into()));
        }
        let f = read_record(path)?.to_automorphism()?;
        check_m(cli, f.n())?;
        return Ok(f);
    }
    if inline.is_empty() {
        return Err(CliError::Usage("no map given: pass component expressions or --input".into()));
    }
    check_m(cli, inline.len())?;
    let names = VarNames::coordinates(inline.len());
    let comps = inline
        .iter()
        .map(|t| parse_polynomial(t, &names))
        .collect::<hkdiff::Result<Vec<_>>>()?;
    Ok(Automorphism::from_endo(Endo::new(comps)?))
}

fn diff(cli: &Cli, f: Option<&str>, generic: bool) -> CliResult<Output> {
    let m = cli.m.unwrap_or(1);
    let order = cli.order.unwrap_or(1);
    let ctx = DifferentialContext::new(m, order)?;
    let style = jet_style(cli, JetStyle::D);
    let names = if generic {
        VarNames::jets(m, order, style, false)
    } else {
        VarNames::for_context(&ctx, style)
    };
    let mut lines = Vec::new();
    let mut records = Vec::new();
    if generic {
        if f.is_some() {
            return Err(CliError::Usage("--generic takes no polynomial".into()));
        }
        for n in 1..=order {
            let g = generic_taylor_polynomial(m, n as u32);
            let d = reduce_at_origin(&higher_differential(&g, n, &ctx)?, &ctx)?;
            lines.push(format!("d^{n} f = {}", render(&d, &names, cli.format)));
            records.push(json!({"n": n, "text": render_plain(&d, &names)}));
        }
    } else {
        let text = f.ok_or_else(|| CliError::Usage("no polynomial given".into()))?;
        let p = parse_polynomial(text, &VarNames::coordinates(m))?;
        for n in 1..=order {
            let d = higher_differential(&p, n, &ctx)?;
            lines.push(format!("d^{n} f = {}", render(&d, &names, cli.format)));
            records.push(json!({
                "n": n,
                "text": render_plain(&d, &names),
                "terms": polynomial_to_terms(&d),
            }));
        }
    }
    if cli.format == Format::Json {
        let vars: Vec<&str> = (0..names.len()).map(|k| names.name(k)).collect();
        let v = json!({
            "kind": "differentials",
            "m": m,
            "N": order,
            "f": if generic { "generic" } else { f.unwrap_or_default() },
            "variables": vars,
            "differentials": records,
        });
        return Ok(Output::ok(json_text(&v)));
    }
    Ok(Output::ok(lines.join("\n")))
}

fn endo_json(f: &Endo, names: &VarNames) -> Value {
    let mut v = serde_json::to_value(MapRecord::from_endo(f)).expect("records serialize");
    let vars: Vec<&str> = (0..names.len()).map(|k| names.name(k)).collect();
    v["variables"] = json!(vars);
    v
}

fn alpha(cli: &Cli, components: &[String], verify: bool) -> CliResult<Output> {
    let (phi, warnings) = load_series(cli, components, cli.input.as_deref(), true)?;
    let mode = if verify { AlphaMode::Verify } else { AlphaMode::Fast };
    let image = alpha_with_mode(&phi, mode)?;
    let names = VarNames::jets(phi.m(), phi.order(), jet_style(cli, JetStyle::Y), false);
    let text = match cli.format {
        Format::Json => json_text(&endo_json(image.map(), &names)),
        f => {
            let mut t = assignments(image.map().components(), &names, f);
            if verify {
                t.push_str("\nverified: coefficient formula agrees with reduced differentials");
            }
            t
        }
    };
    Ok(Output { text, warnings, code: 0 })
}

fn series_output(cli: &Cli, map: &SeriesMap) -> String {
    match cli.format {
        Format::Json => MapRecord::from_series(map).to_json(),
        f => assignments(map.components(), &VarNames::coordinates(map.m()), f),
    }
}

fn endo_output(cli: &Cli, f: &Endo) -> String {
    let names = VarNames::coordinates(f.n());
    match cli.format {
        Format::Json => json_text(&endo_json(f, &names)),
        format => assignments(f.components(), &names, format),
    }
}

fn compose(cli: &Cli, phi: &[String], psi: &[String], psi_input: Option<&Path>, poly: bool) -> CliResult<Output> {
    if poly {
        let f = load_endo(cli, phi, cli.input.as_deref())?;
        let g = load_endo(cli, psi, psi_input)?;
        let h = f.forward().compose(g.forward())?;
        return Ok(Output::ok(endo_output(cli, &h)));
    }
    let (f, mut warnings) = load_series(cli, phi, cli.input.as_deref(), false)?;
    let (g, more) = load_series(cli, psi, psi_input, false)?;
    warnings.extend(more);
    let h = f.compose(&g)?;
    Ok(Output { text: series_output(cli, &h), warnings, code: 0 })
}

fn invert_poly(f: &Endo, block: Option<usize>) -> CliResult<Automorphism> {
    let result = match block {
        Some(b) => invert_block_triangular(f, b),
        None => invert_block_triangular(f, 1).or_else(|_| invert_block_triangular(f, f.n())),
    };
    Ok(result?)
}

fn invert(cli: &Cli, components: &[String], poly: bool, block: Option<usize>) -> CliResult<Output> {
    if poly {
        let f = load_endo(cli, components, cli.input.as_deref())?;
        let a = invert_poly(f.forward(), block)?;
        let inv = a.inverse().expect("inversion returns an inverse");
        return Ok(Output::ok(endo_output(cli, inv)));
    }
    let (phi, warnings) = load_series(cli, components, cli.input.as_deref(), true)?;
    let inv = phi.invert()?;
    Ok(Output { text: series_output(cli, &inv), warnings, code: 0 })
}

fn classify(cli: &Cli, components: &[String], block: Option<usize>) -> CliResult<Output> {
    let a = load_endo(cli, components, cli.input.as_deref())?;
    let f = a.forward();
    let names = VarNames::coordinates(f.n());
    let jac = f.jacobian_determinant();
    let invertible = a.inverse().is_some() || invert_poly(f, None).is_ok();
    let mut fields: Vec<(&str, Value)> = vec![
        ("variables", json!(f.n())),
        ("identity", json!(f.is_identity())),
        ("linear", json!(f.is_linear())),
        ("triangular", json!(f.is_triangular())),
        ("elementary", json!(f.is_elementary())),
        ("jacobian_determinant", json!(render_plain(&jac, &names))),
        ("constant_jacobian", json!(hkdiff::ga::has_constant_jacobian(f))),
        ("inverse_found", json!(invertible)),
    ];
    if let Some(b) = block {
        fields.push(("block_triangular", json!(f.is_block_triangular(b)?)));
    }
    let text = match cli.format {
        Format::Json => {
            let obj: serde_json::Map<String, Value> = fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            json_text(&Value::Object(obj))
        }
        _ => fields
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    Ok(Output::ok(text))
}

fn embed(cli: &Cli, components: &[String], unchecked: bool) -> CliResult<Output> {
    let order = cli.order.unwrap_or(1);
    let a = load_endo(cli, components, cli.input.as_deref())?;
    let m = a.n();
    let lifted = if unchecked {
        embed_endo(a.forward(), order)?
    } else {
        embed_ga(&a, order)?.forward().clone()
    };
    let names = VarNames::jets(m, order, jet_style(cli, JetStyle::Y), true);
    let text = match cli.format {
        Format::Json => json_text(&endo_json(&lifted, &names)),
        f => assignments(lifted.components(), &names, f),
    };
    Ok(Output::ok(text))
}

fn verify(cli: &Cli, corrupt_alpha: bool) -> CliResult<Output> {
    let mut config = HarnessConfig {
        seed: cli.seed,
        trials: cli.trials,
        corrupt_alpha,
        ..HarnessConfig::default()
    };
    match (cli.m, cli.order) {
        (Some(m), Some(n)) => config.grid = vec![(m, n)],
        (None, None) => {}
        _ => return Err(CliError::Usage("give both --m and --N, or neither for the default grid".into())),
    }
    let report = harness::run(&config)?;
    let code = if report.all_passed() { 0 } else { 2 };
    let text = match cli.format {
        Format::Json => {
            let results: Vec<Value> = report
                .results
                .iter()
                .map(|r| {
                    json!({
                        "m": r.m,
                        "N": r.order,
                        "suite": r.suite.name(),
                        "passed": r.passed,
                        "failed": r.failed,
                        "first_counterexample": r.first_counterexample.as_ref().map(|(t, s)| json!({"trial": t, "detail": s})),
                    })
                })
                .collect();
            json_text(&json!({
                "seed": report.seed,
                "trials": report.trials,
                "all_passed": report.all_passed(),
                "results": results,
            }))
        }
        _ => report.to_string(),
    };
    Ok(Output { text, warnings: Vec::new(), code })
}

struct Example {
    m: usize,
    order: usize,
    expected: Vec<&'static str>,
    note: Option<&'static str>,
}

fn examples(cli: &Cli) -> CliResult<Output> {
    let cases = [
        Example {
            m: 1,
            order: 3,
            expected: vec!["a1*y1", "a1*y2 + a2*y1^2", "a1*y3 + 2*a2*y1*y2 + a3*y1^3"],
            note: None,
        },
        Example {
            m: 2,
            order: 2,
            expected: vec![
                "a1_10*y1_1 + a1_01*y2_1",
                "a2_10*y1_1 + a2_01*y2_1",
                "a1_10*y1_2 + a1_01*y2_2 + a1_20*y1_1^2 + a1_11*y1_1*y2_1 + a1_02*y2_1^2",
                "a2_10*y1_2 + a2_01*y2_2 + a2_20*y1_1^2 + a2_11*y1_1*y2_1 + a2_02*y2_1^2",
            ],
            note: Some("the square of the first jet of x2 is y2_1^2 (weight matrix with l_21 = 2), not y1_2^2"),
        },
    ];
    let mut blocks = Vec::new();
    let mut records = Vec::new();
    let mut all_match = true;
    for case in &cases {
        let phi = generic_series_map(case.m, case.order)?;
        let image = hkdiff::alpha(&phi)?;
        let names = VarNames::jets(case.m, case.order, JetStyle::Y, false);
        let xs = VarNames::coordinates(case.m);
        let computed: Vec<String> = image.map().components().iter().map(|p| render_plain(p, &names)).collect();
        let matches = computed.iter().zip(&case.expected).all(|(c, e)| c == e) && computed.len() == case.expected.len();
        all_match &= matches;
        let mut lines = vec![format!("example m={}, N={}", case.m, case.order)];
        for (r, p) in phi.components().iter().enumerate() {
            lines.push(format!("  phi_{} = {}", r + 1, render(p, &xs, cli.format)));
        }
        for (k, p) in image.map().components().iter().enumerate() {
            let name = if cli.format == Format::Latex { names.latex_name(k) } else { names.name(k) };
            lines.push(format!("  {name} -> {}", render(p, &names, cli.format)));
            lines.push(format!("  {:width$}    expected {}", "", case.expected[k], width = name.len()));
        }
        if let Some(note) = case.note {
            lines.push(format!("  note: {note}"));
        }
        lines.push(format!("  {}", if matches { "match" } else { "MISMATCH" }));
        blocks.push(lines.join("\n"));
        let image_json: Vec<Value> = computed
            .iter()
            .zip(&case.expected)
            .enumerate()
            .map(|(k, (c, e))| json!({"variable": names.name(k), "computed": c, "expected": e, "match": c == e}))
            .collect();
        records.push(json!({
            "m": case.m,
            "N": case.order,
            "phi": phi.components().iter().map(|p| render_plain(p, &xs)).collect::<Vec<_>>(),
            "image": image_json,
            "match": matches,
            "note": case.note,
        }));
    }
    let text = match cli.format {
        Format::Json => json_text(&json!({"examples": records, "all_match": all_match})),
        _ => blocks.join("\n\n"),
    };
    Ok(Output { text, warnings: Vec::new(), code: if all_match { 0 } else { 2 } })
}
