use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use conservkit::algebra::{
    build_kantor, change_basis, diff_tables, e_basis, e_labels, published_w2_table,
    render_combination, render_table, subalgebra, StructureTensor,
};
use conservkit::automorphisms::{
    aut_check, aut_family, family_verify_symbolic, local_aut_detect, twolocal_aut_check, AutParams,
    AutVerdict, AutWitness,
};
use conservkit::derivations::{
    certify_locder, derivation_from_params, derivation_space, leibniz_residual,
    locder_minor_constraints, locder_sampling_constraints, twolocal_der_check, LinearMapSpace,
    LocDerTag, LocDerVerdict,
};
use conservkit::formats::{algebra_to_json, parse_algebra, parse_matrix, parse_samples};
use conservkit::linalg::{format_scalar, parse_scalar, QMatrix};
use conservkit::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Outcome of one command: human text for stdout plus a deterministic JSON
/// document for `--report`.
#[derive(Debug)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub verdict: Value,
    pub exit_code: i32,
    pub text: String,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            verdict: Value::Null,
            exit_code: EXIT_OK,
            text: String::new(),
        }
    }

    fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    fn finish(mut self, verdict: Value, ok: bool, text: String) -> Self {
        self.verdict = verdict;
        self.exit_code = if ok { EXIT_OK } else { EXIT_FAILED };
        self.text = text;
        self
    }

    pub fn input_error(command: &str, err: &CliError) -> Self {
        let mut r = RunReport::new(command);
        r.verdict = json!({ "error": err.to_string() });
        r.exit_code = EXIT_INPUT;
        r.text = format!("error: {err}\n");
        r
    }

    /// Keys are sorted because `serde_json::Map` is ordered.
    pub fn to_json(&self) -> String {
        let doc = json!({
            "command": self.command,
            "inputs": self.inputs,
            "verdict": self.verdict,
            "exit_code": self.exit_code,
        });
        serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
    }
}

#[derive(Debug)]
pub enum CliError {
    Io(PathBuf, std::io::Error),
    Toolkit(Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Toolkit(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Toolkit(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.to_path_buf(), e))?;
    }
    fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

pub fn load_algebra(path: &Path) -> CliResult<StructureTensor> {
    parse_algebra(&read(path)?).map_err(|e| match e {
        Error::Parse { context, message } => CliError::Toolkit(Error::Parse {
            context: format!("{}: {context}", path.display()),
            message,
        }),
        other => other.into(),
    })
}

fn load_matrix(path: &Path) -> CliResult<QMatrix> {
    Ok(parse_matrix(&read(path)?)?)
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

/// `1..6`, `1,2,4` or a mix such as `1..3,6`; 1-based, returned 0-based.
pub fn parse_span(spec: &str) -> CliResult<Vec<usize>> {
    let bad = || {
        CliError::Usage(format!(
            "invalid span {spec:?}; expected e.g. 1..6 or 1,2,4"
        ))
    };
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        let (lo, hi) = match part.split_once("..") {
            Some((a, b)) => (a.trim().parse::<usize>(), b.trim().parse::<usize>()),
            None => (part.parse::<usize>(), part.parse::<usize>()),
        };
        let (lo, hi) = (lo.map_err(|_| bad())?, hi.map_err(|_| bad())?);
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        out.extend((lo..=hi).map(|i| i - 1));
    }
    Ok(out)
}

/// `a=1/2,b=3`.
pub fn parse_family(spec: &str) -> CliResult<AutParams> {
    let bad = || CliError::Usage(format!("invalid family {spec:?}; expected a=..,b=.."));
    let mut a = None;
    let mut b = None;
    for part in spec.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(bad)?;
        let v = parse_scalar(v)?;
        match k.trim() {
            "a" => a = Some(v),
            "b" => b = Some(v),
            _ => return Err(bad()),
        }
    }
    Ok(AutParams::new(a.ok_or_else(bad)?, b.ok_or_else(bad)?)?)
}

fn matrix_json(m: &QMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .entries()
                        .iter()
                        .map(|v| Value::String(format_scalar(v)))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn space_json(s: &LinearMapSpace) -> Value {
    Value::Array(s.basis().iter().map(matrix_json).collect())
}

fn render_space(s: &LinearMapSpace, out: &mut String) {
    for (i, m) in s.basis().iter().enumerate() {
        out.push_str(&format!("D{} =\n{}\n", i + 1, m.render()));
    }
}

pub fn build_w(n: usize, fixed: usize, basis: &str, out: &Path) -> CliResult<RunReport> {
    let report = RunReport::new("build-w")
        .input("n", n)
        .input("fixed", fixed)
        .input("basis", basis)
        .input("out", path_str(out));
    if fixed == 0 {
        return Err(CliError::Usage("--fixed is 1-based".into()));
    }
    let alpha = build_kantor(n, fixed - 1)?;
    let tensor = match basis {
        "alpha" => alpha,
        "e" if n == 2 => change_basis(&alpha, &e_basis())?,
        "e" => {
            return Err(CliError::Usage(
                "--basis e is defined for n = 2 only".into(),
            ))
        }
        other => return Err(CliError::Usage(format!("unknown basis {other:?}"))),
    };
    write_file(out, &algebra_to_json(&tensor))?;
    let text = format!(
        "W({n}) with fixed vector v{fixed}: dimension {} in the {basis} basis, {} nonzero structure constants\nwritten {}\n",
        tensor.dim(),
        tensor.nonzero_entries().len(),
        out.display()
    );
    Ok(report.finish(
        json!({ "dim": tensor.dim(), "nonzero_constants": tensor.nonzero_entries().len() }),
        true,
        text,
    ))
}

pub fn table(file: &Path, compare: Option<&str>) -> CliResult<RunReport> {
    let alg = load_algebra(file)?;
    let report = RunReport::new("table").input("file", path_str(file)).input(
        "compare",
        compare.map_or(Value::Null, |c| Value::String(c.into())),
    );
    let names = e_labels(alg.dim());
    let mut text = render_table(&alg, &names)?;
    let Some(target) = compare else {
        return Ok(report.finish(json!({ "dim": alg.dim() }), true, text));
    };
    if target != "paper" {
        return Err(CliError::Usage(format!(
            "unknown comparison target {target:?}"
        )));
    }
    let diffs = diff_tables(&alg, &published_w2_table())?;
    let cells: Vec<Value> = diffs
        .iter()
        .map(|d| {
            json!({
                "i": d.i + 1,
                "j": d.j + 1,
                "derived": render_combination(&d.left, &names),
                "published": render_combination(&d.right, &names),
            })
        })
        .collect();
    text.push_str(&format!(
        "\ncomparison with the published table: {} differing cells\n",
        diffs.len()
    ));
    for d in &diffs {
        text.push_str(&format!(
            "  e{}*e{}: derived {} vs published {}\n",
            d.i + 1,
            d.j + 1,
            render_combination(&d.left, &names),
            render_combination(&d.right, &names)
        ));
    }
    Ok(report.finish(
        json!({ "dim": alg.dim(), "diff": cells }),
        diffs.is_empty(),
        text,
    ))
}

pub fn sub(file: &Path, span: &str, out: &Path) -> CliResult<RunReport> {
    let alg = load_algebra(file)?;
    let idx = parse_span(span)?;
    let report = RunReport::new("sub")
        .input("file", path_str(file))
        .input("span", span)
        .input("out", path_str(out));
    match subalgebra(&alg, &idx) {
        Ok(s) => {
            write_file(out, &algebra_to_json(&s))?;
            let text = format!(
                "span closed, subalgebra of dimension {} written {}\n",
                s.dim(),
                out.display()
            );
            Ok(report.finish(json!({ "closed": true, "dim": s.dim() }), true, text))
        }
        Err(Error::NotClosed { i, j }) => {
            let text = format!("span not closed: e{i}*e{j} leaves the span\n");
            Ok(report.finish(json!({ "closed": false, "pair": [i, j] }), false, text))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn der(file: &Path) -> CliResult<RunReport> {
    let alg = load_algebra(file)?;
    let d = derivation_space(&alg);
    let mut text = format!("dim Der = {}\n", d.size());
    render_space(&d, &mut text);
    Ok(RunReport::new("der").input("file", path_str(file)).finish(
        json!({ "dim": d.size(), "basis": space_json(&d) }),
        true,
        text,
    ))
}

fn verdict_json(v: &LocDerVerdict) -> Value {
    json!({
        "tag": tag_name(v.tag),
        "outer_dim": v.outer.size(),
        "witness": v.witness.as_ref().map_or(Value::Null, matrix_json),
    })
}

fn tag_name(t: LocDerTag) -> &'static str {
    match t {
        LocDerTag::Equal => "EQUAL",
        LocDerTag::Inconclusive => "INCONCLUSIVE",
    }
}

pub fn locder(file: &Path, method: &str) -> CliResult<RunReport> {
    let alg = load_algebra(file)?;
    let report = RunReport::new("locder")
        .input("file", path_str(file))
        .input("method", method);
    let (use_sampling, use_minors) = match method {
        "sampling" => (true, false),
        "minors" => (false, true),
        "both" => (true, true),
        other => return Err(CliError::Usage(format!("unknown method {other:?}"))),
    };
    let der = derivation_space(&alg);
    let mut text = format!("dim Der = {}\n", der.size());
    let mut methods = serde_json::Map::new();
    let mut outers = Vec::new();

    if use_sampling {
        let outer = locder_sampling_constraints(&alg, &der)?;
        let v = certify_locder(&der, &outer)?;
        text.push_str(&format!(
            "sampling: outer dim {} -> {}\n",
            outer.size(),
            tag_name(v.tag)
        ));
        methods.insert("sampling".into(), verdict_json(&v));
        outers.push(outer);
    }
    if use_minors {
        match locder_minor_constraints(&alg, &der) {
            Ok(outer) => {
                let v = certify_locder(&der, &outer)?;
                text.push_str(&format!(
                    "minors: outer dim {} -> {}\n",
                    outer.size(),
                    tag_name(v.tag)
                ));
                methods.insert("minors".into(), verdict_json(&v));
                outers.push(outer);
            }
            Err(Error::MethodInapplicable(msg)) if use_sampling => {
                text.push_str(&format!(
                    "minors: not applicable ({msg}), using sampling only\n"
                ));
                methods.insert(
                    "minors".into(),
                    json!({ "tag": "INAPPLICABLE", "reason": msg }),
                );
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut combined = outers.remove(0);
    for o in &outers {
        combined = combined.intersect(o)?;
    }
    let verdict = certify_locder(&der, &combined)?;
    text.push_str(&format!("verdict: {}\n", tag_name(verdict.tag)));
    if let Some(w) = &verdict.witness {
        text.push_str(&format!(
            "witness in outer but not in Der:\n{}\n",
            w.render()
        ));
    }
    let ok = verdict.tag == LocDerTag::Equal;
    Ok(report.finish(
        json!({
            "der_dim": der.size(),
            "methods": methods,
            "tag": tag_name(verdict.tag),
            "outer_dim": verdict.outer.size(),
            "witness": verdict.witness.as_ref().map_or(Value::Null, matrix_json),
        }),
        ok,
        text,
    ))
}

fn witness_json(w: &AutWitness) -> Value {
    match w {
        AutWitness::Singular => json!("singular"),
        AutWitness::Pair(i, j) => json!([i + 1, j + 1]),
    }
}

fn witness_text(w: &AutWitness) -> String {
    match w {
        AutWitness::Singular => "matrix is singular".into(),
        AutWitness::Pair(i, j) => format!("phi(e{0}*e{1}) != phi(e{0})*phi(e{1})", i + 1, j + 1),
    }
}

pub fn aut_verify(
    file: &Path,
    matrix: Option<&Path>,
    family: Option<&str>,
) -> CliResult<RunReport> {
    let alg = load_algebra(file)?;
    let mut report = RunReport::new("aut-verify").input("file", path_str(file));
    let m = match (matrix, family) {
        (Some(p), None) => {
            report = report.input("matrix", path_str(p));
            load_matrix(p)?
        }
        (None, Some(spec)) => {
            let params = parse_family(spec)?;
            report = report.input("family", params.render());
            aut_family(&params)
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --matrix or --family".into(),
            ))
        }
    };
    Ok(match aut_check(&alg, &m)? {
        None => report.finish(
            json!({ "tag": "AUTOMORPHISM" }),
            true,
            "AUTOMORPHISM\n".into(),
        ),
        Some(w) => report.finish(
            json!({ "tag": "NOT_AUTOMORPHISM", "witness": witness_json(&w) }),
            false,
            format!("NOT_AUTOMORPHISM: {}\n", witness_text(&w)),
        ),
    })
}

pub fn aut_family_certify() -> CliResult<RunReport> {
    let r = family_verify_symbolic();
    let names = ["a", "b"];
    let residuals: Vec<Value> = r
        .nonzero
        .iter()
        .map(|s| json!({ "i": s.i + 1, "j": s.j + 1, "k": s.k + 1, "residual": s.residual.render(&names) }))
        .collect();
    let mut text = format!(
        "checked {} residual coordinates (Laurent polynomials in a, b): {} nonzero\n",
        r.checked,
        r.nonzero.len()
    );
    for s in &r.nonzero {
        text.push_str(&format!(
            "  pair (e{}, e{}) coordinate {}: {}\n",
            s.i + 1,
            s.j + 1,
            s.k + 1,
            s.residual.render(&names)
        ));
    }
    text.push_str(if r.is_certified() {
        "CERTIFIED\n"
    } else {
        "FAILED\n"
    });
    Ok(RunReport::new("aut-family-certify").finish(
        json!({
            "checked": r.checked,
            "nonzero": residuals,
            "tag": if r.is_certified() { "CERTIFIED" } else { "FAILED" },
        }),
        r.is_certified(),
        text,
    ))
}

pub fn locaut(file: &Path, matrix: &Path) -> CliResult<RunReport> {
    let alg = load_algebra(file)?;
    let m = load_matrix(matrix)?;
    let report = RunReport::new("locaut")
        .input("file", path_str(file))
        .input("matrix", path_str(matrix));
    let v = local_aut_detect(&alg, &m)?;
    let (verdict, text) =
        match &v {
            AutVerdict::Automorphism(p) => (
                json!({ "tag": v.tag(), "a": format_scalar(p.a()), "b": format_scalar(p.b()) }),
                format!("AUTOMORPHISM ({})\n", p.render()),
            ),
            AutVerdict::NotAutomorphism { column, witness } => (
                json!({
                    "tag": v.tag(),
                    "column": column + 1,
                    "witness": witness.as_ref().map_or(Value::Null, witness_json),
                }),
                format!(
                "NOT_AUTOMORPHISM: column {} is not the image of e{} under any automorphism{}\n",
                column + 1,
                column + 1,
                witness.as_ref().map_or(String::new(), |w| format!("; {}", witness_text(w)))
            ),
            ),
            AutVerdict::NotInFamily { relation } => (
                json!({ "tag": v.tag(), "relation": relation }),
                format!("NOT_IN_FAMILY: violated {relation}\n"),
            ),
        };
    let ok = matches!(v, AutVerdict::Automorphism(_));
    Ok(report.finish(verdict, ok, text))
}

fn load_samples(path: &Path) -> CliResult<Vec<conservkit::formats::Sample>> {
    let (dim, samples) = parse_samples(&read(path)?)?;
    if dim != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: dim,
        }
        .into());
    }
    Ok(samples)
}

fn check_alg_dim(alg: &StructureTensor) -> CliResult<()> {
    if alg.dim() != 8 {
        return Err(Error::DimensionMismatch {
            expected: 8,
            found: alg.dim(),
        }
        .into());
    }
    Ok(())
}

pub fn twolocal_der(file: &Path, samples: &Path) -> CliResult<RunReport> {
    let alg = load_algebra(file)?;
    check_alg_dim(&alg)?;
    let s = load_samples(samples)?;
    let report = RunReport::new("twolocal-der")
        .input("file", path_str(file))
        .input("samples", path_str(samples))
        .input("sample_count", s.len());
    match twolocal_der_check(&s) {
        Ok(p) => {
            let is_der = leibniz_residual(&alg, &derivation_from_params(&p))?.is_empty();
            let (alpha, beta) = (format_scalar(&p.alpha), format_scalar(&p.beta));
            let text = if is_der {
                format!(
                    "recovered derivation alpha={alpha}, beta={beta}; all {} samples agree\n",
                    s.len()
                )
            } else {
                format!(
                    "recovered alpha={alpha}, beta={beta} is not a derivation of {}\n",
                    file.display()
                )
            };
            Ok(report.finish(
                json!({ "tag": if is_der { "DERIVATION" } else { "NOT_DERIVATION" }, "alpha": alpha, "beta": beta }),
                is_der,
                text,
            ))
        }
        Err(Error::Counterexample { index, x }) => Ok(report.finish(
            json!({ "tag": "COUNTEREXAMPLE", "sample": index + 1, "x": x }),
            false,
            format!("COUNTEREXAMPLE at sample {} (x = [{x}])\n", index + 1),
        )),
        Err(Error::Unreachable(msg)) => Ok(report.finish(
            json!({ "tag": "UNREACHABLE", "reason": msg }),
            false,
            format!("UNREACHABLE: {msg}\n"),
        )),
        Err(e) => Err(e.into()),
    }
}

pub fn twolocal_aut(file: &Path, samples: &Path) -> CliResult<RunReport> {
    let alg = load_algebra(file)?;
    check_alg_dim(&alg)?;
    let s = load_samples(samples)?;
    let report = RunReport::new("twolocal-aut")
        .input("file", path_str(file))
        .input("samples", path_str(samples))
        .input("sample_count", s.len());
    match twolocal_aut_check(&s) {
        Ok(p) => {
            let witness = aut_check(&alg, &aut_family(&p))?;
            let (a, b) = (format_scalar(p.a()), format_scalar(p.b()));
            let text = match &witness {
                None => format!(
                    "recovered automorphism a={a}, b={b}; all {} samples agree\n",
                    s.len()
                ),
                Some(w) => format!(
                    "recovered a={a}, b={b} is not an automorphism: {}\n",
                    witness_text(w)
                ),
            };
            Ok(report.finish(
                json!({ "tag": if witness.is_none() { "AUTOMORPHISM" } else { "NOT_AUTOMORPHISM" }, "a": a, "b": b }),
                witness.is_none(),
                text,
            ))
        }
        Err(Error::Counterexample { index, x }) => Ok(report.finish(
            json!({ "tag": "COUNTEREXAMPLE", "sample": index + 1, "x": x }),
            false,
            format!("COUNTEREXAMPLE at sample {} (x = [{x}])\n", index + 1),
        )),
        Err(Error::Unreachable(msg)) => Ok(report.finish(
            json!({ "tag": "UNREACHABLE", "reason": msg }),
            false,
            format!("UNREACHABLE: {msg}\n"),
        )),
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans() {
        assert_eq!(parse_span("1..6").unwrap(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(parse_span("1..2,4").unwrap(), vec![0, 1, 3]);
        assert!(parse_span("0..2").is_err());
        assert!(parse_span("3..1").is_err());
        assert!(parse_span("x").is_err());
    }

    #[test]
    fn families() {
        let p = parse_family("a=1/2,b=3").unwrap();
        assert_eq!(p.render(), "a=1/2,b=3");
        assert!(parse_family("a=1,b=0").is_err());
        assert!(parse_family("a=1").is_err());
        assert!(parse_family("c=1,b=2").is_err());
    }
}
