//! JSON schemas shared by the command-line tools.
//!
//! Rationals are always strings (`"-3/2"`, `"0"`) and every index is 1-based.
//!
//! * matrix: `{"rows": r, "cols": c, "entries": [["1", "0"], ...]}`
//! * algebra: `{"dim": n, "c": [{"i": 1, "j": 1, "k": 1, "v": "-1"}, ...]}`,
//!   sparse, omitted triples are zero
//! * samples: `{"dim": 8, "samples": [{"x": [...], "dx": [...]}, ...]}`

use serde::{Deserialize, Serialize};

use crate::algebra::StructureTensor;
use crate::error::{Error, Result};
use crate::linalg::{format_scalar, parse_scalar, QMatrix, QVector, Scalar};

/// One observation `(x, map(x))` of a possibly nonlinear map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub x: QVector,
    pub dx: QVector,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraEntry {
    i: usize,
    j: usize,
    k: usize,
    v: String,
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    dim: usize,
    c: Vec<AlgebraEntry>,
}

#[derive(Serialize, Deserialize)]
struct SampleEntry {
    x: Vec<String>,
    dx: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SampleFile {
    dim: usize,
    samples: Vec<SampleEntry>,
}

fn parse_err(context: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        context: context.into(),
        message: message.into(),
    }
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        parse_err(
            format!("{what} line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn scalar_at(s: &str, context: impl FnOnce() -> String) -> Result<Scalar> {
    parse_scalar(s).map_err(|e| match e {
        Error::Parse { message, .. } => parse_err(context(), message),
        other => other,
    })
}

fn vector_at(values: &[String], dim: usize, field: &str) -> Result<QVector> {
    if values.len() != dim {
        return Err(parse_err(
            field,
            format!("expected {dim} entries, found {}", values.len()),
        ));
    }
    values
        .iter()
        .enumerate()
        .map(|(i, s)| scalar_at(s, || format!("{field}[{i}]")))
        .collect::<Result<Vec<_>>>()
        .map(QVector::new)
}

fn render(v: &QVector) -> Vec<String> {
    v.entries().iter().map(format_scalar).collect()
}

pub fn parse_matrix(text: &str) -> Result<QMatrix> {
    let f: MatrixFile = from_json(text, "matrix")?;
    if f.entries.len() != f.rows {
        return Err(parse_err(
            "entries",
            format!("declared {} rows, found {}", f.rows, f.entries.len()),
        ));
    }
    let rows = f
        .entries
        .iter()
        .enumerate()
        .map(|(r, row)| vector_at(row, f.cols, &format!("entries[{r}]")).map(QVector::into_entries))
        .collect::<Result<Vec<_>>>()?;
    let data = rows.into_iter().flatten().collect();
    QMatrix::new(f.rows, f.cols, data)
}

pub fn matrix_to_json(m: &QMatrix) -> String {
    let f = MatrixFile {
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows()).map(|i| render(&m.row(i))).collect(),
    };
    serde_json::to_string_pretty(&f).expect("matrix serializes")
}

pub fn parse_algebra(text: &str) -> Result<StructureTensor> {
    let f: AlgebraFile = from_json(text, "algebra")?;
    if f.dim == 0 {
        return Err(parse_err("dim", "dimension must be positive"));
    }
    let n = f.dim;
    let mut t = StructureTensor::zero(n);
    let mut seen = vec![false; n * n * n];
    for (idx, e) in f.c.iter().enumerate() {
        for (name, v) in [("i", e.i), ("j", e.j), ("k", e.k)] {
            if v == 0 || v > n {
                return Err(parse_err(
                    format!("c[{idx}].{name}"),
                    format!("index {v} outside 1..={n} (declared dim {n})"),
                ));
            }
        }
        let slot = ((e.i - 1) * n + (e.j - 1)) * n + (e.k - 1);
        if seen[slot] {
            return Err(parse_err(
                format!("c[{idx}]"),
                format!("duplicate triple ({}, {}, {})", e.i, e.j, e.k),
            ));
        }
        seen[slot] = true;
        let v = scalar_at(&e.v, || format!("c[{idx}].v"))?;
        t.set(e.i - 1, e.j - 1, e.k - 1, v);
    }
    Ok(t)
}

pub fn algebra_to_json(t: &StructureTensor) -> String {
    let f = AlgebraFile {
        dim: t.dim(),
        c: t.nonzero_entries()
            .into_iter()
            .map(|(i, j, k, v)| AlgebraEntry {
                i: i + 1,
                j: j + 1,
                k: k + 1,
                v: format_scalar(&v),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("algebra serializes")
}

pub fn parse_samples(text: &str) -> Result<(usize, Vec<Sample>)> {
    let f: SampleFile = from_json(text, "samples")?;
    let samples = f
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            Ok(Sample {
                x: vector_at(&s.x, f.dim, &format!("samples[{i}].x"))?,
                dx: vector_at(&s.dx, f.dim, &format!("samples[{i}].dx"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((f.dim, samples))
}

pub fn samples_to_json(dim: usize, samples: &[Sample]) -> String {
    let f = SampleFile {
        dim,
        samples: samples
            .iter()
            .map(|s| SampleEntry {
                x: render(&s.x),
                dx: render(&s.dx),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&f).expect("samples serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::kantor_w2;
    use crate::linalg::ratio;

    #[test]
    fn matrix_round_trip() {
        let m = QMatrix::new(
            2,
            2,
            vec![ratio(-3, 2), ratio(0, 1), ratio(5, 1), ratio(1, 7)],
        )
        .unwrap();
        let text = matrix_to_json(&m);
        assert!(text.contains("\"-3/2\""));
        assert_eq!(parse_matrix(&text).unwrap(), m);
    }

    #[test]
    fn matrix_shape_errors() {
        let bad = r#"{"rows": 2, "cols": 2, "entries": [["1", "0"]]}"#;
        assert!(matches!(parse_matrix(bad), Err(Error::Parse { .. })));
        let ragged = r#"{"rows": 1, "cols": 2, "entries": [["1"]]}"#;
        assert!(matches!(parse_matrix(ragged), Err(Error::Parse { .. })));
    }

    #[test]
    fn algebra_round_trip() {
        let w = kantor_w2();
        assert_eq!(parse_algebra(&algebra_to_json(&w)).unwrap(), w);
    }

    #[test]
    fn algebra_errors_carry_context() {
        let zero_den = r#"{"dim": 2, "c": [{"i": 1, "j": 1, "k": 1, "v": "1/0"}]}"#;
        match parse_algebra(zero_den) {
            Err(Error::Parse { context, .. }) => assert_eq!(context, "c[0].v"),
            other => panic!("unexpected {other:?}"),
        }
        let out_of_range = r#"{"dim": 2, "c": [{"i": 3, "j": 1, "k": 1, "v": "1"}]}"#;
        match parse_algebra(out_of_range) {
            Err(Error::Parse { context, .. }) => assert_eq!(context, "c[0].i"),
            other => panic!("unexpected {other:?}"),
        }
        let syntax = "{\"dim\": 2,\n \"c\": [}";
        match parse_algebra(syntax) {
            Err(Error::Parse { context, .. }) => assert!(context.contains("line 2")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_table_is_zero_algebra() {
        let t = parse_algebra(r#"{"dim": 2, "c": []}"#).unwrap();
        assert_eq!(t, StructureTensor::zero(2));
    }

    #[test]
    fn samples_round_trip() {
        let s = vec![Sample {
            x: QVector::from_ints(&[0, 1]),
            dx: QVector::new(vec![ratio(1, 2), ratio(-1, 1)]),
        }];
        let (dim, back) = parse_samples(&samples_to_json(2, &s)).unwrap();
        assert_eq!(dim, 2);
        assert_eq!(back, s);
    }
}
