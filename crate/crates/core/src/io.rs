//! JSON file formats.
//!
//! * Function table: `{"k": int, "n": int, "values": [v, ...]}` in flat point
//!   order, each `v` either `[re, im]` or a bare real number.
//! * Spectrum: same schema, `values[y] = f^(y)` in flat frequency order.
//! * Measure: `{"k": int, "p": [real, ...]}`.
//!
//! Output goes through [`to_json`], which prints every `f64` with 17
//! significant digits so files round-trip bit-exactly. Tables whose imaginary
//! parts are all exactly zero are written with bare numbers.

use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::index::Shape;
use crate::measure::Measure;
use crate::spectral::Spectrum;
use crate::table::FunctionTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Value {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValuesFile {
    k: usize,
    n: usize,
    values: Vec<Value>,
}

fn decode_values(text: &str) -> Result<(Shape, Vec<Complex64>)> {
    let file: ValuesFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let shape = Shape::new(file.k, file.n)?;
    let values = file
        .values
        .into_iter()
        .map(|v| match v {
            Value::Real(re) => Complex64::new(re, 0.0),
            Value::Complex([re, im]) => Complex64::new(re, im),
        })
        .collect();
    Ok((shape, values))
}

fn encode_values(shape: Shape, values: &[Complex64]) -> String {
    let real = values.iter().all(|v| v.im == 0.0);
    let file = ValuesFile {
        k: shape.k(),
        n: shape.n(),
        values: values
            .iter()
            .map(|v| {
                if real {
                    Value::Real(v.re)
                } else {
                    Value::Complex([v.re, v.im])
                }
            })
            .collect(),
    };
    to_json(&file)
}

pub fn table_from_json(text: &str) -> Result<FunctionTable> {
    let (shape, values) = decode_values(text)?;
    FunctionTable::with_shape(shape, values)
}

pub fn table_to_json(t: &FunctionTable) -> String {
    encode_values(t.shape(), t.values())
}

pub fn spectrum_from_json(text: &str) -> Result<Spectrum> {
    let (shape, values) = decode_values(text)?;
    Spectrum::new(shape, values)
}

pub fn spectrum_to_json(s: &Spectrum) -> String {
    encode_values(s.shape(), s.coeffs())
}

pub fn measure_from_json(text: &str) -> Result<Measure> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct MeasureFile {
        k: usize,
        p: Vec<f64>,
    }
    let file: MeasureFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Measure::validate(file.k, file.p)
}

pub fn measure_to_json(m: &Measure) -> String {
    to_json(m)
}

/// Pretty JSON with 17 significant digits per float and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut out, SigDigits(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("serializing to memory cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Formats `f64` as `d.dddddddddddddddde±x`; structure is delegated to the
/// pretty printer.
struct SigDigits<'a>(PrettyFormatter<'a>);

impl Formatter for SigDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reads_bare_and_pair_values() {
        let t = table_from_json(r#"{"k": 2, "n": 1, "values": [0.5, [1.0, -2.0]]}"#).unwrap();
        assert_eq!(
            t.values(),
            &[Complex64::new(0.5, 0.0), Complex64::new(1.0, -2.0)]
        );
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(table_from_json("{"), Err(Error::Parse(_))));
        assert!(matches!(
            table_from_json(r#"{"k": 2, "n": 2, "values": [1, 2, 3]}"#),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            measure_from_json(r#"{"k": 2, "p": [0.7, 0.7]}"#),
            Err(Error::InvalidMeasure(_))
        ));
        assert!(matches!(
            table_from_json(r#"{"k": 2, "n": 30, "values": []}"#),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn seventeen_digits() {
        let text = to_json(&[0.1f64, 1.0 / 3.0]);
        assert!(text.contains("1.0000000000000001e-1"), "{text}");
        assert!(text.contains("3.3333333333333331e-1"), "{text}");
        let m = Measure::new(vec![0.25, 0.75]).unwrap();
        let text = measure_to_json(&m);
        assert_eq!(measure_from_json(&text).unwrap(), m);
        assert!(text.contains("\"k\": 2"));
    }

    proptest! {
        #[test]
        fn table_text_round_trip(vals in proptest::collection::vec((-1e6f64..1e6, -1e-3f64..1e-3), 9), real in any::<bool>()) {
            let values: Vec<Complex64> = vals
                .into_iter()
                .map(|(a, b)| Complex64::new(a, if real { 0.0 } else { b }))
                .collect();
            let t = FunctionTable::new(3, 2, values).unwrap();
            let text = table_to_json(&t);
            prop_assert_eq!(table_from_json(&text).unwrap(), t);
        }
    }
}
