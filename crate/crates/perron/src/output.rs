//! Rendering of command results as text or JSON.

use num_bigint::BigUint;
use perron_core::{PrefixBase, Rational};
use serde_json::{json, Map, Value};

use crate::number::to_decimal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Fraction,
    Decimal,
    Json,
}

#[derive(Clone, Copy, Debug)]
pub struct Style {
    pub format: Format,
    pub precision: usize,
}

impl Style {
    /// A number as plain text: the exact fraction, or its decimal rounding.
    pub fn number(&self, x: &Rational) -> String {
        match self.format {
            Format::Decimal => to_decimal(x, self.precision),
            _ => x.to_string(),
        }
    }

    fn number_json(&self, x: &Rational) -> Value {
        json!({ "fraction": x.to_string(), "decimal": to_decimal(x, self.precision) })
    }
}

#[derive(Clone, Debug)]
pub enum Field {
    Number(Rational),
    Text(String),
    Integer(u64),
    Flag(bool),
    /// Digits written out with spaces: `3 2 2`.
    Digits(Vec<BigUint>),
    /// A cylinder base: `(3,2,2)`.
    Base(Vec<BigUint>),
    Table { columns: Vec<&'static str>, rows: Vec<Vec<Field>> },
    Nested(Record),
}

impl Field {
    pub fn digits(base: &PrefixBase) -> Field {
        Field::Digits(base.digits().to_vec())
    }

    pub fn base(base: &PrefixBase) -> Field {
        Field::Base(base.digits().to_vec())
    }

    fn text(&self, style: &Style) -> String {
        match self {
            Field::Number(x) => style.number(x),
            Field::Text(t) => t.clone(),
            Field::Integer(n) => n.to_string(),
            Field::Flag(b) => if *b { "yes" } else { "no" }.to_string(),
            Field::Digits(d) => join(d, " "),
            Field::Base(d) => format!("({})", join(d, ",")),
            Field::Table { .. } | Field::Nested(_) => String::new(),
        }
    }

    fn json(&self, style: &Style) -> Value {
        match self {
            Field::Number(x) => style.number_json(x),
            Field::Text(t) => Value::String(t.clone()),
            Field::Integer(n) => json!(n),
            Field::Flag(b) => json!(b),
            Field::Digits(d) | Field::Base(d) => Value::Array(d.iter().map(natural_json).collect()),
            Field::Table { columns, rows } => Value::Array(
                rows.iter()
                    .map(|row| {
                        let mut m = Map::new();
                        for (c, f) in columns.iter().zip(row) {
                            m.insert(c.to_string(), f.json(style));
                        }
                        Value::Object(m)
                    })
                    .collect(),
            ),
            Field::Nested(r) => r.json(style),
        }
    }
}

pub fn natural_json(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => Value::String(n.to_string()),
    }
}

pub fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

/// Ordered key/value output of a command.
#[derive(Clone, Debug, Default)]
pub struct Record {
    fields: Vec<(&'static str, Field)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn push(&mut self, key: &'static str, field: Field) -> &mut Self {
        self.fields.push((key, field));
        self
    }

    pub fn number(&mut self, key: &'static str, x: Rational) -> &mut Self {
        self.push(key, Field::Number(x))
    }

    pub fn text(&mut self, key: &'static str, t: impl Into<String>) -> &mut Self {
        self.push(key, Field::Text(t.into()))
    }

    pub fn into_fields(self) -> Vec<(&'static str, Field)> {
        self.fields
    }

    pub fn render(&self, style: &Style) -> String {
        match style.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json(style)).expect("serializable");
                s.push('\n');
                s
            }
            _ => {
                let mut out = String::new();
                self.write_text(style, 0, &mut out);
                out
            }
        }
    }

    fn json(&self, style: &Style) -> Value {
        let mut m = Map::new();
        for (k, f) in &self.fields {
            m.insert(k.to_string(), f.json(style));
        }
        Value::Object(m)
    }

    fn write_text(&self, style: &Style, indent: usize, out: &mut String) {
        let width = self
            .fields
            .iter()
            .filter(|(_, f)| !matches!(f, Field::Table { .. } | Field::Nested(_)))
            .map(|(k, _)| k.len())
            .max()
            .unwrap_or(0);
        let pad = " ".repeat(indent);
        for (k, f) in &self.fields {
            match f {
                Field::Nested(r) => {
                    out.push_str(&format!("{pad}{k}\n"));
                    r.write_text(style, indent + 2, out);
                }
                Field::Table { columns, rows } => {
                    out.push_str(&format!("{pad}{k}\n"));
                    write_table(style, columns, rows, indent + 2, out);
                }
                _ => out.push_str(&format!("{pad}{k:<width$}  {}\n", f.text(style))),
            }
        }
    }
}

fn write_table(style: &Style, columns: &[&str], rows: &[Vec<Field>], indent: usize, out: &mut String) {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|f| f.text(style)).collect()).collect();
    let widths: Vec<usize> = (0..columns.len())
        .map(|i| {
            cells
                .iter()
                .map(|r| r[i].chars().count())
                .chain([columns[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let pad = " ".repeat(indent);
    let line = |items: Vec<&str>| {
        let parts: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        format!("{pad}{}\n", parts.join("  ").trim_end())
    };
    out.push_str(&line(columns.to_vec()));
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json() {
        let mut r = Record::new();
        r.number("inf", Rational::new(1.into(), 3.into()))
            .push("digits", Field::Digits(vec![3u32.into(), 2u32.into()]))
            .push("base", Field::Base(vec![3u32.into()]));
        let frac = Style { format: Format::Fraction, precision: 4 };
        assert_eq!(r.render(&frac), "inf     1/3\ndigits  3 2\nbase    (3)\n");
        let dec = Style { format: Format::Decimal, precision: 4 };
        assert_eq!(r.render(&dec), "inf     0.3333\ndigits  3 2\nbase    (3)\n");
        let js: Value = serde_json::from_str(&r.render(&Style { format: Format::Json, precision: 2 })).unwrap();
        assert_eq!(js["inf"]["fraction"], "1/3");
        assert_eq!(js["inf"]["decimal"], "0.33");
        assert_eq!(js["digits"], json!([3, 2]));
    }
}
