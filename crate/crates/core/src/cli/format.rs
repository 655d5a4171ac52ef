//! Number formatting shared by the CSV and JSON writers.

use std::io::Write;

use serde_json::{Map, Value};

use crate::error::Result;

/// `x` rounded to 12 significant digits and printed in shortest form.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("valid float literal");
    rounded.to_string()
}

/// Flat JSON object builder; non-finite numbers become `null`.
#[derive(Debug, Default)]
pub struct FlatJson(Map<String, Value>);

impl FlatJson {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &str, value: f64) -> Self {
        self.0.insert(key.into(), serde_json::Number::from_f64(value).map_or(Value::Null, Value::Number));
        self
    }

    pub fn int(mut self, key: &str, value: u64) -> Self {
        self.0.insert(key.into(), Value::from(value));
        self
    }

    pub fn text(mut self, key: &str, value: impl ToString) -> Self {
        self.0.insert(key.into(), Value::String(value.to_string()));
        self
    }

    pub fn flag(mut self, key: &str, value: bool) -> Self {
        self.0.insert(key.into(), Value::Bool(value));
        self
    }

    pub fn write(self, out: &mut dyn Write) -> Result<()> {
        serde_json::to_writer_pretty(&mut *out, &Value::Object(self.0))
            .map_err(|e| crate::Error::Io(e.to_string()))?;
        writeln!(out)?;
        Ok(())
    }
}
