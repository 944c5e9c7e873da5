//! Deterministic output formatting: every float is printed with 17
//! significant digits in lowercase scientific notation, keys and rows are
//! emitted in a fixed order, so identical invocations are byte-identical.

use num_complex::Complex64;

/// 17 significant digits, lowercase scientific.
pub fn fmt_f(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no inf/nan
        "null".to_string()
    }
}

/// Complex value as a two-field JSON object with fixed key order.
pub fn json_complex(z: Complex64) -> String {
    format!("{{\"re\":{},\"im\":{}}}", fmt_f(z.re), fmt_f(z.im))
}

pub struct JsonObject {
    fields: Vec<(String, String)>,
}

impl JsonObject {
    pub fn new() -> Self {
        JsonObject { fields: Vec::new() }
    }

    pub fn num(mut self, key: &str, x: f64) -> Self {
        self.fields.push((key.to_string(), fmt_f(x)));
        self
    }

    pub fn complex(mut self, key: &str, z: Complex64) -> Self {
        self.fields.push((key.to_string(), json_complex(z)));
        self
    }

    pub fn raw(mut self, key: &str, v: String) -> Self {
        self.fields.push((key.to_string(), v));
        self
    }

    pub fn render(&self) -> String {
        let body: Vec<String> = self
            .fields
            .iter()
            .map(|(k, v)| format!("\"{k}\":{v}"))
            .collect();
        format!("{{{}}}", body.join(","))
    }
}

pub fn json_array(items: impl IntoIterator<Item = String>) -> String {
    let body: Vec<String> = items.into_iter().collect();
    format!("[{}]", body.join(","))
}

/// CSV writer with a header row, comma separation and "." decimals.
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        Csv { out: format!("{header}\n") }
    }

    pub fn row(&mut self, fields: &[f64]) {
        let cells: Vec<String> = fields.iter().map(|&x| fmt_f(x)).collect();
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn row_with_index(&mut self, indices: &[usize], fields: &[f64]) {
        let mut cells: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
        cells.extend(fields.iter().map(|&x| fmt_f(x)));
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_17_digits_lowercase() {
        assert_eq!(fmt_f(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f(0.0001), "1.0000000000000000e-4");
        assert_eq!(fmt_f(-2.5e10), "-2.5000000000000000e10");
        assert_eq!(fmt_f(f64::INFINITY), "null");
    }

    #[test]
    fn json_object_preserves_order() {
        let s = JsonObject::new().num("b", 1.0).num("a", 2.0).render();
        assert_eq!(s, "{\"b\":1.0000000000000000e0,\"a\":2.0000000000000000e0}");
    }
}
