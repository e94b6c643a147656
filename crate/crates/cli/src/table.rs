//! Column tables and deterministic CSV emission.

/// A rectangular table of floats with named columns.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Column index by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// CSV text; floats are printed as the shortest decimal that parses back
    /// to the same bits, so identical runs emit identical bytes.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                out.push_str(&format_float(*v));
                first = false;
            }
            out.push('\n');
        }
        out
    }
}

/// Shortest round-trippable decimal rendering.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_deterministic_and_round_trippable() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![0.1 + 0.2, 1.0 / 3.0]);
        let csv = t.to_csv();
        assert_eq!(csv, t.to_csv());
        let line = csv.lines().nth(1).unwrap();
        let vals: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(vals[0], 0.1 + 0.2);
        assert_eq!(vals[1], 1.0 / 3.0);
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["x", "y"]);
        assert_eq!(t.to_csv(), "x,y\n");
    }

    #[test]
    fn non_finite_renderings() {
        assert_eq!(format_float(f64::INFINITY), "inf");
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_float(f64::NAN), "nan");
    }
}
