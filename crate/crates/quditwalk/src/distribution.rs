//! Position distributions and their file formats.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::{domain, Result};

/// Probability per lattice point. 1D distributions use one-element keys.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Distribution {
    pub dims: usize,
    pub entries: BTreeMap<Vec<i64>, f64>,
}

impl Distribution {
    pub fn new(dims: usize) -> Self {
        Self { dims, entries: BTreeMap::new() }
    }

    pub fn point(at: Vec<i64>) -> Self {
        let mut d = Self::new(at.len());
        d.entries.insert(at, 1.0);
        d
    }

    pub fn add(&mut self, at: Vec<i64>, p: f64) {
        debug_assert_eq!(at.len(), self.dims);
        *self.entries.entry(at).or_insert(0.0) += p;
    }

    pub fn get(&self, at: &[i64]) -> f64 {
        self.entries.get(at).copied().unwrap_or(0.0)
    }

    /// Shortcut for 1D lookups.
    pub fn p(&self, x: i64) -> f64 {
        self.get(&[x])
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// Drops exact zeros.
    pub fn support(&self) -> Vec<&[i64]> {
        self.entries
            .iter()
            .filter(|(_, &p)| p != 0.0)
            .map(|(k, _)| k.as_slice())
            .collect()
    }

    /// Total variation distance `½ Σ |p − q|` over the union of supports.
    pub fn tvd(&self, other: &Distribution) -> f64 {
        let mut acc = 0.0;
        for (k, &p) in &self.entries {
            acc += (p - other.get(k)).abs();
        }
        for (k, &q) in &other.entries {
            if !self.entries.contains_key(k) {
                acc += q.abs();
            }
        }
        0.5 * acc
    }

    pub fn map_points(&self, f: impl Fn(&[i64]) -> Vec<i64>) -> Distribution {
        let mut out = Distribution::new(self.dims);
        for (k, &p) in &self.entries {
            out.add(f(k), p);
        }
        out
    }

    fn axis_names(&self) -> Result<Vec<String>> {
        match self.dims {
            0 => domain("distribution has no axes"),
            1 => Ok(vec!["x".into()]),
            2 => Ok(vec!["x".into(), "y".into()]),
            3 => Ok(vec!["x".into(), "y".into(), "z".into()]),
            n => Ok((0..n).map(|i| format!("x{i}")).collect()),
        }
    }

    /// CSV with `# key: value` metadata lines ahead of the header.
    pub fn to_csv(&self, metadata: &BTreeMap<String, Value>) -> Result<String> {
        let names = self.axis_names()?;
        let mut s = String::new();
        for (k, v) in metadata {
            let v = match v {
                Value::String(t) => t.clone(),
                other => other.to_string(),
            };
            writeln!(s, "# {k}: {v}").unwrap();
        }
        writeln!(s, "{},p", names.join(",")).unwrap();
        for (k, p) in &self.entries {
            for c in k {
                write!(s, "{c},").unwrap();
            }
            writeln!(s, "{p}").unwrap();
        }
        Ok(s)
    }

    pub fn to_json(&self, variant: &str, coin: &str, steps: usize, metadata: &BTreeMap<String, Value>) -> Result<String> {
        let names = self.axis_names()?;
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(k, p)| {
                let mut m = serde_json::Map::new();
                for (n, c) in names.iter().zip(k) {
                    m.insert(n.clone(), json!(c));
                }
                m.insert("p".into(), json!(p));
                Value::Object(m)
            })
            .collect();
        let doc = json!({
            "variant": variant,
            "coin": coin,
            "steps": steps,
            "entries": entries,
            "metadata": metadata,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("distribution serializes");
        s.push('\n');
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tvd_over_union() {
        let mut a = Distribution::new(1);
        a.add(vec![-1], 0.5);
        a.add(vec![1], 0.5);
        let mut b = Distribution::new(1);
        b.add(vec![1], 0.5);
        b.add(vec![3], 0.5);
        assert!((a.tvd(&b) - 0.5).abs() < 1e-15);
        assert_eq!(a.tvd(&a), 0.0);
    }

    #[test]
    fn csv_layout() {
        let mut a = Distribution::new(2);
        a.add(vec![0, 1], 0.25);
        a.add(vec![-1, 0], 0.75);
        let mut meta = BTreeMap::new();
        meta.insert("steps".to_string(), json!(1));
        let csv = a.to_csv(&meta).unwrap();
        assert_eq!(csv, "# steps: 1\nx,y,p\n-1,0,0.75\n0,1,0.25\n");
    }
}
