use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One recorded iteration. Terminal rows carry only `x` and `f`; step fields
/// are `None` because no further step was taken.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub k: usize,
    pub x: Vec<f64>,
    pub f: f64,
    pub radius: Option<f64>,
    pub step_len: Option<f64>,
    pub multiplier: Option<f64>,
    pub grad_norm_next: Option<f64>,
    pub dist_opt: Option<f64>,
    pub client: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    OptimumReached,
    MaxIter,
    Stalled,
}

impl TerminationReason {
    fn as_str(&self) -> &'static str {
        match self {
            TerminationReason::OptimumReached => "optimum_reached",
            TerminationReason::MaxIter => "max_iter",
            TerminationReason::Stalled => "stalled",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "optimum_reached" => TerminationReason::OptimumReached,
            "max_iter" => TerminationReason::MaxIter,
            "stalled" => TerminationReason::Stalled,
            other => return Err(Error::Parse(format!("unknown termination reason {other:?}"))),
        })
    }
}

/// Append-only record of a run. `max_oracle_residual` is the largest
/// certificate residual reported by any oracle call in the run; theorem
/// checks widen their tolerances proportionally to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterateTrace {
    pub rows: Vec<TraceRow>,
    pub terminated: TerminationReason,
    pub seed: u64,
    pub max_oracle_residual: f64,
}

impl IterateTrace {
    pub(crate) fn new(seed: u64) -> Self {
        Self {
            rows: Vec::new(),
            terminated: TerminationReason::MaxIter,
            seed,
            max_oracle_residual: 0.0,
        }
    }

    pub(crate) fn record_residual(&mut self, r: f64) {
        if r.is_finite() {
            self.max_oracle_residual = self.max_oracle_residual.max(r);
        } else {
            self.max_oracle_residual = f64::INFINITY;
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, |r| r.x.len())
    }

    pub fn final_x(&self) -> &[f64] {
        &self.rows.last().expect("trace is nonempty").x
    }

    pub fn final_f(&self) -> f64 {
        self.rows.last().expect("trace is nonempty").f
    }

    /// CSV with `#`-prefixed metadata lines, a header
    /// `k,x_0..x_{d-1},f,t,step_len,c,grad_norm_next,dist_opt,client`, and one
    /// full-precision row per iteration; unavailable fields stay empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# seed={}", self.seed)?;
        writeln!(w, "# terminated={}", self.terminated.as_str())?;
        writeln!(w, "# max_oracle_residual={}", self.max_oracle_residual)?;
        let d = self.dim();
        let xs: Vec<String> = (0..d).map(|i| format!("x_{i}")).collect();
        writeln!(w, "k,{},f,t,step_len,c,grad_norm_next,dist_opt,client", xs.join(","))?;
        for row in &self.rows {
            let mut fields: Vec<String> = vec![row.k.to_string()];
            fields.extend(row.x.iter().map(|v| format!("{v}")));
            fields.push(format!("{}", row.f));
            fields.push(opt(row.radius));
            fields.push(opt(row.step_len));
            fields.push(opt(row.multiplier));
            fields.push(opt(row.grad_norm_next));
            fields.push(opt(row.dist_opt));
            fields.push(row.client.map_or(String::new(), |c| c.to_string()));
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut seed = 0u64;
        let mut terminated = TerminationReason::MaxIter;
        let mut residual = 0.0f64;
        let mut rows = Vec::new();
        let mut dim: Option<usize> = None;
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let meta = meta.trim();
                if let Some(v) = meta.strip_prefix("seed=") {
                    seed = v.parse().map_err(|_| Error::Parse(format!("bad seed {v:?}")))?;
                } else if let Some(v) = meta.strip_prefix("terminated=") {
                    terminated = TerminationReason::parse(v)?;
                } else if let Some(v) = meta.strip_prefix("max_oracle_residual=") {
                    residual =
                        v.parse().map_err(|_| Error::Parse(format!("bad residual {v:?}")))?;
                }
                continue;
            }
            if line.starts_with('k') {
                let n = line.split(',').count();
                if n < 9 {
                    return Err(Error::Parse("trace header too short".into()));
                }
                dim = Some(n - 8);
                continue;
            }
            let d = dim.ok_or_else(|| Error::Parse("data before header".into()))?;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != d + 8 {
                return Err(Error::Parse(format!(
                    "row has {} fields, expected {}",
                    fields.len(),
                    d + 8
                )));
            }
            let num = |s: &str| -> Result<f64> {
                s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
            };
            let opt_num = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    num(s).map(Some)
                }
            };
            let x: Result<Vec<f64>> = fields[1..1 + d].iter().map(|s| num(s)).collect();
            rows.push(TraceRow {
                k: fields[0]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad index {:?}", fields[0])))?,
                x: x?,
                f: num(fields[1 + d])?,
                radius: opt_num(fields[2 + d])?,
                step_len: opt_num(fields[3 + d])?,
                multiplier: opt_num(fields[4 + d])?,
                grad_norm_next: opt_num(fields[5 + d])?,
                dist_opt: opt_num(fields[6 + d])?,
                client: if fields[7 + d].is_empty() {
                    None
                } else {
                    Some(fields[7 + d].parse().map_err(|_| {
                        Error::Parse(format!("bad client index {:?}", fields[7 + d]))
                    })?)
                },
            });
        }
        if rows.is_empty() {
            return Err(Error::Parse("trace has no rows".into()));
        }
        Ok(Self { rows, terminated, seed, max_oracle_residual: residual })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        std::fs::write(path, buf)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(f))
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| format!("{v}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_lossless() {
        let trace = IterateTrace {
            rows: vec![
                TraceRow {
                    k: 0,
                    x: vec![5.0, -0.1234567890123456],
                    f: 12.5,
                    radius: Some(1.0),
                    step_len: Some(1.0),
                    multiplier: Some(4.0 / 3.0),
                    grad_norm_next: Some(4.0),
                    dist_opt: Some(5.0),
                    client: None,
                },
                TraceRow {
                    k: 1,
                    x: vec![4.0, 0.3],
                    f: 8.045,
                    radius: None,
                    step_len: None,
                    multiplier: None,
                    grad_norm_next: None,
                    dist_opt: None,
                    client: Some(1),
                },
            ],
            terminated: TerminationReason::OptimumReached,
            seed: 7,
            max_oracle_residual: 1e-12,
        };
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("k,x_0,x_1,f,t,step_len,c,grad_norm_next,dist_opt,client"));
        let back = IterateTrace::read_csv(&buf[..]).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn rejects_malformed_rows() {
        let text = "k,x_0,f,t,step_len,c,grad_norm_next,dist_opt,client\n0,1.0\n";
        assert!(IterateTrace::read_csv(text.as_bytes()).is_err());
    }
}
