//! Verification rows and their CSV/JSON serialization.

use std::fmt;
use std::io::Write;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::Result;
use crate::mc::Estimate;

/// Standard errors allowed between a Monte Carlo estimate and its oracle.
pub const Z_TOL: f64 = 3.0;

/// Chance of any spurious Monte Carlo failure per report, matching a single two-sided 3 sigma test.
pub const FAMILY_ALPHA: f64 = 0.0027;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    /// Published value compared against the oracle; never fails a run.
    Note { agrees: bool },
    Info,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail => write!(f, "FAIL"),
            Verdict::Note { agrees: true } => write!(f, "NOTE(agrees)"),
            Verdict::Note { agrees: false } => write!(f, "NOTE(differs)"),
            Verdict::Info => write!(f, "INFO"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Published,
    Oracle,
    Mc,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Published => "published",
            Provenance::Oracle => "oracle",
            Provenance::Mc => "mc",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub statistic: String,
    pub paper_value: Option<f64>,
    pub oracle_value: Option<f64>,
    pub mc_estimate: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub n_samples: usize,
    pub verdict: Verdict,
    pub provenance: Provenance,
    /// Standard errors from the oracle, for rows judged by a z threshold.
    #[serde(skip)]
    pub z_score: Option<f64>,
}

impl ReportRow {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub id: String,
    pub rows: Vec<ReportRow>,
}

// relative, with an absolute floor for oracles that vanish
fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) || (a - b).abs() <= 1e-14
}

impl Report {
    pub fn new(id: impl Into<String>) -> Self {
        Report { id: id.into(), rows: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(ReportRow::passed)
    }

    pub fn failures(&self) -> Vec<&ReportRow> {
        self.rows.iter().filter(|r| !r.passed()).collect()
    }

    /// Row by statistic name; panics when absent.
    pub fn get(&self, statistic: &str) -> &ReportRow {
        self.find(statistic).unwrap_or_else(|| panic!("report {} has no row {statistic}", self.id))
    }

    pub fn find(&self, statistic: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.statistic == statistic)
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
    }

    fn push(&mut self, row: ReportRow) -> &mut Self {
        self.rows.push(row);
        self
    }

    /// Monte Carlo estimate asserted within `Z_TOL` standard errors of the oracle.
    pub fn mc(&mut self, stat: &str, published: Option<f64>, oracle: f64, est: Estimate) -> &mut Self {
        self.mc_within(stat, published, oracle, est, Z_TOL)
    }

    pub fn mc_within(&mut self, stat: &str, published: Option<f64>, oracle: f64, est: Estimate, k: f64) -> &mut Self {
        let verdict = if est.within(oracle, k) { Verdict::Pass } else { Verdict::Fail };
        self.push(ReportRow {
            statistic: stat.into(),
            paper_value: published,
            oracle_value: Some(oracle),
            mc_estimate: Some(est.mean),
            mc_stderr: Some(est.stderr),
            n_samples: est.n,
            verdict,
            provenance: Provenance::Mc,
            z_score: Some(est.z_score(oracle)),
        })
    }

    /// Monte Carlo estimate asserted within a relative tolerance of the oracle.
    pub fn mc_rel(&mut self, stat: &str, published: Option<f64>, oracle: f64, est: Estimate, rel: f64) -> &mut Self {
        let verdict = if close(est.mean, oracle, rel) { Verdict::Pass } else { Verdict::Fail };
        self.push(ReportRow {
            statistic: stat.into(),
            paper_value: published,
            oracle_value: Some(oracle),
            mc_estimate: Some(est.mean),
            mc_stderr: Some(est.stderr),
            n_samples: est.n,
            verdict,
            provenance: Provenance::Mc,
            z_score: None,
        })
    }

    /// Deterministic value asserted against an oracle to relative tolerance `rel`.
    pub fn exact(&mut self, stat: &str, published: Option<f64>, oracle: f64, value: f64, rel: f64) -> &mut Self {
        let verdict = if close(value, oracle, rel) { Verdict::Pass } else { Verdict::Fail };
        self.push(ReportRow {
            statistic: stat.into(),
            paper_value: published,
            oracle_value: Some(oracle),
            mc_estimate: Some(value),
            mc_stderr: None,
            n_samples: 0,
            verdict,
            provenance: Provenance::Oracle,
            z_score: None,
        })
    }

    /// A boolean check with the tested quantity in `value`.
    pub fn check(&mut self, stat: &str, value: f64, ok: bool) -> &mut Self {
        self.push(ReportRow {
            statistic: stat.into(),
            paper_value: None,
            oracle_value: None,
            mc_estimate: Some(value),
            mc_stderr: None,
            n_samples: 0,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            provenance: Provenance::Oracle,
            z_score: None,
        })
    }

    /// Published value compared against the oracle to relative tolerance `rel`.
    pub fn note(&mut self, stat: &str, published: f64, oracle: f64, rel: f64) -> &mut Self {
        self.push(ReportRow {
            statistic: stat.into(),
            paper_value: Some(published),
            oracle_value: Some(oracle),
            mc_estimate: None,
            mc_stderr: None,
            n_samples: 0,
            verdict: Verdict::Note { agrees: close(published, oracle, rel) },
            provenance: Provenance::Published,
            z_score: None,
        })
    }

    /// Published value compared against a Monte Carlo estimate.
    pub fn note_mc(&mut self, stat: &str, published: f64, est: Estimate) -> &mut Self {
        self.push(ReportRow {
            statistic: stat.into(),
            paper_value: Some(published),
            oracle_value: None,
            mc_estimate: Some(est.mean),
            mc_stderr: Some(est.stderr),
            n_samples: est.n,
            verdict: Verdict::Note { agrees: est.within(published, Z_TOL) },
            provenance: Provenance::Published,
            z_score: None,
        })
    }

    /// Published upper bound compared against a Monte Carlo estimate.
    pub fn note_bound(&mut self, stat: &str, published_bound: f64, est: Estimate) -> &mut Self {
        self.push(ReportRow {
            statistic: stat.into(),
            paper_value: Some(published_bound),
            oracle_value: None,
            mc_estimate: Some(est.mean),
            mc_stderr: Some(est.stderr),
            n_samples: est.n,
            verdict: Verdict::Note { agrees: est.mean <= published_bound + Z_TOL * est.stderr },
            provenance: Provenance::Published,
            z_score: None,
        })
    }

    /// A published qualitative claim; `holds` records whether the computation bears it out.
    pub fn push_note_flag(&mut self, stat: &str, holds: bool) -> &mut Self {
        self.push(ReportRow {
            statistic: stat.into(),
            paper_value: Some(1.0),
            oracle_value: Some(if holds { 1.0 } else { 0.0 }),
            mc_estimate: None,
            mc_stderr: None,
            n_samples: 0,
            verdict: Verdict::Note { agrees: holds },
            provenance: Provenance::Published,
            z_score: None,
        })
    }

    pub fn info(&mut self, stat: &str, value: f64, est: Option<Estimate>) -> &mut Self {
        self.push(ReportRow {
            statistic: stat.into(),
            paper_value: None,
            oracle_value: Some(value),
            mc_estimate: est.map(|e| e.mean),
            mc_stderr: est.map(|e| e.stderr),
            n_samples: est.map_or(0, |e| e.n),
            verdict: Verdict::Info,
            provenance: if est.is_some() { Provenance::Mc } else { Provenance::Oracle },
            z_score: None,
        })
    }

    /// Re-judge the z-scored rows at a Bonferroni threshold so that the chance of any
    /// spurious failure in this report is about `family_alpha`. Never tighter than `Z_TOL`.
    pub fn apply_familywise(&mut self, family_alpha: f64) -> f64 {
        let m = self.rows.iter().filter(|r| r.z_score.is_some()).count();
        if m == 0 {
            return Z_TOL;
        }
        let k = Normal::standard().inverse_cdf(1.0 - family_alpha / (2.0 * m as f64)).max(Z_TOL);
        for r in &mut self.rows {
            if let Some(z) = r.z_score {
                r.verdict = if z <= k { Verdict::Pass } else { Verdict::Fail };
            }
        }
        self.info("familywise_z_threshold", k, None);
        k
    }

    /// `apply_familywise(FAMILY_ALPHA)` by value.
    pub fn judged(mut self) -> Self {
        self.apply_familywise(FAMILY_ALPHA);
        self
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let f = |v: Option<f64>| v.map(|x| format!("{x:.15e}")).unwrap_or_default();
        writeln!(w, "statistic,paper_value,oracle_value,mc_estimate,mc_stderr,n_samples,verdict,provenance")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                r.statistic,
                f(r.paper_value),
                f(r.oracle_value),
                f(r.mc_estimate),
                f(r.mc_stderr),
                r.n_samples,
                r.verdict,
                r.provenance
            )?;
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        serde_json::to_writer_pretty(w, self).map_err(|e| crate::Error::Io(e.to_string()))
    }

    /// Human-readable table.
    pub fn render(&self) -> String {
        let mut s = format!("== {} ==\n", self.id);
        for r in &self.rows {
            let v = |x: Option<f64>| x.map(|x| format!("{x:.6e}")).unwrap_or_else(|| "-".into());
            s += &format!(
                "{:<14} {:<44} published={:<14} oracle={:<14} value={:<14} se={:<12}\n",
                r.verdict.to_string(),
                r.statistic,
                v(r.paper_value),
                v(r.oracle_value),
                v(r.mc_estimate),
                v(r.mc_stderr)
            );
        }
        s
    }
}
