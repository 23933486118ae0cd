use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use super::{fmt_sig12, CliError, GridSpec};
use crate::slocc::{BiseparableParams, FamilyParams, FreeQubit, GhzParams, WParams};
use crate::tradeoff3::{tradeoff_sum_family, TradeoffReport};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepFamily {
    Biseparable {
        free: FreeQubit,
    },
    W,
    /// `phi` fixes the phase when the grid has no `phi` axis (default π/2).
    Ghz {
        phi: Option<f64>,
    },
}

impl SweepFamily {
    pub fn name(&self) -> &'static str {
        match self {
            SweepFamily::Biseparable { .. } => "biseparable",
            SweepFamily::W => "w",
            SweepFamily::Ghz { .. } => "ghz",
        }
    }

    fn axes(&self, grid: &GridSpec) -> Result<Vec<&'static str>, CliError> {
        Ok(match self {
            SweepFamily::Biseparable { .. } => vec!["delta"],
            SweepFamily::W => vec!["a", "b", "c"],
            SweepFamily::Ghz { phi } => match (grid.axis("phi").is_some(), phi) {
                (true, Some(_)) => {
                    return Err(CliError::Parse("phi given both as grid axis and as --phi".into()));
                }
                (true, None) => vec!["delta", "alpha", "beta", "gamma", "phi"],
                (false, _) => vec!["delta", "alpha", "beta", "gamma"],
            },
        })
    }

    fn params(&self, p: &[f64]) -> FamilyParams {
        match *self {
            SweepFamily::Biseparable { free } => {
                FamilyParams::Biseparable(BiseparableParams { free_qubit: free, delta: p[0] })
            }
            SweepFamily::W => FamilyParams::W(WParams { a: p[0], b: p[1], c: p[2] }),
            SweepFamily::Ghz { phi } => FamilyParams::Ghz(GhzParams {
                delta: p[0],
                alpha: p[1],
                beta: p[2],
                gamma: p[3],
                phi: p.get(4).copied().or(phi).unwrap_or(FRAC_PI_2),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Position in the full grid, counting skipped points.
    pub index: usize,
    pub params: FamilyParams,
    pub report: TradeoffReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    /// Grid points outside the family's parameter range.
    pub skipped: usize,
}

/// Evaluates every grid point; rows come back in grid order whatever the
/// number of worker threads.
pub fn sweep_rows(family: &SweepFamily, grid: &GridSpec) -> Result<SweepOutcome, CliError> {
    let points = grid.points(&family.axes(grid)?)?;
    let results: Vec<Result<Option<SweepRow>, Error>> = points
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            let params = family.params(p);
            match tradeoff_sum_family(&params) {
                Ok(report) => Ok(Some(SweepRow { index, params, report })),
                Err(Error::Param(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut skipped = 0;
    for r in results {
        match r? {
            Some(row) => rows.push(row),
            None => skipped += 1,
        }
    }
    Ok(SweepOutcome { rows, skipped })
}

fn param_columns(params: &FamilyParams) -> (Vec<&'static str>, Vec<String>) {
    match params {
        FamilyParams::Product => (vec![], vec![]),
        FamilyParams::Biseparable(p) => {
            (vec!["free", "delta"], vec![format!("{:?}", p.free_qubit), fmt_sig12(p.delta)])
        }
        FamilyParams::W(p) => (vec!["a", "b", "c"], [p.a, p.b, p.c].map(fmt_sig12).to_vec()),
        FamilyParams::Ghz(p) => (
            vec!["delta", "alpha", "beta", "gamma", "phi"],
            [p.delta, p.alpha, p.beta, p.gamma, p.phi].map(fmt_sig12).to_vec(),
        ),
    }
}

fn header_params(family: &SweepFamily) -> Vec<&'static str> {
    match family {
        SweepFamily::Biseparable { .. } => vec!["free", "delta"],
        SweepFamily::W => vec!["a", "b", "c"],
        SweepFamily::Ghz { .. } => vec!["delta", "alpha", "beta", "gamma", "phi"],
    }
}

/// CSV body: a `#`-prefixed provenance line, the header, one row per point.
pub(crate) fn to_csv(family: &SweepFamily, outcome: &SweepOutcome, provenance: &str) -> String {
    let mut out = String::new();
    out.push_str("# ");
    out.push_str(provenance);
    out.push('\n');
    let mut header = vec!["family"];
    header.extend(header_params(family));
    header.extend(["s_ab", "s_ac", "s_bc", "total", "closed_form_total", "discrepancy"]);
    out.push_str(&header.join(","));
    out.push('\n');
    let opt = |x: Option<f64>| x.map(fmt_sig12).unwrap_or_default();
    for row in &outcome.rows {
        let r = &row.report;
        let mut fields = vec![family.name().to_string()];
        fields.extend(param_columns(&row.params).1);
        fields.extend([r.s_ab, r.s_ac, r.s_bc, r.total].map(fmt_sig12));
        fields.push(opt(r.closed_form_total));
        fields.push(opt(r.discrepancy));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn biseparable_sweep_matches_closed_form() {
        let grid: GridSpec = "delta=0.01:pi/4:50".parse().unwrap();
        let out = sweep_rows(&SweepFamily::Biseparable { free: FreeQubit::A }, &grid).unwrap();
        assert_eq!(out.rows.len(), 50);
        assert_eq!(out.skipped, 0);
        for row in &out.rows {
            assert!(row.report.total >= 8.0 - 1e-12 && row.report.total < 12.0);
            assert!(row.report.discrepancy.unwrap() < 1e-8);
        }
    }

    #[test]
    fn w_sweep_skips_outside_simplex() {
        let grid: GridSpec = "a=0.1:0.5:3,b=0.1:0.5:3,c=0.1:0.5:3".parse().unwrap();
        let out = sweep_rows(&SweepFamily::W, &grid).unwrap();
        assert_eq!(out.rows.len() + out.skipped, 27);
        assert!(out.skipped > 0);
        for row in &out.rows {
            assert!(row.report.total > 8.0 && row.report.total < 12.0);
            assert!(row.report.discrepancy.unwrap() < 1e-8);
        }
        let idx: Vec<usize> = out.rows.iter().map(|r| r.index).collect();
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn csv_layout() {
        let grid: GridSpec = "delta=pi/4:pi/4:1".parse().unwrap();
        let fam = SweepFamily::Biseparable { free: FreeQubit::A };
        let csv = to_csv(&fam, &sweep_rows(&fam, &grid).unwrap(), "{}");
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "family,free,delta,s_ab,s_ac,s_bc,total,closed_form_total,discrepancy");
        assert!(lines[2].starts_with("biseparable,A,0.785398163397,"), "{}", lines[2]);
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn ghz_phi_conflict() {
        let grid: GridSpec = "delta=0.1:0.2:2,alpha=1:1:1,beta=1:1:1,gamma=1:1:1,phi=0.5:1:2".parse().unwrap();
        assert!(sweep_rows(&SweepFamily::Ghz { phi: Some(1.0) }, &grid).is_err());
        assert_eq!(sweep_rows(&SweepFamily::Ghz { phi: None }, &grid).unwrap().rows.len(), 4);
    }
}
