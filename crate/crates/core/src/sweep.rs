//! Grids over present bias and patience measuring how the enforceable range
//! shrinks as present bias deepens.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::discounting::DiscountSpec;
use crate::format::fmt_real;
use crate::policy_game::{equilibrium_report, GameParams};
use crate::{Error, Result, Scalar};

pub const SWEEP_HEADER: [&str; 6] = [
    "beta",
    "delta",
    "discount_factor",
    "pi_best_enforceable",
    "range_width",
    "width_ratio_vs_beta1",
];

pub const BASELINE_HEADER: [&str; 3] = ["q", "pi_best_enforceable", "range_width"];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec<T> {
    pub a: T,
    pub b_bar: T,
    pub punishment_periods: u32,
    pub beta_grid: Vec<T>,
    pub delta_grid: Vec<T>,
    /// Exponential factors for a separate baseline table.
    pub q_grid: Option<Vec<T>>,
    /// Where the CSV goes; the baseline table, if any, is written next to it
    /// with a `.baseline.csv` suffix.
    pub output_path: Option<PathBuf>,
}

impl<T: Scalar> SweepSpec<T> {
    pub fn new(a: T, b_bar: T, beta_grid: Vec<T>, delta_grid: Vec<T>) -> Self {
        SweepSpec {
            a,
            b_bar,
            punishment_periods: 1,
            beta_grid,
            delta_grid,
            q_grid: None,
            output_path: None,
        }
    }

    pub fn params(&self) -> Result<GameParams<T>> {
        GameParams::new(self.a, self.b_bar)?.with_punishment_periods(self.punishment_periods)
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        check_grid(
            "beta_grid",
            &self.beta_grid,
            |b| b > T::zero() && b <= T::one(),
            "entries must lie in (0, 1]",
        )?;
        let unit_open = |x: T| x > T::zero() && x < T::one();
        check_grid(
            "delta_grid",
            &self.delta_grid,
            unit_open,
            "entries must lie in (0, 1)",
        )?;
        if let Some(q) = &self.q_grid {
            check_grid("q_grid", q, unit_open, "entries must lie in (0, 1)")?;
        }
        Ok(())
    }
}

fn check_grid<T: Scalar>(
    field: &'static str,
    grid: &[T],
    in_domain: impl Fn(T) -> bool,
    reason: &'static str,
) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain(field, 0.0, "must not be empty"));
    }
    if let Some(&bad) = grid.iter().find(|&&x| !in_domain(x)) {
        return Err(Error::domain(field, bad.as_f64(), reason));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::domain(
            field,
            w[1].as_f64(),
            "must be strictly increasing",
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub beta: T,
    pub delta: T,
    /// `β·δ`.
    pub discount_factor: T,
    pub pi_best_enforceable: T,
    pub range_width: T,
    /// Width relative to the time-consistent policymaker with the same `δ`.
    pub width_ratio_vs_beta1: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineRow<T> {
    pub q: T,
    pub pi_best_enforceable: T,
    pub range_width: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable<T> {
    /// Sorted by `(δ, β)` ascending.
    pub rows: Vec<SweepRow<T>>,
    pub baseline: Vec<BaselineRow<T>>,
}

/// Evaluates every `(β, δ)` pair and, when `output_path` is set, writes the
/// CSV table there.
pub fn run_sweep<T: Scalar>(spec: &SweepSpec<T>) -> Result<SweepTable<T>> {
    spec.validate()?;
    let params = spec.params()?;

    let reference: Vec<T> = spec
        .delta_grid
        .par_iter()
        .map(|&delta| {
            let exp = DiscountSpec::exponential_factor(delta)?;
            Ok(equilibrium_report(&params, &exp)?.range_width)
        })
        .collect::<Result<_>>()?;

    let pairs: Vec<(usize, T)> = (0..spec.delta_grid.len())
        .flat_map(|di| spec.beta_grid.iter().map(move |&b| (di, b)))
        .collect();
    let mut rows: Vec<SweepRow<T>> = pairs
        .par_iter()
        .map(|&(di, beta)| {
            let delta = spec.delta_grid[di];
            let report =
                equilibrium_report(&params, &DiscountSpec::quasi_hyperbolic(beta, delta)?)?;
            Ok(SweepRow {
                beta,
                delta,
                discount_factor: report.discount_factor,
                pi_best_enforceable: report.pi_best_enforceable,
                range_width: report.range_width,
                width_ratio_vs_beta1: report.range_width / reference[di],
            })
        })
        .collect::<Result<_>>()?;
    rows.sort_by(|x, y| {
        x.delta
            .partial_cmp(&y.delta)
            .unwrap()
            .then(x.beta.partial_cmp(&y.beta).unwrap())
    });

    let baseline = match &spec.q_grid {
        None => Vec::new(),
        Some(grid) => grid
            .par_iter()
            .map(|&q| {
                let report = equilibrium_report(&params, &DiscountSpec::exponential_factor(q)?)?;
                Ok(BaselineRow {
                    q,
                    pi_best_enforceable: report.pi_best_enforceable,
                    range_width: report.range_width,
                })
            })
            .collect::<Result<_>>()?,
    };

    let table = SweepTable { rows, baseline };
    if let Some(path) = &spec.output_path {
        write_sweep_files(path, &table)?;
    }
    Ok(table)
}

pub fn write_sweep_csv<T: Scalar, W: Write>(out: W, rows: &[SweepRow<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record(
            [
                r.beta,
                r.delta,
                r.discount_factor,
                r.pi_best_enforceable,
                r.range_width,
                r.width_ratio_vs_beta1,
            ]
            .map(|v| fmt_real(v.as_f64())),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_baseline_csv<T: Scalar, W: Write>(out: W, rows: &[BaselineRow<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BASELINE_HEADER)?;
    for r in rows {
        w.write_record([r.q, r.pi_best_enforceable, r.range_width].map(|v| fmt_real(v.as_f64())))?;
    }
    w.flush()?;
    Ok(())
}

/// Path of the baseline table written alongside `path`.
pub fn baseline_path(path: &Path) -> PathBuf {
    let mut name = path.file_stem().unwrap_or_default().to_os_string();
    name.push(".baseline.csv");
    path.with_file_name(name)
}

fn write_sweep_files<T: Scalar>(path: &Path, table: &SweepTable<T>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_sweep_csv(&mut out, &table.rows)?;
    out.flush()?;
    if !table.baseline.is_empty() {
        let mut out = BufWriter::new(File::create(baseline_path(path))?);
        write_baseline_csv(&mut out, &table.baseline)?;
        out.flush()?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct NarrowingSummary<T> {
    pub min_ratio: T,
    /// Width non-decreasing in `β` at every `δ`.
    pub monotone: bool,
    /// Width strictly increasing in `β` at every `δ`.
    pub strictly_monotone: bool,
    pub rows: Vec<SweepRow<T>>,
}

pub fn narrowing_report<T: Scalar>(spec: &SweepSpec<T>) -> Result<NarrowingSummary<T>> {
    let table = run_sweep(spec)?;
    let rows = table.rows;
    let min_ratio = rows
        .iter()
        .map(|r| r.width_ratio_vs_beta1)
        .fold(T::infinity(), T::min);
    // Rows are sorted by (δ, β), so consecutive rows sharing δ are
    // consecutive in β.
    let same_delta = |w: &&[SweepRow<T>]| w[0].delta == w[1].delta;
    let monotone = rows
        .windows(2)
        .filter(same_delta)
        .all(|w| w[1].range_width >= w[0].range_width);
    let strictly_monotone = rows
        .windows(2)
        .filter(same_delta)
        .all(|w| w[1].range_width > w[0].range_width);
    Ok(NarrowingSummary {
        min_ratio,
        monotone,
        strictly_monotone,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type SweepSpec = super::SweepSpec<f64>;

    fn grid(lo: f64, step: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + step * i as f64).collect()
    }

    #[test]
    fn single_rows() {
        let t = run_sweep(&SweepSpec::new(1.0, 1.0, vec![0.7, 1.0], vec![0.9])).unwrap();
        assert_eq!(t.rows.len(), 2);
        let (b07, b1) = (t.rows[0], t.rows[1]);
        assert_eq!(b1.width_ratio_vs_beta1, 1.0);
        assert!((b1.pi_best_enforceable - 0.052632).abs() < 1e-6);
        assert!((b07.pi_best_enforceable - 0.226994).abs() < 1e-6);
        let oracle = (1.0 - 0.37 / 1.63) / (1.0 - 1.0 / 19.0);
        assert!((b07.width_ratio_vs_beta1 - oracle).abs() < 1e-12);
        assert!((b07.width_ratio_vs_beta1 - 0.8159).abs() < 1e-4);
    }

    #[test]
    fn ratio_increases_with_beta() {
        let spec = SweepSpec::new(1.0, 1.0, grid(0.3, 0.1, 8), vec![0.9]);
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.rows.len(), 8);
        assert!(t
            .rows
            .windows(2)
            .all(|w| w[1].width_ratio_vs_beta1 > w[0].width_ratio_vs_beta1));
    }

    #[test]
    fn narrowing_examples() {
        let s = narrowing_report(&SweepSpec::new(
            1.0,
            1.0,
            grid(0.1, 0.1, 10),
            grid(0.1, 0.1, 9),
        ))
        .unwrap();
        assert!(s.monotone && s.strictly_monotone);
        assert_eq!(s.rows.len(), 90);

        let s = narrowing_report(&SweepSpec::new(1.0, 1.0, vec![1.0], vec![0.5, 0.9])).unwrap();
        assert_eq!(s.min_ratio, 1.0);

        let s = narrowing_report(&SweepSpec::new(1.0, 1.0, vec![0.5], vec![0.9])).unwrap();
        let oracle = (2.0 * 0.45 / 1.45) / (2.0 * 0.9 / 1.9);
        assert!((s.min_ratio - oracle).abs() < 1e-12);
        assert!((s.min_ratio - 0.6552).abs() < 1e-4);
    }

    #[test]
    fn rows_sorted_and_bounded() {
        let t = run_sweep(&SweepSpec::new(
            2.0,
            1.5,
            grid(0.2, 0.2, 5),
            vec![0.3, 0.6, 0.95],
        ))
        .unwrap();
        let disc = 0.75;
        for w in t.rows.windows(2) {
            assert!((w[0].delta, w[0].beta) < (w[1].delta, w[1].beta));
        }
        for r in &t.rows {
            assert!(r.range_width > 0.0 && r.range_width < 2.0 * disc);
            assert!(r.pi_best_enforceable > 0.0 && r.pi_best_enforceable < disc);
        }
    }

    #[test]
    fn grid_validation() {
        let bad = [
            SweepSpec::new(1.0, 1.0, vec![], vec![0.9]),
            SweepSpec::new(1.0, 1.0, vec![0.5, 0.4], vec![0.9]),
            SweepSpec::new(1.0, 1.0, vec![0.5], vec![1.0]),
            SweepSpec::new(1.0, 1.0, vec![0.0], vec![0.9]),
            SweepSpec::new(0.0, 1.0, vec![0.5], vec![0.9]),
        ];
        for spec in bad {
            assert!(run_sweep(&spec).unwrap_err().is_validation(), "{spec:?}");
        }
    }

    #[test]
    fn writes_baseline_table_alongside() {
        let dir = std::env::temp_dir().join(format!("pgl-sweep-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("grid.csv");
        let mut spec = SweepSpec::new(1.0, 1.0, vec![0.5, 1.0], vec![0.9]);
        spec.q_grid = Some(vec![0.5, 0.9]);
        spec.output_path = Some(path.clone());
        run_sweep(&spec).unwrap();
        let main = std::fs::read_to_string(&path).unwrap();
        assert!(main.starts_with(
            "beta,delta,discount_factor,pi_best_enforceable,range_width,width_ratio_vs_beta1\n"
        ));
        assert_eq!(main.lines().count(), 3);
        let base = std::fs::read_to_string(dir.join("grid.baseline.csv")).unwrap();
        assert_eq!(
            base.lines().nth(2).unwrap(),
            "0.9,0.0526315789474,0.947368421053"
        );
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let mut spec = SweepSpec::new(1.0, 1.0, vec![0.5], vec![0.9]);
        spec.output_path = Some(PathBuf::from("/nonexistent-dir/for/sure/out.csv"));
        assert!(run_sweep(&spec).unwrap_err().is_io());
    }
}
