use std::collections::{HashMap, HashSet};
use std::path::Path;

use posekit::experiment::{
    generate_samples, reproduce_worked_examples, reproduce_worked_examples_with, train, evaluate_with_width,
    ExperimentConfig, WorkedCheck, SampleMode, Split, TargetRepr,
};
use posekit::{
    binned_report, frobenius_distance, gram_schmidt_rotation, nearest_rotation_svd, pose_vectors, rotation_to_euler,
    rotation_to_quat, ErrorReport, ErrorSample, EulerAngles, RotationMatrix,
};

use crate::error::CliError;
use crate::records::{fmt6, read_records, Cell, PoseRecord, Repr, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Svd,
    GramSchmidt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    Euler,
    Vectors,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Uniform,
    #[value(name = "near_profile", alias = "near-profile")]
    NearProfile,
}

/// Prints per-row failures and turns them into one error, if there were any.
fn report_row_errors(errors: &[String], total: usize) -> Result<(), CliError> {
    for e in errors {
        eprintln!("{e}");
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(CliError::data(format!("{} of {total} rows failed", errors.len())))
    }
}

fn row_error(n: usize, rec: &PoseRecord, msg: &str) -> String {
    format!("row {n} (id {}): {msg}", rec.id)
}

fn values_of(r: &RotationMatrix, repr: Repr) -> Vec<f64> {
    match repr {
        Repr::Euler => rotation_to_euler(r).angles.to_array().to_vec(),
        Repr::Quat => rotation_to_quat(r).canonical().to_array().to_vec(),
        Repr::Matrix => r.matrix().to_row_major().to_vec(),
        Repr::Vectors => pose_vectors(r).to_array().iter().flat_map(|v| v.to_array()).collect(),
    }
}

pub fn convert(input: &Path, from: Option<Repr>, to: Repr, out: Option<&Path>, tol: f64) -> Result<(), CliError> {
    let records = read_records(input, from)?;
    let mut header: Vec<&str> = vec!["id"];
    header.extend(to.columns());
    if to == Repr::Euler {
        header.push("gimbal_locked");
    }
    let mut table = Table::new(header);
    let mut errors = Vec::new();
    for (k, rec) in records.iter().enumerate() {
        let rotation = match rec.to_rotation(tol) {
            Ok(r) => r,
            Err(e) => {
                errors.push(row_error(k + 1, rec, &e));
                continue;
            }
        };
        let mut row = vec![Cell::Text(rec.id.clone())];
        if to == Repr::Euler {
            let d = rotation_to_euler(&rotation);
            let angles = rec.euler().unwrap_or(d.angles);
            row.extend(angles.to_array().map(Cell::Num));
            row.push(Cell::Bool(d.gimbal_locked));
        } else {
            row.extend(values_of(&rotation, to).into_iter().map(Cell::Num));
        }
        table.rows.push(row);
    }
    table.write(out)?;
    report_row_errors(&errors, records.len())
}

pub const REPORT_COLUMNS: [&str; 14] = [
    "kind", "axis", "bin_lo", "bin_hi", "count", "roll", "yaw", "pitch", "mae", "left", "down", "front", "maev",
    "mae_converted",
];

/// One `summary` row, then one `bin` row per axis bin.
pub fn report_table(report: &ErrorReport) -> Table {
    let mut t = Table::new(REPORT_COLUMNS);
    let e = report.per_angle_mae;
    let v = report.per_vector_error;
    t.rows.push(vec![
        Cell::Text("summary".into()),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Text(report.count.to_string()),
        Cell::Num(e.roll),
        Cell::Num(e.yaw),
        Cell::Num(e.pitch),
        Cell::Num(report.mae),
        Cell::Num(v[0]),
        Cell::Num(v[1]),
        Cell::Num(v[2]),
        Cell::Num(report.maev),
        Cell::Bool(report.mae_converted),
    ]);
    let opt = |x: Option<f64>| x.map_or(Cell::Empty, Cell::Num);
    for b in &report.bins {
        t.rows.push(vec![
            Cell::Text("bin".into()),
            Cell::Text(b.axis.name().into()),
            Cell::Num(b.lo),
            Cell::Num(b.hi),
            Cell::Text(b.count.to_string()),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            opt(b.mean_mae),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            opt(b.mean_maev),
            Cell::Bool(report.mae_converted),
        ]);
    }
    t
}

pub fn metrics(gt: &Path, pred: &Path, bin_width: f64, out: Option<&Path>, tol: f64) -> Result<(), CliError> {
    let gt_records = read_records(gt, None)?;
    let pred_records = read_records(pred, None)?;
    let mut by_id: HashMap<&str, &PoseRecord> = HashMap::new();
    for r in &pred_records {
        if by_id.insert(&r.id, r).is_some() {
            return Err(CliError::data(format!("{}: duplicate id {}", pred.display(), r.id)));
        }
    }
    let mut seen = HashSet::new();
    for r in &gt_records {
        if !seen.insert(r.id.as_str()) {
            return Err(CliError::data(format!("{}: duplicate id {}", gt.display(), r.id)));
        }
    }
    let gt_only: Vec<&str> = gt_records.iter().map(|r| r.id.as_str()).filter(|id| !by_id.contains_key(id)).collect();
    let pred_only: Vec<&str> = pred_records.iter().map(|r| r.id.as_str()).filter(|id| !seen.contains(id)).collect();
    if !gt_only.is_empty() || !pred_only.is_empty() {
        return Err(CliError::data(format!(
            "unmatched ids: only in gt [{}]; only in pred [{}]",
            gt_only.join(", "),
            pred_only.join(", ")
        )));
    }

    let mut samples = Vec::with_capacity(gt_records.len());
    let mut errors = Vec::new();
    for (k, g) in gt_records.iter().enumerate() {
        let p = by_id[g.id.as_str()];
        match (g.to_rotation(tol), p.to_rotation(tol)) {
            (Ok(gr), Ok(pr)) => samples.push(ErrorSample { gt: gr, pred: pr, gt_euler: g.euler(), pred_euler: p.euler() }),
            (Err(e), _) => errors.push(row_error(k + 1, g, &format!("gt: {e}"))),
            (_, Err(e)) => errors.push(row_error(k + 1, g, &format!("pred: {e}"))),
        }
    }
    report_row_errors(&errors, gt_records.len())?;
    let report = binned_report(&samples, bin_width)?;
    report_table(&report).write(out)
}

pub fn refine(input: &Path, method: Method, out: Option<&Path>) -> Result<(), CliError> {
    let records = read_records(input, None)?;
    let repr = records.first().map_or(Repr::Matrix, |r| r.repr);
    if !matches!(repr, Repr::Matrix | Repr::Vectors) {
        return Err(CliError::data(format!("refine needs matrix or vectors rows, got {repr}")));
    }
    let mut header: Vec<&str> = vec!["id"];
    header.extend(repr.columns());
    header.extend(["residual", "det_corrected"]);
    let mut table = Table::new(header);
    let mut errors = Vec::new();
    for (k, rec) in records.iter().enumerate() {
        let m = rec.raw_matrix().unwrap();
        let refined = match method {
            Method::Svd => nearest_rotation_svd(&m).map(|r| (r.rotation, r.residual, r.det_corrected)),
            Method::GramSchmidt => gram_schmidt_rotation(&m, (0, 1))
                .map(|r| (r, frobenius_distance(&m, r.matrix()), m.determinant() < 0.0)),
        };
        match refined {
            Ok((rotation, residual, det_corrected)) => {
                let mut row = vec![Cell::Text(rec.id.clone())];
                row.extend(values_of(&rotation, repr).into_iter().map(Cell::Num));
                row.extend([Cell::Num(residual), Cell::Bool(det_corrected)]);
                table.rows.push(row);
            }
            Err(e) => errors.push(row_error(k + 1, rec, &e.to_string())),
        }
    }
    table.write(out)?;
    report_row_errors(&errors, records.len())
}

/// Deliberately wrong Euler composition `Ry(yaw)·Rz(roll)·Rx(pitch)`.
fn swapped_convention(e: &EulerAngles) -> posekit::Result<RotationMatrix> {
    Ok(RotationMatrix::elementary(1, e.yaw.to_radians())
        * RotationMatrix::elementary(2, e.roll.to_radians())
        * RotationMatrix::elementary(0, e.pitch.to_radians()))
}

pub fn format_checks(checks: &[WorkedCheck]) -> String {
    let mut s = format!("{:<26} {:<6} {:<60} {}\n", "check", "status", "measured", "expected");
    for c in checks {
        let measured: Vec<String> = c
            .measured
            .iter()
            .map(|(k, v)| if v.abs() < 1e-3 && *v != 0.0 { format!("{k}={v:.3e}") } else { format!("{k}={}", fmt6(*v)) })
            .collect();
        s += &format!(
            "{:<26} {:<6} {:<60} {}\n",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            measured.join(" "),
            c.expected
        );
    }
    s
}

pub fn verify(perturb_convention: bool) -> Result<(), CliError> {
    let checks = if perturb_convention {
        reproduce_worked_examples_with(swapped_convention)
    } else {
        reproduce_worked_examples()
    };
    print!("{}", format_checks(&checks));
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::data(format!("{failed} of {} checks failed", checks.len())))
    }
}

pub fn experiment(
    cfg: &ExperimentConfig,
    target: Target,
    mode: Mode,
    bin_width: f64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let target = match target {
        Target::Euler => TargetRepr::Euler3,
        Target::Vectors => TargetRepr::Matrix9,
    };
    let mode = match mode {
        Mode::Uniform => SampleMode::Uniform,
        Mode::NearProfile => SampleMode::NearProfile,
    };
    let model = train(cfg, target)?;
    let test = generate_samples(cfg, mode, Split::Test);
    let report = evaluate_with_width(&model, &test, bin_width)?;
    report_table(&report).write(out)
}
