//! Output formats: score-dump CSV, trajectory JSON Lines, and real-number
//! formatting shared with the sweep CSV.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::confscore::normalize_scores_for_export;
use crate::error::Result;
use crate::sim::{ScoreSample, StepSnapshot};

/// Format a real with 9 significant digits, `%.9g` style: fixed notation for
/// moderate exponents, scientific otherwise, trailing zeros trimmed.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const SCORE_DUMP_HEADER: [&str; 6] = [
    "step",
    "agent_id",
    "pos_x",
    "pos_y",
    "score",
    "score_normalized",
];

/// Write sampled scores as CSV, one row per agent per sampled step.
pub fn write_score_dump<W: Write>(out: W, samples: &[ScoreSample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SCORE_DUMP_HEADER)?;
    for sample in samples {
        let normalized = normalize_scores_for_export(&sample.scores);
        for (id, ((pos, &score), &norm)) in sample
            .positions
            .iter()
            .zip(&sample.scores.scores)
            .zip(&normalized)
            .enumerate()
        {
            w.write_record([
                sample.step.to_string(),
                id.to_string(),
                format_real(pos.x),
                format_real(pos.y),
                format_real(score),
                format_real(norm),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One line of the trajectory dump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryLine {
    pub step: usize,
    pub positions: Vec<[f64; 2]>,
    pub velocities: Vec<[f64; 2]>,
    pub cost_term: f64,
    pub isolated_count: usize,
    pub component_count: usize,
}

impl From<&StepSnapshot<'_>> for TrajectoryLine {
    fn from(s: &StepSnapshot<'_>) -> Self {
        Self {
            step: s.state.step_index,
            positions: s.state.positions().map(|p| [p.x, p.y]).collect(),
            velocities: s.state.velocities().map(|v| [v.x, v.y]).collect(),
            cost_term: s.cost_term,
            isolated_count: s.connectivity.isolated_count,
            component_count: s.connectivity.component_count,
        }
    }
}

/// Append one snapshot as a JSON line.
pub fn write_trajectory_line<W: Write>(out: &mut W, snapshot: &StepSnapshot<'_>) -> Result<()> {
    serde_json::to_writer(&mut *out, &TrajectoryLine::from(snapshot))?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Parse a JSON Lines trajectory dump.
pub fn read_trajectory(text: &str) -> Result<Vec<TrajectoryLine>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(Into::into))
        .collect()
}
