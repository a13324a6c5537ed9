//! Newline-delimited prediction-log format.
//!
//! Line 1 is a header object with `mcts_budget` and `engine_tag`; every
//! following line is one record with `move_no`, `color`, `played`, and a
//! `candidates` array of at most five `{point, sims, winrate}` objects.
//! Unknown keys are rejected.

use super::{Candidate, Color, Coord, IngestError, MovePoint, PredictionLog, PredictionRecord};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HeaderLine {
    mcts_budget: u32,
    engine_tag: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordLine {
    move_no: u32,
    color: String,
    played: String,
    candidates: Vec<CandidateLine>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CandidateLine {
    point: String,
    sims: u64,
    winrate: f64,
}

fn line_err(line: usize, reason: impl Into<String>) -> IngestError {
    IngestError::LogLine {
        line,
        reason: reason.into(),
    }
}

/// Parse a prediction log. Records come back sorted by move number.
pub fn parse_prediction_log(text: &str) -> Result<PredictionLog, IngestError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());

    let (header_no, header_line) = lines.next().ok_or_else(|| IngestError::LogInvalid {
        reason: "empty log: missing header line".into(),
    })?;
    let header: HeaderLine = serde_json::from_str(header_line)
        .map_err(|e| line_err(header_no, format!("bad header: {e}")))?;
    if header.mcts_budget == 0 {
        return Err(line_err(header_no, "mcts_budget must be positive"));
    }

    let mut records = Vec::new();
    for (line_no, line) in lines {
        let raw: RecordLine =
            serde_json::from_str(line).map_err(|e| line_err(line_no, e.to_string()))?;
        records.push(convert_record(line_no, raw)?);
    }

    records.sort_by_key(|r: &PredictionRecord| r.move_no);
    for pair in records.windows(2) {
        if pair[0].move_no == pair[1].move_no {
            return Err(IngestError::LogInvalid {
                reason: format!("duplicate move_no {}", pair[0].move_no),
            });
        }
    }

    Ok(PredictionLog {
        records,
        mcts_budget: header.mcts_budget,
        engine_tag: header.engine_tag,
    })
}

fn convert_record(line_no: usize, raw: RecordLine) -> Result<PredictionRecord, IngestError> {
    if raw.move_no == 0 {
        return Err(line_err(line_no, "move_no must be 1-based"));
    }
    let color = Color::from_letter(&raw.color)
        .ok_or_else(|| line_err(line_no, format!("invalid color '{}'", raw.color)))?;
    let played = if raw.played == "pass" {
        MovePoint::Pass
    } else {
        MovePoint::Play(
            Coord::from_sgf(&raw.played)
                .ok_or_else(|| line_err(line_no, format!("invalid point '{}'", raw.played)))?,
        )
    };
    if raw.candidates.is_empty() {
        return Err(line_err(line_no, "empty candidates list"));
    }
    if raw.candidates.len() > 5 {
        return Err(line_err(
            line_no,
            format!("{} candidates; at most 5 allowed", raw.candidates.len()),
        ));
    }
    let mut candidates = Vec::with_capacity(raw.candidates.len());
    for c in raw.candidates {
        if !(0.0..=1.0).contains(&c.winrate) {
            return Err(line_err(
                line_no,
                format!("winrate {} outside [0, 1]", c.winrate),
            ));
        }
        let point = Coord::from_sgf(&c.point)
            .ok_or_else(|| line_err(line_no, format!("invalid candidate point '{}'", c.point)))?;
        candidates.push(Candidate {
            point,
            sims: c.sims,
            winrate: c.winrate,
        });
    }
    Ok(PredictionRecord {
        move_no: raw.move_no,
        color,
        played,
        candidates,
    })
}

/// Serialize a log into the newline-delimited format. Deterministic; the
/// output parses back to an equal [`PredictionLog`].
pub fn serialize_prediction_log(log: &PredictionLog) -> String {
    let mut out = String::new();
    let header = HeaderLine {
        mcts_budget: log.mcts_budget,
        engine_tag: log.engine_tag.clone(),
    };
    out.push_str(&serde_json::to_string(&header).expect("header serializes"));
    out.push('\n');
    for record in &log.records {
        let raw = RecordLine {
            move_no: record.move_no,
            color: record.color.letter().to_string(),
            played: match record.played {
                MovePoint::Pass => "pass".to_string(),
                MovePoint::Play(c) => c.to_sgf(),
            },
            candidates: record
                .candidates
                .iter()
                .map(|c| CandidateLine {
                    point: c.point.to_sgf(),
                    sims: c.sims,
                    winrate: c.winrate,
                })
                .collect(),
        };
        out.push_str(&serde_json::to_string(&raw).expect("record serializes"));
        out.push('\n');
    }
    out
}
