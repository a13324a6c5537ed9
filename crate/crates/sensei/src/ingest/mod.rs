//! Game-record and prediction-log ingestion.
//!
//! Parses SGF game records and newline-delimited engine prediction logs,
//! joins them into an [`AnalyzedGame`], and synthesizes deterministic
//! test corpora when real engine logs are not available.

mod log;
mod sgf;
mod synth;

pub use log::{parse_prediction_log, serialize_prediction_log};
pub use sgf::{parse_sgf, serialize_sgf};
pub use synth::{synth_log, SynthProfile};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("sgf syntax error at byte {offset}: {reason}")]
    SgfSyntax { offset: usize, reason: String },
    #[error("sgf validation error at move {move_no}: {reason}")]
    SgfMove { move_no: u32, reason: String },
    #[error("sgf validation error: {reason}")]
    SgfInvalid { reason: String },
    #[error("prediction log error at line {line}: {reason}")]
    LogLine { line: usize, reason: String },
    #[error("prediction log error: {reason}")]
    LogInvalid { reason: String },
    #[error("join error at move {move_no}: {reason}")]
    Join { move_no: u32, reason: String },
    #[error("synthesis error: {reason}")]
    Synth { reason: String },
}

/// Stone color. Black moves first unless handicap stones are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn opponent(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    /// Single-letter tag used by the log format and CSV outputs.
    pub fn letter(self) -> &'static str {
        match self {
            Color::Black => "B",
            Color::White => "W",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Black => "Black",
            Color::White => "White",
        }
    }

    pub fn from_letter(s: &str) -> Option<Color> {
        match s {
            "B" => Some(Color::Black),
            "W" => Some(Color::White),
            _ => None,
        }
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// 1-based board coordinate. `col`/`row` run from 1 to the board size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coord {
    pub col: u8,
    pub row: u8,
}

impl Coord {
    pub fn new(col: u8, row: u8) -> Coord {
        Coord { col, row }
    }

    pub fn on_board(self, size: u8) -> bool {
        (1..=size).contains(&self.col) && (1..=size).contains(&self.row)
    }

    /// SGF two-letter form, `a` = 1.
    pub fn to_sgf(self) -> String {
        let letter = |v: u8| (b'a' + v - 1) as char;
        format!("{}{}", letter(self.col), letter(self.row))
    }

    pub fn from_sgf(s: &str) -> Option<Coord> {
        let bytes = s.as_bytes();
        if bytes.len() != 2 {
            return None;
        }
        let decode = |b: u8| {
            if b.is_ascii_lowercase() && b <= b'y' {
                Some(b - b'a' + 1)
            } else {
                None
            }
        };
        Some(Coord {
            col: decode(bytes[0])?,
            row: decode(bytes[1])?,
        })
    }
}

impl std::fmt::Display for Coord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_sgf())
    }
}

/// Either a stone placement or a pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MovePoint {
    Pass,
    Play(Coord),
}

impl MovePoint {
    pub fn coord(self) -> Option<Coord> {
        match self {
            MovePoint::Pass => None,
            MovePoint::Play(c) => Some(c),
        }
    }
}

/// One move of the main line: number, mover, and point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameMove {
    pub number: u32,
    pub color: Color,
    pub point: MovePoint,
}

/// Recorded game outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameResult {
    Black,
    White,
    Unknown,
}

impl GameResult {
    pub fn winner(self) -> Option<Color> {
        match self {
            GameResult::Black => Some(Color::Black),
            GameResult::White => Some(Color::White),
            GameResult::Unknown => None,
        }
    }
}

/// Parsed main line of an SGF record.
///
/// Invariants (checked by [`GameRecord::validate`]):
/// move numbers run 1..N without gaps, colors alternate (White first when
/// handicap stones are present), and every non-pass point is on the board.
#[derive(Debug, Clone, PartialEq)]
pub struct GameRecord {
    pub moves: Vec<GameMove>,
    pub komi: f64,
    pub handicap: u32,
    pub result: GameResult,
    pub board_size: u8,
}

impl GameRecord {
    pub fn n_moves(&self) -> u32 {
        self.moves.len() as u32
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        if !(2..=25).contains(&self.board_size) {
            return Err(IngestError::SgfInvalid {
                reason: format!("unsupported board size {}", self.board_size),
            });
        }
        let mut expected = if self.handicap > 0 {
            Color::White
        } else {
            Color::Black
        };
        for (i, mv) in self.moves.iter().enumerate() {
            let number = i as u32 + 1;
            if mv.number != number {
                return Err(IngestError::SgfMove {
                    move_no: number,
                    reason: format!("move numbered {} out of sequence", mv.number),
                });
            }
            if mv.color != expected {
                return Err(IngestError::SgfMove {
                    move_no: number,
                    reason: format!("expected {} to move, found {}", expected, mv.color),
                });
            }
            if let MovePoint::Play(c) = mv.point {
                if !c.on_board(self.board_size) {
                    return Err(IngestError::SgfMove {
                        move_no: number,
                        reason: format!("coordinate {} off the {}x{} board", c.to_sgf(), self.board_size, self.board_size),
                    });
                }
            }
            expected = expected.opponent();
        }
        Ok(())
    }
}

/// One engine candidate move with its search telemetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub point: Coord,
    pub sims: u64,
    /// Winning rate from the mover's perspective, in [0, 1].
    pub winrate: f64,
}

/// Per-move engine telemetry: the move actually played plus the engine's
/// ranked top-5 candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRecord {
    pub move_no: u32,
    pub color: Color,
    pub played: MovePoint,
    /// Ordered by rank; index 0 is the engine's preferred move. Length 1..=5.
    pub candidates: Vec<Candidate>,
}

/// A whole game's prediction records plus run metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionLog {
    /// Sorted by `move_no`, unique.
    pub records: Vec<PredictionRecord>,
    pub mcts_budget: u32,
    pub engine_tag: String,
}

impl PredictionLog {
    pub fn record_for(&self, move_no: u32) -> Option<&PredictionRecord> {
        self.records
            .binary_search_by_key(&move_no, |r| r.move_no)
            .ok()
            .map(|i| &self.records[i])
    }

    /// Tag used by evaluation tables, e.g. `(OPU, 2) / 3000`.
    pub fn machine_tag(&self) -> String {
        format!("({}) / {}", self.engine_tag, self.mcts_budget)
    }
}

/// A game record paired with its prediction log.
///
/// `joined[m - 1]` holds the index of the log record for move `m`, when the
/// log covers that move. Partial logs are legal.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzedGame {
    pub game: GameRecord,
    pub log: PredictionLog,
    joined: Vec<Option<usize>>,
}

impl AnalyzedGame {
    pub fn joined_count(&self) -> usize {
        self.joined.iter().filter(|j| j.is_some()).count()
    }

    /// Joined (move, record) pairs in move order.
    pub fn joined_entries(&self) -> impl Iterator<Item = (&GameMove, &PredictionRecord)> {
        self.joined
            .iter()
            .enumerate()
            .filter_map(move |(i, j)| j.map(|idx| (&self.game.moves[i], &self.log.records[idx])))
    }
}

/// Pair a game with its log. Every record whose (move_no, color) matches the
/// game is joined; a record beyond the game or with the wrong mover is an
/// error, and log gaps are allowed.
pub fn join(game: GameRecord, log: PredictionLog) -> Result<AnalyzedGame, IngestError> {
    let n = game.n_moves();
    let mut joined = vec![None; n as usize];
    for (idx, record) in log.records.iter().enumerate() {
        if record.move_no == 0 || record.move_no > n {
            return Err(IngestError::Join {
                move_no: record.move_no,
                reason: format!("log record beyond game length {n}"),
            });
        }
        let mv = &game.moves[(record.move_no - 1) as usize];
        if mv.color != record.color {
            return Err(IngestError::Join {
                move_no: record.move_no,
                reason: format!("log says {} moved, game says {}", record.color, mv.color),
            });
        }
        joined[(record.move_no - 1) as usize] = Some(idx);
    }
    Ok(AnalyzedGame { game, log, joined })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_move_game() -> GameRecord {
        parse_sgf("(;GM[1]SZ[19]KM[6.5];B[pd];W[dp])").unwrap()
    }

    fn record(move_no: u32, color: Color, point: &str) -> PredictionRecord {
        PredictionRecord {
            move_no,
            color,
            played: MovePoint::Play(Coord::from_sgf(point).unwrap()),
            candidates: vec![Candidate {
                point: Coord::from_sgf(point).unwrap(),
                sims: 100,
                winrate: 0.5,
            }],
        }
    }

    fn log_of(records: Vec<PredictionRecord>) -> PredictionLog {
        PredictionLog {
            records,
            mcts_budget: 1000,
            engine_tag: "TEST".to_string(),
        }
    }

    #[test]
    fn join_pairs_matching_records() {
        let log = log_of(vec![
            record(1, Color::Black, "pd"),
            record(2, Color::White, "dp"),
        ]);
        let analyzed = join(two_move_game(), log).unwrap();
        assert_eq!(analyzed.joined_count(), 2);
    }

    #[test]
    fn partial_log_is_allowed() {
        let log = log_of(vec![record(1, Color::Black, "pd")]);
        let analyzed = join(two_move_game(), log).unwrap();
        assert_eq!(analyzed.joined_count(), 1);
        let entries: Vec<u32> = analyzed.joined_entries().map(|(m, _)| m.number).collect();
        assert_eq!(entries, vec![1]);
    }

    #[test]
    fn color_mismatch_rejected() {
        let log = log_of(vec![record(1, Color::White, "pd")]);
        let err = join(two_move_game(), log).unwrap_err();
        assert!(matches!(err, IngestError::Join { move_no: 1, .. }), "{err}");
    }

    #[test]
    fn record_beyond_game_rejected() {
        let log = log_of(vec![record(3, Color::Black, "dd")]);
        let err = join(two_move_game(), log).unwrap_err();
        assert!(matches!(err, IngestError::Join { move_no: 3, .. }), "{err}");
    }

    #[test]
    fn join_never_invents_entries() {
        let log = log_of(vec![record(2, Color::White, "dp")]);
        let analyzed = join(two_move_game(), log).unwrap();
        assert!(analyzed.joined_count() <= 2);
        assert_eq!(analyzed.joined_count(), 1);
    }

    #[test]
    fn coord_letters() {
        assert_eq!(Coord::from_sgf("pd"), Some(Coord::new(16, 4)));
        assert_eq!(Coord::new(16, 4).to_sgf(), "pd");
        assert_eq!(Coord::from_sgf("zz"), None);
        assert_eq!(Coord::from_sgf("p"), None);
    }
}
