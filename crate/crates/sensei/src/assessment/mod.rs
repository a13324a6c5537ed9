//! Per-move game-situation assessment.
//!
//! Derives move features (simulations, Black-perspective winning rate,
//! top-move rates) from an [`AnalyzedGame`] and classifies every analyzed
//! move into one of five linguistic labels by four methods: winning-rate
//! difference, simulation difference, and two FML assessments.

mod systems;

pub use systems::{build_fml_system, default_fml_system, ASSESSMENT1_FML, ASSESSMENT2_FML};

use crate::fml::{infer, FmlError, FuzzySystem};
use crate::ingest::{AnalyzedGame, Color, MovePoint};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AssessError {
    #[error("no joined moves to assess")]
    EmptyJoin,
    #[error("invalid thresholds: {reason}")]
    BadThresholds { reason: String },
    #[error("trailing window must be at least 2, got {window}")]
    BadWindow { window: usize },
    #[error("fuzzy system is not a game-situation classifier: {reason}")]
    BadSystem { reason: String },
    #[error(transparent)]
    Fml(#[from] FmlError),
}

/// Five-valued linguistic game-situation label.
///
/// Codes follow the decision engine's sign convention: Black advantage is
/// negative (B++ = -2 .. W++ = +2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CgsLabel {
    BlackObvious,
    BlackPossible,
    Uncertain,
    WhitePossible,
    WhiteObvious,
}

impl CgsLabel {
    pub const ALL: [CgsLabel; 5] = [
        CgsLabel::BlackObvious,
        CgsLabel::BlackPossible,
        CgsLabel::Uncertain,
        CgsLabel::WhitePossible,
        CgsLabel::WhiteObvious,
    ];

    pub fn code(self) -> i8 {
        match self {
            CgsLabel::BlackObvious => -2,
            CgsLabel::BlackPossible => -1,
            CgsLabel::Uncertain => 0,
            CgsLabel::WhitePossible => 1,
            CgsLabel::WhiteObvious => 2,
        }
    }

    pub fn from_code(code: i8) -> Option<CgsLabel> {
        CgsLabel::ALL.iter().copied().find(|l| l.code() == code)
    }

    /// Swap Black and White.
    pub fn mirror(self) -> CgsLabel {
        CgsLabel::from_code(-self.code()).expect("negated code stays in range")
    }

    pub fn short(self) -> &'static str {
        match self {
            CgsLabel::BlackObvious => "B++",
            CgsLabel::BlackPossible => "B+",
            CgsLabel::Uncertain => "U",
            CgsLabel::WhitePossible => "W+",
            CgsLabel::WhiteObvious => "W++",
        }
    }

    pub fn long(self) -> &'static str {
        match self {
            CgsLabel::BlackObvious => "Black is obvious advantage",
            CgsLabel::BlackPossible => "Black is possible advantage",
            CgsLabel::Uncertain => "Both are in an uncertain situation",
            CgsLabel::WhitePossible => "White is possible advantage",
            CgsLabel::WhiteObvious => "White is obvious advantage",
        }
    }

    pub fn from_short(s: &str) -> Option<CgsLabel> {
        CgsLabel::ALL.iter().copied().find(|l| l.short() == s)
    }

    /// Winner implied by the label's sign, if any.
    pub fn advantage(self) -> Option<Color> {
        match self.code().signum() {
            -1 => Some(Color::Black),
            1 => Some(Color::White),
            _ => None,
        }
    }
}

impl std::fmt::Display for CgsLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.short())
    }
}

/// Values derived for one analyzed move.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveFeatures {
    pub move_no: u32,
    pub color: Color,
    /// Simulations of the played move; 0 when the move was off the
    /// engine's candidate list.
    pub sims: u64,
    /// Black-perspective winning rate in [0, 1].
    pub wr_black: f64,
    /// Whether the played move equals the engine's top candidate.
    pub top_match: bool,
    /// Cumulative top-move rate of Black up to and including this move.
    pub tmr_black: f64,
    /// Cumulative top-move rate of White up to and including this move.
    pub tmr_white: f64,
}

/// Which method produced a label sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssessMethod {
    WrDiff,
    SimDiff,
    Fml1,
    Fml2,
}

impl AssessMethod {
    pub fn tag(self) -> &'static str {
        match self {
            AssessMethod::WrDiff => "wr_diff",
            AssessMethod::SimDiff => "sim_diff",
            AssessMethod::Fml1 => "fml1",
            AssessMethod::Fml2 => "fml2",
        }
    }

    pub fn from_tag(s: &str) -> Option<AssessMethod> {
        [
            AssessMethod::WrDiff,
            AssessMethod::SimDiff,
            AssessMethod::Fml1,
            AssessMethod::Fml2,
        ]
        .into_iter()
        .find(|m| m.tag() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CgsEntry {
    pub move_no: u32,
    pub label: CgsLabel,
}

/// One label per analyzed move, in move order, tagged with the method
/// that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct CgsSequence {
    pub method: AssessMethod,
    pub entries: Vec<CgsEntry>,
}

impl CgsSequence {
    pub fn max_move_no(&self) -> u32 {
        self.entries.iter().map(|e| e.move_no).max().unwrap_or(0)
    }
}

/// Classification thresholds for the two baseline methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub t_small: f64,
    pub t_big: f64,
}

impl Default for Thresholds {
    fn default() -> Thresholds {
        Thresholds {
            t_small: 0.05,
            t_big: 0.25,
        }
    }
}

impl Thresholds {
    fn validate(&self) -> Result<(), AssessError> {
        if !(self.t_small > 0.0 && self.t_small < self.t_big && self.t_big <= 0.5) {
            return Err(AssessError::BadThresholds {
                reason: format!(
                    "need 0 < t_small < t_big <= 0.5, got ({}, {})",
                    self.t_small, self.t_big
                ),
            });
        }
        Ok(())
    }

    /// Map a Black-positive signed feature onto the five labels.
    fn classify(&self, value: f64) -> CgsLabel {
        if value >= self.t_big {
            CgsLabel::BlackObvious
        } else if value >= self.t_small {
            CgsLabel::BlackPossible
        } else if value <= -self.t_big {
            CgsLabel::WhiteObvious
        } else if value <= -self.t_small {
            CgsLabel::WhitePossible
        } else {
            CgsLabel::Uncertain
        }
    }
}

/// Default length of the trailing window for simulation averages.
pub const DEFAULT_SIM_WINDOW: usize = 10;

/// Derive per-move features from the joined moves of a game.
///
/// A played move found among the candidates contributes that candidate's
/// simulations and winning rate (converted to Black perspective). An
/// off-list or pass move contributes zero simulations and carries the
/// previous winning rate forward (0.5 before any value exists).
pub fn extract_features(game: &AnalyzedGame) -> Result<Vec<MoveFeatures>, AssessError> {
    let mut features = Vec::new();
    let mut prev_wr = 0.5;
    let mut matches = HashMap::from([(Color::Black, 0u32), (Color::White, 0u32)]);
    let mut totals = matches.clone();

    for (mv, record) in game.joined_entries() {
        let candidate = match record.played {
            MovePoint::Pass => None,
            MovePoint::Play(coord) => record.candidates.iter().find(|c| c.point == coord),
        };
        let sims = candidate.map_or(0, |c| c.sims);
        let wr_black = match candidate {
            Some(c) => match mv.color {
                Color::Black => c.winrate,
                Color::White => 1.0 - c.winrate,
            },
            None => prev_wr,
        };
        let top_match = match record.played {
            MovePoint::Pass => false,
            MovePoint::Play(coord) => record.candidates.first().map(|c| c.point) == Some(coord),
        };

        *totals.get_mut(&mv.color).expect("both colors present") += 1;
        if top_match {
            *matches.get_mut(&mv.color).expect("both colors present") += 1;
        }
        let tmr = |color: Color| {
            let total = totals[&color];
            if total == 0 {
                0.0
            } else {
                matches[&color] as f64 / total as f64
            }
        };

        features.push(MoveFeatures {
            move_no: mv.number,
            color: mv.color,
            sims,
            wr_black,
            top_match,
            tmr_black: tmr(Color::Black),
            tmr_white: tmr(Color::White),
        });
        prev_wr = wr_black;
    }

    if features.is_empty() {
        return Err(AssessError::EmptyJoin);
    }
    Ok(features)
}

/// Winning-rate difference method: d = wr_black - 0.5, thresholded with
/// the Black-positive convention.
pub fn assess_wr_diff(
    features: &[MoveFeatures],
    thresholds: &Thresholds,
) -> Result<CgsSequence, AssessError> {
    thresholds.validate()?;
    let entries = features
        .iter()
        .map(|f| CgsEntry {
            move_no: f.move_no,
            label: thresholds.classify(f.wr_black - 0.5),
        })
        .collect();
    Ok(CgsSequence {
        method: AssessMethod::WrDiff,
        entries,
    })
}

/// Normalized simulation difference over a trailing window, per move:
/// (avg Black sims - avg White sims) / their sum. The share is 0 when the
/// sum is 0 and also when either player has no moves in the window (no
/// comparison is possible). Windows shorter than `window` (early in the
/// game) use all moves so far.
pub fn sim_share_series(features: &[MoveFeatures], window: usize) -> Vec<f64> {
    (0..features.len())
        .map(|i| {
            let start = (i + 1).saturating_sub(window);
            let slice = &features[start..=i];
            let avg = |color: Color| {
                let sims: Vec<u64> = slice
                    .iter()
                    .filter(|f| f.color == color)
                    .map(|f| f.sims)
                    .collect();
                if sims.is_empty() {
                    None
                } else {
                    Some(sims.iter().sum::<u64>() as f64 / sims.len() as f64)
                }
            };
            match (avg(Color::Black), avg(Color::White)) {
                (Some(black), Some(white)) if black + white > 0.0 => {
                    (black - white) / (black + white)
                }
                _ => 0.0,
            }
        })
        .collect()
}

/// Simulation-difference method: the trailing-window share thresholded
/// with the Black-positive convention.
pub fn assess_sim_diff(
    features: &[MoveFeatures],
    window: usize,
    thresholds: &Thresholds,
) -> Result<CgsSequence, AssessError> {
    thresholds.validate()?;
    if window < 2 {
        return Err(AssessError::BadWindow { window });
    }
    let shares = sim_share_series(features, window);
    let entries = features
        .iter()
        .zip(shares)
        .map(|(f, share)| CgsEntry {
            move_no: f.move_no,
            label: thresholds.classify(share),
        })
        .collect();
    Ok(CgsSequence {
        method: AssessMethod::SimDiff,
        entries,
    })
}

/// Which shipped FML assessment to run. Variant 1 reads wr_black and
/// sim_share; variant 2 adds tmr_diff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmlVariant {
    One,
    Two,
}

impl FmlVariant {
    fn method(self) -> AssessMethod {
        match self {
            FmlVariant::One => AssessMethod::Fml1,
            FmlVariant::Two => AssessMethod::Fml2,
        }
    }
}

const CGS_TERM_NAMES: [(&str, CgsLabel); 5] = [
    ("B2", CgsLabel::BlackObvious),
    ("B1", CgsLabel::BlackPossible),
    ("U", CgsLabel::Uncertain),
    ("W1", CgsLabel::WhitePossible),
    ("W2", CgsLabel::WhiteObvious),
];

fn label_for_term(name: &str) -> Option<CgsLabel> {
    CGS_TERM_NAMES
        .iter()
        .find(|(term, _)| *term == name)
        .map(|&(_, label)| label)
}

fn check_cgs_system(system: &FuzzySystem) -> Result<(), AssessError> {
    let output = system.output();
    if output.terms.len() != 5 {
        return Err(AssessError::BadSystem {
            reason: format!(
                "output variable '{}' has {} terms; exactly 5 required",
                output.name,
                output.terms.len()
            ),
        });
    }
    for term in &output.terms {
        if label_for_term(&term.name).is_none() {
            return Err(AssessError::BadSystem {
                reason: format!(
                    "output term '{}' is not one of B2, B1, U, W1, W2",
                    term.name
                ),
            });
        }
    }
    const ALLOWED: [&str; 3] = ["wr_black", "sim_share", "tmr_diff"];
    for var in system.inputs() {
        if !ALLOWED.contains(&var.name.as_str()) {
            return Err(AssessError::BadSystem {
                reason: format!("unsupported input variable '{}'", var.name),
            });
        }
    }
    Ok(())
}

/// FML assessment: per move, assemble the variant's inputs and classify
/// through the fuzzy system.
pub fn assess_fml(
    features: &[MoveFeatures],
    system: &FuzzySystem,
    variant: FmlVariant,
    window: usize,
) -> Result<CgsSequence, AssessError> {
    check_cgs_system(system)?;
    if window < 2 {
        return Err(AssessError::BadWindow { window });
    }
    let shares = sim_share_series(features, window);
    let mut entries = Vec::with_capacity(features.len());
    for (f, share) in features.iter().zip(shares) {
        let mut inputs = HashMap::new();
        inputs.insert("wr_black".to_string(), f.wr_black);
        inputs.insert("sim_share".to_string(), share);
        if variant == FmlVariant::Two {
            inputs.insert("tmr_diff".to_string(), f.tmr_black - f.tmr_white);
        }
        let outcome = infer(system, &inputs)?;
        let label = label_for_term(&outcome.label).ok_or_else(|| AssessError::BadSystem {
            reason: format!("inference produced unknown term '{}'", outcome.label),
        })?;
        entries.push(CgsEntry {
            move_no: f.move_no,
            label,
        });
    }
    Ok(CgsSequence {
        method: variant.method(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{
        join, Candidate, Coord, GameMove, GameRecord, GameResult, PredictionLog, PredictionRecord,
    };

    struct TestMove {
        sims: u64,
        /// Mover-perspective winning rate, as an engine would log it.
        winrate: f64,
        top: bool,
        offlist: bool,
    }

    impl TestMove {
        fn new(sims: u64, winrate: f64, top: bool) -> TestMove {
            TestMove {
                sims,
                winrate,
                top,
                offlist: false,
            }
        }

        fn offlist() -> TestMove {
            TestMove {
                sims: 0,
                winrate: 0.0,
                top: false,
                offlist: true,
            }
        }
    }

    /// Build an analyzed game with full control over per-move telemetry.
    /// Points are synthesized on a 19x19 grid, three per move.
    fn build_game(specs: &[TestMove]) -> AnalyzedGame {
        let point = |idx: usize| {
            Coord::new((idx % 19 + 1) as u8, (idx / 19 % 19 + 1) as u8)
        };
        let mut moves = Vec::new();
        let mut records = Vec::new();
        for (i, spec) in specs.iter().enumerate() {
            let number = i as u32 + 1;
            let color = if number % 2 == 1 {
                Color::Black
            } else {
                Color::White
            };
            let played = point(i * 3);
            let filler_a = point(i * 3 + 1);
            let filler_b = point(i * 3 + 2);
            let candidates = if spec.offlist {
                vec![
                    Candidate {
                        point: filler_a,
                        sims: 500,
                        winrate: 0.5,
                    },
                    Candidate {
                        point: filler_b,
                        sims: 200,
                        winrate: 0.5,
                    },
                ]
            } else if spec.top {
                vec![
                    Candidate {
                        point: played,
                        sims: spec.sims,
                        winrate: spec.winrate,
                    },
                    Candidate {
                        point: filler_a,
                        sims: 1,
                        winrate: 0.5,
                    },
                ]
            } else {
                vec![
                    Candidate {
                        point: filler_a,
                        sims: spec.sims + 50,
                        winrate: 0.5,
                    },
                    Candidate {
                        point: played,
                        sims: spec.sims,
                        winrate: spec.winrate,
                    },
                ]
            };
            moves.push(GameMove {
                number,
                color,
                point: crate::ingest::MovePoint::Play(played),
            });
            records.push(PredictionRecord {
                move_no: number,
                color,
                played: crate::ingest::MovePoint::Play(played),
                candidates,
            });
        }
        let game = GameRecord {
            moves,
            komi: 6.5,
            handicap: 0,
            result: GameResult::Unknown,
            board_size: 19,
        };
        let log = PredictionLog {
            records,
            mcts_budget: 3000,
            engine_tag: "TEST".to_string(),
        };
        join(game, log).unwrap()
    }

    fn features_of(specs: &[TestMove]) -> Vec<MoveFeatures> {
        extract_features(&build_game(specs)).unwrap()
    }

    #[test]
    fn tmr_is_matches_over_moves() {
        // 16 moves: Black plays 8 (odd numbers), 5 of them the top move.
        let mut specs = Vec::new();
        for i in 0..16 {
            let black = i % 2 == 0;
            let top = if black { i / 2 < 5 } else { i / 2 < 4 };
            specs.push(TestMove::new(100, 0.5, top));
        }
        let features = features_of(&specs);
        let last = features.last().unwrap();
        assert_eq!(last.tmr_black, 0.625); // 5/8 exactly
        assert_eq!(last.tmr_white, 0.5);
    }

    #[test]
    fn white_winrate_flips_to_black_perspective() {
        let specs = vec![TestMove::new(100, 0.6, true), TestMove::new(100, 0.40, true)];
        let features = features_of(&specs);
        assert_eq!(features[0].wr_black, 0.6);
        assert_eq!(features[1].wr_black, 0.6); // White mover at 0.40
    }

    #[test]
    fn offlist_move_carries_previous_rate() {
        let specs = vec![
            TestMove::new(100, 0.55, true),
            TestMove::new(100, 0.45, true),
            TestMove::offlist(),
        ];
        let features = features_of(&specs);
        assert_eq!(features[1].wr_black, 0.55);
        assert_eq!(features[2].wr_black, 0.55);
        assert_eq!(features[2].sims, 0);
        assert!(!features[2].top_match);
    }

    #[test]
    fn first_move_offlist_defaults_to_half() {
        let specs = vec![TestMove::offlist(), TestMove::new(100, 0.5, true)];
        let features = features_of(&specs);
        assert_eq!(features[0].wr_black, 0.5);
    }

    #[test]
    fn empty_join_is_an_error() {
        let game = GameRecord {
            moves: vec![GameMove {
                number: 1,
                color: Color::Black,
                point: crate::ingest::MovePoint::Play(Coord::new(4, 4)),
            }],
            komi: 6.5,
            handicap: 0,
            result: GameResult::Unknown,
            board_size: 19,
        };
        let log = PredictionLog {
            records: vec![],
            mcts_budget: 100,
            engine_tag: "TEST".to_string(),
        };
        let analyzed = join(game, log).unwrap();
        assert!(matches!(
            extract_features(&analyzed),
            Err(AssessError::EmptyJoin)
        ));
    }

    #[test]
    fn tmr_stays_in_unit_interval_and_steps_only_on_own_moves() {
        let specs: Vec<TestMove> = (0..30)
            .map(|i| TestMove::new(100, 0.5, i % 3 == 0))
            .collect();
        let features = features_of(&specs);
        let mut prev = (0.0, 0.0);
        for f in &features {
            assert!((0.0..=1.0).contains(&f.tmr_black));
            assert!((0.0..=1.0).contains(&f.tmr_white));
            match f.color {
                Color::Black => assert_eq!(f.tmr_white, prev.1),
                Color::White => assert_eq!(f.tmr_black, prev.0),
            }
            prev = (f.tmr_black, f.tmr_white);
        }
    }

    fn feature(move_no: u32, color: Color, sims: u64, wr_black: f64) -> MoveFeatures {
        MoveFeatures {
            move_no,
            color,
            sims,
            wr_black,
            top_match: true,
            tmr_black: 0.5,
            tmr_white: 0.5,
        }
    }

    #[test]
    fn wr_diff_thresholds() {
        let features = vec![
            feature(1, Color::Black, 100, 0.5),
            feature(2, Color::White, 100, 0.80),
            feature(3, Color::Black, 100, 0.40),
            feature(4, Color::White, 100, 0.25),
            feature(5, Color::Black, 100, 0.56),
        ];
        let seq = assess_wr_diff(&features, &Thresholds::default()).unwrap();
        let labels: Vec<CgsLabel> = seq.entries.iter().map(|e| e.label).collect();
        assert_eq!(
            labels,
            vec![
                CgsLabel::Uncertain,
                CgsLabel::BlackObvious,
                CgsLabel::WhitePossible,
                CgsLabel::WhiteObvious,
                CgsLabel::BlackPossible,
            ]
        );
    }

    #[test]
    fn wr_diff_boundary_values() {
        let t = Thresholds::default();
        assert_eq!(t.classify(0.05), CgsLabel::BlackPossible);
        assert_eq!(t.classify(-0.05), CgsLabel::WhitePossible);
        assert_eq!(t.classify(0.25), CgsLabel::BlackObvious);
        assert_eq!(t.classify(-0.25), CgsLabel::WhiteObvious);
        assert_eq!(t.classify(0.049), CgsLabel::Uncertain);
    }

    #[test]
    fn wr_diff_is_antisymmetric() {
        // Grid of exact binary fractions, so 1 - wr mirrors exactly and
        // no point sits on a rounded threshold boundary.
        let t = Thresholds::default();
        for i in 0..=128 {
            let wr = i as f64 / 128.0;
            let label = t.classify(wr - 0.5);
            let mirrored = t.classify((1.0 - wr) - 0.5);
            assert_eq!(label.mirror(), mirrored, "wr {wr}");
        }
    }

    #[test]
    fn bad_thresholds_rejected() {
        let features = vec![feature(1, Color::Black, 100, 0.5)];
        let bad = Thresholds {
            t_small: 0.3,
            t_big: 0.2,
        };
        assert!(assess_wr_diff(&features, &bad).is_err());
    }

    #[test]
    fn sim_diff_equal_streams_is_uncertain() {
        let features: Vec<MoveFeatures> = (1..=20)
            .map(|i| {
                feature(
                    i,
                    if i % 2 == 1 { Color::Black } else { Color::White },
                    300,
                    0.5,
                )
            })
            .collect();
        let seq = assess_sim_diff(&features, DEFAULT_SIM_WINDOW, &Thresholds::default()).unwrap();
        assert!(seq.entries.iter().all(|e| e.label == CgsLabel::Uncertain));
    }

    #[test]
    fn sim_diff_dominant_black() {
        // Black averages 300, White averages 100: share = 0.5 -> B++.
        let features: Vec<MoveFeatures> = (1..=20)
            .map(|i| {
                let color = if i % 2 == 1 { Color::Black } else { Color::White };
                let sims = if color == Color::Black { 300 } else { 100 };
                feature(i, color, sims, 0.5)
            })
            .collect();
        let seq = assess_sim_diff(&features, DEFAULT_SIM_WINDOW, &Thresholds::default()).unwrap();
        assert_eq!(seq.entries.last().unwrap().label, CgsLabel::BlackObvious);
        let shares = sim_share_series(&features, DEFAULT_SIM_WINDOW);
        assert!((shares.last().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sim_diff_short_history_uses_all_moves() {
        let features: Vec<MoveFeatures> = (1..=4)
            .map(|i| {
                let color = if i % 2 == 1 { Color::Black } else { Color::White };
                feature(i, color, 200, 0.5)
            })
            .collect();
        let shares = sim_share_series(&features, DEFAULT_SIM_WINDOW);
        assert_eq!(shares.len(), 4);
        // Move 1: only Black has moved, so the share is fully Black.
        assert_eq!(shares[0], 1.0);
        assert_eq!(shares[1], 0.0);
    }

    #[test]
    fn sim_diff_antisymmetric_under_stream_swap() {
        let sims = [400u64, 120, 330, 90, 500, 60, 210, 180, 70, 310];
        let build = |swap: bool| -> Vec<MoveFeatures> {
            sims.iter()
                .enumerate()
                .map(|(i, &s)| {
                    let black = (i % 2 == 0) != swap;
                    feature(
                        i as u32 + 1,
                        if black { Color::Black } else { Color::White },
                        s,
                        0.5,
                    )
                })
                .collect()
        };
        // Swapping which color owns each simulation stream negates the share.
        let plain = sim_share_series(&build(false), 6);
        let swapped = sim_share_series(&build(true), 6);
        for (a, b) in plain.iter().zip(swapped) {
            assert!((a + b).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_window_rejected() {
        let features = vec![feature(1, Color::Black, 100, 0.5)];
        assert!(matches!(
            assess_sim_diff(&features, 1, &Thresholds::default()),
            Err(AssessError::BadWindow { window: 1 })
        ));
    }

    #[test]
    fn shipped_documents_match_their_builders() {
        use crate::fml::serialize_fml;
        assert_eq!(
            ASSESSMENT1_FML,
            serialize_fml(&build_fml_system(FmlVariant::One))
        );
        assert_eq!(
            ASSESSMENT2_FML,
            serialize_fml(&build_fml_system(FmlVariant::Two))
        );
    }

    #[test]
    fn shipped_assessment2_structure() {
        let system = default_fml_system(FmlVariant::Two);
        let output = system.output();
        assert_eq!(output.name, "cgs");
        let names: Vec<&str> = output.terms.iter().map(|t| t.name.as_str()).collect();
        assert_eq!(names, vec!["B2", "B1", "U", "W1", "W2"]);
        assert_eq!(system.inputs().count(), 3);
        assert_eq!(system.rules.len(), 75);
    }

    #[test]
    fn shipped_assessment1_structure() {
        let system = default_fml_system(FmlVariant::One);
        assert_eq!(system.inputs().count(), 2);
        assert_eq!(system.rules.len(), 25);
        assert_eq!(system.output().terms.len(), 5);
    }

    #[test]
    fn fml_balanced_point_is_uncertain() {
        let features = vec![
            feature(1, Color::Black, 100, 0.5),
            feature(2, Color::White, 100, 0.5),
        ];
        for variant in [FmlVariant::One, FmlVariant::Two] {
            let system = default_fml_system(variant);
            let seq = assess_fml(&features, &system, variant, DEFAULT_SIM_WINDOW).unwrap();
            // Move 2's trailing window holds one move of each color with
            // equal simulations, so every input sits at its balance point.
            assert_eq!(seq.entries[1].label, CgsLabel::Uncertain);
        }
    }

    #[test]
    fn fml_labels_every_move() {
        let features: Vec<MoveFeatures> = (1..=25)
            .map(|i| {
                let color = if i % 2 == 1 { Color::Black } else { Color::White };
                feature(i, color, (i as u64 * 37) % 400, 0.3 + (i as f64 * 0.017) % 0.4)
            })
            .collect();
        let system = default_fml_system(FmlVariant::Two);
        let seq = assess_fml(&features, &system, FmlVariant::Two, DEFAULT_SIM_WINDOW).unwrap();
        assert_eq!(seq.entries.len(), features.len());
    }

    #[test]
    fn fml_rejects_wrong_output_terms() {
        let mut system = default_fml_system(FmlVariant::One);
        system.variables.last_mut().unwrap().terms[0].name = "huge".to_string();
        // Renaming breaks rule references too, so rebuild rules minimally.
        system.rules.clear();
        let features = vec![feature(1, Color::Black, 100, 0.5)];
        let err = assess_fml(&features, &system, FmlVariant::One, DEFAULT_SIM_WINDOW).unwrap_err();
        assert!(matches!(err, AssessError::BadSystem { .. }), "{err}");
    }

    /// Runs variant-2 inference directly and reports (label, crisp) plus
    /// the membership gap between the two best output terms at the crisp
    /// value, used to skip genuine ties.
    fn fml_outcome(system: &FuzzySystem, wr: f64, sim: f64, tmr: f64) -> (CgsLabel, f64, f64) {
        let inputs = HashMap::from([
            ("wr_black".to_string(), wr),
            ("sim_share".to_string(), sim),
            ("tmr_diff".to_string(), tmr),
        ]);
        let outcome = infer(system, &inputs).unwrap();
        let mut memberships: Vec<f64> = system
            .output()
            .terms
            .iter()
            .map(|t| t.mf.membership(outcome.crisp))
            .collect();
        memberships.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let gap = memberships[0] - memberships[1];
        (label_for_term(&outcome.label).unwrap(), outcome.crisp, gap)
    }

    #[test]
    fn fml_mirrored_inputs_give_mirrored_labels() {
        let system = build_fml_system(FmlVariant::Two);
        let mut checked = 0;
        for wi in 0..=20 {
            let wr = wi as f64 / 20.0;
            for si in -3..=3 {
                let sim = si as f64 * 0.3;
                for ti in -1..=1 {
                    let tmr = ti as f64 * 0.6;
                    let (label, crisp, gap) = fml_outcome(&system, wr, sim, tmr);
                    let (mirror_label, mirror_crisp, mirror_gap) =
                        fml_outcome(&system, 1.0 - wr, -sim, -tmr);
                    assert!(
                        (crisp + mirror_crisp).abs() < 1e-9,
                        "crisp {crisp} vs {mirror_crisp} at ({wr}, {sim}, {tmr})"
                    );
                    // Exact label ties break by declaration order and are
                    // inherently one-sided; skip those points.
                    if gap < 1e-6 || mirror_gap < 1e-6 {
                        continue;
                    }
                    assert_eq!(
                        label.mirror(),
                        mirror_label,
                        "at ({wr}, {sim}, {tmr}), crisp {crisp}"
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 300, "only {checked} tie-free grid points");
    }

    #[test]
    fn fml_rule_weight_scaling_keeps_labels() {
        let full = build_fml_system(FmlVariant::Two);
        let mut halved = full.clone();
        for rule in &mut halved.rules {
            rule.weight *= 0.5;
        }
        for wi in 0..=10 {
            let wr = wi as f64 / 10.0;
            for si in -2..=2 {
                let sim = si as f64 * 0.4;
                let (label, _, gap) = fml_outcome(&full, wr, sim, 0.0);
                let (scaled_label, _, scaled_gap) = fml_outcome(&halved, wr, sim, 0.0);
                if gap < 1e-6 || scaled_gap < 1e-6 {
                    continue;
                }
                assert_eq!(label, scaled_label, "at ({wr}, {sim})");
            }
        }
    }

    #[test]
    fn label_codes_round_trip() {
        for label in CgsLabel::ALL {
            assert_eq!(CgsLabel::from_code(label.code()), Some(label));
            assert_eq!(CgsLabel::from_short(label.short()), Some(label));
            assert_eq!(label.mirror().mirror(), label);
        }
        assert_eq!(CgsLabel::BlackObvious.code(), -2);
        assert_eq!(CgsLabel::WhiteObvious.code(), 2);
    }
}
