//! SGF reader and writer for the property subset GM/SZ/KM/HA/AB/B/W/RE.
//!
//! Only the main line is kept; variations are parsed for syntax and
//! discarded. Unknown properties are ignored.

use super::{Color, Coord, GameMove, GameRecord, GameResult, IngestError, MovePoint};

/// Parse one SGF game tree into its main-line [`GameRecord`].
pub fn parse_sgf(text: &str) -> Result<GameRecord, IngestError> {
    let mut lexer = Lexer::new(text);
    let nodes = parse_game_tree(&mut lexer)?;
    lexer.skip_ws();
    if let Some((off, b)) = lexer.peek() {
        return Err(syntax(off, format!("trailing content '{}'", b as char)));
    }
    interpret(nodes)
}

/// Serialize a record so that [`parse_sgf`] recovers the same moves, komi,
/// handicap, result, and board size.
pub fn serialize_sgf(record: &GameRecord) -> String {
    let mut out = String::new();
    serialize_into(&mut out, record);
    out
}

fn syntax(offset: usize, reason: String) -> IngestError {
    IngestError::SgfSyntax { offset, reason }
}

struct Property {
    ident: String,
    values: Vec<String>,
    offset: usize,
}

type Node = Vec<Property>;

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Lexer<'a> {
        Lexer {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<(usize, u8)> {
        self.skip_ws();
        self.bytes.get(self.pos).map(|&b| (self.pos, b))
    }

    fn expect(&mut self, byte: u8) -> Result<(), IngestError> {
        match self.peek() {
            Some((_, b)) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some((off, b)) => Err(syntax(
                off,
                format!("expected '{}', found '{}'", byte as char, b as char),
            )),
            None => Err(syntax(
                self.bytes.len(),
                format!("expected '{}', found end of input", byte as char),
            )),
        }
    }

    /// Reads an upper-case property identifier.
    fn ident(&mut self) -> Result<(String, usize), IngestError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_uppercase() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(syntax(start, "expected property identifier".into()));
        }
        let ident = std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii range")
            .to_string();
        Ok((ident, start))
    }

    /// Reads one `[...]` value with backslash escapes.
    fn value(&mut self) -> Result<String, IngestError> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        loop {
            match self.bytes.get(self.pos) {
                Some(b'\\') => {
                    if let Some(&escaped) = self.bytes.get(self.pos + 1) {
                        out.push(escaped);
                        self.pos += 2;
                    } else {
                        return Err(syntax(self.pos, "dangling escape at end of input".into()));
                    }
                }
                Some(b']') => {
                    self.pos += 1;
                    return String::from_utf8(out)
                        .map_err(|_| syntax(self.pos, "property value is not valid UTF-8".into()));
                }
                Some(&b) => {
                    out.push(b);
                    self.pos += 1;
                }
                None => return Err(syntax(self.pos, "unterminated property value".into())),
            }
        }
    }
}

/// Parses `( sequence subtrees )`, returning main-line nodes. Only the first
/// subtree at each branch contributes to the main line.
fn parse_game_tree(lexer: &mut Lexer) -> Result<Vec<Node>, IngestError> {
    let mut nodes = Vec::new();
    parse_tree_into(lexer, true, &mut nodes)?;
    Ok(nodes)
}

fn parse_tree_into(
    lexer: &mut Lexer,
    main_line: bool,
    out: &mut Vec<Node>,
) -> Result<(), IngestError> {
    lexer.expect(b'(')?;
    let (first_off, first) = lexer
        .peek()
        .ok_or_else(|| syntax(lexer.bytes.len(), "unterminated game tree".into()))?;
    if first != b';' {
        return Err(syntax(first_off, "game tree must start with a node".into()));
    }
    while let Some((_, b';')) = lexer.peek() {
        lexer.pos += 1;
        let node = parse_node(lexer)?;
        if main_line {
            out.push(node);
        }
    }
    let mut first_subtree = true;
    while let Some((_, b'(')) = lexer.peek() {
        parse_tree_into(lexer, main_line && first_subtree, out)?;
        first_subtree = false;
    }
    lexer.expect(b')')
}

fn parse_node(lexer: &mut Lexer) -> Result<Node, IngestError> {
    let mut props = Vec::new();
    while let Some((_, b)) = lexer.peek() {
        if !b.is_ascii_uppercase() {
            break;
        }
        let (ident, offset) = lexer.ident()?;
        let mut values = Vec::new();
        values.push(lexer.value()?);
        while let Some((_, b'[')) = lexer.peek() {
            values.push(lexer.value()?);
        }
        props.push(Property {
            ident,
            values,
            offset,
        });
    }
    Ok(props)
}

fn interpret(nodes: Vec<Node>) -> Result<GameRecord, IngestError> {
    let mut board_size: u8 = 19;
    let mut komi = 0.0;
    let mut handicap = 0u32;
    let mut result = GameResult::Unknown;
    let mut setup_stones: Vec<String> = Vec::new();

    if let Some(root) = nodes.first() {
        for prop in root {
            match prop.ident.as_str() {
                "GM" => {
                    if prop.values[0].trim() != "1" {
                        return Err(IngestError::SgfInvalid {
                            reason: format!("GM[{}] is not a Go record", prop.values[0]),
                        });
                    }
                }
                "SZ" => {
                    board_size = prop.values[0].trim().parse().map_err(|_| {
                        IngestError::SgfInvalid {
                            reason: format!("invalid board size '{}'", prop.values[0]),
                        }
                    })?;
                    if !(2..=25).contains(&board_size) {
                        return Err(IngestError::SgfInvalid {
                            reason: format!("unsupported board size {board_size}"),
                        });
                    }
                }
                "KM" => {
                    komi = prop.values[0].trim().parse().map_err(|_| {
                        IngestError::SgfInvalid {
                            reason: format!("invalid komi '{}'", prop.values[0]),
                        }
                    })?;
                }
                "HA" => {
                    handicap = prop.values[0].trim().parse().map_err(|_| {
                        IngestError::SgfInvalid {
                            reason: format!("invalid handicap '{}'", prop.values[0]),
                        }
                    })?;
                }
                "RE" => {
                    let v = prop.values[0].trim();
                    result = if v.starts_with("B+") || v == "B" {
                        GameResult::Black
                    } else if v.starts_with("W+") || v == "W" {
                        GameResult::White
                    } else {
                        GameResult::Unknown
                    };
                }
                "AB" => setup_stones.extend(prop.values.iter().cloned()),
                _ => {}
            }
        }
    }

    // Handicap placements are only validated; board state is out of scope.
    for stone in &setup_stones {
        let coord = Coord::from_sgf(stone).ok_or_else(|| IngestError::SgfInvalid {
            reason: format!("invalid handicap point '{stone}'"),
        })?;
        if !coord.on_board(board_size) {
            return Err(IngestError::SgfInvalid {
                reason: format!("handicap point {stone} off the board"),
            });
        }
    }

    let mut moves = Vec::new();
    for node in &nodes {
        let mut node_move: Option<(Color, &Property)> = None;
        for prop in node {
            let color = match prop.ident.as_str() {
                "B" => Color::Black,
                "W" => Color::White,
                _ => continue,
            };
            if node_move.is_some() {
                return Err(syntax(
                    prop.offset,
                    "node holds more than one move property".into(),
                ));
            }
            node_move = Some((color, prop));
        }
        let Some((color, prop)) = node_move else {
            continue;
        };
        let number = moves.len() as u32 + 1;
        let raw = prop.values[0].trim();
        let point = if raw.is_empty() || (raw == "tt" && board_size <= 19) {
            MovePoint::Pass
        } else {
            let coord = Coord::from_sgf(raw).ok_or_else(|| IngestError::SgfMove {
                move_no: number,
                reason: format!("invalid coordinate '{raw}'"),
            })?;
            MovePoint::Play(coord)
        };
        moves.push(GameMove {
            number,
            color,
            point,
        });
    }

    let record = GameRecord {
        moves,
        komi,
        handicap,
        result,
        board_size,
    };
    record.validate()?;
    Ok(record)
}

pub(crate) fn serialize_into(out: &mut String, record: &GameRecord) {
    use std::fmt::Write;
    write!(
        out,
        "(;GM[1]FF[4]SZ[{}]KM[{}]",
        record.board_size, record.komi
    )
    .expect("string write");
    if record.handicap > 0 {
        write!(out, "HA[{}]", record.handicap).expect("string write");
    }
    match record.result {
        GameResult::Black => out.push_str("RE[B+R]"),
        GameResult::White => out.push_str("RE[W+R]"),
        GameResult::Unknown => {}
    }
    for mv in &record.moves {
        let coord = match mv.point {
            MovePoint::Pass => String::new(),
            MovePoint::Play(c) => c.to_sgf(),
        };
        write!(out, ";{}[{}]", mv.color.letter(), coord).expect("string write");
    }
    out.push(')');
}
