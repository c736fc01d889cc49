//! Score parsing and the binary piano-roll string encoding.
//!
//! A score is a set of quantized note events over the 88 piano keys. Its
//! string form is one character per (time step, key) cell, `'1'` where a
//! note sounds and `'0'` elsewhere, laid out as `position = 88 * time + key`.

use crate::error::{Error, Result};

/// Number of piano keys; one row of the piano-roll string.
pub const KEY_COUNT: usize = 88;

/// Lowest absolute pitch accepted by the parser (A0).
pub const MIN_PITCH: i64 = 21;

/// Highest absolute pitch accepted by the parser (C8).
pub const MAX_PITCH: i64 = 108;

/// Separator inserted between scores when forming a group text, so that no
/// binary query substring can span a score boundary.
pub const GROUP_SEPARATOR: u8 = b'#';

/// A quantized note: `key` sounds for `duration` steps starting at `onset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoteEvent {
    pub onset: usize,
    pub key: u8,
    pub duration: usize,
}

impl NoteEvent {
    pub fn new(onset: usize, key: u8, duration: usize) -> Result<Self> {
        if key as usize >= KEY_COUNT {
            return Err(Error::Invariant(format!(
                "key {key} outside 0..={}",
                KEY_COUNT - 1
            )));
        }
        if duration == 0 {
            return Err(Error::Invariant("duration must be at least 1".into()));
        }
        Ok(NoteEvent {
            onset,
            key,
            duration,
        })
    }
}

/// A parsed score: note events over a fixed number of time steps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Score {
    pub id: String,
    pub composer: Option<String>,
    pub events: Vec<NoteEvent>,
    pub num_steps: usize,
}

impl Score {
    /// Checks every event against the key/duration rules and the step bound.
    pub fn validate(&self) -> Result<()> {
        for ev in &self.events {
            NoteEvent::new(ev.onset, ev.key, ev.duration)?;
            if ev.onset + ev.duration > self.num_steps {
                return Err(Error::Invariant(format!(
                    "note (onset {}, duration {}) exceeds {} time steps",
                    ev.onset, ev.duration, self.num_steps
                )));
            }
        }
        Ok(())
    }
}

/// A string over the alphabet {'0','1'}. Strings produced by
/// [`encode_score`] always have length `88 * num_steps`; the type itself
/// also admits arbitrary binary strings (pre-encoded inputs, test data).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedString(String);

impl EncodedString {
    pub fn new(s: impl Into<String>) -> Result<Self> {
        let s = s.into();
        if let Some(bad) = s.bytes().position(|b| b != b'0' && b != b'1') {
            return Err(Error::InvalidArgument(format!(
                "encoded string may contain only '0'/'1'; found {:?} at index {bad}",
                s.as_bytes()[bad] as char
            )));
        }
        Ok(EncodedString(s))
    }

    fn from_binary_unchecked(s: String) -> Self {
        debug_assert!(s.bytes().all(|b| b == b'0' || b == b'1'));
        EncodedString(s)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Parses the line-oriented score document format.
///
/// The format is UTF-8 text: a header line `steps <T>`, then one line per
/// note `note <onset> <pitch> <duration>` with decimal integers. Lines
/// beginning with `#` are comments; blank lines are ignored. The absolute
/// pitch 21..=108 is mapped to key `pitch - 21`.
pub fn parse_score_file(input: &str) -> Result<Score> {
    let mut num_steps: Option<usize> = None;
    let mut events = Vec::new();
    let mut header_line = 0usize;

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let directive = fields.next().expect("non-empty line has a first field");
        match directive {
            "steps" => {
                if num_steps.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("duplicate 'steps' header (first on line {header_line})"),
                    });
                }
                let value = parse_field(line_no, fields.next(), "step count")?;
                expect_end(line_no, fields)?;
                num_steps = Some(value);
                header_line = line_no;
            }
            "note" => {
                let num_steps = num_steps.ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: "'note' before the 'steps' header".into(),
                })?;
                let onset: usize = parse_field(line_no, fields.next(), "onset")?;
                let pitch: i64 = parse_field(line_no, fields.next(), "pitch")?;
                let duration: usize = parse_field(line_no, fields.next(), "duration")?;
                expect_end(line_no, fields)?;
                if !(MIN_PITCH..=MAX_PITCH).contains(&pitch) {
                    return Err(Error::PitchRange {
                        line: line_no,
                        pitch,
                    });
                }
                if duration == 0 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "duration must be at least 1".into(),
                    });
                }
                if onset + duration > num_steps {
                    return Err(Error::NoteBounds {
                        line: line_no,
                        onset,
                        duration,
                        num_steps,
                    });
                }
                let key = (pitch - MIN_PITCH) as u8;
                events.push(NoteEvent {
                    onset,
                    key,
                    duration,
                });
            }
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown directive '{other}'"),
                });
            }
        }
    }

    let num_steps = num_steps.ok_or_else(|| Error::Parse {
        line: input.lines().count() + 1,
        message: "missing 'steps' header".into(),
    })?;

    Ok(Score {
        id: String::new(),
        composer: None,
        events,
        num_steps,
    })
}

fn parse_field<T: std::str::FromStr>(line: usize, field: Option<&str>, name: &str) -> Result<T> {
    let field = field.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {name}"),
    })?;
    field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse {name} from {field:?}"),
    })
}

fn expect_end<'a>(line: usize, mut fields: impl Iterator<Item = &'a str>) -> Result<()> {
    match fields.next() {
        None => Ok(()),
        Some(extra) => Err(Error::Parse {
            line,
            message: format!("unexpected trailing field {extra:?}"),
        }),
    }
}

/// Parses the pre-encoded pass-through format: a file containing only
/// '0'/'1' characters and an optional trailing newline.
pub fn parse_encoded_text(input: &str) -> Result<EncodedString> {
    let body = input.strip_suffix('\n').unwrap_or(input);
    let body = body.strip_suffix('\r').unwrap_or(body);
    if body.is_empty() {
        return Err(Error::InvalidArgument(
            "pre-encoded input is empty".into(),
        ));
    }
    EncodedString::new(body)
}

/// Accepts either input format. A document whose first content line starts
/// with a score directive is parsed and encoded; anything else is treated
/// as pre-encoded '0'/'1' text (interior newlines from wrapped lines are
/// tolerated).
pub fn load_encoded(input: &str) -> Result<EncodedString> {
    let first_content = input
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first_content {
        None => Err(Error::InvalidArgument("input contains no score data".into())),
        Some(line) if line.starts_with("steps") || line.starts_with("note") => {
            encode_score(&parse_score_file(input)?)
        }
        Some(_) => {
            let body: String = input.chars().filter(|c| !matches!(c, '\n' | '\r')).collect();
            EncodedString::new(body)
        }
    }
}

/// Serializes a score into its piano-roll string: character at
/// `88 * time + key` is '1' exactly when a note with that key sounds during
/// that step. A note of duration `d` marks `d` consecutive time rows.
pub fn encode_score(score: &Score) -> Result<EncodedString> {
    score.validate()?;
    let mut buf = vec![b'0'; KEY_COUNT * score.num_steps];
    for ev in &score.events {
        for t in ev.onset..ev.onset + ev.duration {
            buf[KEY_COUNT * t + ev.key as usize] = b'1';
        }
    }
    let s = String::from_utf8(buf).expect("buffer holds only ASCII '0'/'1'");
    Ok(EncodedString::from_binary_unchecked(s))
}

/// Lists the (time, key) cells that are 'on', in position order.
pub fn on_cells(encoded: &EncodedString) -> Vec<(usize, usize)> {
    encoded
        .as_bytes()
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b == b'1')
        .map(|(p, _)| (p / KEY_COUNT, p % KEY_COUNT))
        .collect()
}

/// Joins the encoded scores of one group into a single text, inserting a
/// `'#'` separator between consecutive scores. Queries are binary strings,
/// so no query substring can straddle two scores.
pub fn concat_group(encoded: &[EncodedString]) -> Result<String> {
    if encoded.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot form a group from zero scores".into(),
        ));
    }
    let total: usize = encoded.iter().map(|e| e.len()).sum::<usize>() + encoded.len() - 1;
    let mut out = String::with_capacity(total);
    for (i, enc) in encoded.iter().enumerate() {
        if i > 0 {
            out.push(GROUP_SEPARATOR as char);
        }
        out.push_str(enc.as_str());
    }
    Ok(out)
}
