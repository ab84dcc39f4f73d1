//! Streaming reader for Stack Exchange `Posts.xml` dumps.
//!
//! A dump is a single root element (`<posts>`) holding one self-closing
//! `<row .../>` per post. Only the attributes needed to build the
//! questioner-responder network are read: `Id`, `PostTypeId`, `ParentId`,
//! `OwnerUserId` and `CreationDate`. Post bodies are never decoded.
//!
//! [`PostReader`] is an iterator that keeps only the current row in memory,
//! so a multi-gigabyte dump parses in constant space.

use std::borrow::Cow;
use std::fmt;
use std::io::BufRead;

use chrono::{DateTime, NaiveDateTime};
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::UserId;

const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S%.3f";

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed XML at byte {offset}: {message}")]
    Xml { offset: u64, message: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// `PostTypeId` 1 and 2. Other types (tag wikis, moderator nominations, ...)
/// never reach a [`PostRecord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PostType {
    Question,
    Answer,
}

impl PostType {
    pub fn type_id(self) -> u8 {
        match self {
            PostType::Question => 1,
            PostType::Answer => 2,
        }
    }
}

/// UTC instant with millisecond precision. Dumps carry no zone, so the
/// naive wall-clock value is taken as UTC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp {
    millis: i64,
}

impl Timestamp {
    pub fn from_millis(millis: i64) -> Self {
        Timestamp { millis }
    }

    pub fn millis(self) -> i64 {
        self.millis
    }

    /// Parses the dump form `YYYY-MM-DDThh:mm:ss.fff`. The fractional part
    /// may be missing or longer than three digits; extra digits are truncated.
    pub fn parse(s: &str) -> Option<Self> {
        let naive = NaiveDateTime::parse_from_str(s.trim(), "%Y-%m-%dT%H:%M:%S%.f").ok()?;
        Some(Timestamp {
            millis: naive.and_utc().timestamp_millis(),
        })
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match DateTime::from_timestamp_millis(self.millis) {
            Some(dt) => write!(f, "{}", dt.naive_utc().format(TIMESTAMP_FORMAT)),
            None => write!(f, "<out of range: {} ms>", self.millis),
        }
    }
}

/// One question or answer row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostRecord {
    pub post_id: u64,
    pub post_type: PostType,
    /// Present exactly when `post_type` is `Answer`.
    pub parent_id: Option<u64>,
    pub owner_user_id: Option<UserId>,
    pub creation_time: Timestamp,
}

impl PostRecord {
    /// Renders the record as a dump `<row/>` element carrying only the
    /// attributes this crate reads.
    pub fn to_row_xml(&self) -> String {
        let mut row = format!(
            "<row Id=\"{}\" PostTypeId=\"{}\"",
            self.post_id,
            self.post_type.type_id()
        );
        if let Some(parent) = self.parent_id {
            row.push_str(&format!(" ParentId=\"{parent}\""));
        }
        row.push_str(&format!(" CreationDate=\"{}\"", self.creation_time));
        if let Some(owner) = self.owner_user_id {
            row.push_str(&format!(" OwnerUserId=\"{owner}\""));
        }
        row.push_str(" />");
        row
    }
}

/// Per-file row accounting.
///
/// `rows_read == questions + answers + skipped_malformed
///  + skipped_missing_owner + skipped_other_type` always holds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub rows_read: u64,
    pub questions: u64,
    pub answers: u64,
    pub skipped_malformed: u64,
    pub skipped_missing_owner: u64,
    /// Rows whose `PostTypeId` is neither 1 nor 2.
    pub skipped_other_type: u64,
}

impl IngestStats {
    pub fn is_conserved(&self) -> bool {
        self.rows_read
            == self.questions
                + self.answers
                + self.skipped_malformed
                + self.skipped_missing_owner
                + self.skipped_other_type
    }
}

#[derive(Debug, PartialEq, Eq)]
enum RowOutcome {
    Record(PostRecord),
    Malformed,
    MissingOwner,
    OtherType,
}

#[derive(Default)]
struct RowAttributes<'a> {
    id: Option<Cow<'a, str>>,
    post_type_id: Option<Cow<'a, str>>,
    parent_id: Option<Cow<'a, str>>,
    owner_user_id: Option<Cow<'a, str>>,
    creation_date: Option<Cow<'a, str>>,
}

impl<'a> RowAttributes<'a> {
    fn read(element: &'a BytesStart<'a>) -> Option<Self> {
        let mut attrs = RowAttributes::default();
        for attr in element.attributes() {
            let attr = attr.ok()?;
            let slot = match attr.key.as_ref() {
                b"Id" => &mut attrs.id,
                b"PostTypeId" => &mut attrs.post_type_id,
                b"ParentId" => &mut attrs.parent_id,
                b"OwnerUserId" => &mut attrs.owner_user_id,
                b"CreationDate" => &mut attrs.creation_date,
                _ => continue,
            };
            *slot = Some(attr.unescape_value().ok()?);
        }
        Some(attrs)
    }

    fn classify(&self) -> RowOutcome {
        let Some(post_id) = parse_positive(self.id.as_deref()) else {
            return RowOutcome::Malformed;
        };
        let post_type = match self.post_type_id.as_deref().map(str::trim) {
            Some("1") => PostType::Question,
            Some("2") => PostType::Answer,
            Some(other) if other.parse::<i64>().is_ok() => return RowOutcome::OtherType,
            _ => return RowOutcome::Malformed,
        };
        let Some(creation_time) = self.creation_date.as_deref().and_then(Timestamp::parse) else {
            return RowOutcome::Malformed;
        };
        let parent_id = match (post_type, self.parent_id.as_deref()) {
            (PostType::Answer, raw) => match parse_positive(raw) {
                Some(parent) if parent != post_id => Some(parent),
                _ => return RowOutcome::Malformed,
            },
            (PostType::Question, None) => None,
            (PostType::Question, Some(_)) => return RowOutcome::Malformed,
        };
        let owner_user_id = match self.owner_user_id.as_deref() {
            None => return RowOutcome::MissingOwner,
            Some(raw) => match raw.trim().parse::<i64>() {
                Ok(id) => UserId(id),
                Err(_) => return RowOutcome::Malformed,
            },
        };
        RowOutcome::Record(PostRecord {
            post_id,
            post_type,
            parent_id,
            owner_user_id: Some(owner_user_id),
            creation_time,
        })
    }
}

fn parse_positive(raw: Option<&str>) -> Option<u64> {
    raw?.trim().parse::<u64>().ok().filter(|&v| v > 0)
}

/// Single-pass iterator over the question and answer rows of a Posts dump.
///
/// Rows that are structurally invalid, lack an owner, or have another post
/// type are skipped and tallied in [`PostReader::stats`]. Malformed XML
/// outside a row yields one `Err` and ends the iteration.
pub struct PostReader<R: BufRead> {
    reader: Reader<R>,
    buf: Vec<u8>,
    depth: usize,
    seen_root: bool,
    done: bool,
    stats: IngestStats,
}

impl<R: BufRead> PostReader<R> {
    pub fn new(input: R) -> Self {
        let mut reader = Reader::from_reader(input);
        reader.config_mut().trim_text(true);
        PostReader {
            reader,
            buf: Vec::with_capacity(4096),
            depth: 0,
            seen_root: false,
            done: false,
            stats: IngestStats::default(),
        }
    }

    pub fn stats(&self) -> &IngestStats {
        &self.stats
    }

    fn xml_error(&self, message: impl Into<String>) -> IngestError {
        IngestError::Xml {
            offset: self.reader.buffer_position(),
            message: message.into(),
        }
    }

    fn tally(&mut self, outcome: RowOutcome) -> Option<PostRecord> {
        self.stats.rows_read += 1;
        match outcome {
            RowOutcome::Record(record) => {
                match record.post_type {
                    PostType::Question => self.stats.questions += 1,
                    PostType::Answer => self.stats.answers += 1,
                }
                Some(record)
            }
            RowOutcome::Malformed => {
                self.stats.skipped_malformed += 1;
                None
            }
            RowOutcome::MissingOwner => {
                self.stats.skipped_missing_owner += 1;
                None
            }
            RowOutcome::OtherType => {
                self.stats.skipped_other_type += 1;
                None
            }
        }
    }

    fn next_record(&mut self) -> Result<Option<PostRecord>, IngestError> {
        loop {
            self.buf.clear();
            let event = match self.reader.read_event_into(&mut self.buf) {
                Ok(event) => event,
                Err(quick_xml::Error::Io(e)) => {
                    return Err(IngestError::Io(std::io::Error::new(
                        e.kind(),
                        e.to_string(),
                    )))
                }
                Err(e) => {
                    return Err(IngestError::Xml {
                        offset: self.reader.error_position(),
                        message: e.to_string(),
                    })
                }
            };
            let (is_row, opens) = match &event {
                Event::Start(e) => (e.name().as_ref() == b"row", true),
                Event::Empty(e) => (e.name().as_ref() == b"row", false),
                Event::End(_) => {
                    // quick-xml already rejects mismatched end tags
                    self.depth = self.depth.saturating_sub(1);
                    continue;
                }
                Event::Text(t) => {
                    if self.depth == 0 && !t.iter().all(u8::is_ascii_whitespace) {
                        return Err(self.xml_error("text outside the root element"));
                    }
                    continue;
                }
                Event::Eof => {
                    if self.depth > 0 {
                        return Err(self.xml_error("unexpected end of input inside an element"));
                    }
                    if !self.seen_root {
                        return Err(self.xml_error("document has no root element"));
                    }
                    return Ok(None);
                }
                _ => continue,
            };
            if self.depth == 0 {
                if self.seen_root {
                    return Err(self.xml_error("more than one root element"));
                }
                self.seen_root = true;
                if opens {
                    self.depth += 1;
                }
                continue;
            }
            let record = if is_row && self.depth == 1 {
                let outcome = match &event {
                    Event::Start(e) | Event::Empty(e) => {
                        RowAttributes::read(e).map_or(RowOutcome::Malformed, |a| a.classify())
                    }
                    _ => unreachable!(),
                };
                self.tally(outcome)
            } else {
                None
            };
            if opens {
                self.depth += 1;
            }
            if record.is_some() {
                return Ok(record);
            }
        }
    }
}

impl<R: BufRead> Iterator for PostReader<R> {
    type Item = Result<PostRecord, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.next_record() {
            Ok(Some(record)) => Some(Ok(record)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

/// Parses a whole dump into memory.
pub fn parse_posts<R: BufRead>(input: R) -> Result<(Vec<PostRecord>, IngestStats), IngestError> {
    let mut reader = PostReader::new(input);
    let records = reader.by_ref().collect::<Result<Vec<_>, _>>()?;
    Ok((records, *reader.stats()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(xml: &str) -> Result<(Vec<PostRecord>, IngestStats), IngestError> {
        parse_posts(xml.as_bytes())
    }

    fn wrap(rows: &str) -> String {
        format!("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<posts>\n{rows}\n</posts>\n")
    }

    #[test]
    fn question_row() {
        let (records, stats) = parse(&wrap(
            r#"<row Id="1" PostTypeId="1" CreationDate="2023-03-01T00:00:00.000" OwnerUserId="5"/>"#,
        ))
        .unwrap();
        assert_eq!(
            records,
            vec![PostRecord {
                post_id: 1,
                post_type: PostType::Question,
                parent_id: None,
                owner_user_id: Some(UserId(5)),
                creation_time: Timestamp::parse("2023-03-01T00:00:00.000").unwrap(),
            }]
        );
        assert_eq!(stats.questions, 1);
        assert_eq!(records[0].creation_time.millis(), 1_677_628_800_000);
    }

    #[test]
    fn answer_row() {
        let (records, _) = parse(&wrap(
            r#"<row Id="2" PostTypeId="2" ParentId="1" CreationDate="2023-03-01T06:00:00.000" OwnerUserId="7"/>"#,
        ))
        .unwrap();
        assert_eq!(records[0].post_type, PostType::Answer);
        assert_eq!(records[0].parent_id, Some(1));
        assert_eq!(records[0].owner_user_id, Some(UserId(7)));
        assert_eq!(
            records[0].creation_time.to_string(),
            "2023-03-01T06:00:00.000"
        );
    }

    #[test]
    fn answer_without_parent_is_malformed() {
        let (records, stats) = parse(&wrap(
            r#"<row Id="3" PostTypeId="2" CreationDate="2023-03-01T06:00:00.000" OwnerUserId="7"/>"#,
        ))
        .unwrap();
        assert!(records.is_empty());
        assert_eq!(stats.skipped_malformed, 1);
        assert!(stats.is_conserved());
    }

    #[test]
    fn skip_buckets() {
        let rows = r#"
  <row Id="1" PostTypeId="1" CreationDate="2023-03-01T00:00:00.000" />
  <row Id="x" PostTypeId="1" CreationDate="2023-03-01T00:00:00.000" OwnerUserId="1" />
  <row Id="3" PostTypeId="1" CreationDate="yesterday" OwnerUserId="1" />
  <row Id="4" PostTypeId="5" CreationDate="2023-03-01T00:00:00.000" OwnerUserId="1" />
  <row Id="5" PostTypeId="4" CreationDate="2023-03-01T00:00:00.000" />
  <row Id="6" PostTypeId="1" ParentId="2" CreationDate="2023-03-01T00:00:00.000" OwnerUserId="1" />
  <row Id="7" PostTypeId="1" CreationDate="2023-03-01T00:00:00.000" OwnerUserId="-1" Body="&lt;p&gt;hi&lt;/p&gt;" />
"#;
        let (records, stats) = parse(&wrap(rows)).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].owner_user_id, Some(UserId(-1)));
        assert_eq!(
            stats,
            IngestStats {
                rows_read: 7,
                questions: 1,
                answers: 0,
                skipped_malformed: 3,
                skipped_missing_owner: 1,
                skipped_other_type: 2,
            }
        );
        assert!(stats.is_conserved());
    }

    #[test]
    fn timestamps_without_fraction_or_with_microseconds() {
        assert_eq!(
            Timestamp::parse("2023-03-01T00:00:01").unwrap().millis(),
            Timestamp::parse("2023-03-01T00:00:01.000")
                .unwrap()
                .millis()
        );
        assert_eq!(
            Timestamp::parse("2023-03-01T00:00:00.123456")
                .unwrap()
                .millis()
                % 1000,
            123
        );
        assert!(Timestamp::parse("2023-13-01T00:00:00.000").is_none());
    }

    #[test]
    fn empty_root_is_valid() {
        let (records, stats) = parse("<posts></posts>").unwrap();
        assert!(records.is_empty());
        assert_eq!(stats, IngestStats::default());
        assert!(parse("<posts/>").unwrap().0.is_empty());
    }

    #[test]
    fn structural_errors_carry_offsets() {
        for bad in [
            "",
            "<posts><row Id=\"1\"/>",
            "<posts></post>",
            "<posts></posts><posts></posts>",
            "<posts><row Id=\"1\" PostTypeId=\"1\"></posts>",
        ] {
            match parse(bad) {
                Err(IngestError::Xml { .. }) => {}
                other => panic!("{bad:?} should be a hard error, got {other:?}"),
            }
        }
        let err = parse("<posts>\n<row Id=\"1\"/>\n</nope>").unwrap_err();
        match err {
            IngestError::Xml { offset, .. } => assert!(offset > 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rows_with_children_and_nested_rows() {
        let xml = r#"<posts>
            <row Id="1" PostTypeId="1" CreationDate="2023-03-01T00:00:00.000" OwnerUserId="5"></row>
            <meta><row Id="9" PostTypeId="1" CreationDate="2023-03-01T00:00:00.000" OwnerUserId="5"/></meta>
        </posts>"#;
        let (records, stats) = parse(xml).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(stats.rows_read, 1);
    }

    #[test]
    fn reader_stops_after_error() {
        let mut reader = PostReader::new("<posts></wrong>".as_bytes());
        assert!(matches!(reader.next(), Some(Err(_))));
        assert!(reader.next().is_none());
    }
}
